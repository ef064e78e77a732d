//! Two-player game environments with paired image/text observations, an
//! episode runner, and trajectory records.

pub mod events;
pub mod games;
pub mod pomg;
pub mod registry;
pub mod render;
pub mod rng;
pub mod structure;
pub mod trajectory;

pub use events::{EventKind, GameEvent};
pub use pomg::{
    AgentId, DecisionContext, EnvError, Environment, GameSpec, InteractionClass, JointAction,
    Observation, ObservationMode, Policy, PolicyError, StateView, StepResult, NOOP,
};
pub use registry::{make_env, ENV_NAMES};
pub use rng::{mix_seed, policy_rng, stream_rng, GameRng, Stream};
pub use trajectory::{replay, run_episode, EpisodeError, StepRecord, Trajectory};
