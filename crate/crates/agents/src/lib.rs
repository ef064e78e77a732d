//! Baseline policies for every arena environment: uniform random, search
//! agents for the board games, the Kuhn equilibrium family, scripted grid
//! and Overcooked players, Pong paddles, and a client for remote agents.

pub mod grid;
pub mod hanabi;
pub mod kuhn;
pub mod overcooked;
pub mod pong;
pub mod random;
pub mod remote;
pub mod search;
pub mod spec;

pub use grid::{ScriptKind, ScriptedGridPolicy};
pub use hanabi::HanabiHeuristic;
pub use kuhn::{KuhnNePolicy, KuhnProfile};
pub use overcooked::OvercookedOracle;
pub use pong::{PongBot, Tracker};
pub use random::RandomPolicy;
pub use remote::{ObsMode, RemoteConfig, RemotePolicy};
pub use search::mcts::{MctsConfig, MctsPolicy};
pub use search::minimax::MinimaxPolicy;
pub use spec::{oracle_for, split_specs, AgentSpec, SpecError};
