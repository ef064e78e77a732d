//! Online evaluation protocols with normalized returns, the offline
//! next-action prediction datasets, and the invariant verification suite.

pub mod counters;
pub mod dataset;
pub mod normalize;
pub mod protocol;
pub mod verify;

pub use counters::{behavior_counters, CounterTable};
pub use normalize::{normalize, Reference};
pub use protocol::{compute_reference, run_protocol, EvalProtocol, EvalReport, Opponent, SuiteReport};
pub use dataset::{generate_dataset, score_predictions, Dataset, DatasetRecipe, ReasoningSample};
pub use verify::{run_verify, VerifyConfig, VerifyReport};
