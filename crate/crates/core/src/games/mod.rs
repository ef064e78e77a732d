pub mod breakthrough;
pub mod grid;
pub mod hanabi;
pub mod kuhn;
pub mod overcooked;
pub mod pong;
pub mod tictactoe;

pub use breakthrough::{BreakthroughEnv, BreakthroughState};
pub use grid::{DilemmaKind, GridConfig, GridEnv, GridState};
pub use hanabi::{HanabiConfig, HanabiEnv, HanabiState};
pub use kuhn::{KuhnEnv, KuhnState};
pub use overcooked::{OvercookedConfig, OvercookedEnv, OvercookedState};
pub use pong::{PongConfig, PongEnv, PongState};
pub use tictactoe::{TicTacToeEnv, TicTacToeState};
