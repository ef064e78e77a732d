//! Construction of environments by name.

use crate::games::{
    BreakthroughEnv, DilemmaKind, GridConfig, GridEnv, HanabiConfig, HanabiEnv, KuhnEnv,
    OvercookedConfig, OvercookedEnv, PongConfig, PongEnv, TicTacToeEnv,
};
use crate::pomg::{EnvError, Environment};

/// Every registered environment. The first eight form the evaluation suite;
/// `tiny-hanabi` and `tictactoe` are the reduced variants.
pub const ENV_NAMES: [&str; 10] = [
    "hanabi",
    "overcooked",
    "breakthrough",
    "kuhn",
    "pong",
    "coin",
    "hunt",
    "battle",
    "tiny-hanabi",
    "tictactoe",
];

pub const SUITE: [&str; 8] =
    ["hanabi", "overcooked", "breakthrough", "kuhn", "pong", "coin", "hunt", "battle"];

pub fn make_env(name: &str, seed: u64) -> Result<Box<dyn Environment>, EnvError> {
    Ok(match name {
        "hanabi" => Box::new(HanabiEnv::new("hanabi", HanabiConfig::standard(), seed)?),
        "tiny-hanabi" => Box::new(HanabiEnv::new("tiny-hanabi", HanabiConfig::tiny(), seed)?),
        "overcooked" => Box::new(OvercookedEnv::new(OvercookedConfig::default(), seed)?),
        "breakthrough" => Box::new(BreakthroughEnv::new(seed)),
        "kuhn" => Box::new(KuhnEnv::new(seed)),
        "tictactoe" => Box::new(TicTacToeEnv::new(seed)),
        "pong" => Box::new(PongEnv::new(PongConfig::default(), seed)?),
        "coin" => Box::new(GridEnv::new(GridConfig::standard(DilemmaKind::Coin), seed)?),
        "hunt" => Box::new(GridEnv::new(GridConfig::standard(DilemmaKind::Hunt), seed)?),
        "battle" => Box::new(GridEnv::new(GridConfig::standard(DilemmaKind::Battle), seed)?),
        other => {
            return Err(EnvError::UnknownEnvironment {
                name: other.to_string(),
                registered: ENV_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    })
}
