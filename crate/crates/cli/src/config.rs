//! TOML run configuration. Every key can be overridden by the matching flag.

use crate::CliError;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub mode: Option<String>,
    pub play: PlaySection,
    pub eval: EvalSection,
    pub dataset: DatasetSection,
    pub render: RenderSection,
    pub verify: VerifySection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlaySection {
    pub env: Option<String>,
    /// One spec per seat.
    pub agents: Option<Vec<String>>,
    pub games: Option<usize>,
    pub frames: Option<bool>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub env: Option<String>,
    pub agent: Option<String>,
    pub opponent: Option<String>,
    pub runs: Option<usize>,
    pub episodes: Option<usize>,
    pub reference_episodes: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    pub env: Option<String>,
    pub predictor: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSection {
    pub env: Option<String>,
    pub agents: Option<Vec<String>>,
    pub viewer: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub probes: Option<usize>,
    pub hanabi_episodes: Option<usize>,
    pub equivalence_states: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// First of flag, config value and default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// First of flag and config value; a config error naming `key` otherwise.
pub fn require<T>(flag: Option<T>, file: Option<T>, key: &str) -> Result<T, CliError> {
    flag.or(file).ok_or_else(|| CliError::Config(format!("{key}: missing (pass the flag or set it in the config file)")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_parse() {
        let c: FileConfig = toml::from_str(
            "out = \"runs\"\nseed = 7\n[play]\nenv = \"kuhn\"\nagents = [\"ne:alpha=0\", \"random\"]\n[eval]\nagent = \"random\"\n",
        )
        .unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.play.agents.unwrap().len(), 2);
        assert_eq!(c.eval.agent.as_deref(), Some("random"));
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "[play]\ngmes = 3\n").unwrap();
        let err = FileConfig::load(&p).unwrap_err().to_string();
        assert!(err.contains("gmes"), "{err}");
        assert!(err.contains("c.toml"), "{err}");
    }

    #[test]
    fn flags_win() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None, None, 3), 3);
        assert!(require::<u8>(None, None, "play.env").unwrap_err().to_string().contains("play.env"));
    }
}
