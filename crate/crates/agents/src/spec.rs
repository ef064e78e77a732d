//! Textual agent specifications such as `minimax:depth=5` or
//! `scripted:camp-center`, and the factory that turns them into policies.

use crate::grid::{ScriptKind, ScriptedGridPolicy};
use crate::hanabi::HanabiHeuristic;
use crate::kuhn::KuhnNePolicy;
use crate::overcooked::OvercookedOracle;
use crate::pong::{PongBot, Tracker};
use crate::random::RandomPolicy;
use crate::remote::{ObsMode, RemoteConfig, RemotePolicy};
use crate::search::mcts::{MctsConfig, MctsPolicy};
use crate::search::minimax::MinimaxPolicy;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;
use vsarena_core::Policy;

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("unknown agent `{0}`; expected random, minimax[:depth=N], mcts[:c=..,sims=..,rollouts=..], ne:alpha=A, scripted:<kind>, oracle, heuristic, pong-bot, tracker or remote[:<endpoint>]")]
    Unknown(String),
    #[error("bad parameter in `{spec}`: {detail}")]
    Param { spec: String, detail: String },
    #[error("agent `{agent}` cannot play {env}")]
    Incompatible { agent: String, env: String },
    #[error("{0}")]
    Remote(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AgentSpec {
    Random,
    Minimax { depth: u32 },
    Mcts(MctsConfig),
    KuhnNe { alpha: f64 },
    Scripted(ScriptKind),
    /// The environment's reference oracle.
    Oracle,
    Heuristic,
    PongBot,
    Tracker,
    /// Empty endpoint means "read it from the environment".
    Remote(String),
}

/// Accepts decimals and simple fractions like `1/6`.
pub fn parse_real(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (f64, f64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
            (d != 0.0).then(|| n / d)
        }
        None => s.trim().parse().ok(),
    }
}

fn params(spec: &str, body: &str) -> Result<Vec<(String, String)>, SpecError> {
    body.split(',')
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| SpecError::Param { spec: spec.into(), detail: format!("expected key=value, got `{p}`") })
        })
        .collect()
}

impl FromStr for AgentSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, body) = s.split_once(':').unwrap_or((s, ""));
        let bad = |detail: String| SpecError::Param { spec: s.to_string(), detail };
        match head {
            "random" => Ok(AgentSpec::Random),
            "minimax" => {
                let mut depth = 5;
                for (k, v) in params(s, body)? {
                    match k.as_str() {
                        "depth" => depth = v.parse().ok().filter(|d| *d >= 1).ok_or_else(|| bad(format!("depth `{v}`")))?,
                        _ => return Err(bad(format!("unknown key `{k}`"))),
                    }
                }
                Ok(AgentSpec::Minimax { depth })
            }
            "mcts" => {
                let mut cfg = MctsConfig::default();
                for (k, v) in params(s, body)? {
                    match k.as_str() {
                        "c" => cfg.c = parse_real(&v).ok_or_else(|| bad(format!("c `{v}`")))?,
                        "sims" | "simulations" => cfg.simulations = v.parse().map_err(|_| bad(format!("sims `{v}`")))?,
                        "rollouts" => cfg.rollouts = v.parse().map_err(|_| bad(format!("rollouts `{v}`")))?,
                        _ => return Err(bad(format!("unknown key `{k}`"))),
                    }
                }
                Ok(AgentSpec::Mcts(cfg))
            }
            "ne" => {
                let mut alpha = 0.0;
                for (k, v) in params(s, body)? {
                    match k.as_str() {
                        "alpha" => alpha = parse_real(&v).ok_or_else(|| bad(format!("alpha `{v}`")))?,
                        _ => return Err(bad(format!("unknown key `{k}`"))),
                    }
                }
                crate::kuhn::KuhnProfile::equilibrium(alpha).map_err(|e| bad(e.to_string()))?;
                Ok(AgentSpec::KuhnNe { alpha })
            }
            "scripted" => body.parse().map(AgentSpec::Scripted).map_err(|e| bad(e.to_string())),
            "oracle" | "scripted-oracle" => Ok(AgentSpec::Oracle),
            "heuristic" => Ok(AgentSpec::Heuristic),
            "pong-bot" | "bot" => Ok(AgentSpec::PongBot),
            "tracker" => Ok(AgentSpec::Tracker),
            "remote" => Ok(AgentSpec::Remote(body.to_string())),
            _ => Err(SpecError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentSpec::Random => write!(f, "random"),
            AgentSpec::Minimax { depth } => write!(f, "minimax:depth={depth}"),
            AgentSpec::Mcts(c) => write!(f, "mcts:c={},sims={},rollouts={}", c.c, c.simulations, c.rollouts),
            AgentSpec::KuhnNe { alpha } => write!(f, "ne:alpha={alpha}"),
            AgentSpec::Scripted(k) => write!(f, "scripted:{k}"),
            AgentSpec::Oracle => write!(f, "oracle"),
            AgentSpec::Heuristic => write!(f, "heuristic"),
            AgentSpec::PongBot => write!(f, "pong-bot"),
            AgentSpec::Tracker => write!(f, "tracker"),
            AgentSpec::Remote(e) if e.is_empty() => write!(f, "remote"),
            AgentSpec::Remote(e) => write!(f, "remote:{e}"),
        }
    }
}

/// The reference oracle each environment is scored against, or `None` where
/// the optimal value is a published constant.
pub fn oracle_for(env: &str) -> Option<AgentSpec> {
    Some(match env {
        "overcooked" => AgentSpec::Oracle,
        "breakthrough" => AgentSpec::Minimax { depth: 5 },
        "tictactoe" => AgentSpec::Minimax { depth: 9 },
        "kuhn" => AgentSpec::KuhnNe { alpha: 0.0 },
        "coin" => AgentSpec::Scripted(ScriptKind::OwnColorCoin),
        "hunt" => AgentSpec::Scripted(ScriptKind::CampCenter),
        "battle" => AgentSpec::Scripted(ScriptKind::ClosestCommonBlock),
        "pong" => AgentSpec::Tracker,
        _ => return None,
    })
}

impl AgentSpec {
    /// Builds the policy for a seat in `env`. Game-specific agents refuse
    /// environments they cannot play.
    pub fn build(&self, env: &str, mode: ObsMode) -> Result<Box<dyn Policy>, SpecError> {
        let incompatible = || SpecError::Incompatible { agent: self.to_string(), env: env.to_string() };
        let board = matches!(env, "breakthrough" | "tictactoe");
        let grid = matches!(env, "coin" | "hunt" | "battle");
        Ok(match self {
            AgentSpec::Random => Box::new(RandomPolicy),
            AgentSpec::Minimax { depth } if board => Box::new(MinimaxPolicy::new(*depth)),
            AgentSpec::Mcts(c) if board => Box::new(MctsPolicy::new(*c)),
            AgentSpec::KuhnNe { alpha } if env == "kuhn" => {
                Box::new(KuhnNePolicy::new(*alpha).map_err(|e| SpecError::Param { spec: self.to_string(), detail: e.to_string() })?)
            }
            AgentSpec::Scripted(k) if grid => {
                let probe = vsarena_core::make_env(env, 0).map_err(|e| SpecError::Remote(e.to_string()))?;
                let vsarena_core::StateView::Grid(s) = probe.view() else { return Err(incompatible()) };
                if k.target(s, 0).is_none() {
                    return Err(incompatible());
                }
                Box::new(ScriptedGridPolicy::new(*k))
            }
            AgentSpec::Oracle if env == "overcooked" => Box::new(OvercookedOracle),
            AgentSpec::Oracle => match oracle_for(env) {
                Some(spec) => return spec.build(env, mode),
                None => return Err(incompatible()),
            },
            AgentSpec::Heuristic if env.ends_with("hanabi") => Box::new(HanabiHeuristic),
            AgentSpec::PongBot if env == "pong" => Box::new(PongBot::default()),
            AgentSpec::Tracker if env == "pong" => Box::new(Tracker::default()),
            AgentSpec::Remote(endpoint) => {
                let mut cfg = RemoteConfig::from_env(endpoint).map_err(|e| SpecError::Remote(e.to_string()))?;
                cfg.mode = mode;
                Box::new(RemotePolicy::new(cfg))
            }
            _ => return Err(incompatible()),
        })
    }
}

/// Splits `a,b` seat lists. Commas inside a spec's parameters stay attached
/// to it: `mcts:c=2,sims=50,random` gives two specs.
pub fn split_specs(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let is_param = part.contains('=') && !part.contains(':');
        match out.last_mut() {
            Some(last) if is_param => {
                last.push(',');
                last.push_str(part);
            }
            _ => out.push(part.to_string()),
        }
    }
    out
}
