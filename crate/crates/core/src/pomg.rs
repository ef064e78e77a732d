//! The partially observable Markov game contract shared by every environment.

use crate::events::GameEvent;
use crate::games::{
    BreakthroughState, GridState, HanabiState, KuhnState, OvercookedState, PongState,
    TicTacToeState,
};
use crate::rng::GameRng;
use image::RgbImage;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Token submitted by agents that do not move on the current turn.
pub const NOOP: &str = "<NOOP>";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AgentId(pub usize);

impl AgentId {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn other(self) -> AgentId {
        AgentId(1 - self.0)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "agent {}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionClass {
    Cooperative,
    Competitive,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub name: String,
    pub num_agents: usize,
    pub interaction_class: InteractionClass,
    /// `None` means the game only ends through its own rules.
    pub max_steps: Option<usize>,
    pub discount: f64,
    pub action_vocabulary: Vec<Vec<String>>,
    /// Number of frames carried by each observation.
    pub history_depth: usize,
    pub turn_based: bool,
}

impl GameSpec {
    pub(crate) fn new(
        name: &str,
        class: InteractionClass,
        max_steps: Option<usize>,
        vocabulary: Vec<String>,
        history_depth: usize,
        turn_based: bool,
    ) -> Self {
        Self {
            name: name.to_string(),
            num_agents: 2,
            interaction_class: class,
            max_steps,
            discount: 1.0,
            action_vocabulary: vec![vocabulary.clone(), vocabulary],
            history_depth,
            turn_based,
        }
    }
}

/// Paired image/text observation. Frames are ordered oldest first.
#[derive(Clone, Debug)]
pub struct Observation {
    pub frames: Vec<RgbImage>,
    pub text: String,
}

impl Observation {
    pub fn frames_png(&self) -> Vec<Vec<u8>> {
        self.frames.iter().map(encode_png).collect()
    }
}

pub fn encode_png(frame: &RgbImage) -> Vec<u8> {
    let mut out = std::io::Cursor::new(Vec::new());
    frame
        .write_to(&mut out, image::ImageFormat::Png)
        .expect("PNG encoding into memory cannot fail");
    out.into_inner()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ObservationMode {
    #[default]
    Multimodal,
    TextOnly,
}

impl std::str::FromStr for ObservationMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "multimodal" => Ok(Self::Multimodal),
            "text-only" | "text" => Ok(Self::TextOnly),
            other => Err(format!("unknown observation mode `{other}` (multimodal, text-only)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointAction(pub Vec<String>);

impl JointAction {
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Self {
        Self(tokens.into_iter().map(Into::into).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub rewards: Vec<f64>,
    pub terminal: bool,
    pub events: Vec<GameEvent>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("unknown environment `{name}`; registered: {}", registered.join(", "))]
    UnknownEnvironment { name: String, registered: Vec<String> },
    #[error("illegal action `{token}` for agent {agent}; legal: [{}]", legal.join(", "))]
    IllegalAction { agent: usize, token: String, legal: Vec<String> },
    #[error("step called on a terminal state")]
    StepAfterTerminal,
    #[error("joint action has {got} tokens, expected {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Borrowed access to the concrete state, for baseline agents that search or
/// script over the true game state.
#[derive(Clone, Copy, Debug)]
pub enum StateView<'a> {
    Hanabi(&'a HanabiState),
    Breakthrough(&'a BreakthroughState),
    Kuhn(&'a KuhnState),
    TicTacToe(&'a TicTacToeState),
    Grid(&'a GridState),
    Overcooked(&'a OvercookedState),
    Pong(&'a PongState),
}

pub trait Environment: Send + Sync {
    fn spec(&self) -> &GameSpec;

    /// Resets to the initial state drawn from `seed`.
    fn reset(&mut self, seed: u64);

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError>;

    /// Legal tokens for `agent`. Agents that do not move this turn get `[NOOP]`;
    /// a terminal state yields an empty list.
    fn legal_actions(&self, agent: AgentId) -> Vec<String>;

    fn is_terminal(&self) -> bool;

    fn step_index(&self) -> usize;

    fn seed(&self) -> u64;

    /// The agent's view as text only; cheap.
    fn observe_text(&self, agent: AgentId) -> String;

    /// The full multimodal observation, including `history_depth` frames.
    fn observe(&self, agent: AgentId) -> Observation;

    fn view(&self) -> StateView<'_>;

    /// Canonical serialization of the full state, used for replay checks.
    fn state_json(&self) -> serde_json::Value;

    fn box_clone(&self) -> Box<dyn Environment>;

    fn num_agents(&self) -> usize {
        self.spec().num_agents
    }

    /// The agents whose legal set is something other than the no-op.
    fn movers(&self) -> Vec<AgentId> {
        (0..self.num_agents())
            .map(AgentId)
            .filter(|&a| {
                let legal = self.legal_actions(a);
                !(legal.len() == 1 && legal[0] == NOOP) && !legal.is_empty()
            })
            .collect()
    }
}

impl Clone for Box<dyn Environment> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// Checks arity and per-agent legality of a joint action.
pub(crate) fn check_joint(
    env: &dyn Environment,
    joint: &JointAction,
) -> Result<(), EnvError> {
    if env.is_terminal() {
        return Err(EnvError::StepAfterTerminal);
    }
    let n = env.num_agents();
    if joint.0.len() != n {
        return Err(EnvError::WrongArity { expected: n, got: joint.0.len() });
    }
    for (agent, token) in joint.0.iter().enumerate() {
        let legal = env.legal_actions(AgentId(agent));
        if !legal.iter().any(|t| t == token) {
            return Err(EnvError::IllegalAction { agent, token: token.clone(), legal });
        }
    }
    Ok(())
}

/// What a policy sees when asked for an action.
pub struct DecisionContext<'a> {
    pub agent: AgentId,
    pub step: usize,
    pub legal: &'a [String],
    pub env: &'a dyn Environment,
}

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("no legal actions")]
    EmptyLegalSet,
    #[error("policy does not support environment `{0}`")]
    Unsupported(String),
    #[error("remote agent failure: {0}")]
    Remote(String),
    #[error("{0}")]
    Other(String),
}

pub trait Policy: Send {
    fn name(&self) -> String;

    /// Called once before each episode.
    fn reset(&mut self, _episode_seed: u64) {}

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError>;
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn reset(&mut self, episode_seed: u64) {
        (**self).reset(episode_seed)
    }
    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError> {
        (**self).act(ctx, rng)
    }
}

pub(crate) fn movement_vocab() -> Vec<String> {
    ["<UP>", "<DOWN>", "<LEFT>", "<RIGHT>", "<STAY>"].iter().map(|s| s.to_string()).collect()
}

pub(crate) fn with_noop(mut v: Vec<String>) -> Vec<String> {
    v.push(NOOP.to_string());
    v
}
