//! Client for externally hosted agents, over JSON/HTTP or a line-framed
//! child process.
//!
//! Each request carries the observation and the legal tokens; the reply is
//! `{"token": "..."}`. Replies outside the legal set fall back to a uniform
//! random legal token and are counted.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine as _;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::str::FromStr;
use std::time::Duration;
use thiserror::Error;
use vsarena_core::{AgentId, DecisionContext, Environment, GameRng, Policy, PolicyError};

pub const ENDPOINT_VAR: &str = "VSARENA_ENDPOINT";
pub const API_KEY_VAR: &str = "VSARENA_API_KEY";
pub const TIMEOUT_VAR: &str = "VSARENA_TIMEOUT";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObsMode {
    #[default]
    Multimodal,
    TextOnly,
}

impl fmt::Display for ObsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObsMode::Multimodal => "multimodal",
            ObsMode::TextOnly => "text-only",
        })
    }
}

impl FromStr for ObsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multimodal" => Ok(ObsMode::Multimodal),
            "text-only" | "text" => Ok(ObsMode::TextOnly),
            other => Err(format!("unknown observation mode {other:?} (expected multimodal or text-only)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestKind {
    Act,
    Predict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemoteRequest {
    pub env: String,
    pub step: usize,
    pub agent: usize,
    /// Base64 PNG frames, oldest first; empty in text-only mode.
    pub frames: Vec<String>,
    pub text: String,
    pub legal: Vec<String>,
    pub mode: ObsMode,
    pub kind: RequestKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemoteReply {
    pub token: String,
}

#[derive(Debug, Error)]
pub enum RemoteError {
    #[error("transport: {0}")]
    Transport(String),
    #[error("unparseable reply: {0}")]
    Reply(String),
    #[error("no endpoint configured; set {ENDPOINT_VAR} or pass remote:<url>")]
    NoEndpoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Http(String),
    /// Shell command whose stdin/stdout carry one JSON object per line.
    Stdio(String),
}

impl FromStr for Endpoint {
    type Err = RemoteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(cmd) = s.strip_prefix("stdio:") {
            Ok(Endpoint::Stdio(cmd.to_string()))
        } else if s.starts_with("http://") || s.starts_with("https://") {
            Ok(Endpoint::Http(s.to_string()))
        } else if s.is_empty() {
            Err(RemoteError::NoEndpoint)
        } else {
            Err(RemoteError::Transport(format!("unsupported endpoint {s:?}")))
        }
    }
}

#[derive(Clone, Debug)]
pub struct RemoteConfig {
    pub endpoint: Endpoint,
    pub mode: ObsMode,
    pub timeout: Duration,
    pub retries: u32,
    pub api_key: Option<String>,
}

impl RemoteConfig {
    pub fn new(endpoint: Endpoint) -> Self {
        Self { endpoint, mode: ObsMode::Multimodal, timeout: Duration::from_secs(60), retries: 3, api_key: None }
    }

    /// `spec` may be empty, in which case the endpoint comes from the
    /// environment. The API key and timeout always do.
    pub fn from_env(spec: &str) -> Result<Self, RemoteError> {
        let raw = if spec.is_empty() { std::env::var(ENDPOINT_VAR).unwrap_or_default() } else { spec.to_string() };
        let mut cfg = Self::new(raw.parse()?);
        cfg.api_key = std::env::var(API_KEY_VAR).ok().filter(|k| !k.is_empty());
        if let Some(secs) = std::env::var(TIMEOUT_VAR).ok().and_then(|v| v.parse::<f64>().ok()) {
            cfg.timeout = Duration::from_secs_f64(secs.max(0.001));
        }
        Ok(cfg)
    }
}

enum Transport {
    Http(reqwest::blocking::Client),
    Stdio { child: Child, stdin: ChildStdin, stdout: BufReader<ChildStdout> },
}

impl Drop for Transport {
    fn drop(&mut self) {
        if let Transport::Stdio { child, .. } = self {
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

pub struct RemotePolicy {
    pub config: RemoteConfig,
    transport: Option<Transport>,
    /// Replies that were not legal tokens, replaced by a random legal one.
    pub fallbacks: u32,
}

impl fmt::Debug for RemotePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RemotePolicy").field("config", &self.config).field("fallbacks", &self.fallbacks).finish()
    }
}

impl RemotePolicy {
    pub fn new(config: RemoteConfig) -> Self {
        Self { config, transport: None, fallbacks: 0 }
    }

    pub fn request_for(
        &self,
        env: &dyn Environment,
        agent: AgentId,
        legal: &[String],
        kind: RequestKind,
    ) -> RemoteRequest {
        let (frames, text) = match self.config.mode {
            ObsMode::TextOnly => (Vec::new(), env.observe_text(agent)),
            ObsMode::Multimodal => {
                let obs = env.observe(agent);
                (obs.frames_png().iter().map(|p| B64.encode(p)).collect(), obs.text)
            }
        };
        RemoteRequest {
            env: env.spec().name.clone(),
            step: env.step_index(),
            agent: agent.0,
            frames,
            text,
            legal: legal.to_vec(),
            mode: self.config.mode,
            kind,
        }
    }

    fn connect(&mut self) -> Result<&mut Transport, RemoteError> {
        if self.transport.is_none() {
            let t = match &self.config.endpoint {
                Endpoint::Http(_) => Transport::Http(
                    reqwest::blocking::Client::builder()
                        .timeout(self.config.timeout)
                        .build()
                        .map_err(|e| RemoteError::Transport(e.to_string()))?,
                ),
                Endpoint::Stdio(cmd) => {
                    let mut child = Command::new("sh")
                        .arg("-c")
                        .arg(cmd)
                        .stdin(Stdio::piped())
                        .stdout(Stdio::piped())
                        .spawn()
                        .map_err(|e| RemoteError::Transport(format!("spawn {cmd:?}: {e}")))?;
                    let stdin = child.stdin.take().expect("piped stdin");
                    let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
                    Transport::Stdio { child, stdin, stdout }
                }
            };
            self.transport = Some(t);
        }
        Ok(self.transport.as_mut().expect("just connected"))
    }

    fn send_once(&mut self, req: &RemoteRequest) -> Result<RemoteReply, RemoteError> {
        let url = match &self.config.endpoint {
            Endpoint::Http(u) => Some(u.clone()),
            Endpoint::Stdio(_) => None,
        };
        let key = self.config.api_key.clone();
        let body = match self.connect()? {
            Transport::Http(client) => {
                let mut rb = client.post(url.expect("http endpoint")).json(req);
                if let Some(k) = key {
                    rb = rb.bearer_auth(k);
                }
                let resp = rb.send().map_err(|e| RemoteError::Transport(e.to_string()))?;
                let status = resp.status();
                let text = resp.text().map_err(|e| RemoteError::Transport(e.to_string()))?;
                if !status.is_success() {
                    return Err(RemoteError::Transport(format!("HTTP {status}: {text}")));
                }
                text
            }
            Transport::Stdio { stdin, stdout, .. } => {
                let line = serde_json::to_string(req).map_err(|e| RemoteError::Transport(e.to_string()))?;
                writeln!(stdin, "{line}").and_then(|_| stdin.flush()).map_err(|e| RemoteError::Transport(e.to_string()))?;
                let mut reply = String::new();
                let n = stdout.read_line(&mut reply).map_err(|e| RemoteError::Transport(e.to_string()))?;
                if n == 0 {
                    self.transport = None;
                    return Err(RemoteError::Transport("agent process closed its output".into()));
                }
                reply
            }
        };
        serde_json::from_str(body.trim()).map_err(|e| RemoteError::Reply(format!("{e}: {}", body.trim())))
    }

    /// Sends `req`, retrying transport failures up to the configured bound.
    pub fn send(&mut self, req: &RemoteRequest) -> Result<RemoteReply, RemoteError> {
        let mut last = None;
        for attempt in 0..=self.config.retries {
            match self.send_once(req) {
                Ok(r) => return Ok(r),
                Err(RemoteError::Transport(e)) => {
                    log::warn!("remote attempt {} failed: {e}", attempt + 1);
                    last = Some(RemoteError::Transport(e));
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap_or(RemoteError::NoEndpoint))
    }

    fn resolve(&mut self, reply: Result<RemoteReply, RemoteError>, legal: &[String], rng: &mut GameRng) -> Result<String, PolicyError> {
        let token = match reply {
            Ok(r) => r.token.trim().to_string(),
            Err(RemoteError::Reply(e)) => {
                log::warn!("{e}");
                String::new()
            }
            Err(e) => return Err(PolicyError::Remote(e.to_string())),
        };
        if legal.contains(&token) {
            return Ok(token);
        }
        self.fallbacks += 1;
        let fallback = legal.choose(rng).cloned().ok_or(PolicyError::EmptyLegalSet)?;
        log::warn!("illegal remote token {token:?}; falling back to {fallback}");
        Ok(fallback)
    }

    /// Asks the agent in seat `agent` to predict what `target` plays next.
    pub fn predict(
        &mut self,
        env: &dyn Environment,
        agent: AgentId,
        target: AgentId,
        rng: &mut GameRng,
    ) -> Result<String, PolicyError> {
        let vocab = env.spec().action_vocabulary[target.0].clone();
        let req = self.request_for(env, agent, &vocab, RequestKind::Predict);
        let reply = self.send(&req);
        self.resolve(reply, &vocab, rng)
    }
}

impl Policy for RemotePolicy {
    fn name(&self) -> String {
        match &self.config.endpoint {
            Endpoint::Http(u) => format!("remote:{u}"),
            Endpoint::Stdio(c) => format!("remote:stdio:{c}"),
        }
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError> {
        if ctx.legal.is_empty() {
            return Err(PolicyError::EmptyLegalSet);
        }
        let req = self.request_for(ctx.env, ctx.agent, ctx.legal, RequestKind::Act);
        let reply = self.send(&req);
        self.resolve(reply, ctx.legal, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_parsing() {
        assert_eq!("http://x:1/act".parse::<Endpoint>().unwrap(), Endpoint::Http("http://x:1/act".into()));
        assert_eq!("stdio:python3 a.py".parse::<Endpoint>().unwrap(), Endpoint::Stdio("python3 a.py".into()));
        assert!(matches!("".parse::<Endpoint>(), Err(RemoteError::NoEndpoint)));
        assert!("ftp://x".parse::<Endpoint>().is_err());
    }

    #[test]
    fn mode_round_trip() {
        for m in [ObsMode::Multimodal, ObsMode::TextOnly] {
            assert_eq!(m.to_string().parse::<ObsMode>().unwrap(), m);
        }
        assert!("video".parse::<ObsMode>().is_err());
    }

    #[test]
    fn request_serializes_with_kind_and_mode() {
        let req = RemoteRequest {
            env: "kuhn".into(),
            step: 0,
            agent: 1,
            frames: vec![],
            text: "t".into(),
            legal: vec!["<PASS>".into()],
            mode: ObsMode::TextOnly,
            kind: RequestKind::Predict,
        };
        let v = serde_json::to_value(&req).unwrap();
        assert_eq!(v["mode"], "text-only");
        assert_eq!(v["kind"], "predict");
    }
}
