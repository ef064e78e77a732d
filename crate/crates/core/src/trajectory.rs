//! Episode runner and the trajectory record.

use crate::events::GameEvent;
use crate::pomg::{
    AgentId, DecisionContext, EnvError, Environment, GameSpec, JointAction, Policy, PolicyError,
    NOOP,
};
use crate::rng::policy_rng;
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub actions: Vec<String>,
    pub rewards: Vec<f64>,
    pub events: Vec<GameEvent>,
}

/// Observations are not stored: they are pure functions of the state and can
/// be regenerated by replaying the actions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub seed: u64,
    pub spec: GameSpec,
    pub participants: Vec<String>,
    pub steps: Vec<StepRecord>,
    pub returns: Vec<f64>,
    /// The game ended by its own rules rather than the runner's step cap.
    pub terminal: bool,
    pub final_state: serde_json::Value,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn joint_actions(&self) -> Vec<JointAction> {
        self.steps.iter().map(|s| JointAction(s.actions.clone())).collect()
    }

    pub fn events(&self) -> impl Iterator<Item = &GameEvent> {
        self.steps.iter().flat_map(|s| s.events.iter())
    }

    /// Canonical bytes without timestamps; equal trajectories give equal bytes.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("trajectory serializes")
    }

    /// One header line followed by one line per step.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        let now = || Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
        let header = json!({
            "record": "header",
            "timestamp": now(),
            "spec": self.spec,
            "seed": self.seed,
            "participants": self.participants,
            "returns": self.returns,
            "terminal": self.terminal,
        });
        writeln!(w, "{header}")?;
        for s in &self.steps {
            let line = json!({
                "record": "step",
                "timestamp": now(),
                "step": s.step,
                "actions": s.actions,
                "rewards": s.rewards,
                "events": s.events.iter().map(GameEvent::tag).collect::<Vec<_>>(),
            });
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EpisodeError {
    #[error("expected {expected} policies, got {got}")]
    PolicyCount { expected: usize, got: usize },
    #[error("policy `{policy}` for agent {agent} failed at step {step}: {source}")]
    Policy { step: usize, agent: usize, policy: String, source: PolicyError },
    #[error("environment rejected step {step}: {source}")]
    Env { step: usize, source: EnvError },
}

impl EpisodeError {
    pub fn step(&self) -> Option<usize> {
        match self {
            EpisodeError::PolicyCount { .. } => None,
            EpisodeError::Policy { step, .. } | EpisodeError::Env { step, .. } => Some(*step),
        }
    }
}

/// Resets `env` with `seed` and plays until the game ends or the `GameSpec` step
/// cap is reached. Policies are only consulted for agents that move; the others
/// submit the no-op token. Policy randomness comes from per-agent streams of
/// `seed`.
pub fn run_episode(
    env: &mut dyn Environment,
    seed: u64,
    policies: &mut [&mut dyn Policy],
) -> Result<Trajectory, EpisodeError> {
    run_episode_observed(env, seed, policies, |_, _| {})
}

/// Like `run_episode`, calling `observe(env, joint)` before each step with the
/// pre-step environment and the joint action about to be applied.
pub fn run_episode_observed(
    env: &mut dyn Environment,
    seed: u64,
    policies: &mut [&mut dyn Policy],
    mut observe: impl FnMut(&dyn Environment, &JointAction),
) -> Result<Trajectory, EpisodeError> {
    let n = env.num_agents();
    if policies.len() != n {
        return Err(EpisodeError::PolicyCount { expected: n, got: policies.len() });
    }
    env.reset(seed);
    for p in policies.iter_mut() {
        p.reset(seed);
    }
    let mut rngs: Vec<_> = (0..n).map(|a| policy_rng(seed, a)).collect();
    let cap = env.spec().max_steps;
    let mut steps = Vec::new();
    let mut returns = vec![0.0; n];
    while !env.is_terminal() && cap.map_or(true, |c| steps.len() < c) {
        let step = env.step_index();
        let mut tokens = Vec::with_capacity(n);
        for (agent, policy) in policies.iter_mut().enumerate() {
            let legal = env.legal_actions(AgentId(agent));
            if legal.len() == 1 && legal[0] == NOOP {
                tokens.push(NOOP.to_string());
                continue;
            }
            let ctx = DecisionContext { agent: AgentId(agent), step, legal: &legal, env: &*env };
            let token = policy.act(&ctx, &mut rngs[agent]).map_err(|source| EpisodeError::Policy {
                step,
                agent,
                policy: policy.name(),
                source,
            })?;
            tokens.push(token);
        }
        let joint = JointAction(tokens);
        observe(&*env, &joint);
        let result = env.step(&joint).map_err(|source| EpisodeError::Env { step, source })?;
        for (r, x) in returns.iter_mut().zip(&result.rewards) {
            *r += x;
        }
        steps.push(StepRecord { step, actions: joint.0, rewards: result.rewards, events: result.events });
    }
    Ok(Trajectory {
        seed,
        spec: env.spec().clone(),
        participants: policies.iter().map(|p| p.name()).collect(),
        steps,
        returns,
        terminal: env.is_terminal(),
        final_state: env.state_json(),
    })
}

/// Rebuilds a trajectory from its seed and joint actions.
pub fn replay(
    env: &mut dyn Environment,
    seed: u64,
    actions: &[JointAction],
    participants: Vec<String>,
) -> Result<Trajectory, EpisodeError> {
    env.reset(seed);
    let n = env.num_agents();
    let mut steps = Vec::with_capacity(actions.len());
    let mut returns = vec![0.0; n];
    for joint in actions {
        let step = env.step_index();
        let result = env.step(joint).map_err(|source| EpisodeError::Env { step, source })?;
        for (r, x) in returns.iter_mut().zip(&result.rewards) {
            *r += x;
        }
        steps.push(StepRecord {
            step,
            actions: joint.0.clone(),
            rewards: result.rewards,
            events: result.events,
        });
    }
    Ok(Trajectory {
        seed,
        spec: env.spec().clone(),
        participants,
        steps,
        returns,
        terminal: env.is_terminal(),
        final_state: env.state_json(),
    })
}

/// Uniform choice over the legal set; enough for probing and tests inside
/// this crate.
pub struct UniformPolicy;

impl Policy for UniformPolicy {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut crate::rng::GameRng) -> Result<String, PolicyError> {
        use rand::seq::SliceRandom;
        ctx.legal.choose(rng).cloned().ok_or(PolicyError::EmptyLegalSet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{make_env, ENV_NAMES};

    fn random_episode(name: &str, seed: u64) -> Trajectory {
        let mut env = make_env(name, seed).unwrap();
        let (mut a, mut b) = (UniformPolicy, UniformPolicy);
        run_episode(env.as_mut(), seed, &mut [&mut a, &mut b]).unwrap()
    }

    #[test]
    fn returns_are_sums_of_step_rewards() {
        for name in ENV_NAMES {
            let t = random_episode(name, 11);
            for agent in 0..2 {
                let sum: f64 = t.steps.iter().map(|s| s.rewards[agent]).sum();
                assert_eq!(sum, t.returns[agent], "{name}");
            }
        }
    }

    #[test]
    fn replay_reproduces_bytes() {
        for name in ENV_NAMES {
            let t = random_episode(name, 5);
            let mut env = make_env(name, 0).unwrap();
            let r = replay(env.as_mut(), t.seed, &t.joint_actions(), t.participants.clone()).unwrap();
            assert_eq!(r.canonical_bytes(), t.canonical_bytes(), "{name}");
        }
    }

    #[test]
    fn same_seed_same_trajectory() {
        for name in ENV_NAMES {
            assert_eq!(random_episode(name, 3), random_episode(name, 3), "{name}");
        }
    }

    #[test]
    fn breakthrough_random_play_ends_with_unit_win() {
        let t = random_episode("breakthrough", 2);
        assert!(t.terminal);
        let mut r = t.returns.clone();
        r.sort_by(f64::total_cmp);
        assert_eq!(r, vec![-1.0, 1.0]);
    }

    #[test]
    fn turn_based_non_movers_submit_noop() {
        let t = random_episode("kuhn", 4);
        for s in &t.steps {
            assert_eq!(s.actions.iter().filter(|a| *a == NOOP).count(), 1);
        }
    }

    #[test]
    fn jsonl_has_header_and_one_line_per_step() {
        let t = random_episode("tictactoe", 9);
        let mut buf = Vec::new();
        t.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<serde_json::Value> =
            text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), t.len() + 1);
        assert_eq!(lines[0]["record"], "header");
        assert_eq!(lines[0]["seed"], 9);
        assert!(lines[1]["timestamp"].as_str().unwrap().ends_with('Z'));
    }

    #[test]
    fn policy_failure_carries_step() {
        struct Fails;
        impl Policy for Fails {
            fn name(&self) -> String {
                "fails".into()
            }
            fn act(&mut self, ctx: &DecisionContext<'_>, _: &mut crate::rng::GameRng) -> Result<String, PolicyError> {
                if ctx.step >= 2 {
                    Err(PolicyError::Other("boom".into()))
                } else {
                    Ok(ctx.legal[0].clone())
                }
            }
        }
        let mut env = make_env("coin", 1).unwrap();
        let (mut a, mut b) = (Fails, UniformPolicy);
        let err = run_episode(env.as_mut(), 1, &mut [&mut a, &mut b]).unwrap_err();
        assert_eq!(err.step(), Some(2));
        assert!(err.to_string().contains("step 2"));
    }
}
