//! Empirical check that an environment's rewards match its interaction class.

use crate::pomg::{InteractionClass, JointAction};
use crate::registry::make_env;
use crate::rng::{mix_seed, stream_rng, Stream};
use crate::trajectory::{run_episode, UniformPolicy};
use serde::Serialize;
use thiserror::Error;

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub seed: u64,
    pub step: usize,
    pub rewards: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub env: String,
    pub class: InteractionClass,
    pub probes: usize,
    pub steps: usize,
    /// For mixed games: a step whose rewards are neither identical nor zero-sum.
    pub witness: Option<Witness>,
}

#[derive(Debug, Error, PartialEq)]
pub enum StructureError {
    #[error("{env}: seed {seed}, step {step}: {detail}")]
    Violation { env: String, seed: u64, step: usize, detail: String },
    #[error("{env}: no step in {probes} probes was both non-identical and non-zero-sum")]
    NoMixedWitness { env: String, probes: usize },
    #[error("{0}")]
    Setup(String),
}

/// Plays `n_probes` uniform-random episodes of `env_name` and checks the
/// reward law of its class: identical per-step rewards when cooperative,
/// zero-sum episode returns when competitive, and at least one witness step
/// that is neither when mixed.
pub fn verify_reward_structure(
    env_name: &str,
    n_probes: usize,
    seed: u64,
) -> Result<StructureReport, StructureError> {
    if n_probes == 0 {
        return Err(StructureError::Setup("n_probes must be at least 1".into()));
    }
    let mut env = make_env(env_name, seed).map_err(|e| StructureError::Setup(e.to_string()))?;
    let class = env.spec().interaction_class;
    let mut witness = None;
    let mut total_steps = 0;
    let violation = |s: u64, step: usize, detail: String| StructureError::Violation {
        env: env_name.to_string(),
        seed: s,
        step,
        detail,
    };
    for i in 0..n_probes {
        let s = mix_seed(seed, i as u64);
        let (mut a, mut b) = (UniformPolicy, UniformPolicy);
        let t = run_episode(env.as_mut(), s, &mut [&mut a, &mut b])
            .map_err(|e| StructureError::Setup(e.to_string()))?;
        total_steps += t.len();
        match class {
            InteractionClass::Cooperative => {
                for st in &t.steps {
                    if st.rewards.iter().any(|r| (r - st.rewards[0]).abs() > TOL) {
                        return Err(violation(s, st.step, format!("rewards differ: {:?}", st.rewards)));
                    }
                }
            }
            InteractionClass::Competitive => {
                let sum: f64 = t.returns.iter().sum();
                if sum.abs() > TOL {
                    let last = t.steps.last().map_or(0, |x| x.step);
                    return Err(violation(s, last, format!("returns {:?} do not sum to zero", t.returns)));
                }
            }
            InteractionClass::Mixed => {
                if witness.is_none() {
                    witness = t
                        .steps
                        .iter()
                        .find(|st| {
                            let identical = st.rewards.iter().all(|r| (r - st.rewards[0]).abs() <= TOL);
                            let zero_sum = st.rewards.iter().sum::<f64>().abs() <= TOL;
                            !identical && !zero_sum
                        })
                        .map(|st| Witness { seed: s, step: st.step, rewards: st.rewards.clone() });
                }
            }
        }
    }
    if class == InteractionClass::Mixed && witness.is_none() {
        return Err(StructureError::NoMixedWitness { env: env_name.to_string(), probes: n_probes });
    }
    Ok(StructureReport { env: env_name.to_string(), class, probes: n_probes, steps: total_steps, witness })
}

/// A random joint action for the current state of `env`; used by fuzzers.
pub fn random_joint(env: &dyn crate::pomg::Environment, rng: &mut crate::rng::GameRng) -> JointAction {
    use rand::seq::SliceRandom;
    JointAction(
        (0..env.num_agents())
            .map(|a| {
                env.legal_actions(crate::pomg::AgentId(a))
                    .choose(rng)
                    .cloned()
                    .unwrap_or_else(|| crate::pomg::NOOP.to_string())
            })
            .collect(),
    )
}

/// A fresh probe stream for fuzzers that want one generator per seed.
pub fn probe_rng(seed: u64) -> crate::rng::GameRng {
    stream_rng(seed, Stream::Probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::ENV_NAMES;

    #[test]
    fn every_env_passes_a_short_probe_run() {
        for name in ENV_NAMES {
            let r = verify_reward_structure(name, 20, 1).unwrap_or_else(|e| panic!("{e}"));
            assert_eq!(r.probes, 20);
        }
    }

    #[test]
    fn coin_witness_is_a_cross_collection() {
        let r = verify_reward_structure("coin", 20, 3).unwrap();
        let w = r.witness.unwrap();
        let mut v = w.rewards.clone();
        v.sort_by(f64::total_cmp);
        // one player took the other's coin, possibly alongside other events
        assert!(v[0] < 0.0 && w.rewards.iter().sum::<f64>() != 0.0);
    }

    #[test]
    fn zero_probes_rejected() {
        assert!(matches!(verify_reward_structure("kuhn", 0, 0), Err(StructureError::Setup(_))));
    }
}
