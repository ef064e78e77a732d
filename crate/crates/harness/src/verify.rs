//! The invariant suite behind `vsarena verify`.

use crate::dataset::{brute_force_equivalence, equivalence_set};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;
use vsarena_agents::kuhn::{best_response_gains, expected_value, KuhnProfile};
use vsarena_agents::{OvercookedOracle, RandomPolicy};
use vsarena_core::games::grid::{DilemmaKind, GridConfig, GridEnv, RewardRow};
use vsarena_core::structure::{probe_rng, random_joint, verify_reward_structure};
use vsarena_core::{
    make_env, mix_seed, replay, run_episode, AgentId, Environment, JointAction, StateView, ENV_NAMES,
};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub module: String,
    pub invariant: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{mark}  {:<12} {:<34} {:>7.2}s  {}\n", c.module, c.invariant, c.seconds, c.detail));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random episodes per environment for the reward-structure law.
    pub probes: usize,
    pub hanabi_episodes: usize,
    pub equivalence_states: usize,
    /// Episodes per environment for replay determinism and legal soundness.
    pub replay_episodes: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, probes: 1000, hanabi_episodes: 1000, equivalence_states: 1000, replay_episodes: 20 }
    }
}

impl VerifyConfig {
    pub fn quick() -> Self {
        Self { seed: 0, probes: 30, hanabi_episodes: 30, equivalence_states: 200, replay_episodes: 3 }
    }
}

type Check = (&'static str, &'static str, Box<dyn Fn(&VerifyConfig) -> Result<String, String> + Send + Sync>);

fn checks() -> Vec<Check> {
    vec![
        ("pomg-core", "reward structure", Box::new(reward_structure)),
        ("pomg-core", "replay determinism", Box::new(determinism)),
        ("pomg-core", "legal-action soundness", Box::new(legal_soundness)),
        ("hanabi", "card conservation and scoring", Box::new(hanabi_conservation)),
        ("adversarial", "kuhn equilibrium", Box::new(|_: &VerifyConfig| kuhn_equilibrium())),
        ("grid-games", "dilemma reward tables", Box::new(|_: &VerifyConfig| dilemma_tables())),
        ("dataset-gen", "equivalence brute force", Box::new(equivalence)),
        ("agents", "overcooked oracle", Box::new(|_: &VerifyConfig| overcooked_oracle())),
    ]
}

pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let checks = checks()
        .into_par_iter()
        .map(|(module, invariant, f)| {
            let t = Instant::now();
            let r = f(cfg);
            let (passed, detail) = match r {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                module: module.to_string(),
                invariant: invariant.to_string(),
                passed,
                detail,
                seconds: t.elapsed().as_secs_f64(),
            }
        })
        .collect();
    VerifyReport { checks }
}

pub fn reward_structure(cfg: &VerifyConfig) -> Result<String, String> {
    let reports: Vec<_> = ENV_NAMES
        .par_iter()
        .map(|env| verify_reward_structure(env, cfg.probes, cfg.seed).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let witnesses: Vec<String> = reports
        .iter()
        .filter_map(|r| r.witness.as_ref().map(|w| format!("{} {:?}", r.env, w.rewards)))
        .collect();
    Ok(format!("{} envs x {} episodes; mixed witnesses: {}", reports.len(), cfg.probes, witnesses.join(", ")))
}

pub fn determinism(cfg: &VerifyConfig) -> Result<String, String> {
    ENV_NAMES.par_iter().try_for_each(|env| {
        let mut e = make_env(env, 0).map_err(|x| x.to_string())?;
        for i in 0..cfg.replay_episodes {
            let seed = mix_seed(cfg.seed ^ 0xD, i as u64);
            let (mut a, mut b) = (RandomPolicy, RandomPolicy);
            let t = run_episode(e.as_mut(), seed, &mut [&mut a, &mut b]).map_err(|x| x.to_string())?;
            let again = run_episode(e.as_mut(), seed, &mut [&mut a, &mut b]).map_err(|x| x.to_string())?;
            let r = replay(e.as_mut(), seed, &t.joint_actions(), t.participants.clone()).map_err(|x| x.to_string())?;
            if t.canonical_bytes() != again.canonical_bytes() || t.canonical_bytes() != r.canonical_bytes() {
                return Err(format!("{env}: seed {seed} does not replay byte-identically"));
            }
            let sum: Vec<f64> = (0..t.returns.len()).map(|k| t.steps.iter().map(|s| s.rewards[k]).sum()).collect();
            if sum != t.returns {
                return Err(format!("{env}: seed {seed}: returns {:?} differ from reward sums {sum:?}", t.returns));
            }
        }
        Ok(())
    })?;
    Ok(format!("{} envs x {} episodes replayed", ENV_NAMES.len(), cfg.replay_episodes))
}

pub fn legal_soundness(cfg: &VerifyConfig) -> Result<String, String> {
    ENV_NAMES.par_iter().try_for_each(|env| {
        let mut e = make_env(env, 0).map_err(|x| x.to_string())?;
        for i in 0..cfg.replay_episodes {
            let seed = mix_seed(cfg.seed ^ 0x1E6A, i as u64);
            e.reset(seed);
            let mut rng = probe_rng(seed);
            while !e.is_terminal() && e.step_index() < 400 {
                let joint = random_joint(e.as_ref(), &mut rng);
                for agent in 0..e.num_agents() {
                    for token in e.legal_actions(AgentId(agent)) {
                        let mut j = joint.clone();
                        j.0[agent] = token.clone();
                        e.box_clone().step(&j).map_err(|x| format!("{env}: seed {seed}: legal `{token}` rejected: {x}"))?;
                    }
                    let mut j = joint.clone();
                    j.0[agent] = "<NOT-A-MOVE>".into();
                    if e.box_clone().step(&j).is_ok() {
                        return Err(format!("{env}: seed {seed}: bogus token accepted for agent {agent}"));
                    }
                }
                e.step(&joint).map_err(|x| x.to_string())?;
            }
            if e.is_terminal() && e.step(&JointAction::new(["<STAY>", "<STAY>"])).is_ok() {
                return Err(format!("{env}: seed {seed}: step after terminal accepted"));
            }
        }
        Ok(())
    })?;
    Ok(format!("{} envs x {} episodes", ENV_NAMES.len(), cfg.replay_episodes))
}

pub fn hanabi_conservation(cfg: &VerifyConfig) -> Result<String, String> {
    let (steps, total) = (0..cfg.hanabi_episodes)
        .into_par_iter()
        .map(|i| {
            let seed = mix_seed(cfg.seed ^ 0x4A4A, i as u64);
            let mut e = make_env("hanabi", seed).map_err(|x| x.to_string())?;
            let mut rng = probe_rng(seed);
            let mut cumulative = 0.0;
            let mut steps = 0;
            while !e.is_terminal() {
                let r = e.step(&random_joint(e.as_ref(), &mut rng)).map_err(|x| x.to_string())?;
                cumulative += r.rewards[0];
                steps += 1;
                let StateView::Hanabi(s) = e.view() else { unreachable!() };
                if !s.conserves_cards() {
                    return Err(format!("seed {seed}, step {steps}: card multiset changed"));
                }
                if (cumulative - s.score() as f64).abs() > 1e-9 {
                    return Err(format!("seed {seed}, step {steps}: reward sum {cumulative} != firework sum {}", s.score()));
                }
                if s.lives_exhausted && s.standard_score() != 0 {
                    return Err(format!("seed {seed}: standard score nonzero after losing every life"));
                }
            }
            Ok((steps, cumulative))
        })
        .try_reduce(|| (0, 0.0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(format!(
        "{} episodes, {steps} steps, mean firework {:.2}",
        cfg.hanabi_episodes,
        total / cfg.hanabi_episodes.max(1) as f64
    ))
}

/// Exact value and exploitability of an equilibrium profile.
pub fn check_kuhn_profile(profile: &KuhnProfile) -> Result<(), String> {
    let v = expected_value(&profile.seats[0], &profile.seats[1]);
    if (v + 1.0 / 18.0).abs() > 1e-12 {
        return Err(format!("alpha {}: value {v} != -1/18", profile.alpha));
    }
    let gains = best_response_gains(profile);
    if gains.iter().any(|g| *g > 1e-12) {
        return Err(format!("alpha {}: best-response gains {gains:?} exceed 1e-12", profile.alpha));
    }
    Ok(())
}

pub fn kuhn_equilibrium() -> Result<String, String> {
    for alpha in [0.0, 1.0 / 6.0, 1.0 / 3.0] {
        check_kuhn_profile(&KuhnProfile::equilibrium(alpha).map_err(|e| e.to_string())?)?;
    }
    Ok("value -1/18 and no profitable deviation for alpha in {0, 1/6, 1/3}".into())
}

/// The published event rewards, written out independently of the game code.
pub fn canonical_rewards(kind: DilemmaKind) -> BTreeMap<RewardRow, [f64; 2]> {
    use RewardRow::*;
    let rows: Vec<(RewardRow, [f64; 2])> = match kind {
        DilemmaKind::Coin => vec![
            (RedOwnCoin, [1.0, 0.0]),
            (RedCrossCoin, [1.0, -2.0]),
            (BlueOwnCoin, [0.0, 1.0]),
            (BlueCrossCoin, [-2.0, 1.0]),
        ],
        DilemmaKind::Hunt => vec![
            (RedApple, [2.0, 0.0]),
            (BlueApple, [0.0, 2.0]),
            (RedMonsterAlone, [-2.0, 0.0]),
            (BlueMonsterAlone, [0.0, -2.0]),
            (JointDefeat, [5.0, 5.0]),
        ],
        DilemmaKind::Battle => vec![(RedBlockMeet, [2.0, 1.0]), (BlueBlockMeet, [1.0, 2.0]), (BlockMismatch, [0.0, 0.0])],
    };
    rows.into_iter().collect()
}

/// Checks a dilemma configuration's table against the published rewards and
/// that played steps pay exactly the rows of the events they emit.
pub fn check_reward_table(config: &GridConfig, episodes: usize) -> Result<(), String> {
    for (row, want) in canonical_rewards(config.kind) {
        let got = config.rewards.get(row);
        if got != want {
            return Err(format!("{}: row `{}` pays {got:?}, expected {want:?}", config.kind.env_name(), row.description()));
        }
    }
    let mut env = GridEnv::new(config.clone(), 0).map_err(|e| e.to_string())?;
    let canon = canonical_rewards(config.kind);
    for i in 0..episodes {
        let seed = mix_seed(0x7AB1E, i as u64);
        env.reset(seed);
        let mut rng = probe_rng(seed);
        while !env.is_terminal() {
            let r = env.step(&random_joint(&env, &mut rng)).map_err(|e| e.to_string())?;
            let mut want = [0.0; 2];
            for e in &r.events {
                let row = RewardRow::of_event(e).ok_or_else(|| format!("unmapped event {e:?}"))?;
                let v = canon[&row];
                want[0] += v[0];
                want[1] += v[1];
            }
            if r.rewards != want {
                return Err(format!("{}: seed {seed}: rewards {:?} for events {:?}", config.kind.env_name(), r.rewards, r.events));
            }
        }
    }
    Ok(())
}

pub fn dilemma_tables() -> Result<String, String> {
    for kind in [DilemmaKind::Coin, DilemmaKind::Hunt, DilemmaKind::Battle] {
        check_reward_table(&GridConfig::standard(kind), 50)?;
    }
    Ok("coin, hunt and battle pay the published event rewards".into())
}

/// Fast equivalence rule against brute-force simulation on random states.
pub fn equivalence(cfg: &VerifyConfig) -> Result<String, String> {
    let envs = ["coin", "hunt", "battle"];
    (0..cfg.equivalence_states).into_par_iter().try_for_each(|i| {
        let seed = mix_seed(cfg.seed ^ 0xE9, i as u64);
        let mut rng = probe_rng(seed);
        let name = envs[i % envs.len()];
        let mut e = make_env(name, seed).map_err(|x| x.to_string())?;
        let warmup = rng.gen_range(0..49);
        for _ in 0..warmup {
            let j = random_joint(e.as_ref(), &mut rng);
            e.step(&j).map_err(|x| x.to_string())?;
        }
        let joint = random_joint(e.as_ref(), &mut rng);
        for agent in 0..2 {
            let mut fast = equivalence_set(e.as_ref(), agent, &joint.0[agent]);
            let mut slow = brute_force_equivalence(e.as_ref(), &joint, agent);
            fast.sort();
            slow.sort();
            if fast != slow {
                return Err(format!("{name}: seed {seed}, agent {agent}: fast {fast:?} != brute force {slow:?}"));
            }
        }
        Ok(())
    })?;
    Ok(format!("{} random grid states", cfg.equivalence_states))
}

pub fn overcooked_oracle() -> Result<String, String> {
    let mut e = make_env("overcooked", 0).map_err(|x| x.to_string())?;
    let (mut a, mut b) = (OvercookedOracle, OvercookedOracle);
    let t = run_episode(e.as_mut(), 0, &mut [&mut a, &mut b]).map_err(|x| x.to_string())?;
    let StateView::Overcooked(s) = e.view() else { unreachable!() };
    if t.len() != 50 || s.deliveries != 2 || t.returns != [40.0, 40.0] {
        return Err(format!("{} steps, {} deliveries, returns {:?}", t.len(), s.deliveries, t.returns));
    }
    Ok("2 deliveries in 50 steps, return 40".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let r = run_verify(&VerifyConfig::quick());
        assert!(r.passed(), "{}", r.table());
        assert_eq!(r.checks.len(), 8);
    }

    #[test]
    fn reward_table_typo_names_the_row() {
        let mut cfg = GridConfig::standard(DilemmaKind::Hunt);
        cfg.rewards.0.insert(RewardRow::JointDefeat, [5.0, 4.0]);
        let err = check_reward_table(&cfg, 1).unwrap_err();
        assert!(err.contains("Both defeat monster"), "{err}");
    }

    #[test]
    fn perturbed_equilibrium_is_exploitable() {
        let mut p = KuhnProfile::equilibrium(0.0).unwrap();
        p.seats[1].bet[0][0] += 0.05;
        assert!(check_kuhn_profile(&p).is_err());
    }

    #[test]
    fn uniform_kuhn_against_equilibrium_is_minus_one_ninth() {
        use vsarena_agents::kuhn::SeatStrategy;
        let uniform = SeatStrategy { bet: [[0.5; 3]; 2] };
        let ne = KuhnProfile::equilibrium(0.0).unwrap();
        let seat0 = expected_value(&uniform, &ne.seats[1]);
        let seat1 = -expected_value(&ne.seats[0], &uniform);
        assert!((seat0 + 1.0 / 6.0).abs() < 1e-12);
        assert!((seat1 + 1.0 / 18.0).abs() < 1e-12);
        let v = (seat0 + seat1) / 2.0;
        assert!((v + 1.0 / 9.0).abs() < 1e-12);
        let published = crate::normalize::published("kuhn", "return").unwrap().random;
        assert!((v - published).abs() < 0.05, "{v} vs {published}");
    }
}
