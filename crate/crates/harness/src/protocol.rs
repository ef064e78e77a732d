//! Per-environment online evaluation protocols and their reports.

use crate::counters::{behavior_counters, dilemma_kind, CounterTable};
use crate::normalize::{published, NormalizeError, RefSource, Reference};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;
use vsarena_agents::{oracle_for, AgentSpec, MctsConfig, ObsMode, SpecError};
use vsarena_core::{make_env, mix_seed, run_episode, Environment, StateView, Trajectory};

/// Seed for reference computations, fixed so every report uses the same anchors.
pub const REFERENCE_SEED: u64 = 0x5EED_0F_AB5E;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("no evaluation protocol for `{0}`")]
    UnknownEnv(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("`{0}` has no oracle policy; its optimal reference is a published constant")]
    MissingOracle(String),
    #[error("reference for {env}/{metric}: {source}")]
    Normalize { env: String, metric: String, source: NormalizeError },
    #[error("every episode of {0} aborted")]
    AllAborted(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Opponent {
    SelfPlay,
    Fixed(AgentSpec),
}

/// Which seat the policy under test takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seating {
    /// Both seats (self-play).
    Both,
    /// First half of each run in seat 0, second half in seat 1.
    Alternate,
    Fixed(usize),
}

#[derive(Clone, Debug)]
pub struct EvalProtocol {
    pub env: String,
    pub runs: usize,
    pub episodes_per_run: usize,
    pub opponent: Opponent,
    pub seating: Seating,
    pub seed: u64,
    pub workers: usize,
    pub mode: ObsMode,
    /// Episodes per computed reference.
    pub reference_episodes: usize,
    /// Overrides the resolved references when set.
    pub references: Option<BTreeMap<String, Reference>>,
}

impl EvalProtocol {
    /// The standard match format for each suite environment.
    pub fn standard(env: &str) -> Result<Self, ProtocolError> {
        let (runs, episodes, opponent, seating) = match env {
            "hanabi" | "tiny-hanabi" | "overcooked" | "coin" | "hunt" | "battle" => (1, 10, Opponent::SelfPlay, Seating::Both),
            "breakthrough" => (1, 20, Opponent::Fixed(AgentSpec::Mcts(MctsConfig::default())), Seating::Alternate),
            "kuhn" => (10, 120, Opponent::Fixed(AgentSpec::KuhnNe { alpha: 0.0 }), Seating::Alternate),
            "pong" => (1, 10, Opponent::Fixed(AgentSpec::PongBot), Seating::Fixed(1)),
            other => return Err(ProtocolError::UnknownEnv(other.to_string())),
        };
        Ok(Self {
            env: env.to_string(),
            runs,
            episodes_per_run: episodes,
            opponent,
            seating,
            seed: 0,
            workers: rayon::current_num_threads(),
            mode: ObsMode::Multimodal,
            reference_episodes: if env == "pong" { 30 } else { 200 },
            references: None,
        })
    }

    pub fn planned(&self) -> usize {
        self.runs * self.episodes_per_run
    }

    /// Seat of the policy under test for episode `i` of a run.
    pub fn seat(&self, i: usize) -> Option<usize> {
        match self.seating {
            Seating::Both => None,
            Seating::Alternate => Some(usize::from(i >= self.episodes_per_run / 2)),
            Seating::Fixed(s) => Some(s),
        }
    }

    pub fn metric_names(&self) -> &'static [&'static str] {
        metric_names(&self.env)
    }
}

pub fn metric_names(env: &str) -> &'static [&'static str] {
    match env {
        "hanabi" | "tiny-hanabi" => &["standard", "firework"],
        "pong" => &["score", "step"],
        _ => &["return"],
    }
}

/// Metrics whose published anchors cannot be reproduced by this
/// implementation and are recomputed from the in-repo random and oracle agents.
fn computed_reference(env: &str) -> bool {
    matches!(env, "pong" | "coin" | "hunt" | "battle")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub run: usize,
    pub index: usize,
    pub seed: u64,
    pub seat: Option<usize>,
    pub metrics: BTreeMap<String, f64>,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Abort {
    pub run: usize,
    pub index: usize,
    pub seed: u64,
    pub error: String,
}

fn metrics_of(env: &str, e: &dyn Environment, t: &Trajectory, seat: Option<usize>) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    let mine = |t: &Trajectory| match seat {
        Some(s) => t.returns[s],
        None => t.returns.iter().sum::<f64>() / t.returns.len() as f64,
    };
    match (env, e.view()) {
        (_, StateView::Hanabi(s)) => {
            m.insert("standard".into(), s.standard_score() as f64);
            m.insert("firework".into(), t.returns[0]);
        }
        (_, StateView::Pong(s)) => {
            m.insert("score".into(), s.scores[seat.unwrap_or(1)] as f64);
            m.insert("step".into(), t.len() as f64);
        }
        _ => {
            m.insert("return".into(), mine(t));
        }
    }
    m
}

/// Plays every episode of the protocol, returning completed episodes (with
/// their trajectories) and aborts, both ordered by episode.
pub fn play(
    protocol: &EvalProtocol,
    policy: &AgentSpec,
) -> Result<(Vec<(EpisodeOutcome, Trajectory)>, Vec<Abort>), ProtocolError> {
    let env = protocol.env.as_str();
    // surface construction errors before spawning work
    make_env(env, 0).map_err(|_| ProtocolError::UnknownEnv(env.to_string()))?;
    policy.build(env, protocol.mode)?;
    if let Opponent::Fixed(o) = &protocol.opponent {
        o.build(env, protocol.mode)?;
    }
    let total = protocol.planned();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(protocol.workers.max(1))
        .build()
        .map_err(|e| ProtocolError::Pool(e.to_string()))?;
    let results: Vec<Result<(EpisodeOutcome, Trajectory), Abort>> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|k| {
                let (run, index) = (k / protocol.episodes_per_run, k % protocol.episodes_per_run);
                let seed = mix_seed(protocol.seed, k as u64);
                let seat = protocol.seat(index);
                let abort = |error: String| Abort { run, index, seed, error };
                let mut e = make_env(env, seed).map_err(|x| abort(x.to_string()))?;
                let build = |s: &AgentSpec| s.build(env, protocol.mode).map_err(|x| abort(x.to_string()));
                let mut seats = match (&protocol.opponent, seat) {
                    (Opponent::SelfPlay, _) | (_, None) => vec![build(policy)?, build(policy)?],
                    (Opponent::Fixed(o), Some(0)) => vec![build(policy)?, build(o)?],
                    (Opponent::Fixed(o), Some(_)) => vec![build(o)?, build(policy)?],
                };
                let mut refs: Vec<&mut dyn vsarena_core::Policy> =
                    seats.iter_mut().map(|p| p.as_mut() as &mut dyn vsarena_core::Policy).collect();
                let t = run_episode(e.as_mut(), seed, &mut refs).map_err(|x| abort(x.to_string()))?;
                let metrics = metrics_of(env, e.as_ref(), &t, seat);
                Ok((EpisodeOutcome { run, index, seed, seat, metrics, steps: t.len() }, t))
            })
            .collect()
    });
    let mut done = Vec::new();
    let mut aborts = Vec::new();
    for r in results {
        match r {
            Ok(x) => done.push(x),
            Err(a) => {
                log::warn!("{env}: episode {} of run {} (seed {}) aborted: {}", a.index, a.run, a.seed, a.error);
                aborts.push(a);
            }
        }
    }
    Ok((done, aborts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    Random,
    Oracle,
}

/// Mean raw value of each metric when the random agent or the environment's
/// oracle plays the protocol for `n` episodes.
pub fn compute_reference(
    env: &str,
    kind: ReferenceKind,
    n: usize,
    seed: u64,
) -> Result<BTreeMap<String, f64>, ProtocolError> {
    let spec = match kind {
        ReferenceKind::Random => AgentSpec::Random,
        ReferenceKind::Oracle => oracle_for(env).ok_or_else(|| ProtocolError::MissingOracle(env.to_string()))?,
    };
    let mut p = EvalProtocol::standard(env)?;
    p.runs = 1;
    p.episodes_per_run = n.max(2);
    p.seed = seed;
    let (done, _) = play(&p, &spec)?;
    if done.is_empty() {
        return Err(ProtocolError::AllAborted(env.to_string()));
    }
    let mut out = BTreeMap::new();
    for name in metric_names(env) {
        let vals: Vec<f64> = done.iter().map(|(o, _)| o.metrics[*name]).collect();
        out.insert(name.to_string(), mean_std(&vals).0);
    }
    Ok(out)
}

/// The reference pair used for each metric of `env`.
pub fn resolve_references(env: &str, n: usize) -> Result<BTreeMap<String, Reference>, ProtocolError> {
    let mut out = BTreeMap::new();
    if computed_reference(env) {
        let random = compute_reference(env, ReferenceKind::Random, n, REFERENCE_SEED)?;
        let oracle = compute_reference(env, ReferenceKind::Oracle, n, REFERENCE_SEED)?;
        for name in metric_names(env) {
            let r = Reference { random: random[*name], optimal: oracle[*name], source: RefSource::Computed };
            out.insert(name.to_string(), r);
        }
    } else {
        let base = env.strip_prefix("tiny-").unwrap_or(env);
        for name in metric_names(env) {
            if let Some(r) = published(base, name) {
                out.insert(name.to_string(), r);
            }
        }
    }
    Ok(out)
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub name: String,
    pub raw_mean: f64,
    pub raw_std: f64,
    pub reference: Option<Reference>,
    /// The published anchors, shown next to computed ones.
    pub published: Option<Reference>,
    pub normalized_mean: Option<f64>,
    pub normalized_std: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub env: String,
    pub policy: String,
    pub opponent: String,
    pub mode: ObsMode,
    pub seed: u64,
    pub planned: usize,
    pub completed: usize,
    pub aborts: Vec<Abort>,
    pub metrics: Vec<MetricSummary>,
    /// Headline normalized return: mean and std over units (episodes, or runs
    /// when the protocol has several).
    pub normalized_mean: f64,
    pub normalized_std: f64,
    pub counters: Option<CounterTable>,
    pub episodes: Vec<EpisodeOutcome>,
}

/// Runs the protocol for `policy` and aggregates the report.
pub fn run_protocol(protocol: &EvalProtocol, policy: &AgentSpec) -> Result<EvalReport, ProtocolError> {
    let env = protocol.env.as_str();
    let refs = match &protocol.references {
        Some(r) => r.clone(),
        None => resolve_references(env, protocol.reference_episodes)?,
    };
    let (done, aborts) = play(protocol, policy)?;
    if done.is_empty() {
        return Err(ProtocolError::AllAborted(env.to_string()));
    }

    // a unit is an episode, or a run's mean when there are several runs
    let units: Vec<BTreeMap<String, f64>> = if protocol.runs > 1 {
        (0..protocol.runs)
            .filter_map(|run| {
                let eps: Vec<_> = done.iter().filter(|(o, _)| o.run == run).collect();
                (!eps.is_empty()).then(|| {
                    metric_names(env)
                        .iter()
                        .map(|m| {
                            let v: Vec<f64> = eps.iter().map(|(o, _)| o.metrics[*m]).collect();
                            (m.to_string(), mean_std(&v).0)
                        })
                        .collect()
                })
            })
            .collect()
    } else {
        done.iter().map(|(o, _)| o.metrics.clone()).collect()
    };

    let norm_err = |metric: &str, source| ProtocolError::Normalize { env: env.into(), metric: metric.into(), source };
    let mut metrics = Vec::new();
    let mut normalized_units: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for name in metric_names(env) {
        let raw: Vec<f64> = units.iter().map(|u| u[*name]).collect();
        let (raw_mean, raw_std) = mean_std(&raw);
        let reference = refs.get(*name).copied();
        let (mut nm, mut ns) = (None, None);
        if let Some(r) = reference {
            let n = raw.iter().map(|x| r.normalize(*x)).collect::<Result<Vec<_>, _>>().map_err(|e| norm_err(name, e))?;
            let (m, s) = mean_std(&n);
            nm = Some(m);
            ns = Some(s);
            normalized_units.insert(name, n);
        }
        let base = env.strip_prefix("tiny-").unwrap_or(env);
        metrics.push(MetricSummary {
            name: name.to_string(),
            raw_mean,
            raw_std,
            reference,
            published: published(base, name),
            normalized_mean: nm,
            normalized_std: ns,
        });
    }

    let headline: Vec<f64> = match env {
        "pong" => {
            let (s, t) = (&normalized_units["score"], &normalized_units["step"]);
            s.iter().zip(t).map(|(s, t)| 0.9 * s + 0.1 * t).collect()
        }
        _ => normalized_units.get(metric_names(env)[0]).cloned().unwrap_or_default(),
    };
    let (normalized_mean, normalized_std) = mean_std(&headline);

    let counters = dilemma_kind(env).map(|_| behavior_counters(done.iter().map(|(_, t)| t), env).expect("dilemma env"));
    let opponent = match &protocol.opponent {
        Opponent::SelfPlay => "self".to_string(),
        Opponent::Fixed(o) => o.to_string(),
    };
    Ok(EvalReport {
        env: env.to_string(),
        policy: policy.to_string(),
        opponent,
        mode: protocol.mode,
        seed: protocol.seed,
        planned: protocol.planned(),
        completed: done.len(),
        aborts,
        metrics,
        normalized_mean,
        normalized_std,
        counters,
        episodes: done.into_iter().map(|(o, _)| o).collect(),
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.1}"))
}

impl EvalReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} | {} vs {} | {} | {}/{} episodes",
            self.env, self.policy, self.opponent, self.mode, self.completed, self.planned
        );
        let _ = writeln!(s, "  {:<10} {:>16} {:>16} {:>22} {:>18}", "metric", "raw", "normalized", "reference (rand/opt)", "published");
        for m in &self.metrics {
            let refs = m.reference.map_or("-".into(), |r| {
                let tag = if r.source == RefSource::Computed { " computed" } else { "" };
                format!("{:.1}/{:.1}{tag}", r.random, r.optimal)
            });
            let publ = m.published.map_or("-".into(), |r| format!("{:.1}/{:.1}", r.random, r.optimal));
            let _ = writeln!(
                s,
                "  {:<10} {:>16} {:>16} {:>22} {:>18}",
                m.name,
                format!("{:.2} ± {:.2}", m.raw_mean, m.raw_std),
                format!("{} ± {}", fmt_opt(m.normalized_mean), fmt_opt(m.normalized_std)),
                refs,
                publ
            );
        }
        let _ = writeln!(s, "  normalized return: {:.1} ± {:.1}", self.normalized_mean, self.normalized_std);
        if let Some(c) = &self.counters {
            for (name, per) in c.summary() {
                let _ = writeln!(s, "  {name:<30} {per:>6.2} per episode");
            }
        }
        for a in &self.aborts {
            let _ = writeln!(s, "  aborted: run {} episode {} seed {}: {}", a.run, a.index, a.seed, a.error);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<EvalReport>,
    /// Unweighted mean of the per-environment normalized returns.
    pub overall: f64,
}

impl SuiteReport {
    pub fn new(reports: Vec<EvalReport>) -> Self {
        let overall = mean_std(&reports.iter().map(|r| r.normalized_mean).collect::<Vec<_>>()).0;
        Self { reports, overall }
    }

    pub fn table(&self) -> String {
        let mut s: String = self.reports.iter().map(EvalReport::table).collect();
        let _ = writeln!(s, "overall normalized return: {:.1}", self.overall);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seat_split_is_exactly_half() {
        for env in ["breakthrough", "kuhn"] {
            let p = EvalProtocol::standard(env).unwrap();
            let seats: Vec<_> = (0..p.episodes_per_run).map(|i| p.seat(i).unwrap()).collect();
            assert_eq!(seats.iter().filter(|s| **s == 0).count() * 2, p.episodes_per_run);
        }
    }

    #[test]
    fn standard_counts() {
        let counts = |e| {
            let p = EvalProtocol::standard(e).unwrap();
            (p.runs, p.episodes_per_run)
        };
        assert_eq!(counts("hanabi"), (1, 10));
        assert_eq!(counts("overcooked"), (1, 10));
        assert_eq!(counts("breakthrough"), (1, 20));
        assert_eq!(counts("kuhn"), (10, 120));
        assert_eq!(counts("pong"), (1, 10));
        for e in ["coin", "hunt", "battle"] {
            assert_eq!(counts(e), (1, 10));
        }
        assert!(EvalProtocol::standard("chess").is_err());
    }

    #[test]
    fn overcooked_oracle_scores_hundred() {
        let p = EvalProtocol::standard("overcooked").unwrap();
        let r = run_protocol(&p, &AgentSpec::Oracle).unwrap();
        assert_eq!(r.metrics[0].raw_mean, 40.0);
        assert!((r.normalized_mean - 100.0).abs() < 1e-9);
    }

    #[test]
    fn policy_failures_are_counted_as_aborts() {
        // the Pong bot cannot play Kuhn: construction fails up front
        let p = EvalProtocol::standard("kuhn").unwrap();
        assert!(run_protocol(&p, &AgentSpec::PongBot).is_err());
    }

    #[test]
    fn mean_std_population() {
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!((m, s), (2.0, 1.0));
    }
}
