//! Event counters for the mixed-motive grid games.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;
use vsarena_core::games::grid::{DilemmaKind, RewardRow, RewardTable};
use vsarena_core::Trajectory;

#[derive(Debug, Error, PartialEq)]
pub enum CounterError {
    #[error("environment `{0}` has no behavior counters")]
    NoCounters(String),
}

pub fn dilemma_kind(env: &str) -> Option<DilemmaKind> {
    match env {
        "coin" => Some(DilemmaKind::Coin),
        "hunt" => Some(DilemmaKind::Hunt),
        "battle" => Some(DilemmaKind::Battle),
        _ => None,
    }
}

/// Occurrences of each reward row, summed over a set of episodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterTable {
    pub env: String,
    pub episodes: usize,
    pub counts: BTreeMap<RewardRow, u64>,
}

impl CounterTable {
    pub fn get(&self, row: RewardRow) -> u64 {
        self.counts.get(&row).copied().unwrap_or(0)
    }

    /// Per-agent returns implied by the counts and a reward table.
    pub fn returns(&self, table: &RewardTable) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (&row, &n) in &self.counts {
            let r = table.get(row);
            out[0] += r[0] * n as f64;
            out[1] += r[1] * n as f64;
        }
        out
    }

    /// Named summary: cooperation/defection for Coin, per-row otherwise.
    pub fn summary(&self) -> BTreeMap<String, f64> {
        let per = |n: u64| n as f64 / self.episodes.max(1) as f64;
        self.counts.iter().map(|(row, &n)| (row.description().to_string(), per(n))).collect()
    }
}

pub fn behavior_counters<'a>(
    trajectories: impl IntoIterator<Item = &'a Trajectory>,
    env: &str,
) -> Result<CounterTable, CounterError> {
    let kind = dilemma_kind(env).ok_or_else(|| CounterError::NoCounters(env.to_string()))?;
    let mut counts: BTreeMap<RewardRow, u64> = RewardRow::rows(kind).iter().map(|&r| (r, 0)).collect();
    let mut episodes = 0;
    for t in trajectories {
        episodes += 1;
        for e in t.events() {
            if let Some(row) = RewardRow::of_event(e) {
                *counts.entry(row).or_default() += 1;
            }
        }
    }
    Ok(CounterTable { env: env.to_string(), episodes, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsarena_agents::{RandomPolicy, ScriptKind, ScriptedGridPolicy};
    use vsarena_core::{make_env, mix_seed, run_episode};

    fn pair(env: &str, kind: ScriptKind, n: u64) -> Vec<Trajectory> {
        let mut e = make_env(env, 0).unwrap();
        (0..n)
            .map(|i| {
                let (mut a, mut b) = (ScriptedGridPolicy::new(kind), ScriptedGridPolicy::new(kind));
                run_episode(e.as_mut(), mix_seed(11, i), &mut [&mut a, &mut b]).unwrap()
            })
            .collect()
    }

    #[test]
    fn own_color_pair_never_defects() {
        let c = behavior_counters(&pair("coin", ScriptKind::OwnColorCoin, 10), "coin").unwrap();
        assert_eq!(c.get(RewardRow::RedCrossCoin) + c.get(RewardRow::BlueCrossCoin), 0);
        assert!(c.get(RewardRow::RedOwnCoin) > 0 && c.get(RewardRow::BlueOwnCoin) > 0);
    }

    #[test]
    fn camp_center_pair_mostly_defeats_the_monster_jointly() {
        let c = behavior_counters(&pair("hunt", ScriptKind::CampCenter, 10), "hunt").unwrap();
        let alone = c.get(RewardRow::RedMonsterAlone) + c.get(RewardRow::BlueMonsterAlone);
        assert!(c.get(RewardRow::JointDefeat) > 5 * alone.max(1), "{c:?}");
    }

    #[test]
    fn biased_red_pair_meets_on_red() {
        let c = behavior_counters(&pair("battle", ScriptKind::BiasedRed, 10), "battle").unwrap();
        assert!(c.get(RewardRow::RedBlockMeet) > 10 * c.get(RewardRow::BlueBlockMeet).max(1), "{c:?}");
    }

    #[test]
    fn counters_reconstruct_returns() {
        for env in ["coin", "hunt", "battle"] {
            let table = RewardTable::standard(dilemma_kind(env).unwrap());
            let mut e = make_env(env, 0).unwrap();
            for i in 0..20 {
                let (mut a, mut b) = (RandomPolicy, RandomPolicy);
                let t = run_episode(e.as_mut(), mix_seed(5, i), &mut [&mut a, &mut b]).unwrap();
                let c = behavior_counters([&t], env).unwrap();
                let r = c.returns(&table);
                assert_eq!(r.to_vec(), t.returns, "{env}");
            }
        }
    }

    #[test]
    fn non_grid_env_has_no_counters() {
        assert_eq!(behavior_counters([], "kuhn"), Err(CounterError::NoCounters("kuhn".into())));
    }
}
