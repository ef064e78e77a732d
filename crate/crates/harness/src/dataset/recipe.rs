//! Per-environment dataset compositions.

use serde::{Deserialize, Serialize};
use vsarena_agents::{AgentSpec, ScriptKind};

pub const DATASET_SIZE: usize = 400;

/// One seat of a generating pair: a base agent, optionally perturbed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeatSpec {
    /// Agent specification string, e.g. `minimax:depth=4`.
    pub agent: String,
    /// Probability of replacing a decision with a uniformly random legal action.
    #[serde(default)]
    pub epsilon: f64,
    /// Decisions at the start of each episode taken uniformly at random.
    #[serde(default)]
    pub random_opening: usize,
}

impl SeatSpec {
    pub fn plain(agent: impl ToString) -> Self {
        Self { agent: agent.to_string(), epsilon: 0.0, random_opening: 0 }
    }

    pub fn noisy(agent: impl ToString, epsilon: f64) -> Self {
        Self { agent: agent.to_string(), epsilon, random_opening: 0 }
    }

    pub fn label(&self) -> String {
        let mut s = self.agent.clone();
        if self.epsilon > 0.0 {
            s.push_str(&format!("(eps={})", self.epsilon));
        }
        if self.random_opening > 0 {
            s.push_str(&format!("(opening={})", self.random_opening));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub label: String,
    pub seats: [SeatSpec; 2],
    /// Samples drawn from this pair; ignored when the recipe pools pairs.
    pub samples: usize,
    pub episodes: usize,
}

impl PairSpec {
    fn new(seats: [SeatSpec; 2], samples: usize, episodes: usize) -> Self {
        let label = format!("{}+{}", seats[0].label(), seats[1].label());
        Self { label, seats, samples, episodes }
    }
}

/// Constraint on the ground-truth action classes of the selected samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassBalance {
    None,
    /// Hanabi Play:Discard:Reveal weights.
    HanabiRatio { play: usize, discard: usize, reveal: usize },
    /// Upper bound on the fraction of STAY ground truths.
    StayCap(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecipe {
    pub env: String,
    pub total: usize,
    pub pairs: Vec<PairSpec>,
    /// Sample uniformly from the pooled decision points of all pairs instead
    /// of a fixed count per pair.
    #[serde(default)]
    pub pooled: bool,
    /// Agents whose next action is predicted.
    pub target_agents: Vec<usize>,
    /// Split each pair's samples evenly between the target agents.
    pub balance_agents: bool,
    /// Spread samples evenly over episode deciles.
    pub stratify_steps: bool,
    pub classes: ClassBalance,
    /// Hanabi: drop reveal ground truths, which depend on the predictor's own
    /// unseen hand.
    #[serde(default)]
    pub exclude_reveals: bool,
    pub deviations: Vec<String>,
}

fn pairs(list: Vec<([SeatSpec; 2], usize)>, episodes: usize) -> Vec<PairSpec> {
    list.into_iter().map(|(seats, n)| PairSpec::new(seats, n, episodes)).collect()
}

fn scripted(kind: ScriptKind) -> SeatSpec {
    SeatSpec::plain(AgentSpec::Scripted(kind))
}

fn random() -> SeatSpec {
    SeatSpec::plain(AgentSpec::Random)
}

impl DatasetRecipe {
    fn base(env: &str, pairs: Vec<PairSpec>) -> Self {
        Self {
            env: env.to_string(),
            total: DATASET_SIZE,
            pairs,
            pooled: false,
            target_agents: vec![0, 1],
            balance_agents: true,
            stratify_steps: true,
            classes: ClassBalance::None,
            exclude_reveals: false,
            deviations: Vec::new(),
        }
    }

    pub fn standard(env: &str) -> Option<Self> {
        use ScriptKind::*;
        Some(match env {
            "coin" => Self::base(
                env,
                pairs(
                    vec![
                        ([scripted(OwnColorCoin), scripted(OwnColorCoin)], 100),
                        ([scripted(ClosestCoin), scripted(ClosestCoin)], 100),
                        ([scripted(OwnColorCoin), scripted(ClosestCoin)], 50),
                        ([scripted(ClosestCoin), scripted(OwnColorCoin)], 50),
                        ([random(), scripted(ClosestCoin)], 50),
                        ([scripted(ClosestCoin), random()], 50),
                    ],
                    10,
                ),
            ),
            "hunt" => Self::base(
                env,
                pairs(
                    vec![
                        ([scripted(TowardMonster), scripted(TowardMonster)], 80),
                        ([scripted(CampCenter), scripted(CampCenter)], 80),
                        ([scripted(CampCorner), scripted(CampCorner)], 80),
                        ([scripted(ClosestApple), scripted(ClosestApple)], 80),
                        ([random(), scripted(ClosestApple)], 40),
                        ([scripted(ClosestApple), random()], 40),
                    ],
                    10,
                ),
            ),
            "battle" => Self::base(
                env,
                pairs(
                    vec![
                        ([scripted(ClosestCommonBlock), scripted(ClosestCommonBlock)], 100),
                        ([scripted(OwnColorBlock), scripted(OwnColorBlock)], 100),
                        ([scripted(ClosestCommonBlock), scripted(OwnColorBlock)], 50),
                        ([scripted(OwnColorBlock), scripted(ClosestCommonBlock)], 50),
                        ([scripted(BiasedRed), scripted(BiasedRed)], 50),
                        ([scripted(BiasedBlue), scripted(BiasedBlue)], 50),
                    ],
                    10,
                ),
            ),
            "kuhn" => {
                let alphas = ["0", "1/6", "1/3"];
                let mut list = Vec::new();
                for a in alphas {
                    for b in alphas {
                        list.push(([SeatSpec::plain(format!("ne:alpha={a}")), SeatSpec::plain(format!("ne:alpha={b}"))], 0));
                    }
                }
                let mut r = Self::base(env, pairs(list, 600));
                r.pooled = true;
                r.balance_agents = false;
                r.stratify_steps = false;
                r
            }
            "breakthrough" => {
                let depths = [(3, 4), (3, 5), (4, 5), (4, 6), (4, 4), (5, 5)];
                let counts = [67, 67, 67, 67, 66, 66];
                let list = depths
                    .iter()
                    .zip(counts)
                    .map(|(&(a, b), n)| {
                        let seat = |d: u32| SeatSpec {
                            agent: AgentSpec::Minimax { depth: d }.to_string(),
                            epsilon: 0.0,
                            random_opening: 2,
                        };
                        ([seat(a), seat(b)], n)
                    })
                    .collect();
                let mut r = Self::base(env, pairs(list, 3));
                r.deviations.push(
                    "each game opens with two uniformly random plies per player so that deterministic minimax pairs produce distinct games"
                        .into(),
                );
                r
            }
            "hanabi" | "tiny-hanabi" => {
                let list = vec![
                    ([SeatSpec::noisy("heuristic", 0.05), SeatSpec::noisy("heuristic", 0.05)], 360),
                    ([SeatSpec::noisy("heuristic", 0.3), SeatSpec::noisy("heuristic", 0.3)], 40),
                ];
                let mut r = Self::base(env, pairs(list, 60));
                r.classes = ClassBalance::HanabiRatio { play: 2, discard: 3, reveal: 4 };
                r.deviations.push(
                    "trajectories come from the rule-based heuristic pair with epsilon-random moves in place of vision-language-model play".into(),
                );
                r
            }
            "overcooked" => {
                let list = vec![
                    ([SeatSpec::noisy("oracle", 0.2), SeatSpec::noisy("oracle", 0.2)], 200),
                    ([SeatSpec::noisy("oracle", 0.5), SeatSpec::noisy("oracle", 0.5)], 100),
                    ([SeatSpec::noisy("oracle", 0.2), random()], 50),
                    ([random(), SeatSpec::noisy("oracle", 0.2)], 50),
                ];
                let mut r = Self::base(env, pairs(list, 40));
                r.classes = ClassBalance::StayCap(0.1);
                r.deviations.push(
                    "scripted chefs with epsilon-random moves replace the recorded human trajectories".into(),
                );
                r
            }
            "pong" => {
                let list = vec![
                    ([SeatSpec::plain("pong-bot"), SeatSpec::noisy("tracker", 0.1)], 200),
                    ([SeatSpec::plain("pong-bot"), SeatSpec::noisy("tracker", 0.5)], 100),
                    ([SeatSpec::plain("pong-bot"), random()], 100),
                ];
                let mut r = Self::base(env, pairs(list, 6));
                r.target_agents = vec![1];
                r.balance_agents = false;
                r.deviations.push(
                    "the right paddle is played by the tracker and random agents instead of a vision-language model; ground truth is that paddle's next action and the bot side predicts it".into(),
                );
                r
            }
            _ => return None,
        })
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.pairs.is_empty() {
            return Err("recipe has no strategy pairs".into());
        }
        if !self.pooled {
            let sum: usize = self.pairs.iter().map(|p| p.samples).sum();
            if sum != self.total {
                return Err(format!("pair sample counts sum to {sum}, expected {}", self.total));
            }
        }
        if self.target_agents.is_empty() || self.target_agents.iter().any(|&a| a > 1) {
            return Err(format!("bad target agents {:?}", self.target_agents));
        }
        if let ClassBalance::StayCap(f) = self.classes {
            if !(0.0..=1.0).contains(&f) {
                return Err(format!("STAY cap {f} outside [0, 1]"));
            }
        }
        for p in &self.pairs {
            for s in &p.seats {
                s.agent.parse::<AgentSpec>().map_err(|e| e.to_string())?;
                if !(0.0..=1.0).contains(&s.epsilon) {
                    return Err(format!("epsilon {} outside [0, 1]", s.epsilon));
                }
            }
        }
        Ok(())
    }
}

/// Splits `total` in proportion to `weights`, largest remainders first.
pub fn apportion(total: usize, weights: &[usize]) -> Vec<usize> {
    let sum: usize = weights.iter().sum();
    if sum == 0 {
        return vec![0; weights.len()];
    }
    let mut out: Vec<usize> = weights.iter().map(|w| total * w / sum).collect();
    let mut rest: Vec<(usize, usize)> = weights.iter().enumerate().map(|(i, w)| (total * w % sum, i)).collect();
    rest.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let short = total - out.iter().sum::<usize>();
    for &(_, i) in rest.iter().take(short) {
        out[i] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_sum_to_four_hundred() {
        for env in ["coin", "hunt", "battle", "breakthrough", "hanabi", "overcooked", "pong"] {
            let r = DatasetRecipe::standard(env).unwrap();
            r.validate().unwrap();
            assert_eq!(r.pairs.iter().map(|p| p.samples).sum::<usize>(), 400, "{env}");
        }
        let k = DatasetRecipe::standard("kuhn").unwrap();
        assert_eq!(k.pairs.len(), 9);
        assert!(k.pairs.iter().all(|p| p.episodes == 600));
    }

    #[test]
    fn hunt_counts() {
        let r = DatasetRecipe::standard("hunt").unwrap();
        let counts: Vec<_> = r.pairs.iter().map(|p| p.samples).collect();
        assert_eq!(counts, [80, 80, 80, 80, 40, 40]);
    }

    #[test]
    fn apportion_hanabi_ratio() {
        assert_eq!(apportion(400, &[2, 3, 4]), [89, 133, 178]);
        assert_eq!(apportion(360, &[2, 3, 4]), [80, 120, 160]);
        assert_eq!(apportion(40, &[2, 3, 4]), [9, 13, 18]);
        assert_eq!(apportion(7, &[1, 1]), [4, 3]);
    }
}
