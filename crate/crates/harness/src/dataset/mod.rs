//! Offline next-action prediction datasets: generation from strategy pairs,
//! outcome-equivalence sets, and scoring.

pub mod equivalence;
pub mod io;
pub mod recipe;
pub mod score;
pub mod select;

pub use equivalence::{brute_force_equivalence, equivalence_set};
pub use recipe::{ClassBalance, DatasetRecipe, PairSpec, SeatSpec, DATASET_SIZE};
pub use score::{random_predictor_accuracy, score_predictions};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use recipe::apportion;
use select::{balanced, Candidate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;
use vsarena_agents::{AgentSpec, ObsMode};
use vsarena_core::games::hanabi::HanabiMove;
use vsarena_core::games::overcooked::INTERACT;
use vsarena_core::rng::stream_rng_raw;
use vsarena_core::{
    make_env, mix_seed, run_episode, AgentId, DecisionContext, Environment, GameRng, Policy, PolicyError,
    Trajectory, NOOP,
};

/// Random stream used for sample selection.
const SELECT_STREAM: u64 = 0xDA7A;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("no dataset recipe for `{0}`")]
    UnknownEnv(String),
    #[error("recipe for {env}: {detail}")]
    Recipe { env: String, detail: String },
    #[error("pair `{pair}`: {detail}")]
    Infeasible { pair: String, detail: String },
    #[error("episode {episode} of pair `{pair}` failed: {detail}")]
    Episode { pair: String, episode: usize, detail: String },
    #[error("sample file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One prediction task: from the predicting agent's observation, name the
/// other agent's next action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReasoningSample {
    pub id: usize,
    pub env: String,
    /// Frame files relative to the dataset directory; empty until written.
    #[serde(default)]
    pub frames: Vec<String>,
    pub text: String,
    pub ground_truth: String,
    pub equivalence_set: Vec<String>,
    /// The target agent's legal actions at the decision point.
    pub legal: Vec<String>,
    pub predicting_agent: usize,
    pub target_agent: usize,
    pub step: usize,
    pub episode_len: usize,
    pub pair: String,
    pub episode_seed: u64,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub env: String,
    pub seed: u64,
    pub recipe: DatasetRecipe,
    pub deviations: Vec<String>,
    pub history_depth: usize,
    pub composition: BTreeMap<String, usize>,
    pub classes: BTreeMap<String, usize>,
    pub target_agents: BTreeMap<usize, usize>,
}

pub struct Dataset {
    pub manifest: DatasetManifest,
    pub samples: Vec<ReasoningSample>,
    /// Environment snapshot at each sample's decision point.
    pub contexts: Vec<Box<dyn Environment>>,
}

impl Dataset {
    /// PNG frames of sample `i` as the predicting agent sees them, oldest first.
    pub fn frames(&self, i: usize) -> Vec<Vec<u8>> {
        let s = &self.samples[i];
        self.contexts[i].observe(AgentId(s.predicting_agent)).frames_png()
    }
}

/// Ground-truth action class used for ratio and cap constraints.
pub fn action_class(env: &str, token: &str) -> String {
    match env {
        "hanabi" | "tiny-hanabi" => match HanabiMove::parse(token) {
            Some(HanabiMove::Play(_)) => "play",
            Some(HanabiMove::Discard(_)) => "discard",
            Some(_) => "reveal",
            None => "other",
        }
        .to_string(),
        _ => token.trim_matches(|c| c == '<' || c == '>').to_lowercase(),
    }
}

/// A seat policy with epsilon-random decisions and a random opening.
struct Perturbed {
    inner: Box<dyn Policy>,
    epsilon: f64,
    opening: usize,
    decisions: usize,
}

impl Policy for Perturbed {
    fn name(&self) -> String {
        self.inner.name()
    }

    fn reset(&mut self, episode_seed: u64) {
        self.decisions = 0;
        self.inner.reset(episode_seed);
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError> {
        self.decisions += 1;
        let explore = self.decisions <= self.opening || (self.epsilon > 0.0 && rng.gen::<f64>() < self.epsilon);
        if explore {
            return ctx.legal.choose(rng).cloned().ok_or(PolicyError::EmptyLegalSet);
        }
        self.inner.act(ctx, rng)
    }
}

fn seat_policy(seat: &SeatSpec, env: &str) -> Result<Perturbed, String> {
    let spec: AgentSpec = seat.agent.parse().map_err(|e: vsarena_agents::SpecError| e.to_string())?;
    let inner = spec.build(env, ObsMode::TextOnly).map_err(|e| e.to_string())?;
    Ok(Perturbed { inner, epsilon: seat.epsilon, opening: seat.random_opening, decisions: 0 })
}

fn episode_seed(seed: u64, pair: usize, episode: usize) -> u64 {
    mix_seed(mix_seed(seed, pair as u64), episode as u64)
}

/// Decision points of `t` usable as samples.
fn candidates(recipe: &DatasetRecipe, pair: usize, episode: usize, t: &Trajectory) -> Vec<Candidate> {
    let env = recipe.env.as_str();
    let mut out = Vec::new();
    for (i, rec) in t.steps.iter().enumerate() {
        for &target in &recipe.target_agents {
            let token = &rec.actions[target];
            if token == NOOP {
                continue;
            }
            // an interaction that changes nothing is not a meaningful target
            if env == "overcooked" && token == INTERACT && !rec.events.iter().any(|e| e.actors.contains(&target)) {
                continue;
            }
            let class = action_class(env, token);
            if recipe.exclude_reveals && class == "reveal" {
                continue;
            }
            out.push(Candidate {
                pair,
                episode,
                step: i,
                episode_len: t.len(),
                target,
                ground_truth: token.clone(),
                class,
            });
        }
    }
    out
}

fn select_pair(
    recipe: &DatasetRecipe,
    cands: &[Candidate],
    n: usize,
    rng: &mut GameRng,
) -> Result<Vec<Candidate>, String> {
    let pick = |pool: Vec<Candidate>, k: usize, rng: &mut GameRng| {
        balanced(&pool, k, &recipe.target_agents, recipe.balance_agents, recipe.stratify_steps, rng)
    };
    let of_class = |c: &str| cands.iter().filter(|x| x.class == c).cloned().collect::<Vec<_>>();
    match recipe.classes {
        ClassBalance::None => pick(cands.to_vec(), n, rng),
        ClassBalance::HanabiRatio { play, discard, reveal } => {
            let reveal = if recipe.exclude_reveals { 0 } else { reveal };
            let quotas = apportion(n, &[play, discard, reveal]);
            let mut out = Vec::new();
            for (class, q) in ["play", "discard", "reveal"].into_iter().zip(quotas) {
                out.extend(pick(of_class(class), q, rng).map_err(|e| format!("{class}: {e}"))?);
            }
            Ok(out)
        }
        ClassBalance::StayCap(frac) => {
            let stays = of_class("stay");
            let cap = (frac * n as f64).floor() as usize;
            // the stay quota must still split evenly across the target agents
            let per_agent = recipe
                .target_agents
                .iter()
                .map(|a| stays.iter().filter(|c| c.target == *a).count())
                .min()
                .unwrap_or(0);
            let k = cap.min(if recipe.balance_agents { per_agent * recipe.target_agents.len() } else { stays.len() });
            let rest: Vec<Candidate> = cands.iter().filter(|x| x.class != "stay").cloned().collect();
            let mut out = pick(stays, k, rng)?;
            out.extend(pick(rest, n - k, rng)?);
            Ok(out)
        }
    }
}

/// Plays every strategy pair of the recipe and samples its decision points.
pub fn generate_dataset(recipe: &DatasetRecipe, seed: u64) -> Result<Dataset, DatasetError> {
    let env_name = recipe.env.as_str();
    let rerr = |detail: String| DatasetError::Recipe { env: env_name.to_string(), detail };
    recipe.validate().map_err(rerr)?;
    let probe = make_env(env_name, seed).map_err(|e| rerr(e.to_string()))?;
    let history_depth = probe.spec().history_depth;
    for p in &recipe.pairs {
        for s in &p.seats {
            seat_policy(s, env_name).map_err(rerr)?;
        }
    }

    // play every episode of every pair
    let jobs: Vec<(usize, usize)> =
        recipe.pairs.iter().enumerate().flat_map(|(pi, p)| (0..p.episodes).map(move |e| (pi, e))).collect();
    let trajectories: Vec<Trajectory> = jobs
        .par_iter()
        .map(|&(pi, e)| {
            let pair = &recipe.pairs[pi];
            let fail = |detail: String| DatasetError::Episode { pair: pair.label.clone(), episode: e, detail };
            let mut env = make_env(env_name, 0).map_err(|x| fail(x.to_string()))?;
            let mut a = seat_policy(&pair.seats[0], env_name).map_err(fail)?;
            let mut b = seat_policy(&pair.seats[1], env_name).map_err(fail)?;
            run_episode(env.as_mut(), episode_seed(seed, pi, e), &mut [&mut a, &mut b]).map_err(|x| fail(x.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let index: BTreeMap<(usize, usize), usize> = jobs.iter().enumerate().map(|(i, k)| (*k, i)).collect();

    // sample decision points
    let mut rng = stream_rng_raw(seed, SELECT_STREAM);
    let mut chosen = Vec::new();
    if recipe.pooled {
        let all: Vec<Candidate> =
            jobs.iter().zip(&trajectories).flat_map(|(&(pi, e), t)| candidates(recipe, pi, e, t)).collect();
        let picked = select_pair(recipe, &all, recipe.total, &mut rng)
            .map_err(|detail| DatasetError::Infeasible { pair: "pooled".into(), detail })?;
        chosen.extend(picked);
    } else {
        for (pi, pair) in recipe.pairs.iter().enumerate() {
            let cands: Vec<Candidate> = (0..pair.episodes)
                .flat_map(|e| candidates(recipe, pi, e, &trajectories[index[&(pi, e)]]))
                .collect();
            let picked = select_pair(recipe, &cands, pair.samples, &mut rng)
                .map_err(|detail| DatasetError::Infeasible { pair: pair.label.clone(), detail })?;
            chosen.extend(picked);
        }
    }
    chosen.sort_by(|a, b| (a.pair, a.episode, a.step, a.target).cmp(&(b.pair, b.episode, b.step, b.target)));

    // replay the chosen episodes to recover each decision point
    let mut samples = Vec::with_capacity(chosen.len());
    let mut contexts = Vec::with_capacity(chosen.len());
    let mut i = 0;
    while i < chosen.len() {
        let (pi, e) = (chosen[i].pair, chosen[i].episode);
        let t = &trajectories[index[&(pi, e)]];
        let eseed = episode_seed(seed, pi, e);
        let mut env = make_env(env_name, eseed).map_err(|x| rerr(x.to_string()))?;
        env.reset(eseed);
        for (step, rec) in t.steps.iter().enumerate() {
            while i < chosen.len() && (chosen[i].pair, chosen[i].episode, chosen[i].step) == (pi, e, step) {
                let c = &chosen[i];
                let predicting = 1 - c.target;
                samples.push(ReasoningSample {
                    id: samples.len(),
                    env: env_name.to_string(),
                    frames: Vec::new(),
                    text: env.observe_text(AgentId(predicting)),
                    ground_truth: c.ground_truth.clone(),
                    equivalence_set: equivalence_set(env.as_ref(), c.target, &c.ground_truth),
                    legal: env.legal_actions(AgentId(c.target)),
                    predicting_agent: predicting,
                    target_agent: c.target,
                    step: rec.step,
                    episode_len: t.len(),
                    pair: recipe.pairs[pi].label.clone(),
                    episode_seed: eseed,
                    class: c.class.clone(),
                });
                contexts.push(env.box_clone());
                i += 1;
            }
            if i >= chosen.len() || (chosen[i].pair, chosen[i].episode) != (pi, e) {
                break;
            }
            env.step(&vsarena_core::JointAction(rec.actions.clone())).map_err(|x| rerr(x.to_string()))?;
        }
    }

    let mut composition = BTreeMap::new();
    let mut classes = BTreeMap::new();
    let mut target_agents = BTreeMap::new();
    for s in &samples {
        *composition.entry(s.pair.clone()).or_insert(0) += 1;
        *classes.entry(s.class.clone()).or_insert(0) += 1;
        *target_agents.entry(s.target_agent).or_insert(0) += 1;
    }
    let manifest = DatasetManifest {
        env: env_name.to_string(),
        seed,
        recipe: recipe.clone(),
        deviations: recipe.deviations.clone(),
        history_depth,
        composition,
        classes,
        target_agents,
    };
    Ok(Dataset { manifest, samples, contexts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_dataset_matches_its_recipe() {
        let r = DatasetRecipe::standard("coin").unwrap();
        let d = generate_dataset(&r, 3).unwrap();
        assert_eq!(d.samples.len(), 400);
        for p in &r.pairs {
            assert_eq!(d.manifest.composition[&p.label], p.samples);
        }
        assert_eq!(d.manifest.target_agents[&0], 200);
        for s in &d.samples {
            assert!(s.equivalence_set.contains(&s.ground_truth));
            assert_eq!(s.predicting_agent, 1 - s.target_agent);
        }
    }

    #[test]
    fn contexts_reproduce_the_ground_truth_state() {
        let r = DatasetRecipe::standard("battle").unwrap();
        let d = generate_dataset(&r, 1).unwrap();
        for (s, c) in d.samples.iter().zip(&d.contexts).take(50) {
            assert_eq!(c.step_index(), s.step);
            assert_eq!(c.observe_text(AgentId(s.predicting_agent)), s.text);
            assert_eq!(d.frames(s.id).len(), 1);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let r = DatasetRecipe::standard("hunt").unwrap();
        let a = generate_dataset(&r, 9).unwrap();
        let b = generate_dataset(&r, 9).unwrap();
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn mismatched_pair_agent_is_a_recipe_error() {
        let mut r = DatasetRecipe::standard("coin").unwrap();
        r.pairs[0].seats[0] = SeatSpec::plain("scripted:camp-center");
        assert!(matches!(generate_dataset(&r, 0), Err(DatasetError::Recipe { .. })));
    }

    #[test]
    fn class_names() {
        assert_eq!(action_class("hanabi", "<REVEAL rank 1>"), "reveal");
        assert_eq!(action_class("hanabi", "<PLAY 0>"), "play");
        assert_eq!(action_class("overcooked", "<STAY>"), "stay");
    }
}
