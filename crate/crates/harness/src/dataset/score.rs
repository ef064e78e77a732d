//! Prediction accuracy with outcome equivalence.

use super::ReasoningSample;
use rand::seq::SliceRandom;
use vsarena_core::rng::stream_rng_raw;

/// Percentage of samples whose prediction falls in the equivalence set.
/// Missing predictions count as wrong.
pub fn score_predictions(samples: &[ReasoningSample], predictions: &[Option<String>]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut hits = 0;
    let mut missing = 0;
    for (i, s) in samples.iter().enumerate() {
        match predictions.get(i).and_then(|p| p.as_deref()) {
            Some(p) if s.equivalence_set.iter().any(|t| t == p.trim()) => hits += 1,
            Some(_) => {}
            None => missing += 1,
        }
    }
    if missing > 0 {
        log::warn!("{missing} of {} samples have no prediction; counted as wrong", samples.len());
    }
    100.0 * hits as f64 / samples.len() as f64
}

/// Mean accuracy of a predictor that picks uniformly among the target's legal
/// actions, over `repeats` Monte-Carlo passes.
pub fn random_predictor_accuracy(samples: &[ReasoningSample], repeats: usize, seed: u64) -> f64 {
    let mut rng = stream_rng_raw(seed, 0x5C0E);
    let mut total = 0.0;
    for _ in 0..repeats.max(1) {
        let preds: Vec<Option<String>> = samples.iter().map(|s| s.legal.choose(&mut rng).cloned()).collect();
        total += score_predictions(samples, &preds);
    }
    total / repeats.max(1) as f64
}
