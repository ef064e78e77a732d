//! Return normalization against random and optimal reference returns.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NormalizeError {
    #[error("degenerate references: random {random} equals optimal {optimal}")]
    Degenerate { random: f64, optimal: f64 },
    #[error("non-finite reference: random {random}, optimal {optimal}")]
    NonFinite { random: f64, optimal: f64 },
}

/// `100 * (raw - random) / (optimal - random)`: the random reference maps to
/// 0 and the optimal reference to 100.
pub fn normalize(raw: f64, random_ref: f64, optimal_ref: f64) -> Result<f64, NormalizeError> {
    if !random_ref.is_finite() || !optimal_ref.is_finite() {
        return Err(NormalizeError::NonFinite { random: random_ref, optimal: optimal_ref });
    }
    let span = optimal_ref - random_ref;
    if span.abs() < 1e-12 {
        return Err(NormalizeError::Degenerate { random: random_ref, optimal: optimal_ref });
    }
    Ok(100.0 * (raw - random_ref) / span)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefSource {
    Published,
    Computed,
}

/// The pair of raw returns that anchor a metric's 0 and 100.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub random: f64,
    pub optimal: f64,
    pub source: RefSource,
}

impl Reference {
    pub const fn published(random: f64, optimal: f64) -> Self {
        Self { random, optimal, source: RefSource::Published }
    }

    pub fn normalize(&self, raw: f64) -> Result<f64, NormalizeError> {
        normalize(raw, self.random, self.optimal)
    }
}

/// Published raw reference returns, keyed by environment and metric.
pub fn published(env: &str, metric: &str) -> Option<Reference> {
    let (random, optimal) = match (env, metric) {
        ("hanabi", "standard") => (0.0, 24.0),
        ("hanabi", "firework") => (1.2, 24.0),
        ("overcooked", "return") => (0.2, 40.0),
        ("breakthrough", "return") => (-1.0, 1.0),
        ("kuhn", "return") => (-0.1, 0.0),
        ("pong", "score") => (1.5, 1.5),
        ("pong", "step") => (147.2, 398.0),
        ("coin", "return") => (-0.1, 14.2),
        ("hunt", "return") => (-10.1, 92.2),
        ("battle", "return") => (0.2, 29.9),
        _ => return None,
    };
    Some(Reference::published(random, optimal))
}
