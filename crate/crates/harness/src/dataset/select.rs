//! Balanced sampling of decision points.

use rand::seq::SliceRandom;
use rand::Rng;

/// A decision point where `target` acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub pair: usize,
    pub episode: usize,
    pub step: usize,
    pub episode_len: usize,
    pub target: usize,
    pub ground_truth: String,
    pub class: String,
}

impl Candidate {
    pub fn decile(&self) -> usize {
        (10 * self.step / self.episode_len.max(1)).min(9)
    }
}

/// Picks `n` candidates, cycling through the episode deciles so every part of
/// an episode is equally represented; plain uniform draw when `stratify` is off.
pub fn stratified<R: Rng>(cands: &[Candidate], n: usize, stratify: bool, rng: &mut R) -> Option<Vec<Candidate>> {
    if cands.len() < n {
        return None;
    }
    if !stratify {
        return Some(cands.choose_multiple(rng, n).cloned().collect());
    }
    let mut buckets: Vec<Vec<&Candidate>> = vec![Vec::new(); 10];
    for c in cands {
        buckets[c.decile()].push(c);
    }
    for b in &mut buckets {
        b.shuffle(rng);
    }
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        // visit deciles in a fresh random order each round
        let mut order: Vec<usize> = (0..10).collect();
        order.shuffle(rng);
        for d in order {
            if out.len() == n {
                break;
            }
            if let Some(c) = buckets[d].pop() {
                out.push(c.clone());
            }
        }
    }
    Some(out)
}

/// Splits `n` across `targets` as evenly as possible (earlier agents take the
/// remainder) and samples each share.
pub fn balanced<R: Rng>(
    cands: &[Candidate],
    n: usize,
    targets: &[usize],
    balance: bool,
    stratify: bool,
    rng: &mut R,
) -> Result<Vec<Candidate>, String> {
    if !balance {
        let pool: Vec<Candidate> = cands.iter().filter(|c| targets.contains(&c.target)).cloned().collect();
        return stratified(&pool, n, stratify, rng)
            .ok_or_else(|| format!("need {n} decision points, found {}", pool.len()));
    }
    let k = targets.len();
    let mut out = Vec::with_capacity(n);
    for (i, &t) in targets.iter().enumerate() {
        let share = n / k + usize::from(i < n % k);
        let pool: Vec<Candidate> = cands.iter().filter(|c| c.target == t).cloned().collect();
        let picked = stratified(&pool, share, stratify, rng)
            .ok_or_else(|| format!("need {share} decision points for agent {t}, found {}", pool.len()))?;
        out.extend(picked);
    }
    Ok(out)
}
