//! The one-parameter Nash equilibrium family of Kuhn poker, exact expected
//! values, and a best-response check over pure strategies.

use rand::Rng;
use thiserror::Error;
use vsarena_core::games::kuhn::{KuhnAction, KuhnCard, BET, PASS};
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError, StateView};

/// Betting probabilities for one seat: `bet[k][card]` is the chance of
/// `<BET>` at that seat's `k`-th information set kind, indexed J, Q, K.
///
/// Seat 0 decides at the opening (`k = 0`) and after check-bet (`k = 1`).
/// Seat 1 decides after a check (`k = 0`) and facing a bet (`k = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeatStrategy {
    pub bet: [[f64; 3]; 2],
}

impl SeatStrategy {
    /// `bits` selects a pure strategy: bit `3k + card` set means always bet.
    pub fn pure(bits: u8) -> Self {
        let mut bet = [[0.0; 3]; 2];
        for (k, row) in bet.iter_mut().enumerate() {
            for (c, p) in row.iter_mut().enumerate() {
                *p = f64::from((bits >> (3 * k + c)) & 1);
            }
        }
        Self { bet }
    }

    pub fn is_valid(&self) -> bool {
        self.bet.iter().flatten().all(|p| (0.0..=1.0).contains(p))
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("alpha must lie in [0, 1/3], got {0}")]
pub struct AlphaOutOfRange(pub f64);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KuhnProfile {
    pub alpha: f64,
    pub seats: [SeatStrategy; 2],
}

impl KuhnProfile {
    pub fn equilibrium(alpha: f64) -> Result<Self, AlphaOutOfRange> {
        if !(0.0..=1.0 / 3.0 + 1e-15).contains(&alpha) {
            return Err(AlphaOutOfRange(alpha));
        }
        let third = 1.0 / 3.0;
        let seat0 = SeatStrategy { bet: [[alpha, 0.0, 3.0 * alpha], [0.0, alpha + third, 1.0]] };
        let seat1 = SeatStrategy { bet: [[third, 0.0, 1.0], [0.0, third, 1.0]] };
        Ok(Self { alpha, seats: [seat0, seat1] })
    }

    /// Probability of `<BET>` for `seat` holding `card` after `history`.
    /// `None` when the seat does not act there.
    pub fn bet_probability(&self, seat: usize, card: KuhnCard, history: &[KuhnAction]) -> Option<f64> {
        let k = infoset_kind(seat, history)?;
        Some(self.seats[seat].bet[k][card as usize])
    }
}

/// Which decision of `seat` the history leads to.
pub fn infoset_kind(seat: usize, history: &[KuhnAction]) -> Option<usize> {
    use KuhnAction::*;
    match (seat, history) {
        (0, []) => Some(0),
        (0, [Pass, Bet]) => Some(1),
        (1, [Pass]) => Some(0),
        (1, [Bet]) => Some(1),
        _ => None,
    }
}

/// Exact expected net chips for seat 0 over the six equally likely deals.
pub fn expected_value(s0: &SeatStrategy, s1: &SeatStrategy) -> f64 {
    let mut total = 0.0;
    for c0 in 0..3 {
        for c1 in 0..3 {
            if c0 == c1 {
                continue;
            }
            let show = |stake: f64| if c0 > c1 { stake } else { -stake };
            let open = s0.bet[0][c0];
            let after_check = s1.bet[0][c1];
            let call0 = s0.bet[1][c0];
            let call1 = s1.bet[1][c1];
            // P P, P B P, P B B, B P, B B
            let v = (1.0 - open)
                * ((1.0 - after_check) * show(1.0)
                    + after_check * ((1.0 - call0) * -1.0 + call0 * show(2.0)))
                + open * ((1.0 - call1) * 1.0 + call1 * show(2.0));
            total += v / 6.0;
        }
    }
    total
}

/// Largest gain either seat can get by switching to a pure strategy against
/// the other seat's profile strategy; `[seat0_gain, seat1_gain]`.
pub fn best_response_gains(profile: &KuhnProfile) -> [f64; 2] {
    let [s0, s1] = profile.seats;
    let base = expected_value(&s0, &s1);
    let best0 = (0..64u8).map(|b| expected_value(&SeatStrategy::pure(b), &s1)).fold(f64::NEG_INFINITY, f64::max);
    let best1 = (0..64u8).map(|b| -expected_value(&s0, &SeatStrategy::pure(b))).fold(f64::NEG_INFINITY, f64::max);
    [best0 - base, best1 + base]
}

/// Plays a Kuhn equilibrium strategy in either seat.
#[derive(Clone, Debug)]
pub struct KuhnNePolicy {
    pub profile: KuhnProfile,
}

impl KuhnNePolicy {
    pub fn new(alpha: f64) -> Result<Self, AlphaOutOfRange> {
        Ok(Self { profile: KuhnProfile::equilibrium(alpha)? })
    }
}

impl Policy for KuhnNePolicy {
    fn name(&self) -> String {
        format!("ne:alpha={}", self.profile.alpha)
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError> {
        let StateView::Kuhn(s) = ctx.env.view() else {
            return Err(PolicyError::Unsupported(ctx.env.spec().name.clone()));
        };
        let seat = ctx.agent.0;
        let p = self
            .profile
            .bet_probability(seat, s.cards[seat], &s.history)
            .ok_or_else(|| PolicyError::Other(format!("seat {seat} does not act after {:?}", s.history)))?;
        let bet = rng.gen::<f64>() < p;
        Ok(if bet { BET } else { PASS }.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsarena_core::games::kuhn::KuhnState;

    /// Game-tree walk through the environment's own rules; independent of
    /// the closed form in `expected_value`.
    fn tree_value(s0: &SeatStrategy, s1: &SeatStrategy) -> f64 {
        fn walk(s: &KuhnState, seats: [&SeatStrategy; 2], prob: f64) -> f64 {
            if let Some(p) = s.payoffs() {
                return prob * p[0];
            }
            let seat = s.to_move();
            let k = infoset_kind(seat, &s.history).unwrap();
            let pb = seats[seat].bet[k][s.cards[seat] as usize];
            let mut total = 0.0;
            for (a, pa) in [(KuhnAction::Bet, pb), (KuhnAction::Pass, 1.0 - pb)] {
                if pa > 0.0 {
                    let mut t = s.clone();
                    t.play(a);
                    total += walk(&t, seats, prob * pa);
                }
            }
            total
        }
        let mut v = 0.0;
        for a in KuhnCard::ALL {
            for b in KuhnCard::ALL {
                if a != b {
                    v += walk(&KuhnState::new([a, b]), [s0, s1], 1.0 / 6.0);
                }
            }
        }
        v
    }

    #[test]
    fn closed_form_matches_tree_walk_for_all_pure_pairs() {
        for a in 0..64u8 {
            for b in (0..64u8).step_by(7) {
                let (x, y) = (SeatStrategy::pure(a), SeatStrategy::pure(b));
                assert!((expected_value(&x, &y) - tree_value(&x, &y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn equilibrium_value_is_minus_one_eighteenth() {
        for alpha in [0.0, 1.0 / 12.0, 1.0 / 6.0, 0.25, 1.0 / 3.0] {
            let p = KuhnProfile::equilibrium(alpha).unwrap();
            let v = tree_value(&p.seats[0], &p.seats[1]);
            assert!((v + 1.0 / 18.0).abs() < 1e-12, "alpha {alpha}: {v}");
        }
    }

    #[test]
    fn no_pure_deviation_gains_on_an_alpha_grid() {
        for i in 0..=30 {
            let alpha = i as f64 / 90.0;
            let gains = best_response_gains(&KuhnProfile::equilibrium(alpha).unwrap());
            assert!(gains[0] <= 1e-12 && gains[1] <= 1e-12, "alpha {alpha}: {gains:?}");
        }
    }

    #[test]
    fn perturbed_table_is_exploitable() {
        let mut p = KuhnProfile::equilibrium(0.0).unwrap();
        p.seats[1].bet[1][1] += 0.05;
        let gains = best_response_gains(&p);
        assert!(gains[0] > 1e-3, "{gains:?}");
    }

    #[test]
    fn alpha_bounds() {
        assert!(KuhnProfile::equilibrium(-0.01).is_err());
        assert!(KuhnProfile::equilibrium(0.34).is_err());
        let top = KuhnProfile::equilibrium(1.0 / 3.0).unwrap();
        assert_eq!(top.bet_probability(0, KuhnCard::K, &[]), Some(1.0));
        let zero = KuhnProfile::equilibrium(0.0).unwrap();
        assert_eq!(zero.bet_probability(0, KuhnCard::J, &[]), Some(0.0));
        assert!(top.seats.iter().all(SeatStrategy::is_valid));
    }
}
