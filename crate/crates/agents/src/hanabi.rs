//! Rule-based Hanabi player that uses only what its seat can observe.

use vsarena_core::games::hanabi::{Card, HanabiMove, HanabiState, HandCard, Knowledge};
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError, StateView};

fn candidates<'a>(s: &'a HanabiState, slot: &'a HandCard) -> impl Iterator<Item = Card> + 'a {
    let cfg = &s.config;
    (0..cfg.colors)
        .flat_map(move |color| (1..=cfg.ranks).map(move |rank| Card { color, rank }))
        .filter(move |c| slot.knowledge.admits(*c))
}

/// Every card the slot could still be is playable now.
pub fn surely_playable(s: &HanabiState, slot: &HandCard) -> bool {
    let mut any = false;
    for c in candidates(s, slot) {
        if !s.is_playable(c) {
            return false;
        }
        any = true;
    }
    any
}

/// Every card the slot could still be is already on the fireworks.
pub fn surely_dead(s: &HanabiState, slot: &HandCard) -> bool {
    candidates(s, slot).all(|c| s.fireworks[c.color as usize] >= c.rank)
}

/// Priority: play a known-playable card; hint a playable partner card;
/// discard a known-dead or unhinted card; hint anything; discard the oldest.
pub fn heuristic_move(s: &HanabiState, me: usize) -> Option<HanabiMove> {
    let legal = s.legal_moves(me);
    let ok = |m: HanabiMove| legal.contains(&m).then_some(m);
    let hand = &s.hands[me];
    let partner = &s.hands[1 - me];

    if let Some(i) = hand.iter().position(|h| surely_playable(s, h)) {
        return ok(HanabiMove::Play(i));
    }
    if s.info_tokens > 0 {
        for h in partner {
            if s.is_playable(h.card) && !surely_playable(s, h) {
                let hint = if h.knowledge.known_rank().is_none() {
                    HanabiMove::RevealRank(h.card.rank)
                } else {
                    HanabiMove::RevealColor(h.card.color)
                };
                if let Some(m) = ok(hint) {
                    return Some(m);
                }
            }
        }
    }
    let full = s.config.info_tokens;
    if s.info_tokens < full {
        if let Some(i) = hand.iter().position(|h| surely_dead(s, h)) {
            if let Some(m) = ok(HanabiMove::Discard(i)) {
                return Some(m);
            }
        }
        let unhinted = Knowledge::full(&s.config);
        if let Some(i) = hand.iter().position(|h| h.knowledge == unhinted) {
            if let Some(m) = ok(HanabiMove::Discard(i)) {
                return Some(m);
            }
        }
    }
    if s.info_tokens > 0 {
        if let Some(m) = legal.iter().copied().find(HanabiMove::is_reveal) {
            return Some(m);
        }
    }
    ok(HanabiMove::Discard(0)).or_else(|| legal.first().copied())
}

#[derive(Clone, Debug, Default)]
pub struct HanabiHeuristic;

impl Policy for HanabiHeuristic {
    fn name(&self) -> String {
        "heuristic".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut GameRng) -> Result<String, PolicyError> {
        let StateView::Hanabi(s) = ctx.env.view() else {
            return Err(PolicyError::Unsupported(ctx.env.spec().name.clone()));
        };
        if ctx.legal.len() == 1 {
            return Ok(ctx.legal[0].clone());
        }
        heuristic_move(s, ctx.agent.0).map(|m| m.token()).ok_or(PolicyError::EmptyLegalSet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsarena_core::games::HanabiConfig;

    #[test]
    fn self_play_beats_random_play_on_average() {
        let mut total = 0;
        for seed in 0..20 {
            let mut s = HanabiState::deal(HanabiConfig::standard(), seed);
            while !s.terminal {
                let m = heuristic_move(&s, s.current_player).unwrap();
                s.apply(m).unwrap();
            }
            total += s.score();
        }
        assert!(total as f64 / 20.0 > 5.0, "mean firework {}", total as f64 / 20.0);
    }

    #[test]
    fn opening_hint_targets_a_playable_one() {
        let s = HanabiState::deal(HanabiConfig::standard(), 3);
        let me = s.current_player;
        let has_one = s.hands[1 - me].iter().any(|h| h.card.rank == 1);
        let m = heuristic_move(&s, me).unwrap();
        if has_one {
            assert_eq!(m, HanabiMove::RevealRank(1));
        }
    }
}
