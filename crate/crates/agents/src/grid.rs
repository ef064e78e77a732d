//! Scripted heuristics for the three grid dilemmas.

use std::fmt;
use std::str::FromStr;
use thiserror::Error;
use vsarena_core::games::grid::{GridEntities, GridState, Move5, Pos};
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError, StateView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScriptKind {
    OwnColorCoin,
    ClosestCoin,
    TowardMonster,
    CampCenter,
    CampCorner,
    ClosestApple,
    ClosestCommonBlock,
    OwnColorBlock,
    BiasedRed,
    BiasedBlue,
}

#[derive(Debug, Error, PartialEq)]
#[error("unknown scripted kind {0:?}")]
pub struct UnknownKind(pub String);

impl ScriptKind {
    pub const ALL: [ScriptKind; 10] = [
        ScriptKind::OwnColorCoin,
        ScriptKind::ClosestCoin,
        ScriptKind::TowardMonster,
        ScriptKind::CampCenter,
        ScriptKind::CampCorner,
        ScriptKind::ClosestApple,
        ScriptKind::ClosestCommonBlock,
        ScriptKind::OwnColorBlock,
        ScriptKind::BiasedRed,
        ScriptKind::BiasedBlue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScriptKind::OwnColorCoin => "own-color-coin",
            ScriptKind::ClosestCoin => "closest-coin",
            ScriptKind::TowardMonster => "toward-monster",
            ScriptKind::CampCenter => "camp-center",
            ScriptKind::CampCorner => "camp-corner",
            ScriptKind::ClosestApple => "closest-apple",
            ScriptKind::ClosestCommonBlock => "closest-common-block",
            ScriptKind::OwnColorBlock => "own-color-block",
            ScriptKind::BiasedRed => "biased-red",
            ScriptKind::BiasedBlue => "biased-blue",
        }
    }

    /// Camping kinds hold their cell once they reach it.
    pub fn camps(self) -> bool {
        matches!(self, ScriptKind::CampCenter | ScriptKind::CampCorner)
    }

    /// Target cell for `agent` in `s`, or `None` if the kind does not fit the
    /// game.
    pub fn target(self, s: &GridState, agent: usize) -> Option<Pos> {
        let me = s.players[agent];
        let nearest = |cands: &[Pos]| {
            // first candidate wins ties
            cands.iter().copied().min_by_key(|p| me.manhattan(*p))
        };
        match (self, s.entities) {
            (ScriptKind::OwnColorCoin, GridEntities::Coin { red, blue }) => Some([red, blue][agent]),
            (ScriptKind::ClosestCoin, GridEntities::Coin { red, blue }) => {
                let own = [red, blue][agent];
                nearest(&[own, [red, blue][1 - agent]])
            }
            (ScriptKind::TowardMonster, GridEntities::Hunt { monster, .. }) => Some(monster),
            (ScriptKind::CampCenter, GridEntities::Hunt { .. }) => Some(Pos::new(s.size / 2, s.size / 2)),
            (ScriptKind::CampCorner, GridEntities::Hunt { .. }) => Some(Pos::new(0, 0)),
            (ScriptKind::ClosestApple, GridEntities::Hunt { apples, .. }) => nearest(&apples),
            (ScriptKind::ClosestCommonBlock, GridEntities::Battle { red, blue }) => {
                let cost = |b: Pos| s.players[0].manhattan(b) + s.players[1].manhattan(b);
                Some(if cost(blue) < cost(red) { blue } else { red })
            }
            (ScriptKind::OwnColorBlock, GridEntities::Battle { red, blue }) => Some([red, blue][agent]),
            (ScriptKind::BiasedRed, GridEntities::Battle { red, .. }) => Some(red),
            (ScriptKind::BiasedBlue, GridEntities::Battle { blue, .. }) => Some(blue),
            _ => None,
        }
    }
}

impl fmt::Display for ScriptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScriptKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScriptKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| UnknownKind(s.to_string()))
    }
}

/// Greedy Manhattan step, horizontal axis first; `Stay` on the target.
pub fn step_toward(from: Pos, to: Pos) -> Move5 {
    if to.x < from.x {
        Move5::Left
    } else if to.x > from.x {
        Move5::Right
    } else if to.y < from.y {
        Move5::Up
    } else if to.y > from.y {
        Move5::Down
    } else {
        Move5::Stay
    }
}

/// Shortest-path step that never enters `avoid`; ties follow the order of
/// `step_toward` (horizontal first).
pub fn step_avoiding(s: &GridState, from: Pos, to: Pos, avoid: Pos) -> Move5 {
    if from == to {
        return Move5::Stay;
    }
    // breadth-first distances to `to` with `avoid` blocked
    let n = s.size;
    let idx = |p: Pos| (p.y * n + p.x) as usize;
    let mut dist = vec![i32::MAX; (n * n) as usize];
    dist[idx(to)] = 0;
    let mut queue = std::collections::VecDeque::from([to]);
    while let Some(p) = queue.pop_front() {
        for mv in [Move5::Left, Move5::Right, Move5::Up, Move5::Down] {
            let q = s.resolve(p, mv);
            if q != p && q != avoid && dist[idx(q)] == i32::MAX {
                dist[idx(q)] = dist[idx(p)] + 1;
                queue.push_back(q);
            }
        }
    }
    [Move5::Left, Move5::Right, Move5::Up, Move5::Down]
        .into_iter()
        .map(|mv| (mv, s.resolve(from, mv)))
        .filter(|&(_, q)| q != from && q != avoid)
        .min_by_key(|&(_, q)| dist[idx(q)])
        .filter(|&(_, q)| dist[idx(q)] < i32::MAX)
        .map_or(Move5::Stay, |(mv, _)| mv)
}

pub fn scripted_move(kind: ScriptKind, s: &GridState, agent: usize) -> Option<Move5> {
    let target = kind.target(s, agent)?;
    let from = s.players[agent];
    match (kind, s.entities) {
        // the own-colour collector never picks up the other colour on the way
        (ScriptKind::OwnColorCoin, GridEntities::Coin { red, blue }) => {
            Some(step_avoiding(s, from, target, [red, blue][1 - agent]))
        }
        _ => Some(step_toward(from, target)),
    }
}

#[derive(Clone, Debug)]
pub struct ScriptedGridPolicy {
    pub kind: ScriptKind,
}

impl ScriptedGridPolicy {
    pub fn new(kind: ScriptKind) -> Self {
        Self { kind }
    }
}

impl Policy for ScriptedGridPolicy {
    fn name(&self) -> String {
        format!("scripted:{}", self.kind)
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut GameRng) -> Result<String, PolicyError> {
        let unsupported = || PolicyError::Unsupported(format!("{} in {}", self.kind, ctx.env.spec().name));
        let StateView::Grid(s) = ctx.env.view() else {
            return Err(unsupported());
        };
        let mv = scripted_move(self.kind, s, ctx.agent.0).ok_or_else(unsupported)?;
        Ok(mv.token().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;
    use vsarena_core::games::grid::DilemmaKind;

    fn state(kind: DilemmaKind, players: [Pos; 2], entities: GridEntities) -> GridState {
        GridState { kind, size: 5, players, entities, counters: BTreeMap::new(), step: 0 }
    }

    #[test]
    fn own_color_coin_ignores_the_nearer_cross_coin() {
        let s = state(
            DilemmaKind::Coin,
            [Pos::new(1, 1), Pos::new(4, 4)],
            GridEntities::Coin { red: Pos::new(1, 3), blue: Pos::new(1, 0) },
        );
        assert_eq!(scripted_move(ScriptKind::OwnColorCoin, &s, 0), Some(Move5::Down));
        assert_eq!(scripted_move(ScriptKind::ClosestCoin, &s, 0), Some(Move5::Up));
    }

    #[test]
    fn own_color_coin_walks_around_the_cross_coin() {
        let mut s = state(
            DilemmaKind::Coin,
            [Pos::new(1, 0), Pos::new(4, 4)],
            GridEntities::Coin { red: Pos::new(1, 3), blue: Pos::new(1, 1) },
        );
        let mut steps = 0;
        while s.players[0] != Pos::new(1, 3) {
            let mv = scripted_move(ScriptKind::OwnColorCoin, &s, 0).unwrap();
            s.players[0] = s.resolve(s.players[0], mv);
            assert_ne!(s.players[0], Pos::new(1, 1));
            steps += 1;
            assert!(steps <= 5);
        }
        assert_eq!(steps, 5);
    }

    #[test]
    fn biased_red_always_heads_for_red() {
        let s = state(
            DilemmaKind::Battle,
            [Pos::new(2, 2), Pos::new(0, 0)],
            GridEntities::Battle { red: Pos::new(4, 2), blue: Pos::new(2, 1) },
        );
        for agent in 0..2 {
            let to = s.resolve(s.players[agent], scripted_move(ScriptKind::BiasedRed, &s, agent).unwrap());
            assert!(to.manhattan(Pos::new(4, 2)) < s.players[agent].manhattan(Pos::new(4, 2)));
        }
    }

    #[test]
    fn camp_center_stays_on_the_center() {
        let s = state(
            DilemmaKind::Hunt,
            [Pos::new(2, 2), Pos::new(0, 4)],
            GridEntities::Hunt { apples: [Pos::new(0, 0), Pos::new(4, 4)], monster: Pos::new(3, 3) },
        );
        assert_eq!(scripted_move(ScriptKind::CampCenter, &s, 0), Some(Move5::Stay));
        assert_eq!(scripted_move(ScriptKind::CampCenter, &s, 1), Some(Move5::Right));
    }

    #[test]
    fn common_block_tie_goes_to_red() {
        let s = state(
            DilemmaKind::Battle,
            [Pos::new(0, 0), Pos::new(4, 4)],
            GridEntities::Battle { red: Pos::new(4, 0), blue: Pos::new(0, 4) },
        );
        assert_eq!(ScriptKind::ClosestCommonBlock.target(&s, 1), Some(Pos::new(4, 0)));
    }

    #[test]
    fn wrong_game_is_rejected() {
        let s = state(
            DilemmaKind::Coin,
            [Pos::new(0, 0), Pos::new(1, 1)],
            GridEntities::Coin { red: Pos::new(2, 2), blue: Pos::new(3, 3) },
        );
        assert_eq!(scripted_move(ScriptKind::TowardMonster, &s, 0), None);
        assert!("nope".parse::<ScriptKind>().is_err());
        for k in ScriptKind::ALL {
            assert_eq!(k.name().parse::<ScriptKind>().unwrap(), k);
        }
    }

    fn arb_pos() -> impl Strategy<Value = Pos> {
        (0..5i32, 0..5i32).prop_map(|(x, y)| Pos::new(x, y))
    }

    proptest! {
        #[test]
        fn every_step_closes_the_distance(
            players in [arb_pos(), arb_pos()],
            e in [arb_pos(), arb_pos(), arb_pos()],
            agent in 0..2usize,
            k in 0..10usize,
        ) {
            let kind = ScriptKind::ALL[k];
            let (dk, entities) = match kind {
                ScriptKind::OwnColorCoin | ScriptKind::ClosestCoin =>
                    (DilemmaKind::Coin, GridEntities::Coin { red: e[0], blue: e[1] }),
                ScriptKind::TowardMonster | ScriptKind::CampCenter | ScriptKind::CampCorner | ScriptKind::ClosestApple =>
                    (DilemmaKind::Hunt, GridEntities::Hunt { apples: [e[0], e[1]], monster: e[2] }),
                _ => (DilemmaKind::Battle, GridEntities::Battle { red: e[0], blue: e[1] }),
            };
            let s = state(dk, players, entities);
            let target = kind.target(&s, agent).unwrap();
            let me = s.players[agent];
            let mv = scripted_move(kind, &s, agent).unwrap();
            if me == target {
                prop_assert_eq!(mv, Move5::Stay);
            } else if kind == ScriptKind::OwnColorCoin {
                let cross = e[1 - agent];
                if cross != target {
                    prop_assert_ne!(s.resolve(me, mv), cross);
                    prop_assert_ne!(mv, Move5::Stay);
                }
            } else {
                prop_assert_eq!(s.resolve(me, mv).manhattan(target), me.manhattan(target) - 1);
            }
        }
    }
}
