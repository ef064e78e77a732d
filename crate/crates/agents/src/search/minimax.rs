//! Depth-limited minimax with alpha-beta pruning.
//!
//! Scores are integers from the side to move's point of view: a win found
//! `k` plies ahead is worth `WIN - k`, so faster wins are preferred, and a
//! depth cutoff returns the game's heuristic in sevenths.

use super::{Board, TurnGame};
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError};

pub const WIN: i32 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchResult<M> {
    pub best: M,
    pub score: i32,
    pub nodes: u64,
}

/// Maps a score to the `[-1, 1]` scale: terminal outcomes are +-1 and cutoff
/// estimates keep their sevenths.
pub fn score_value(score: i32) -> f64 {
    if score.abs() > WIN / 2 {
        score.signum() as f64
    } else {
        score as f64 / 7.0
    }
}

fn terminal_score<G: TurnGame>(g: &G, ply: i32) -> Option<i32> {
    g.outcome().map(|o| match o {
        None => 0,
        Some(w) if w == g.to_move() => WIN - ply,
        Some(_) => -(WIN - ply),
    })
}

fn ordered<G: TurnGame>(g: &G) -> Vec<G::Move> {
    let mut moves = g.moves();
    // stable: forcing moves first, canonical order otherwise
    moves.sort_by_key(|&m| !g.is_forcing(m));
    moves
}

fn alphabeta<G: TurnGame>(g: &G, depth: u32, ply: i32, mut alpha: i32, beta: i32, nodes: &mut u64) -> i32 {
    *nodes += 1;
    if let Some(t) = terminal_score(g, ply) {
        return t;
    }
    if depth == 0 {
        return g.heuristic(g.to_move());
    }
    let mut best = i32::MIN + 1;
    for m in ordered(g) {
        let mut child = g.clone();
        child.play(m);
        let v = -alphabeta(&child, depth - 1, ply + 1, -beta, -alpha, nodes);
        if v > best {
            best = v;
        }
        if v > alpha {
            alpha = v;
        }
        if alpha >= beta {
            break;
        }
    }
    best
}

fn plain<G: TurnGame>(g: &G, depth: u32, ply: i32, nodes: &mut u64) -> i32 {
    *nodes += 1;
    if let Some(t) = terminal_score(g, ply) {
        return t;
    }
    if depth == 0 {
        return g.heuristic(g.to_move());
    }
    g.moves()
        .into_iter()
        .map(|m| {
            let mut child = g.clone();
            child.play(m);
            -plain(&child, depth - 1, ply + 1, nodes)
        })
        .max()
        .expect("non-terminal positions have moves")
}

/// Best move at `depth` with alpha-beta. Root moves are tried in canonical
/// order and only a strictly better score replaces the incumbent, so ties go
/// to the lowest move. `None` when there is nothing to play.
pub fn search<G: TurnGame>(g: &G, depth: u32) -> Option<SearchResult<G::Move>> {
    let depth = depth.max(1);
    let mut nodes = 1;
    let mut best: Option<(G::Move, i32)> = None;
    for m in g.moves() {
        let mut child = g.clone();
        child.play(m);
        let alpha = best.map_or(i32::MIN + 1, |(_, s)| s);
        let v = -alphabeta(&child, depth - 1, 1, i32::MIN + 1, -alpha, &mut nodes);
        if best.map_or(true, |(_, s)| v > s) {
            best = Some((m, v));
        }
    }
    best.map(|(best, score)| SearchResult { best, score, nodes })
}

/// Exhaustive minimax without pruning; the reference for `search`.
pub fn search_plain<G: TurnGame>(g: &G, depth: u32) -> Option<SearchResult<G::Move>> {
    let depth = depth.max(1);
    let mut nodes = 1;
    let mut best: Option<(G::Move, i32)> = None;
    for m in g.moves() {
        let mut child = g.clone();
        child.play(m);
        let v = -plain(&child, depth - 1, 1, &mut nodes);
        if best.map_or(true, |(_, s)| v > s) {
            best = Some((m, v));
        }
    }
    best.map(|(best, score)| SearchResult { best, score, nodes })
}

#[derive(Clone, Debug)]
pub struct MinimaxPolicy {
    pub depth: u32,
}

impl MinimaxPolicy {
    pub fn new(depth: u32) -> Self {
        Self { depth: depth.max(1) }
    }
}

impl Policy for MinimaxPolicy {
    fn name(&self) -> String {
        format!("minimax:depth={}", self.depth)
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut GameRng) -> Result<String, PolicyError> {
        let token = match Board::from_view(ctx.env.view()) {
            Some(Board::Breakthrough(s)) => search(&s, self.depth).map(|r| G1::token(r.best)),
            Some(Board::TicTacToe(s)) => search(&s, self.depth).map(|r| G2::token(r.best)),
            None => return Err(PolicyError::Unsupported(ctx.env.spec().name.clone())),
        };
        token.ok_or(PolicyError::EmptyLegalSet)
    }
}

type G1 = vsarena_core::games::BreakthroughState;
type G2 = vsarena_core::games::TicTacToeState;

#[cfg(test)]
mod tests {
    use super::*;
    use vsarena_core::games::breakthrough::{BreakthroughState, Move, Side};
    use vsarena_core::games::TicTacToeState;

    #[test]
    fn takes_the_win_in_one_at_every_depth() {
        // White pawn on b7 with an empty b8
        let s = BreakthroughState::from_squares(&["b7", "h1"], &["g8", "a8"], Side::White);
        for depth in 1..=4 {
            let r = search(&s, depth).unwrap();
            // b7a8 is the first winning move in text order
            assert_eq!(r.best, Move::parse("b7a8").unwrap(), "depth {depth}");
            assert_eq!(score_value(r.score), 1.0);
        }
    }

    #[test]
    fn alphabeta_matches_plain_minimax_on_tictactoe() {
        // every reachable position, full depth
        fn walk(s: TicTacToeState, seen: &mut std::collections::HashSet<TicTacToeState>) {
            if !seen.insert(s) || s.is_terminal() {
                return;
            }
            let a = search(&s, 9).unwrap();
            let b = search_plain(&s, 9).unwrap();
            assert_eq!((a.best, a.score), (b.best, b.score), "{s:?}");
            for c in s.empty_cells() {
                let mut t = s;
                t.play(c).unwrap();
                walk(t, seen);
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(TicTacToeState::default(), &mut seen);
        assert_eq!(seen.len(), 5478);
    }

    #[test]
    fn perfect_tictactoe_is_a_draw() {
        let r = search_plain(&TicTacToeState::default(), 9).unwrap();
        assert_eq!(r.score, 0);
    }

    #[test]
    fn initial_breakthrough_eval_is_zero() {
        let s = BreakthroughState::initial();
        assert_eq!(s.heuristic(0), 0);
        assert_eq!(s.heuristic(1), 0);
    }
}
