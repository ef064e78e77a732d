//! 8x8 Breakthrough on bitboards.
//!
//! Square index is `row * 8 + col` with row 0 = rank 1 and col 0 = file a.
//! Agent 0 plays Black and moves first; agent 1 plays White.

use crate::events::{EventKind, GameEvent};
use crate::pomg::{
    check_joint, with_noop, AgentId, EnvError, Environment, GameSpec, InteractionClass,
    JointAction, Observation, StateView, StepResult, NOOP,
};
use crate::render;
use serde::{Deserialize, Serialize};
use std::fmt;

const FILE_A: u64 = 0x0101_0101_0101_0101;
const FILE_H: u64 = FILE_A << 7;
const RANK_1: u64 = 0xFF;
const RANK_8: u64 = 0xFF << 56;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Black,
    White,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Black => Side::White,
            Side::White => Side::Black,
        }
    }

    pub fn agent(self) -> usize {
        match self {
            Side::Black => 0,
            Side::White => 1,
        }
    }

    pub fn of_agent(agent: usize) -> Side {
        if agent == 0 {
            Side::Black
        } else {
            Side::White
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Black => "Black",
            Side::White => "White",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub from: u8,
    pub to: u8,
}

impl Move {
    /// Sort key matching the lexicographic order of the move text.
    pub fn text_key(&self) -> (u8, u8, u8, u8) {
        (self.from % 8, self.from / 8, self.to % 8, self.to / 8)
    }

    pub fn parse(text: &str) -> Option<Move> {
        let b = text.as_bytes();
        if b.len() != 4 {
            return None;
        }
        let sq = |file: u8, rank: u8| -> Option<u8> {
            ((b'a'..=b'h').contains(&file) && (b'1'..=b'8').contains(&rank))
                .then(|| (rank - b'1') * 8 + (file - b'a'))
        };
        Some(Move { from: sq(b[0], b[1])?, to: sq(b[2], b[3])? })
    }
}

pub fn square_name(sq: u8) -> String {
    format!("{}{}", (b'a' + sq % 8) as char, sq / 8 + 1)
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", square_name(self.from), square_name(self.to))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BreakthroughState {
    pub white: u64,
    pub black: u64,
    pub to_move: Side,
    pub winner: Option<Side>,
    pub plies: u32,
}

impl Default for BreakthroughState {
    fn default() -> Self {
        Self::initial()
    }
}

impl BreakthroughState {
    pub fn initial() -> Self {
        Self { white: 0xFFFF, black: 0xFFFF << 48, to_move: Side::Black, winner: None, plies: 0 }
    }

    /// Builds a position from square names; used by tests and tools.
    pub fn from_squares(white: &[&str], black: &[&str], to_move: Side) -> Self {
        let bits = |names: &[&str]| {
            names.iter().fold(0u64, |acc, n| {
                let m = Move::parse(&format!("{n}a1")).expect("valid square");
                acc | 1u64 << m.from
            })
        };
        Self { white: bits(white), black: bits(black), to_move, winner: None, plies: 0 }
    }

    pub fn pieces(&self, side: Side) -> u64 {
        match side {
            Side::White => self.white,
            Side::Black => self.black,
        }
    }

    pub fn piece_at(&self, sq: u8) -> Option<Side> {
        let bit = 1u64 << sq;
        if self.white & bit != 0 {
            Some(Side::White)
        } else if self.black & bit != 0 {
            Some(Side::Black)
        } else {
            None
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.winner.is_some()
    }

    fn targets(&self, side: Side) -> (u64, u64, u64) {
        let own = self.pieces(side);
        let empty = !(self.white | self.black);
        let not_own = !own;
        match side {
            Side::White => (
                (own << 8) & empty,
                ((own & !FILE_A) << 7) & not_own,
                ((own & !FILE_H) << 9) & not_own,
            ),
            Side::Black => (
                (own >> 8) & empty,
                ((own & !FILE_A) >> 9) & not_own,
                ((own & !FILE_H) >> 7) & not_own,
            ),
        }
    }

    pub fn has_moves(&self, side: Side) -> bool {
        let (a, b, c) = self.targets(side);
        a | b | c != 0
    }

    /// Legal moves for the side to move, in generation order (not sorted).
    pub fn moves(&self) -> Vec<Move> {
        if self.is_terminal() {
            return Vec::new();
        }
        let side = self.to_move;
        let (straight, left, right) = self.targets(side);
        let (ds, dl, dr): (i8, i8, i8) = match side {
            Side::White => (8, 7, 9),
            Side::Black => (-8, -9, -7),
        };
        let mut out = Vec::with_capacity(48);
        for (mut bits, delta) in [(straight, ds), (left, dl), (right, dr)] {
            while bits != 0 {
                let to = bits.trailing_zeros() as u8;
                bits &= bits - 1;
                out.push(Move { from: (to as i8 - delta) as u8, to });
            }
        }
        out
    }

    /// Legal moves in lexicographic text order.
    pub fn sorted_moves(&self) -> Vec<Move> {
        let mut m = self.moves();
        m.sort_by_key(Move::text_key);
        m
    }

    pub fn is_capture(&self, mv: Move) -> bool {
        self.pieces(self.to_move.opponent()) & (1u64 << mv.to) != 0
    }

    /// Plays a move assumed legal and resolves the win conditions.
    pub fn play(&mut self, mv: Move) {
        let side = self.to_move;
        let from = 1u64 << mv.from;
        let to = 1u64 << mv.to;
        match side {
            Side::White => {
                self.white = (self.white & !from) | to;
                self.black &= !to;
            }
            Side::Black => {
                self.black = (self.black & !from) | to;
                self.white &= !to;
            }
        }
        let opp = side.opponent();
        let goal = match side {
            Side::White => RANK_8,
            Side::Black => RANK_1,
        };
        if to & goal != 0 || self.pieces(opp) == 0 || !self.has_moves(opp) {
            self.winner = Some(side);
        }
        self.to_move = opp;
        self.plies += 1;
    }

    pub fn is_legal(&self, mv: Move) -> bool {
        self.moves().contains(&mv)
    }

    /// Rows the side's most advanced piece has travelled from its own back row.
    pub fn advancement(&self, side: Side) -> i32 {
        let p = self.pieces(side);
        if p == 0 {
            return 0;
        }
        match side {
            Side::White => (63 - p.leading_zeros() as i32) / 8,
            Side::Black => 7 - (p.trailing_zeros() as i32) / 8,
        }
    }

    /// Advancement difference in sevenths; terminal positions score +-7.
    pub fn eval_sevenths(&self, perspective: Side) -> i32 {
        match self.winner {
            Some(w) if w == perspective => 7,
            Some(_) => -7,
            None => self.advancement(perspective) - self.advancement(perspective.opponent()),
        }
    }

    /// The depth-cutoff evaluation in [-1, 1].
    pub fn advancement_eval(&self, perspective: Side) -> f64 {
        self.eval_sevenths(perspective) as f64 / 7.0
    }

    pub fn piece_count(&self, side: Side) -> u32 {
        self.pieces(side).count_ones()
    }

    pub fn squares(&self, side: Side) -> Vec<u8> {
        let mut bits = self.pieces(side);
        let mut out = Vec::new();
        while bits != 0 {
            out.push(bits.trailing_zeros() as u8);
            bits &= bits - 1;
        }
        out.sort_by_key(|&s| (s % 8, s / 8));
        out
    }
}

/// Every geometrically possible move token for either side.
fn vocabulary() -> Vec<String> {
    let mut v = Vec::new();
    for from in 0u8..64 {
        let (r, c) = ((from / 8) as i8, (from % 8) as i8);
        for dr in [-1i8, 1] {
            for dc in [-1i8, 0, 1] {
                let (nr, nc) = (r + dr, c + dc);
                if (0..8).contains(&nr) && (0..8).contains(&nc) {
                    v.push(Move { from, to: (nr * 8 + nc) as u8 }.to_string());
                }
            }
        }
    }
    v.sort();
    v
}

#[derive(Clone, Debug)]
pub struct BreakthroughEnv {
    spec: GameSpec,
    seed: u64,
    state: BreakthroughState,
}

impl BreakthroughEnv {
    pub fn new(seed: u64) -> Self {
        let spec = GameSpec::new(
            "breakthrough",
            InteractionClass::Competitive,
            None,
            with_noop(vocabulary()),
            1,
            true,
        );
        Self { spec, seed, state: BreakthroughState::initial() }
    }

    pub fn from_state(state: BreakthroughState) -> Self {
        let mut env = Self::new(0);
        env.state = state;
        env
    }

    pub fn state(&self) -> &BreakthroughState {
        &self.state
    }
}

impl Environment for BreakthroughEnv {
    fn spec(&self) -> &GameSpec {
        &self.spec
    }

    fn reset(&mut self, seed: u64) {
        self.seed = seed;
        self.state = BreakthroughState::initial();
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError> {
        check_joint(self, joint)?;
        let mover = self.state.to_move;
        let mv = Move::parse(&joint.0[mover.agent()]).expect("legal token parses");
        let mut events = vec![GameEvent::new(EventKind::PieceMoved, vec![mover.agent()]).with_detail(mv.to_string())];
        if self.state.is_capture(mv) {
            events.push(GameEvent::new(EventKind::Capture, vec![mover.agent()]).with_detail(square_name(mv.to)));
        }
        self.state.play(mv);
        let mut rewards = vec![0.0, 0.0];
        if let Some(w) = self.state.winner {
            rewards[w.agent()] = 1.0;
            rewards[w.opponent().agent()] = -1.0;
            events.push(GameEvent::new(EventKind::Win, vec![w.agent()]));
        }
        Ok(StepResult { rewards, terminal: self.state.is_terminal(), events })
    }

    fn legal_actions(&self, agent: AgentId) -> Vec<String> {
        if self.state.is_terminal() {
            return Vec::new();
        }
        if agent.0 != self.state.to_move.agent() {
            return vec![NOOP.to_string()];
        }
        self.state.sorted_moves().iter().map(Move::to_string).collect()
    }

    fn is_terminal(&self) -> bool {
        self.state.is_terminal()
    }

    fn step_index(&self) -> usize {
        self.state.plies as usize
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn observe_text(&self, agent: AgentId) -> String {
        render::breakthrough::text(&self.state, agent.0)
    }

    fn observe(&self, agent: AgentId) -> Observation {
        Observation {
            frames: vec![render::breakthrough::image(&self.state)],
            text: self.observe_text(agent),
        }
    }

    fn view(&self) -> StateView<'_> {
        StateView::Breakthrough(&self.state)
    }

    fn state_json(&self) -> serde_json::Value {
        serde_json::to_value(self.state).expect("state serializes")
    }

    fn box_clone(&self) -> Box<dyn Environment> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straightforward array-based move generator used as an oracle.
    fn naive_moves(s: &BreakthroughState) -> Vec<String> {
        let side = s.to_move;
        let dir: i32 = if side == Side::White { 1 } else { -1 };
        let mut out = Vec::new();
        for sq in 0..64u8 {
            if s.piece_at(sq) != Some(side) {
                continue;
            }
            let (r, c) = ((sq / 8) as i32, (sq % 8) as i32);
            let nr = r + dir;
            if !(0..8).contains(&nr) {
                continue;
            }
            for dc in [-1, 0, 1] {
                let nc = c + dc;
                if !(0..8).contains(&nc) {
                    continue;
                }
                let to = (nr * 8 + nc) as u8;
                let occ = s.piece_at(to);
                let ok = if dc == 0 { occ.is_none() } else { occ != Some(side) };
                if ok {
                    out.push(Move { from: sq, to }.to_string());
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn start_position_has_22_moves_for_black() {
        let s = BreakthroughState::initial();
        assert_eq!(s.to_move, Side::Black);
        assert_eq!(s.moves().len(), 22);
        assert_eq!(naive_moves(&s).len(), 22);
    }

    #[test]
    fn sorted_moves_follow_text_order() {
        let s = BreakthroughState::initial();
        let texts: Vec<String> = s.sorted_moves().iter().map(Move::to_string).collect();
        let mut sorted = texts.clone();
        sorted.sort();
        assert_eq!(texts, sorted);
        assert_eq!(texts[0], "a7a6");
    }

    #[test]
    fn white_advances_one_row() {
        let mut s = BreakthroughState::initial();
        s.to_move = Side::White;
        let mv = Move::parse("a2a3").unwrap();
        assert!(s.is_legal(mv));
        s.play(mv);
        assert_eq!(s.piece_at(Move::parse("a3a1").unwrap().from), Some(Side::White));
        assert_eq!(s.piece_at(mv.from), None);
    }

    #[test]
    fn straight_into_occupied_is_illegal_but_diagonal_captures() {
        let mut s = BreakthroughState::from_squares(&["d4"], &["d5", "e5"], Side::White);
        assert!(!s.is_legal(Move::parse("d4d5").unwrap()));
        let cap = Move::parse("d4e5").unwrap();
        assert!(s.is_legal(cap) && s.is_capture(cap));
        s.play(cap);
        assert_eq!(s.piece_count(Side::Black), 1);
    }

    #[test]
    fn reaching_back_row_wins() {
        let mut s = BreakthroughState::from_squares(&["c7"], &["a8", "h5"], Side::White);
        s.play(Move::parse("c7c8").unwrap());
        assert_eq!(s.winner, Some(Side::White));
        assert_eq!(s.eval_sevenths(Side::White), 7);
    }

    #[test]
    fn capturing_the_last_piece_wins() {
        let mut s = BreakthroughState::from_squares(&["d4", "a2"], &["e5"], Side::White);
        s.play(Move::parse("d4e5").unwrap());
        assert_eq!(s.winner, Some(Side::White));
    }

    #[test]
    fn side_without_moves_loses() {
        // A side with no pieces has no moves; any move by the other side ends the game.
        let mut t = BreakthroughState::from_squares(&["a4", "h2"], &[], Side::White);
        assert!(!t.has_moves(Side::Black));
        t.play(Move::parse("h2h3").unwrap());
        assert_eq!(t.winner, Some(Side::White));
    }

    #[test]
    fn eval_of_start_is_zero_and_hand_computed_position() {
        let s = BreakthroughState::initial();
        assert_eq!(s.advancement_eval(Side::White), 0.0);
        // White deepest on row 6 (5 rows from row 1), Black deepest on row 5 (3 rows from row 8).
        let p = BreakthroughState::from_squares(&["c6", "a2"], &["f5", "h8"], Side::White);
        assert_eq!(p.advancement(Side::White), 5);
        assert_eq!(p.advancement(Side::Black), 3);
        assert_eq!(p.advancement_eval(Side::White), 2.0 / 7.0);
        assert_eq!(p.advancement_eval(Side::Black), -2.0 / 7.0);
    }

    #[test]
    fn move_grammar() {
        assert!(Move::parse("a2a3").is_some());
        for bad in ["a9a3", "i2i3", "a2a", "A2A3", "a2a34"] {
            assert!(Move::parse(bad).is_none(), "{bad}");
        }
        assert_eq!(vocabulary().len(), 2 * (8 * 7 + 14 * 7));
    }

    use proptest::prelude::*;
    proptest! {
        #[test]
        fn bitboard_generator_matches_naive(choices in proptest::collection::vec(0usize..64, 0..60)) {
            let mut s = BreakthroughState::initial();
            for c in choices {
                if s.is_terminal() { break; }
                let mut gen: Vec<String> = s.moves().iter().map(Move::to_string).collect();
                gen.sort();
                prop_assert_eq!(&gen, &naive_moves(&s));
                let before_opp = s.piece_count(s.to_move.opponent());
                let mover = s.to_move;
                let mv = s.sorted_moves()[c % gen.len()];
                let cap = s.is_capture(mv);
                let (fr, tr) = (mv.from / 8, mv.to / 8);
                let forward = if mover == Side::White { tr == fr + 1 } else { tr + 1 == fr };
                prop_assert!(forward);
                s.play(mv);
                let after = s.piece_count(mover.opponent());
                prop_assert_eq!(after, if cap { before_opp - 1 } else { before_opp });
            }
        }
    }
}
