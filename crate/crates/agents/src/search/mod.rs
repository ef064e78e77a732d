//! Game-tree search over the two perfect-information board games.

pub mod mcts;
pub mod minimax;

use vsarena_core::games::breakthrough::{BreakthroughState, Move, Side};
use vsarena_core::games::TicTacToeState;
use vsarena_core::StateView;

/// A two-player, alternating, perfect-information game.
pub trait TurnGame: Clone {
    type Move: Copy + Eq + std::fmt::Debug;

    fn to_move(&self) -> usize;

    /// Legal moves in the game's canonical (lexicographic token) order.
    fn moves(&self) -> Vec<Self::Move>;

    fn play(&mut self, mv: Self::Move);

    /// `None` while play continues; `Some(None)` for a draw.
    fn outcome(&self) -> Option<Option<usize>>;

    /// Depth-cutoff estimate for `player` in sevenths of a win.
    fn heuristic(&self, player: usize) -> i32;

    fn token(mv: Self::Move) -> String;

    /// Hint for search order; does not affect results.
    fn is_forcing(&self, _mv: Self::Move) -> bool {
        false
    }
}

impl TurnGame for BreakthroughState {
    type Move = Move;

    fn to_move(&self) -> usize {
        self.to_move.agent()
    }

    fn moves(&self) -> Vec<Move> {
        self.sorted_moves()
    }

    fn play(&mut self, mv: Move) {
        BreakthroughState::play(self, mv)
    }

    fn outcome(&self) -> Option<Option<usize>> {
        self.winner.map(|w| Some(w.agent()))
    }

    fn heuristic(&self, player: usize) -> i32 {
        self.eval_sevenths(Side::of_agent(player))
    }

    fn token(mv: Move) -> String {
        mv.to_string()
    }

    fn is_forcing(&self, mv: Move) -> bool {
        self.is_capture(mv)
    }
}

impl TurnGame for TicTacToeState {
    type Move = usize;

    fn to_move(&self) -> usize {
        self.to_move as usize
    }

    fn moves(&self) -> Vec<usize> {
        self.empty_cells()
    }

    fn play(&mut self, mv: usize) {
        TicTacToeState::play(self, mv).expect("search only plays legal cells")
    }

    fn outcome(&self) -> Option<Option<usize>> {
        if let Some(w) = self.winner {
            Some(Some(w as usize))
        } else if self.is_terminal() {
            Some(None)
        } else {
            None
        }
    }

    fn heuristic(&self, _player: usize) -> i32 {
        0
    }

    fn token(mv: usize) -> String {
        mv.to_string()
    }
}

/// Pulls a searchable board out of an environment view.
pub enum Board {
    Breakthrough(BreakthroughState),
    TicTacToe(TicTacToeState),
}

impl Board {
    pub fn from_view(view: StateView<'_>) -> Option<Board> {
        match view {
            StateView::Breakthrough(s) => Some(Board::Breakthrough(s.clone())),
            StateView::TicTacToe(s) => Some(Board::TicTacToe(*s)),
            _ => None,
        }
    }
}
