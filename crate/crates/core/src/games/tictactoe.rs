use crate::events::{EventKind, GameEvent};
use crate::pomg::{
    check_joint, with_noop, AgentId, EnvError, Environment, GameSpec, InteractionClass,
    JointAction, Observation, StateView, StepResult, NOOP,
};
use crate::render;
use serde::{Deserialize, Serialize};

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

/// Agent 0 plays X and moves first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TicTacToeState {
    pub cells: [Option<u8>; 9],
    pub to_move: u8,
    pub winner: Option<u8>,
    pub moves: u8,
}

impl TicTacToeState {
    pub fn is_terminal(&self) -> bool {
        self.winner.is_some() || self.moves == 9
    }

    pub fn empty_cells(&self) -> Vec<usize> {
        if self.is_terminal() {
            return Vec::new();
        }
        (0..9).filter(|&i| self.cells[i].is_none()).collect()
    }

    pub fn play(&mut self, cell: usize) -> Result<(), EnvError> {
        if self.is_terminal() {
            return Err(EnvError::StepAfterTerminal);
        }
        if cell >= 9 || self.cells[cell].is_some() {
            return Err(EnvError::IllegalAction {
                agent: self.to_move as usize,
                token: cell.to_string(),
                legal: self.empty_cells().iter().map(|c| c.to_string()).collect(),
            });
        }
        let p = self.to_move;
        self.cells[cell] = Some(p);
        self.moves += 1;
        if LINES.iter().any(|l| l.iter().all(|&i| self.cells[i] == Some(p))) {
            self.winner = Some(p);
        }
        self.to_move = 1 - p;
        Ok(())
    }

    pub fn mark(player: u8) -> char {
        if player == 0 {
            'X'
        } else {
            'O'
        }
    }
}

#[derive(Clone, Debug)]
pub struct TicTacToeEnv {
    spec: GameSpec,
    seed: u64,
    state: TicTacToeState,
}

impl TicTacToeEnv {
    pub fn new(seed: u64) -> Self {
        let vocab = with_noop((0..9).map(|c| c.to_string()).collect());
        let spec = GameSpec::new("tictactoe", InteractionClass::Competitive, None, vocab, 1, true);
        Self { spec, seed, state: TicTacToeState::default() }
    }

    pub fn from_state(state: TicTacToeState) -> Self {
        let mut env = Self::new(0);
        env.state = state;
        env
    }
}

impl Environment for TicTacToeEnv {
    fn spec(&self) -> &GameSpec {
        &self.spec
    }

    fn reset(&mut self, seed: u64) {
        self.seed = seed;
        self.state = TicTacToeState::default();
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError> {
        check_joint(self, joint)?;
        let p = self.state.to_move as usize;
        let cell: usize = joint.0[p].parse().expect("legal token parses");
        self.state.play(cell)?;
        let mut events = vec![GameEvent::new(EventKind::MarkPlaced, vec![p]).with_detail(cell.to_string())];
        let mut rewards = vec![0.0, 0.0];
        if let Some(w) = self.state.winner {
            rewards[w as usize] = 1.0;
            rewards[1 - w as usize] = -1.0;
            events.push(GameEvent::new(EventKind::Win, vec![w as usize]));
        } else if self.state.is_terminal() {
            events.push(GameEvent::new(EventKind::Draw, vec![0, 1]));
        }
        Ok(StepResult { rewards, terminal: self.state.is_terminal(), events })
    }

    fn legal_actions(&self, agent: AgentId) -> Vec<String> {
        if self.state.is_terminal() {
            Vec::new()
        } else if agent.0 == self.state.to_move as usize {
            self.state.empty_cells().iter().map(|c| c.to_string()).collect()
        } else {
            vec![NOOP.to_string()]
        }
    }

    fn is_terminal(&self) -> bool {
        self.state.is_terminal()
    }

    fn step_index(&self) -> usize {
        self.state.moves as usize
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn observe_text(&self, agent: AgentId) -> String {
        render::tictactoe::text(&self.state, agent.0)
    }

    fn observe(&self, agent: AgentId) -> Observation {
        Observation {
            frames: vec![render::tictactoe::image(&self.state)],
            text: self.observe_text(agent),
        }
    }

    fn view(&self) -> StateView<'_> {
        StateView::TicTacToe(&self.state)
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

    fn run(cells: &[usize]) -> TicTacToeState {
        let mut s = TicTacToeState::default();
        for &c in cells {
            s.play(c).unwrap();
        }
        s
    }

    #[test]
    fn row_completion_wins() {
        let s = run(&[0, 3, 1, 4, 2]);
        assert_eq!(s.winner, Some(0));
        let mut env = TicTacToeEnv::new(0);
        for (i, c) in [0usize, 3, 1, 4].iter().enumerate() {
            let mut j = vec![NOOP.to_string(); 2];
            j[i % 2] = c.to_string();
            env.step(&JointAction(j)).unwrap();
        }
        let r = env.step(&JointAction::new(["2", NOOP])).unwrap();
        assert_eq!(r.rewards, vec![1.0, -1.0]);
    }

    #[test]
    fn full_board_without_line_is_draw() {
        let s = run(&[0, 1, 2, 4, 3, 5, 7, 6, 8]);
        assert!(s.is_terminal());
        assert_eq!(s.winner, None);
    }

    #[test]
    fn occupied_cell_rejected() {
        let mut s = run(&[4]);
        assert!(matches!(s.play(4), Err(EnvError::IllegalAction { .. })));
    }
}
