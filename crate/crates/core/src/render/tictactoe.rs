use super::canvas::*;
use super::{field, perr, ParseError, FRAME_SIZE};
use crate::games::tictactoe::TicTacToeState;
use image::RgbImage;

pub fn text(state: &TicTacToeState, viewer: usize) -> String {
    let mut out = format!("Tic-Tac-Toe, you play {}\n", TicTacToeState::mark(viewer as u8));
    match (state.winner, state.is_terminal()) {
        (Some(w), _) => out.push_str(&format!("Winner: {}\n", TicTacToeState::mark(w))),
        (None, true) => out.push_str("Result: draw\n"),
        (None, false) => out.push_str(&format!("To move: {}\n", TicTacToeState::mark(state.to_move))),
    }
    out.push_str("Board (cells 0-8, row by row):\n");
    for row in 0..3 {
        let cells: Vec<String> = (0..3)
            .map(|c| match state.cells[row * 3 + c] {
                Some(p) => TicTacToeState::mark(p).to_string(),
                None => (row * 3 + c).to_string(),
            })
            .collect();
        out.push_str(&format!("Row {row}: {}\n", cells.join(" ")));
    }
    out
}

pub fn parse(text: &str) -> Result<TicTacToeState, ParseError> {
    let mut s = TicTacToeState::default();
    for row in 0..3 {
        let line = field(text, &format!("Row {row}"))?;
        for (c, tok) in line.split(' ').enumerate() {
            s.cells[row * 3 + c] = match tok {
                "X" => Some(0),
                "O" => Some(1),
                _ => None,
            };
        }
    }
    s.moves = s.cells.iter().filter(|c| c.is_some()).count() as u8;
    let mark = |m: &str| match m {
        "X" => Ok(0u8),
        "O" => Ok(1u8),
        other => perr(format!("mark `{other}`")),
    };
    if let Ok(w) = field(text, "Winner") {
        let w = mark(w)?;
        s.winner = Some(w);
        s.to_move = 1 - w;
    } else if let Ok(m) = field(text, "To move") {
        s.to_move = mark(m)?;
    } else {
        s.to_move = (s.moves % 2) as u8;
    }
    Ok(s)
}

pub fn image(state: &TicTacToeState) -> RgbImage {
    let mut cv = Canvas::new(FRAME_SIZE, FRAME_SIZE, WHITE);
    let (ox, oy, cell) = (76, 60, 120);
    for i in 1..3 {
        cv.fill_rect(ox + i * cell - 3, oy, 6, cell * 3, BLACK);
        cv.fill_rect(ox, oy + i * cell - 3, cell * 3, 6, BLACK);
    }
    for idx in 0..9 {
        let (r, c) = ((idx / 3) as i32, (idx % 3) as i32);
        let (cx, cy) = (ox + c * cell + cell / 2, oy + r * cell + cell / 2);
        match state.cells[idx] {
            Some(0) => cv.text_centered(cx, cy - 28, "X", 7, RED),
            Some(_) => cv.text_centered(cx, cy - 28, "O", 7, BLUE),
            None => cv.text_centered(cx, cy - 8, &idx.to_string(), 2, GRAY),
        }
    }
    let status = match (state.winner, state.is_terminal()) {
        (Some(w), _) => format!("{} WINS", TicTacToeState::mark(w)),
        (None, true) => "DRAW".to_string(),
        (None, false) => format!("{} TO MOVE", TicTacToeState::mark(state.to_move)),
    };
    cv.text_centered(256, 440, &status, 3, BLACK);
    cv.finish()
}
