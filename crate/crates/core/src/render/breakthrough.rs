use super::canvas::*;
use super::{field, perr, ParseError, FRAME_SIZE};
use crate::games::breakthrough::{square_name, BreakthroughState, Move, Side};
use image::RgbImage;

fn piece_list(state: &BreakthroughState, side: Side) -> String {
    let names: Vec<String> = state.squares(side).into_iter().map(square_name).collect();
    if names.is_empty() {
        "(none)".into()
    } else {
        names.join(", ")
    }
}

pub fn text(state: &BreakthroughState, viewer: usize) -> String {
    let me = Side::of_agent(viewer);
    let mut out = format!("Breakthrough, you play {}\n", me.name());
    match state.winner {
        Some(w) => out.push_str(&format!("Winner: {}\n", w.name())),
        None => out.push_str(&format!("To move: {}\n", state.to_move.name())),
    }
    out.push_str(&format!("White: {}\n", piece_list(state, Side::White)));
    out.push_str(&format!("Black: {}\n", piece_list(state, Side::Black)));
    out.push_str("Board:\n");
    for rank in (0..8u8).rev() {
        let row: Vec<&str> = (0..8u8)
            .map(|file| match state.piece_at(rank * 8 + file) {
                Some(Side::White) => "W",
                Some(Side::Black) => "B",
                None => ".",
            })
            .collect();
        out.push_str(&format!("{} {}\n", rank + 1, row.join(" ")));
    }
    out.push_str("  a b c d e f g h\n");
    out
}

fn side_named(s: &str) -> Result<Side, ParseError> {
    match s {
        "White" => Ok(Side::White),
        "Black" => Ok(Side::Black),
        other => perr(format!("unknown side `{other}`")),
    }
}

fn squares(s: &str) -> Result<u64, ParseError> {
    if s == "(none)" {
        return Ok(0);
    }
    s.split(", ").try_fold(0u64, |acc, name| {
        let m = Move::parse(&format!("{name}a1")).ok_or_else(|| ParseError(format!("square `{name}`")))?;
        Ok(acc | 1u64 << m.from)
    })
}

/// Reads back the position; the ply counter is not part of the observation
/// and comes back as zero.
pub fn parse(text: &str) -> Result<BreakthroughState, ParseError> {
    let white = squares(field(text, "White")?)?;
    let black = squares(field(text, "Black")?)?;
    let (to_move, winner) = match field(text, "Winner") {
        Ok(w) => {
            let w = side_named(w)?;
            (w.opponent(), Some(w))
        }
        Err(_) => (side_named(field(text, "To move")?)?, None),
    };
    Ok(BreakthroughState { white, black, to_move, winner, plies: 0 })
}

pub fn image(state: &BreakthroughState) -> RgbImage {
    let mut cv = Canvas::new(FRAME_SIZE, FRAME_SIZE, LIGHT);
    let cell = 54;
    let (ox, oy) = (40, 24);
    for rank in 0..8i32 {
        for file in 0..8i32 {
            let x = ox + file * cell;
            // rank 8 is drawn at the top
            let y = oy + (7 - rank) * cell;
            let shade = if (rank + file) % 2 == 0 { BROWN } else { TAN };
            cv.fill_rect(x, y, cell, cell, shade);
            if let Some(side) = state.piece_at((rank * 8 + file) as u8) {
                let (fill, edge) = match side {
                    Side::White => (WHITE, BLACK),
                    Side::Black => (BLACK, WHITE),
                };
                cv.disc(x + cell / 2, y + cell / 2, cell / 2 - 7, edge);
                cv.disc(x + cell / 2, y + cell / 2, cell / 2 - 9, fill);
            }
        }
    }
    cv.rect(ox - 2, oy - 2, cell * 8 + 4, cell * 8 + 4, 2, BLACK);
    for i in 0..8i32 {
        let file = ((b'a' + i as u8) as char).to_string();
        cv.text_centered(ox + i * cell + cell / 2, oy + 8 * cell + 6, &file, 2, BLACK);
        cv.text(14, oy + (7 - i) * cell + cell / 2 - 8, &(i + 1).to_string(), 2, BLACK);
    }
    let status = match state.winner {
        Some(w) => format!("{} WINS", w.name().to_uppercase()),
        None => format!("{} TO MOVE", state.to_move.name().to_uppercase()),
    };
    cv.text_centered(FRAME_SIZE as i32 / 2, oy + 8 * cell + 26, &status, 2, BLACK);
    cv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_text_lists_pieces_and_side_to_move() {
        let s = BreakthroughState::initial();
        let t = text(&s, 0);
        assert!(t.contains("To move: Black"));
        assert!(t.contains("White: a1, a2, b1, b2"));
        assert!(t.lines().any(|l| l == "8 B B B B B B B B"));
    }

    #[test]
    fn text_round_trips() {
        let mut s = BreakthroughState::initial();
        for _ in 0..6 {
            let mv = s.sorted_moves()[0];
            s.play(mv);
        }
        let mut back = parse(&text(&s, 1)).unwrap();
        back.plies = s.plies;
        assert_eq!(back, s);
        let won = BreakthroughState { winner: Some(Side::White), to_move: Side::Black, ..s };
        let mut back = parse(&text(&won, 0)).unwrap();
        back.plies = won.plies;
        assert_eq!(back, won);
    }

    #[test]
    fn image_is_deterministic() {
        let s = BreakthroughState::initial();
        assert_eq!(image(&s), image(&s));
    }
}
