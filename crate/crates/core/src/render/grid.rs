//! Map on the left-top, legend on the right, event/reward counter table below.

use super::canvas::*;
use super::{field, num, pair, perr, ParseError, FRAME_SIZE};
use crate::games::grid::{DilemmaKind, GridEntities, GridState, Pos, RewardRow, RewardTable};
use image::RgbImage;
use std::collections::BTreeMap;

const ENTITY_LABELS: [(DilemmaKind, &[&str]); 3] = [
    (DilemmaKind::Coin, &["Red coin", "Blue coin"]),
    (DilemmaKind::Hunt, &["Apple 1", "Apple 2", "Monster"]),
    (DilemmaKind::Battle, &["Red block", "Blue block"]),
];

fn labels(kind: DilemmaKind) -> &'static [&'static str] {
    ENTITY_LABELS.iter().find(|(k, _)| *k == kind).map(|(_, l)| *l).unwrap_or(&[])
}

fn signed(x: f64) -> String {
    if x >= 0.0 {
        format!("+{x}")
    } else {
        format!("{x}")
    }
}

pub fn text(state: &GridState, rewards: &RewardTable, viewer: usize) -> String {
    let who = if viewer == 0 { "red" } else { "blue" };
    let mut out = format!("{}, you are the {who} player\n", state.kind.title());
    out.push_str(&format!("Board: {}x{}, origin top-left, x right, y down\n", state.size, state.size));
    out.push_str(&format!("Step: {}\n", state.step));
    out.push_str(&format!("Red player: {}\n", state.players[0]));
    out.push_str(&format!("Blue player: {}\n", state.players[1]));
    for (label, p) in labels(state.kind).iter().zip(state.entities.positions()) {
        out.push_str(&format!("{label}: {p}\n"));
    }
    out.push_str("Events:\n");
    for &row in RewardRow::rows(state.kind) {
        let r = rewards.get(row);
        out.push_str(&format!(
            "- {}: count {}, reward red {}, blue {}\n",
            row.description(),
            state.counters.get(&row).copied().unwrap_or(0),
            signed(r[0]),
            signed(r[1]),
        ));
    }
    out
}

fn pos(s: &str) -> Result<Pos, ParseError> {
    let (x, y) = pair(s)?;
    Ok(Pos::new(x, y))
}

pub fn parse(text: &str) -> Result<(GridState, RewardTable), ParseError> {
    let header = text.lines().next().unwrap_or("");
    let kind = [DilemmaKind::Coin, DilemmaKind::Hunt, DilemmaKind::Battle]
        .into_iter()
        .find(|k| header.starts_with(k.title()))
        .ok_or_else(|| ParseError(format!("unknown game in `{header}`")))?;
    let board = field(text, "Board")?;
    let size: i32 = num(board.split('x').next().unwrap_or(""))?;
    let players = [pos(field(text, "Red player")?)?, pos(field(text, "Blue player")?)?];
    let ents = labels(kind).iter().map(|l| pos(field(text, l)?)).collect::<Result<Vec<_>, _>>()?;
    let entities = match kind {
        DilemmaKind::Coin => GridEntities::Coin { red: ents[0], blue: ents[1] },
        DilemmaKind::Hunt => GridEntities::Hunt { apples: [ents[0], ents[1]], monster: ents[2] },
        DilemmaKind::Battle => GridEntities::Battle { red: ents[0], blue: ents[1] },
    };
    let mut counters = BTreeMap::new();
    let mut table = BTreeMap::new();
    for &row in RewardRow::rows(kind) {
        let line = text
            .lines()
            .find_map(|l| l.strip_prefix(&format!("- {}: ", row.description())))
            .ok_or_else(|| ParseError(format!("missing event row `{}`", row.description())))?;
        let parts: Vec<&str> = line.split([' ', ',']).filter(|s| !s.is_empty()).collect();
        match parts.as_slice() {
            ["count", c, "reward", "red", r, "blue", b] => {
                counters.insert(row, num::<u32>(c)?);
                table.insert(row, [num::<f64>(r)?, num::<f64>(b)?]);
            }
            _ => return perr(format!("bad event row `{line}`")),
        }
    }
    let state = GridState { kind, size, players, entities, counters, step: num(field(text, "Step")?)? };
    Ok((state, RewardTable(table)))
}

fn draw_entity(cv: &mut Canvas, kind: DilemmaKind, index: usize, cx: i32, cy: i32, r: i32) {
    match (kind, index) {
        (DilemmaKind::Coin, i) => {
            let c = if i == 0 { RED } else { BLUE };
            cv.disc(cx, cy, r / 2 + 2, YELLOW);
            cv.disc(cx, cy, r / 2 - 1, c);
        }
        (DilemmaKind::Hunt, 2) => {
            cv.fill_rect(cx - r + 4, cy - r + 4, 2 * r - 8, 2 * r - 8, PURPLE);
            cv.fill_rect(cx - r / 2, cy - r / 3, r / 3, r / 3, WHITE);
            cv.fill_rect(cx + r / 6, cy - r / 3, r / 3, r / 3, WHITE);
        }
        (DilemmaKind::Hunt, _) => {
            cv.disc(cx, cy + 2, r / 2, GREEN);
            cv.fill_rect(cx - 1, cy - r / 2 - 4, 3, 6, BROWN);
        }
        (DilemmaKind::Battle, i) => {
            let c = if i == 0 { RED } else { BLUE };
            cv.fill_rect(cx - r + 6, cy - r + 6, 2 * r - 12, 2 * r - 12, c);
            cv.rect(cx - r + 6, cy - r + 6, 2 * r - 12, 2 * r - 12, 2, BLACK);
        }
    }
}

pub fn image(state: &GridState, rewards: &RewardTable) -> RgbImage {
    let mut cv = Canvas::new(FRAME_SIZE, FRAME_SIZE, WHITE);
    cv.text(12, 10, &state.kind.title().to_uppercase(), 2, BLACK);
    cv.text(380, 14, &format!("STEP {}", state.step), 1, BLACK);
    let cell = 280 / state.size.max(1);
    let (ox, oy) = (12, 36);
    for y in 0..state.size {
        for x in 0..state.size {
            cv.rect(ox + x * cell, oy + y * cell, cell + 1, cell + 1, 1, GRAY);
        }
    }
    let r = cell / 2 - 4;
    let center = |p: Pos| (ox + p.x * cell + cell / 2, oy + p.y * cell + cell / 2);
    for (i, p) in state.entities.positions().into_iter().enumerate() {
        let (cx, cy) = center(p);
        draw_entity(&mut cv, state.kind, i, cx, cy, r);
    }
    for (i, p) in state.players.iter().enumerate() {
        let (cx, cy) = center(*p);
        let c = if i == 0 { RED } else { BLUE };
        // co-located players are drawn side by side
        let shift = if state.players[0] == state.players[1] { if i == 0 { -r / 2 } else { r / 2 } } else { 0 };
        cv.pacman(cx + shift, cy, r * 2 / 3, (1, 0), c);
    }

    // legend
    let lx = 310;
    cv.text(lx, 40, "LEGEND", 2, BLACK);
    cv.pacman(lx + 10, 78, 9, (1, 0), RED);
    cv.text(lx + 26, 74, "RED PLAYER", 1, BLACK);
    cv.pacman(lx + 10, 102, 9, (1, 0), BLUE);
    cv.text(lx + 26, 98, "BLUE PLAYER", 1, BLACK);
    for (i, label) in labels(state.kind).iter().enumerate() {
        if state.kind == DilemmaKind::Hunt && i == 1 {
            continue;
        }
        let y = 126 + (i as i32) * 24;
        draw_entity(&mut cv, state.kind, i, lx + 10, y, 11);
        let name = if state.kind == DilemmaKind::Hunt && i == 0 { "APPLE" } else { label };
        cv.text(lx + 26, y - 4, &name.to_uppercase(), 1, BLACK);
    }

    // event table
    let ty = 336;
    cv.text(12, ty, "EVENT", 1, BLACK);
    cv.text(300, ty, "COUNT", 1, BLACK);
    cv.text(360, ty, "RED", 1, RED);
    cv.text(420, ty, "BLUE", 1, BLUE);
    cv.fill_rect(12, ty + 12, 488, 1, BLACK);
    for (i, &row) in RewardRow::rows(state.kind).iter().enumerate() {
        let y = ty + 22 + i as i32 * 20;
        let rw = rewards.get(row);
        cv.text(12, y, &row.description().to_uppercase(), 1, BLACK);
        cv.text(300, y, &state.counters.get(&row).copied().unwrap_or(0).to_string(), 1, BLACK);
        cv.text(360, y, &signed(rw[0]), 1, BLACK);
        cv.text(420, y, &signed(rw[1]), 1, BLACK);
    }
    cv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::grid::Move5;
    use crate::rng::GameRng;
    use rand::SeedableRng;

    #[test]
    fn text_round_trips_every_dilemma() {
        for kind in [DilemmaKind::Coin, DilemmaKind::Hunt, DilemmaKind::Battle] {
            let mut s = GridState::spawn(kind, 5, 8);
            let mut rng = GameRng::seed_from_u64(1);
            for i in 0..30 {
                s.advance([Move5::ALL[i % 5], Move5::ALL[(i * 3) % 5]], &mut rng);
            }
            let table = RewardTable::standard(kind);
            let t = text(&s, &table, 1);
            assert_eq!(parse(&t).unwrap(), (s.clone(), table.clone()), "{t}");
        }
    }

    #[test]
    fn image_is_deterministic_and_shows_counters() {
        let s = GridState::spawn(DilemmaKind::Hunt, 5, 2);
        let table = RewardTable::standard(DilemmaKind::Hunt);
        let a = image(&s, &table);
        assert_eq!(a, image(&s, &table));
        let mut t = s.clone();
        *t.counters.get_mut(&RewardRow::JointDefeat).unwrap() += 1;
        assert_ne!(a, image(&t, &table));
    }
}
