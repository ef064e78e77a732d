//! Kitchen view on top, legend below.

use super::canvas::*;
use super::{field, num, pair, perr, ParseError, FRAME_SIZE};
use crate::games::grid::Pos;
use crate::games::overcooked::{Chef, Facing, Item, Layout, OvercookedState, PotState, Tile};
use image::RgbImage;

fn held_text(h: Option<Item>) -> String {
    match h {
        None => "nothing".into(),
        Some(i) => i.describe(),
    }
}

fn pot_text(p: &PotState, cook_time: u8) -> String {
    let status = match p.cooking {
        None => "not cooking".to_string(),
        Some(t) if t >= cook_time => "ready".to_string(),
        Some(t) => format!("cooking {t}"),
    };
    format!("{} onions, {status}, cook time {cook_time}", p.onions)
}

pub fn text(state: &OvercookedState, viewer: usize) -> String {
    let mut out = format!("Overcooked, you are chef {viewer}\n");
    out.push_str(&format!("Step: {} of {}\n", state.step, state.max_steps));
    out.push_str("Kitchen (X counter, O onions, D dishes, P pot, S serving window, . floor):\n");
    for (y, row) in state.layout.rows().iter().enumerate() {
        out.push_str(&format!("Row {y}: {row}\n"));
    }
    out.push_str(&format!("Spawns: {}; {}\n", state.layout.spawns[0], state.layout.spawns[1]));
    for (i, c) in state.chefs.iter().enumerate() {
        let you = if i == viewer { " (you)" } else { "" };
        out.push_str(&format!(
            "Chef {i}{you}: at {}, facing {}, holding {}\n",
            c.pos,
            c.facing.name(),
            held_text(c.held)
        ));
    }
    out.push_str(&format!("Pot {}: {}\n", state.layout.pot_pos(), pot_text(&state.pot, state.cook_time)));
    out.push_str(&format!("Deliveries: {}\n", state.deliveries));
    out
}

fn parse_item(s: &str) -> Result<Option<Item>, ParseError> {
    Ok(match s {
        "nothing" => None,
        "onion" => Some(Item::Onion),
        "dish" => Some(Item::Dish),
        other => {
            let n = other
                .strip_prefix("soup (")
                .and_then(|r| r.strip_suffix(" onions)"))
                .ok_or_else(|| ParseError(format!("item `{other}`")))?;
            Some(Item::Soup { onions: num(n)? })
        }
    })
}

fn parse_chef(s: &str) -> Result<Chef, ParseError> {
    // "at (x, y), facing up, holding onion"
    let rest = s.strip_prefix("at ").ok_or_else(|| ParseError(format!("chef `{s}`")))?;
    let close = rest.find(')').ok_or_else(|| ParseError("chef position".into()))?;
    let (x, y) = pair(&rest[..=close])?;
    let rest = rest[close + 1..].strip_prefix(", facing ").ok_or_else(|| ParseError("facing".into()))?;
    let (dir, held) = rest.split_once(", holding ").ok_or_else(|| ParseError("holding".into()))?;
    let facing = Facing::parse(dir).ok_or_else(|| ParseError(format!("facing `{dir}`")))?;
    Ok(Chef { pos: Pos::new(x, y), facing, held: parse_item(held)? })
}

pub fn parse(text: &str) -> Result<OvercookedState, ParseError> {
    let step_line = field(text, "Step")?;
    let (step, max) = step_line.split_once(" of ").ok_or_else(|| ParseError("step".into()))?;
    let rows: Vec<String> = (0..)
        .map_while(|y| field(text, &format!("Row {y}")).ok().map(str::to_string))
        .collect();
    let chef_lines: Vec<String> = (0..2)
        .map(|i| {
            text.lines()
                .find_map(|l| {
                    l.strip_prefix(&format!("Chef {i}"))
                        .map(|r| r.trim_start_matches(" (you)").trim_start_matches(": ").to_string())
                })
                .ok_or_else(|| ParseError(format!("missing chef {i}")))
        })
        .collect::<Result<_, _>>()?;
    let (s0, s1) = field(text, "Spawns")?
        .split_once("; ")
        .ok_or_else(|| ParseError("spawns".into()))?;
    let mut marked = rows.clone();
    for (mark, p) in [('1', s0), ('2', s1)] {
        let (x, y) = pair(p)?;
        let row = marked.get_mut(y as usize).ok_or_else(|| ParseError("spawn off map".into()))?;
        let mut chars: Vec<char> = row.chars().collect();
        *chars.get_mut(x as usize).ok_or_else(|| ParseError("spawn off map".into()))? = mark;
        *row = chars.into_iter().collect();
    }
    let layout = Layout::parse(&marked).map_err(|e| ParseError(e.to_string()))?;
    let chefs = [parse_chef(&chef_lines[0])?, parse_chef(&chef_lines[1])?];

    let pot_line = text.lines().find(|l| l.starts_with("Pot ")).ok_or_else(|| ParseError("pot".into()))?;
    let pot_desc = pot_line.split_once("): ").map(|(_, d)| d).ok_or_else(|| ParseError("pot".into()))?;
    let parts: Vec<&str> = pot_desc.split(", ").collect();
    let [onions, status, cook] = parts.as_slice() else {
        return perr(format!("pot line `{pot_line}`"));
    };
    let onions: u8 = num(onions.trim_end_matches(" onions"))?;
    let cook_time: u8 = num(cook.trim_start_matches("cook time "))?;
    let cooking = match *status {
        "not cooking" => None,
        "ready" => Some(cook_time),
        s => Some(num(s.trim_start_matches("cooking "))?),
    };
    Ok(OvercookedState {
        layout,
        chefs,
        pot: PotState { onions, cooking },
        cook_time,
        max_steps: num(max)?,
        deliveries: num(field(text, "Deliveries")?)?,
        step: num(step)?,
    })
}

fn tile_color(t: Tile) -> Color {
    match t {
        Tile::Floor => LIGHT,
        Tile::Counter => TAN,
        Tile::OnionSource => TAN,
        Tile::DishSource => TAN,
        Tile::Pot => DARK,
        Tile::Serve => GRAY,
    }
}

fn draw_item(cv: &mut Canvas, item: Item, cx: i32, cy: i32, r: i32) {
    match item {
        Item::Onion => {
            cv.disc(cx, cy, r, YELLOW);
            cv.disc(cx, cy, r / 2, ORANGE);
        }
        Item::Dish => {
            cv.disc(cx, cy, r, WHITE);
            cv.disc(cx, cy, r * 2 / 3, LIGHT);
        }
        Item::Soup { onions } => {
            cv.disc(cx, cy, r, WHITE);
            cv.disc(cx, cy, r * 2 / 3, ORANGE);
            cv.text_centered(cx, cy - 4, &onions.to_string(), 1, BLACK);
        }
    }
}

pub fn image(state: &OvercookedState) -> RgbImage {
    let mut cv = Canvas::new(FRAME_SIZE, FRAME_SIZE, WHITE);
    let l = &state.layout;
    let cell = (480 / l.width.max(1)).min(330 / l.height.max(1));
    let (ox, oy) = (16, 30);
    cv.text(16, 8, &format!("OVERCOOKED  STEP {}/{}", state.step, state.max_steps), 2, BLACK);
    for y in 0..l.height {
        for x in 0..l.width {
            let t = l.tile(Pos::new(x, y));
            let (px, py) = (ox + x * cell, oy + y * cell);
            cv.fill_rect(px, py, cell, cell, tile_color(t));
            cv.rect(px, py, cell, cell, 1, GRAY);
            let (cx, cy) = (px + cell / 2, py + cell / 2);
            match t {
                Tile::OnionSource => {
                    for (dx, dy) in [(-10, -8), (10, -8), (0, 10)] {
                        draw_item(&mut cv, Item::Onion, cx + dx, cy + dy, 9);
                    }
                }
                Tile::DishSource => {
                    for dy in [-10, 0, 10] {
                        draw_item(&mut cv, Item::Dish, cx, cy + dy, 12);
                    }
                }
                Tile::Pot => {
                    cv.disc(cx, cy, cell / 3, BLACK);
                    for i in 0..state.pot.onions as i32 {
                        cv.disc(cx - 14 + i * 14, cy - 6, 6, YELLOW);
                    }
                    if let Some(t) = state.pot.cooking {
                        let col = if t >= state.cook_time { GREEN } else { RED };
                        cv.text_centered(cx, cy + 6, &t.to_string(), 2, col);
                    }
                }
                Tile::Serve => cv.text_centered(cx, cy - 8, "S", 2, WHITE),
                _ => {}
            }
        }
    }
    let chef_colors = [BLUE, GREEN];
    for (i, c) in state.chefs.iter().enumerate() {
        let (cx, cy) = (ox + c.pos.x * cell + cell / 2, oy + c.pos.y * cell + cell / 2);
        cv.disc(cx, cy, cell / 3, chef_colors[i]);
        let (dx, dy) = c.facing.delta();
        cv.disc(cx + dx * cell / 3, cy + dy * cell / 3, 6, BLACK);
        cv.text_centered(cx, cy - 8, &i.to_string(), 2, WHITE);
        if let Some(item) = c.held {
            draw_item(&mut cv, item, cx + cell / 4, cy + cell / 4, 10);
        }
    }

    // legend
    let ly = oy + l.height * cell + 16;
    cv.text(16, ly, "LEGEND", 2, BLACK);
    let entries: [(&str, Option<Item>, Color); 6] = [
        ("CHEF 0", None, BLUE),
        ("CHEF 1", None, GREEN),
        ("ONION", Some(Item::Onion), WHITE),
        ("DISH", Some(Item::Dish), WHITE),
        ("SOUP", Some(Item::Soup { onions: 3 }), WHITE),
        ("POT TIMER", None, RED),
    ];
    for (i, (name, item, col)) in entries.iter().enumerate() {
        let (x, y) = (16 + (i as i32 % 3) * 160, ly + 30 + (i as i32 / 3) * 28);
        match item {
            Some(it) => draw_item(&mut cv, *it, x + 10, y + 4, 10),
            None => cv.disc(x + 10, y + 4, 10, *col),
        }
        cv.text(x + 26, y, name, 1, BLACK);
    }
    cv.text(16, ly + 92, "BLACK DOT MARKS THE FACING SIDE", 1, BLACK);
    cv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::overcooked::ChefAction;

    #[test]
    fn text_round_trips() {
        let mut s = OvercookedState::new(Layout::standard(), 5, 50);
        s.advance([ChefAction::Move(Facing::Left), ChefAction::Move(Facing::Up)]);
        s.advance([ChefAction::Interact, ChefAction::Move(Facing::Right)]);
        s.pot = PotState { onions: 2, cooking: Some(3) };
        s.chefs[1].held = Some(Item::Soup { onions: 2 });
        let back = parse(&text(&s, 1)).unwrap();
        assert_eq!(back.chefs, s.chefs);
        assert_eq!(back.pot, s.pot);
        assert_eq!(back.layout, s.layout);
        assert_eq!((back.step, back.max_steps, back.cook_time, back.deliveries), (2, 50, 5, 0));
    }

    #[test]
    fn image_changes_with_pot_and_is_deterministic() {
        let s = OvercookedState::new(Layout::standard(), 5, 50);
        let mut t = s.clone();
        t.pot.onions = 1;
        assert_eq!(image(&s), image(&s));
        assert_ne!(image(&s), image(&t));
    }
}
