//! Four panels: basic info, recent actions, fireworks and discards, hands.
//! The viewer's own card faces are never drawn or written; only the
//! knowledge gathered from hints is.

use super::canvas::*;
use super::{field, num, perr, ParseError, FRAME_SIZE};
use crate::games::hanabi::{Card, HanabiState, Knowledge, COLOR_CHARS};
use image::{Rgb, RgbImage};

/// Everything a given player is allowed to see.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HanabiView {
    pub viewer: usize,
    pub info_tokens: u8,
    pub life_tokens: u8,
    pub deck_size: usize,
    pub current_player: usize,
    pub fireworks: Vec<u8>,
    pub discard_pile: Vec<Card>,
    /// Indexed by player.
    pub recent_actions: [Vec<String>; 2],
    pub own_knowledge: Vec<Knowledge>,
    pub other_hand: Vec<(Card, Knowledge)>,
}

pub fn view(state: &HanabiState, viewer: usize) -> HanabiView {
    HanabiView {
        viewer,
        info_tokens: state.info_tokens,
        life_tokens: state.life_tokens,
        deck_size: state.deck.len(),
        current_player: state.current_player,
        fireworks: state.fireworks.clone(),
        discard_pile: state.discard_pile.clone(),
        recent_actions: state.recent_actions.clone(),
        own_knowledge: state.hands[viewer].iter().map(|h| h.knowledge).collect(),
        other_hand: state.hands[1 - viewer].iter().map(|h| (h.card, h.knowledge)).collect(),
    }
}

fn knowledge_text(k: &Knowledge) -> String {
    format!("colors {} ranks {}", k.color_string(), k.rank_string())
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".to_string()
    } else {
        items.join("; ")
    }
}

pub fn text(state: &HanabiState, viewer: usize) -> String {
    let v = view(state, viewer);
    let c = &state.config;
    let mut out = String::new();
    out.push_str(&format!("Hanabi, you are player {viewer}\n"));
    out.push_str(&format!("Info tokens: {} of {}\n", v.info_tokens, c.info_tokens));
    out.push_str(&format!("Life tokens: {} of {}\n", v.life_tokens, c.life_tokens));
    out.push_str(&format!("Deck: {}\n", v.deck_size));
    out.push_str(&format!("Current player: {}\n", v.current_player));
    let fw: Vec<String> =
        v.fireworks.iter().enumerate().map(|(i, r)| format!("{}{}", COLOR_CHARS[i], r)).collect();
    out.push_str(&format!("Fireworks: {}\n", fw.join(" ")));
    let discards: Vec<String> = v.discard_pile.iter().map(|c| c.to_string()).collect();
    out.push_str(&format!("Discard pile: {}\n", list_or_none(&discards)));
    out.push_str(&format!("Your recent actions: {}\n", list_or_none(&v.recent_actions[viewer])));
    out.push_str(&format!("Other recent actions: {}\n", list_or_none(&v.recent_actions[1 - viewer])));
    let own: Vec<String> = v
        .own_knowledge
        .iter()
        .enumerate()
        .map(|(i, k)| format!("[{i}] ?? {}", knowledge_text(k)))
        .collect();
    out.push_str(&format!("Your hand: {}\n", own.join(" | ")));
    let other: Vec<String> = v
        .other_hand
        .iter()
        .enumerate()
        .map(|(i, (card, k))| format!("[{i}] {card} {}", knowledge_text(k)))
        .collect();
    out.push_str(&format!("Other hand: {}\n", other.join(" | ")));
    out
}

fn parse_list(s: &str) -> Vec<String> {
    if s == "(none)" {
        Vec::new()
    } else {
        s.split("; ").map(str::to_string).collect()
    }
}

fn parse_knowledge(colors: &str, ranks: &str) -> Result<Knowledge, ParseError> {
    let mut k = Knowledge { colors: 0, ranks: 0 };
    for ch in colors.chars() {
        let i = COLOR_CHARS.iter().position(|&c| c == ch).ok_or_else(|| ParseError(format!("color {ch}")))?;
        k.colors |= 1 << i;
    }
    for ch in ranks.chars() {
        let r = ch.to_digit(10).filter(|r| (1..=5).contains(r)).ok_or_else(|| ParseError(format!("rank {ch}")))?;
        k.ranks |= 1 << (r - 1);
    }
    Ok(k)
}

fn parse_slots(s: &str) -> Result<Vec<(Option<Card>, Knowledge)>, ParseError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(" | ")
        .map(|slot| {
            let parts: Vec<&str> = slot.split_whitespace().collect();
            match parts.as_slice() {
                [_, face, "colors", cs, "ranks", rs] => {
                    let card = if *face == "??" {
                        None
                    } else {
                        Some(Card::parse(face).ok_or_else(|| ParseError(format!("card {face}")))?)
                    };
                    Ok((card, parse_knowledge(cs, rs)?))
                }
                _ => perr(format!("bad hand slot `{slot}`")),
            }
        })
        .collect()
}

fn first_number(s: &str) -> Result<u8, ParseError> {
    num(s.split_whitespace().next().unwrap_or(""))
}

pub fn parse(text: &str) -> Result<HanabiView, ParseError> {
    let header = text.lines().next().unwrap_or("");
    let viewer: usize = num(header.rsplit(' ').next().unwrap_or(""))?;
    let fireworks = field(text, "Fireworks")?
        .split_whitespace()
        .map(|f| num::<u8>(&f[1..]))
        .collect::<Result<Vec<_>, _>>()?;
    let discard_pile = parse_list(field(text, "Discard pile")?)
        .iter()
        .map(|c| Card::parse(c).ok_or_else(|| ParseError(format!("card {c}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut recent: [Vec<String>; 2] = [Vec::new(), Vec::new()];
    recent[viewer] = parse_list(field(text, "Your recent actions")?);
    recent[1 - viewer] = parse_list(field(text, "Other recent actions")?);
    let own = parse_slots(field(text, "Your hand")?)?;
    if own.iter().any(|(c, _)| c.is_some()) {
        return perr("own card faces must be hidden");
    }
    let other = parse_slots(field(text, "Other hand")?)?
        .into_iter()
        .map(|(c, k)| c.map(|c| (c, k)).ok_or_else(|| ParseError("other card face missing".into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HanabiView {
        viewer,
        info_tokens: first_number(field(text, "Info tokens")?)?,
        life_tokens: first_number(field(text, "Life tokens")?)?,
        deck_size: num(field(text, "Deck")?)?,
        current_player: num(field(text, "Current player")?)?,
        fireworks,
        discard_pile,
        recent_actions: recent,
        own_knowledge: own.into_iter().map(|(_, k)| k).collect(),
        other_hand: other,
    })
}

pub fn card_color(color: u8) -> Rgb<u8> {
    match color {
        0 => RED,
        1 => YELLOW,
        2 => GREEN,
        3 => WHITE,
        _ => BLUE,
    }
}

fn draw_card(cv: &mut Canvas, x: i32, y: i32, face: Option<Card>, k: &Knowledge) {
    let (w, h) = (44, 62);
    match face {
        Some(card) => {
            cv.fill_rect(x, y, w, h, card_color(card.color));
            cv.rect(x, y, w, h, 2, BLACK);
            cv.text_centered(x + w / 2, y + 8, &card.rank.to_string(), 3, BLACK);
        }
        None => {
            cv.fill_rect(x, y, w, h, GRAY);
            cv.rect(x, y, w, h, 2, BLACK);
            cv.text_centered(x + w / 2, y + 18, "?", 3, WHITE);
        }
    }
    cv.text(x, y + h + 4, &k.color_string(), 1, BLACK);
    cv.text(x, y + h + 14, &k.rank_string(), 1, BLACK);
}

pub fn image(state: &HanabiState, viewer: usize) -> RgbImage {
    let v = view(state, viewer);
    let c = &state.config;
    let mut cv = Canvas::new(FRAME_SIZE, FRAME_SIZE, LIGHT);

    // basic info
    cv.text(8, 8, &format!("HANABI  PLAYER {viewer}"), 2, BLACK);
    cv.text(8, 32, &format!("INFO {}/{}", v.info_tokens, c.info_tokens), 1, BLACK);
    for i in 0..c.info_tokens as i32 {
        let col = if i < v.info_tokens as i32 { BLUE } else { GRAY };
        cv.disc(110 + i * 14, 35, 5, col);
    }
    cv.text(8, 48, &format!("LIFE {}/{}", v.life_tokens, c.life_tokens), 1, BLACK);
    for i in 0..c.life_tokens as i32 {
        let col = if i < v.life_tokens as i32 { RED } else { GRAY };
        cv.disc(110 + i * 14, 51, 5, col);
    }
    cv.text(8, 64, &format!("DECK {}  TURN P{}", v.deck_size, v.current_player), 1, BLACK);

    // recent actions
    cv.text(280, 32, "RECENT ACTIONS", 1, BLACK);
    for (row, p) in [viewer, 1 - viewer].into_iter().enumerate() {
        let who = if p == viewer { "YOU" } else { "OTHER" };
        let acts = list_or_none(&v.recent_actions[p]);
        cv.text(280, 46 + row as i32 * 24, who, 1, DARK);
        cv.text(280, 56 + row as i32 * 24, &acts, 1, DARK);
    }

    // fireworks and discards
    cv.text(8, 100, "FIREWORKS", 1, BLACK);
    for (i, &top) in v.fireworks.iter().enumerate() {
        let x = 8 + i as i32 * 52;
        cv.fill_rect(x, 114, 44, 44, card_color(i as u8));
        cv.rect(x, 114, 44, 44, 2, BLACK);
        cv.text_centered(x + 22, 126, &top.to_string(), 3, BLACK);
    }
    cv.text(280, 100, "DISCARDS", 1, BLACK);
    for (i, card) in v.discard_pile.iter().enumerate() {
        let (col, row) = (i as i32 % 10, i as i32 / 10);
        let (x, y) = (280 + col * 22, 114 + row * 14);
        cv.fill_rect(x, y, 20, 12, card_color(card.color));
        cv.text(x + 6, y + 2, &card.rank.to_string(), 1, BLACK);
    }

    // hands
    cv.text(8, 250, "OTHER HAND", 2, BLACK);
    for (i, (card, k)) in v.other_hand.iter().enumerate() {
        draw_card(&mut cv, 8 + i as i32 * 56, 274, Some(*card), k);
    }
    cv.text(8, 380, "YOUR HAND", 2, BLACK);
    for (i, k) in v.own_knowledge.iter().enumerate() {
        draw_card(&mut cv, 8 + i as i32 * 56, 404, None, k);
    }
    cv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::hanabi::{HanabiConfig, HanabiMove};

    fn played() -> HanabiState {
        let mut s = HanabiState::deal(HanabiConfig::standard(), 11);
        for mv in [HanabiMove::Discard(0), HanabiMove::Play(1)] {
            s.apply(mv).unwrap();
        }
        let reveal = s.legal_moves(s.current_player).into_iter().find(|m| m.is_reveal()).unwrap();
        s.apply(reveal).unwrap();
        s
    }

    #[test]
    fn text_round_trips_for_both_viewers() {
        let s = played();
        for viewer in 0..2 {
            let t = text(&s, viewer);
            assert_eq!(parse(&t).unwrap(), view(&s, viewer), "{t}");
        }
    }

    #[test]
    fn own_faces_never_appear() {
        let s = HanabiState::deal(HanabiConfig::standard(), 3);
        let t = text(&s, 0);
        let own_line = t.lines().find(|l| l.starts_with("Your hand")).unwrap();
        for h in &s.hands[0] {
            assert!(!own_line.contains(&h.card.to_string()));
        }
        let other_line = t.lines().find(|l| l.starts_with("Other hand")).unwrap();
        for h in &s.hands[1] {
            assert!(other_line.contains(&h.card.to_string()));
        }
    }

    /// The image depends on the viewer's own cards only through knowledge:
    /// swapping the faces of the viewer's hand leaves the pixels unchanged.
    #[test]
    fn image_hides_own_faces() {
        let s = HanabiState::deal(HanabiConfig::standard(), 5);
        let mut t = s.clone();
        t.hands[0].reverse();
        for (a, b) in t.hands[0].iter_mut().zip(s.hands[0].iter()) {
            a.knowledge = b.knowledge;
        }
        assert_eq!(image(&s, 0), image(&t, 0));
        assert_ne!(image(&s, 1), image(&t, 1));
    }

    #[test]
    fn image_is_deterministic() {
        let s = played();
        assert_eq!(image(&s, 1), image(&s, 1));
        assert_eq!(image(&s, 0).dimensions(), (FRAME_SIZE, FRAME_SIZE));
    }
}
