//! The viewer sees their own card, the chips committed and the betting
//! history; the opponent's card is never shown.

use super::canvas::*;
use super::{field, num, perr, ParseError, FRAME_SIZE};
use crate::games::kuhn::{KuhnAction, KuhnCard, KuhnState};
use image::RgbImage;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KuhnView {
    pub viewer: usize,
    pub card: KuhnCard,
    pub pot: [u8; 2],
    pub history: Vec<KuhnAction>,
}

pub fn view(state: &KuhnState, viewer: usize) -> KuhnView {
    KuhnView { viewer, card: state.cards[viewer], pot: state.pot, history: state.history.clone() }
}

fn history_text(h: &[KuhnAction]) -> String {
    if h.is_empty() {
        "(empty)".into()
    } else {
        h.iter().map(|a| a.token()).collect::<Vec<_>>().join(" ")
    }
}

pub fn text(state: &KuhnState, viewer: usize) -> String {
    let v = view(state, viewer);
    format!(
        "Kuhn Poker, you are player {viewer}\n\
         Your card: {}. Pot: {} chips. History: {}.\n\
         Chips: you {}, opponent {}\n",
        v.card.letter(),
        v.pot[0] + v.pot[1],
        history_text(&v.history),
        v.pot[viewer],
        v.pot[1 - viewer],
    )
}

pub fn parse(text: &str) -> Result<KuhnView, ParseError> {
    let header = text.lines().next().unwrap_or("");
    let viewer: usize = num(header.rsplit(' ').next().unwrap_or(""))?;
    let line = field(text, "Your card")?;
    let card = line.chars().next().and_then(KuhnCard::from_letter).ok_or_else(|| ParseError("card".into()))?;
    let hist = line
        .split("History: ")
        .nth(1)
        .and_then(|h| h.strip_suffix('.'))
        .ok_or_else(|| ParseError("history".into()))?;
    let history = if hist == "(empty)" {
        Vec::new()
    } else {
        hist.split(' ')
            .map(|t| KuhnAction::parse(t).ok_or_else(|| ParseError(format!("action `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    let chips = field(text, "Chips")?;
    let parts: Vec<&str> = chips.split([' ', ',']).filter(|s| !s.is_empty()).collect();
    let (mine, theirs) = match parts.as_slice() {
        ["you", a, "opponent", b] => (num::<u8>(a)?, num::<u8>(b)?),
        _ => return perr(format!("chips line `{chips}`")),
    };
    let mut pot = [0; 2];
    pot[viewer] = mine;
    pot[1 - viewer] = theirs;
    Ok(KuhnView { viewer, card, pot, history })
}

pub fn image(state: &KuhnState, viewer: usize) -> RgbImage {
    let v = view(state, viewer);
    let mut cv = Canvas::new(FRAME_SIZE, FRAME_SIZE, Color::from([20, 110, 60]));
    cv.text_centered(256, 16, "KUHN POKER", 3, WHITE);
    cv.text_centered(256, 48, &format!("PLAYER {viewer}"), 2, WHITE);
    // private card
    cv.fill_rect(176, 90, 160, 220, WHITE);
    cv.rect(176, 90, 160, 220, 4, BLACK);
    let letter = v.card.letter().to_string();
    cv.text_centered(256, 170, &letter, 8, BLACK);
    cv.text(186, 100, &letter, 2, BLACK);
    // chips
    cv.text(40, 340, &format!("POT {}", v.pot[0] + v.pot[1]), 3, YELLOW);
    for (row, (label, n)) in [("YOU", v.pot[viewer]), ("OPP", v.pot[1 - viewer])].into_iter().enumerate() {
        let y = 390 + row as i32 * 40;
        cv.text(40, y, label, 2, WHITE);
        for i in 0..n as i32 {
            cv.disc(120 + i * 30, y + 8, 12, YELLOW);
            cv.disc(120 + i * 30, y + 8, 8, ORANGE);
        }
    }
    let hist: Vec<String> = v.history.iter().map(|a| a.letter().to_string()).collect();
    let hist = if hist.is_empty() { "-".to_string() } else { hist.join(" ") };
    cv.text(280, 390, "HISTORY", 2, WHITE);
    cv.text(280, 420, &hist, 2, WHITE);
    cv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use KuhnCard::*;

    #[test]
    fn fresh_deal_text() {
        let s = KuhnState::new([K, Q]);
        assert!(text(&s, 0).contains("Your card: K. Pot: 2 chips. History: (empty)."));
    }

    #[test]
    fn round_trip_and_privacy() {
        let mut s = KuhnState::new([J, Q]);
        s.play(KuhnAction::Pass);
        s.play(KuhnAction::Bet);
        for viewer in 0..2 {
            let t = text(&s, viewer);
            assert_eq!(parse(&t).unwrap(), view(&s, viewer));
            let other = s.cards[1 - viewer].letter();
            assert!(!t.contains(&format!("{other}.")), "{t}");
        }
        // the image does not change when only the opponent's card changes
        let t = KuhnState { cards: [J, K], ..s.clone() };
        assert_eq!(image(&s, 0), image(&t, 0));
        assert_ne!(image(&s, 1), image(&t, 1));
    }
}
