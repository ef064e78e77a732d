//! Pong frames are the court at twice its native resolution.

use super::canvas::*;
use super::{field, num, pair, ParseError};
use crate::games::pong::{PongAction, PongConfig, PongState};
use image::RgbImage;

pub const SCALE: i32 = 2;

pub fn frame_size(cfg: &PongConfig) -> (u32, u32) {
    ((cfg.width * SCALE) as u32, (cfg.height * SCALE) as u32)
}

pub fn text(state: &PongState, cfg: &PongConfig, viewer: usize) -> String {
    let side = if viewer == 0 { "left" } else { "right" };
    let mut out = format!("Pong, you control the {side} paddle\n");
    out.push_str(&format!(
        "Court: {}x{}, origin top-left, y down, first to {} points\n",
        cfg.width, cfg.height, cfg.points_to_win
    ));
    out.push_str(&format!("Score: left {}, right {}\n", state.scores[0], state.scores[1]));
    out.push_str(&format!("Left paddle: top {}, length {}\n", state.paddles[0], cfg.paddle_len));
    out.push_str(&format!("Right paddle: top {}, length {}\n", state.paddles[1], cfg.paddle_len));
    out.push_str(&format!("Ball: ({}, {}), size {}\n", state.ball.0, state.ball.1, cfg.ball_size));
    out.push_str(&format!("Ball velocity: ({}, {})\n", state.velocity.0, state.velocity.1));
    out.push_str(&format!("Step: {}\n", state.step));
    out
}

fn leading_num<T: std::str::FromStr>(s: &str) -> Result<T, ParseError> {
    num(s.split(',').next().unwrap_or(""))
}

/// Reads back the observable state. The previous actions are not shown and
/// come back as `<STAY>`.
pub fn parse(text: &str) -> Result<PongState, ParseError> {
    let score = field(text, "Score")?;
    let (l, r) = score
        .strip_prefix("left ")
        .and_then(|s| s.split_once(", right "))
        .ok_or_else(|| ParseError(format!("score `{score}`")))?;
    let paddle = |key: &str| -> Result<i32, ParseError> {
        let v = field(text, key)?;
        leading_num(v.strip_prefix("top ").ok_or_else(|| ParseError(format!("paddle `{v}`")))?)
    };
    let ball_line = field(text, "Ball")?;
    let ball_pos = ball_line.split_once("), ").map(|(p, _)| format!("{p})")).unwrap_or_default();
    Ok(PongState {
        paddles: [paddle("Left paddle")?, paddle("Right paddle")?],
        ball: pair(&ball_pos)?,
        velocity: pair(field(text, "Ball velocity")?)?,
        scores: [num(l)?, num(r)?],
        prev_action: [PongAction::Stay; 2],
        step: num(field(text, "Step")?)?,
        truncated: false,
    })
}

pub fn image(state: &PongState, cfg: &PongConfig) -> RgbImage {
    let (w, h) = frame_size(cfg);
    let mut cv = Canvas::new(w, h, BLACK);
    // center line
    for y in (0..cfg.height * SCALE).step_by(16) {
        cv.fill_rect(cfg.width * SCALE / 2 - 1, y, 2, 8, DARK);
    }
    cv.text_centered(cfg.width * SCALE / 4, 8, &state.scores[0].to_string(), 3, ORANGE);
    cv.text_centered(cfg.width * SCALE * 3 / 4, 8, &state.scores[1].to_string(), 3, GREEN);
    let colors = [ORANGE, GREEN];
    for side in 0..2 {
        cv.fill_rect(
            cfg.paddle_x(side) * SCALE,
            state.paddles[side] * SCALE,
            cfg.paddle_width * SCALE,
            cfg.paddle_len * SCALE,
            colors[side],
        );
    }
    cv.fill_rect(state.ball.0 * SCALE, state.ball.1 * SCALE, cfg.ball_size * SCALE, cfg.ball_size * SCALE, WHITE);
    cv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PongState {
        PongState {
            paddles: [40, 120],
            ball: (77, 13),
            velocity: (-2, 3),
            scores: [1, 2],
            prev_action: [PongAction::Stay; 2],
            step: 321,
            truncated: false,
        }
    }

    #[test]
    fn text_round_trips() {
        let cfg = PongConfig::default();
        let s = sample();
        assert_eq!(parse(&text(&s, &cfg, 1)).unwrap(), s);
    }

    #[test]
    fn image_has_doubled_court_size_and_tracks_ball() {
        let cfg = PongConfig::default();
        let s = sample();
        let img = image(&s, &cfg);
        assert_eq!(img.dimensions(), (320, 384));
        assert_eq!(*img.get_pixel(77 * 2 + 1, 13 * 2 + 1), WHITE);
        let mut t = s.clone();
        t.ball.1 += 5;
        assert_ne!(img, image(&t, &cfg));
    }
}
