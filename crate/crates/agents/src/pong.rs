//! Pong paddles: the built-in tracking bot and a lookahead tracker that
//! returns every ball at an angle the bot cannot reach.

use rand::Rng;
use vsarena_core::games::pong::{PongAction, PongConfig, PongState};
use vsarena_core::{DecisionContext, GameRng, Policy, PolicyError, StateView};

/// Half-width of the band in which the bot holds still.
pub const BOT_DEADZONE: i32 = 2;

fn toward(current: i32, target: i32, deadzone: i32) -> PongAction {
    if current < target - deadzone {
        PongAction::Down
    } else if current > target + deadzone {
        PongAction::Up
    } else {
        PongAction::Stay
    }
}

/// Follows the ball's center while it approaches; drifts back to the middle
/// of the court otherwise.
pub fn bot_action(s: &PongState, side: usize, cfg: &PongConfig) -> PongAction {
    let center = s.paddle_center(side, cfg);
    if s.approaching(side) {
        toward(center, s.ball_center_y(cfg), BOT_DEADZONE)
    } else {
        toward(center, cfg.height / 2, BOT_DEADZONE)
    }
}

#[derive(Clone, Debug)]
pub struct PongBot {
    pub config: PongConfig,
}

impl Default for PongBot {
    fn default() -> Self {
        Self { config: PongConfig::default() }
    }
}

impl Policy for PongBot {
    fn name(&self) -> String {
        "pong-bot".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut GameRng) -> Result<String, PolicyError> {
        let StateView::Pong(s) = ctx.env.view() else {
            return Err(PolicyError::Unsupported(ctx.env.spec().name.clone()));
        };
        Ok(bot_action(s, ctx.agent.0, &self.config).token().to_string())
    }
}

/// Where the ball meets the right paddle's face if nothing intervenes:
/// ticks until contact, ball top at contact, vertical speed at contact.
pub fn right_contact(s: &PongState, cfg: &PongConfig) -> Option<(usize, i32, i32)> {
    if s.velocity.0 <= 0 {
        return None;
    }
    let (mut x, mut y) = s.ball;
    let (vx, mut vy) = s.velocity;
    let lim = cfg.height - cfg.ball_size;
    let rf = cfg.right_face();
    for t in 1..=cfg.width as usize {
        let mut ny = y + vy;
        if ny < 0 {
            ny = -ny;
            vy = -vy;
        } else if ny > lim {
            ny = 2 * lim - ny;
            vy = -vy;
        }
        let nx = x + vx;
        if x + cfg.ball_size <= rf && nx + cfg.ball_size > rf {
            return Some((t, ny, vy));
        }
        x = nx;
        y = ny;
    }
    None
}

/// Paddle tops reachable by the right paddle, which moves in whole steps
/// from `from`.
fn reachable_top(from: i32, want_lo: i32, want_hi: i32, cfg: &PongConfig) -> Option<i32> {
    let max_top = cfg.height - cfg.paddle_len;
    let step = cfg.paddle_speed;
    (want_lo..=want_hi)
        .filter(|&p| (0..=max_top).contains(&p))
        .find(|&p| (p - from).rem_euclid(step) == 0 || p == 0 || p == max_top)
}

/// The right-side paddle: aims each return so that the bot, simulated with
/// sticky actions, misses it.
#[derive(Clone, Debug)]
pub struct Tracker {
    pub config: PongConfig,
    /// Sampled futures per candidate aim.
    pub rollouts: usize,
    plan: Option<(i32, (i32, i32))>,
}

impl Default for Tracker {
    fn default() -> Self {
        Self { config: PongConfig::default(), rollouts: 8, plan: None }
    }
}

impl Tracker {
    fn bands(&self) -> impl Iterator<Item = (i32, i32)> {
        let cfg = &self.config;
        let span = cfg.paddle_len + cfg.ball_size;
        // rel = 0 grazes the paddle edge without touching it
        (0..5).map(move |b| {
            let lo = ((b * span + 4) / 5).max(1);
            let hi = ((b + 1) * span + 4) / 5 - 1;
            (lo, hi)
        })
    }

    /// Fraction of sampled futures in which the bot fails to return the
    /// ball after we meet it with our paddle top at `top`.
    fn miss_rate(&self, s: &PongState, top: i32, rng: &mut impl Rng) -> f64 {
        let cfg = &self.config;
        let mut misses = 0;
        for _ in 0..self.rollouts {
            let mut t = s.clone();
            for _ in 0..4 * cfg.width as usize {
                let want = [bot_action(&t, 0, cfg), toward(t.paddles[1], top, 0)];
                let mut eff = want;
                for side in 0..2 {
                    if rng.gen::<f64>() < cfg.sticky_prob {
                        eff[side] = t.prev_action[side];
                    }
                }
                t.prev_action = eff;
                let vx_before = t.velocity.0;
                match t.tick(eff, cfg) {
                    Some(1) => {
                        misses += 1;
                        break;
                    }
                    Some(_) => break,
                    None => {}
                }
                if vx_before < 0 && t.velocity.0 > 0 {
                    break;
                }
            }
        }
        misses as f64 / self.rollouts as f64
    }

    fn choose_top(&self, s: &PongState, rng: &mut impl Rng) -> i32 {
        let cfg = &self.config;
        let Some((_, y, _)) = right_contact(s, cfg) else {
            return (cfg.height - cfg.paddle_len) / 2;
        };
        // rel = ball_y + ball_size - paddle_top
        let fallback = (y + cfg.ball_size / 2 - cfg.paddle_len / 2).clamp(0, cfg.height - cfg.paddle_len);
        let mut best: Option<(f64, i32, i32)> = None;
        for (lo, hi) in self.bands() {
            let Some(top) = reachable_top(s.paddles[1], y + cfg.ball_size - hi, y + cfg.ball_size - lo, cfg) else {
                continue;
            };
            let rate = self.miss_rate(s, top, rng);
            // prefer steeper returns, then the band nearest the paddle middle
            let steep = (lo - cfg.paddle_len / 2).abs();
            if best.map_or(true, |(r, st, _)| rate > r || (rate == r && steep > st)) {
                best = Some((rate, steep, top));
            }
        }
        best.map_or(fallback, |(_, _, top)| top)
    }
}

impl Policy for Tracker {
    fn name(&self) -> String {
        "tracker".into()
    }

    fn reset(&mut self, _episode_seed: u64) {
        self.plan = None;
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut GameRng) -> Result<String, PolicyError> {
        let StateView::Pong(s) = ctx.env.view() else {
            return Err(PolicyError::Unsupported(ctx.env.spec().name.clone()));
        };
        if ctx.agent.0 != 1 {
            return Err(PolicyError::Unsupported("tracker plays the right paddle".into()));
        }
        let cfg = self.config.clone();
        if !s.approaching(1) {
            self.plan = None;
            return Ok(toward(s.paddles[1], (cfg.height - cfg.paddle_len) / 2, cfg.paddle_speed / 2).token().to_string());
        }
        // replan whenever the ball's path changes
        let key = right_contact(s, &cfg).map_or((0, 0), |(t, y, _)| (y, s.step as i32 + t as i32));
        let top = match self.plan {
            Some((top, k)) if k == key => top,
            _ => {
                let top = self.choose_top(s, rng);
                self.plan = Some((top, key));
                top
            }
        };
        Ok(toward(s.paddles[1], top, 0).token().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(ball: (i32, i32), velocity: (i32, i32), paddles: [i32; 2]) -> PongState {
        PongState {
            paddles,
            ball,
            velocity,
            scores: [0, 0],
            prev_action: [PongAction::Stay; 2],
            step: 0,
            truncated: false,
        }
    }

    #[test]
    fn bot_moves_up_toward_a_high_approaching_ball() {
        let cfg = PongConfig::default();
        let s = state((80, 10), (-2, 1), [100, 88]);
        assert_eq!(bot_action(&s, 0, &cfg), PongAction::Up);
    }

    #[test]
    fn bot_recenters_when_the_ball_recedes() {
        let cfg = PongConfig::default();
        let s = state((80, 10), (2, 1), [150, 88]);
        assert_eq!(bot_action(&s, 0, &cfg), PongAction::Up);
        let s = state((80, 10), (2, 1), [10, 88]);
        assert_eq!(bot_action(&s, 0, &cfg), PongAction::Down);
        let s = state((80, 10), (2, 1), [88, 88]);
        assert_eq!(bot_action(&s, 0, &cfg), PongAction::Stay);
    }

    #[test]
    fn contact_prediction_matches_the_physics() {
        let cfg = PongConfig::default();
        let s = state((60, 150), (2, 3), [88, 0]);
        let (t, y, _) = right_contact(&s, &cfg).unwrap();
        // move our paddle out of the way and step the real physics
        let mut sim = s.clone();
        for i in 1..=t {
            let before = sim.ball;
            sim.tick([PongAction::Stay; 2], &cfg);
            if i == t {
                assert_eq!(sim.ball.1, y);
                assert!(before.0 + cfg.ball_size <= cfg.right_face());
                assert!(sim.ball.0 + cfg.ball_size > cfg.right_face());
            }
        }
    }

    #[test]
    fn bands_cover_the_face() {
        let t = Tracker::default();
        let bands: Vec<_> = t.bands().collect();
        assert_eq!(bands.first().unwrap().0, 1);
        assert_eq!(bands.last().unwrap().1, 19);
        for w in bands.windows(2) {
            assert_eq!(w[0].1 + 1, w[1].0);
        }
        let cfg = PongConfig::default();
        let span = cfg.paddle_len + cfg.ball_size;
        for (b, (lo, hi)) in bands.into_iter().enumerate() {
            assert!((lo..=hi).all(|rel| rel * 5 / span == b as i32));
        }
    }
}
