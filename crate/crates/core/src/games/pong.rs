//! Two-paddle Pong on an integer court, with sticky actions and random
//! no-op starts.
//!
//! Agent 0 is the left paddle (the built-in bot seat), agent 1 the right
//! paddle. `y` grows downward; `<UP>` decreases it.

use crate::events::{EventKind, GameEvent};
use crate::pomg::{
    check_joint, AgentId, EnvError, Environment, GameSpec, InteractionClass, JointAction,
    Observation, StateView, StepResult,
};
use crate::render;
use crate::rng::{stream_rng, GameRng, Stream};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PongAction {
    Up,
    Down,
    Stay,
}

impl PongAction {
    pub const ALL: [PongAction; 3] = [PongAction::Up, PongAction::Down, PongAction::Stay];

    pub fn token(self) -> &'static str {
        match self {
            PongAction::Up => "<UP>",
            PongAction::Down => "<DOWN>",
            PongAction::Stay => "<STAY>",
        }
    }

    pub fn parse(token: &str) -> Option<PongAction> {
        PongAction::ALL.into_iter().find(|a| a.token() == token)
    }

    fn dir(self) -> i32 {
        match self {
            PongAction::Up => -1,
            PongAction::Down => 1,
            PongAction::Stay => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PongConfig {
    pub width: i32,
    pub height: i32,
    pub paddle_len: i32,
    pub paddle_width: i32,
    /// Distance from each side wall to the outer edge of its paddle.
    pub paddle_margin: i32,
    /// Speed of the right (evaluated) paddle.
    pub paddle_speed: i32,
    /// Speed of the left paddle.
    pub bot_speed: i32,
    pub ball_size: i32,
    pub ball_vx: i32,
    pub max_vy: i32,
    pub sticky_prob: f64,
    pub noop_min: u32,
    pub noop_max: u32,
    pub frame_stack: usize,
    pub points_to_win: u8,
    /// Safety cap on agent steps; reaching it truncates the episode.
    pub max_steps: usize,
}

impl Default for PongConfig {
    fn default() -> Self {
        Self {
            width: 160,
            height: 192,
            paddle_len: 16,
            paddle_width: 4,
            paddle_margin: 8,
            paddle_speed: 4,
            bot_speed: 2,
            ball_size: 4,
            ball_vx: 2,
            max_vy: 3,
            sticky_prob: 0.25,
            noop_min: 1,
            noop_max: 30,
            frame_stack: 4,
            points_to_win: 3,
            max_steps: 3000,
        }
    }
}

impl PongConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: &str| Err(EnvError::Config(m.to_string()));
        if !(0.0..=1.0).contains(&self.sticky_prob) {
            return bad("sticky_prob must lie in [0, 1]");
        }
        if self.frame_stack == 0 {
            return bad("frame stack must be at least 1");
        }
        if self.noop_min > self.noop_max {
            return bad("noop_min exceeds noop_max");
        }
        if self.paddle_len <= 0 || self.paddle_len > self.height || self.ball_size <= 0 {
            return bad("paddle and ball sizes must fit the court");
        }
        if self.ball_vx <= 0 || self.max_vy >= self.height {
            return bad("ball speed out of range");
        }
        Ok(())
    }

    /// x of the inner face of the left paddle.
    pub fn left_face(&self) -> i32 {
        self.paddle_margin + self.paddle_width
    }

    /// x of the inner face of the right paddle.
    pub fn right_face(&self) -> i32 {
        self.width - self.paddle_margin - self.paddle_width
    }

    pub fn paddle_x(&self, side: usize) -> i32 {
        if side == 0 {
            self.paddle_margin
        } else {
            self.right_face()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PongState {
    /// Top edge of each paddle.
    pub paddles: [i32; 2],
    /// Top-left corner of the ball.
    pub ball: (i32, i32),
    pub velocity: (i32, i32),
    pub scores: [u8; 2],
    pub prev_action: [PongAction; 2],
    pub step: usize,
    pub truncated: bool,
}

impl PongState {
    pub fn is_terminal(&self, cfg: &PongConfig) -> bool {
        self.truncated || self.scores.iter().any(|&s| s >= cfg.points_to_win)
    }

    pub fn ball_center_y(&self, cfg: &PongConfig) -> i32 {
        self.ball.1 + cfg.ball_size / 2
    }

    pub fn paddle_center(&self, side: usize, cfg: &PongConfig) -> i32 {
        self.paddles[side] + cfg.paddle_len / 2
    }

    /// Ball moving toward `side`.
    pub fn approaching(&self, side: usize) -> bool {
        if side == 0 {
            self.velocity.0 < 0
        } else {
            self.velocity.0 > 0
        }
    }

    fn centered(cfg: &PongConfig) -> Self {
        let py = (cfg.height - cfg.paddle_len) / 2;
        Self {
            paddles: [py, py],
            ball: ((cfg.width - cfg.ball_size) / 2, (cfg.height - cfg.ball_size) / 2),
            velocity: (cfg.ball_vx, 1),
            scores: [0, 0],
            prev_action: [PongAction::Stay, PongAction::Stay],
            step: 0,
            truncated: false,
        }
    }

    /// Places the ball at the center heading toward `toward`, with a random
    /// vertical component.
    fn serve(&mut self, cfg: &PongConfig, toward: usize, rng: &mut GameRng) {
        self.ball = ((cfg.width - cfg.ball_size) / 2, (cfg.height - cfg.ball_size) / 2);
        let vx = if toward == 0 { -cfg.ball_vx } else { cfg.ball_vx };
        let choices = [-2, -1, 1, 2];
        self.velocity = (vx, choices[rng.gen_range(0..choices.len())].clamp(-cfg.max_vy, cfg.max_vy));
    }

    /// Vertical speed after a paddle hit, from five equal bands along the
    /// paddle face.
    pub fn bounce_vy(ball_y: i32, paddle_y: i32, vy: i32, cfg: &PongConfig) -> i32 {
        let span = cfg.paddle_len + cfg.ball_size;
        let rel = (ball_y + cfg.ball_size - paddle_y).clamp(0, span - 1);
        let band = rel * 5 / span;
        let out = match band {
            0 => -3,
            1 => -2,
            2 => {
                if vy < 0 {
                    -1
                } else {
                    1
                }
            }
            3 => 2,
            _ => 3,
        };
        out.clamp(-cfg.max_vy, cfg.max_vy)
    }

    fn overlaps(ball_y: i32, paddle_y: i32, cfg: &PongConfig) -> bool {
        ball_y + cfg.ball_size > paddle_y && ball_y < paddle_y + cfg.paddle_len
    }

    /// One physics tick with already-resolved actions. Returns the scoring
    /// side, if any.
    pub fn tick(&mut self, actions: [PongAction; 2], cfg: &PongConfig) -> Option<usize> {
        for (side, a) in actions.iter().enumerate() {
            let speed = if side == 0 { cfg.bot_speed } else { cfg.paddle_speed };
            self.paddles[side] =
                (self.paddles[side] + a.dir() * speed).clamp(0, cfg.height - cfg.paddle_len);
        }
        let (px, py) = self.ball;
        let (mut vx, mut vy) = self.velocity;
        let lim = cfg.height - cfg.ball_size;
        let mut y = py + vy;
        if y < 0 {
            y = -y;
            vy = -vy;
        } else if y > lim {
            y = 2 * lim - y;
            vy = -vy;
        }
        let mut x = px + vx;
        let lf = cfg.left_face();
        let rf = cfg.right_face();
        if vx < 0 && px >= lf && x < lf && Self::overlaps(y, self.paddles[0], cfg) {
            x = 2 * lf - x;
            vx = -vx;
            vy = Self::bounce_vy(y, self.paddles[0], vy, cfg);
        } else if vx > 0 && px + cfg.ball_size <= rf && x + cfg.ball_size > rf && Self::overlaps(y, self.paddles[1], cfg) {
            x = 2 * (rf - cfg.ball_size) - x;
            vx = -vx;
            vy = Self::bounce_vy(y, self.paddles[1], vy, cfg);
        }
        self.ball = (x, y);
        self.velocity = (vx, vy);
        if x < 0 {
            Some(1)
        } else if x > cfg.width - cfg.ball_size {
            Some(0)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct PongEnv {
    spec: GameSpec,
    config: PongConfig,
    seed: u64,
    state: PongState,
    history: Vec<PongState>,
    sticky_rng: GameRng,
    serve_rng: GameRng,
    noop_ticks: u32,
}

impl PongEnv {
    pub fn new(config: PongConfig, seed: u64) -> Result<Self, EnvError> {
        config.validate()?;
        let vocab = PongAction::ALL.iter().map(|a| a.token().to_string()).collect();
        let spec = GameSpec::new(
            "pong",
            InteractionClass::Competitive,
            Some(config.max_steps),
            vocab,
            config.frame_stack,
            false,
        );
        let state = PongState::centered(&config);
        let mut env = Self {
            spec,
            seed,
            history: Vec::new(),
            state,
            sticky_rng: stream_rng(seed, Stream::Sticky),
            serve_rng: stream_rng(seed, Stream::Serve),
            noop_ticks: 0,
            config,
        };
        env.reset(seed);
        Ok(env)
    }

    pub fn state(&self) -> &PongState {
        &self.state
    }

    pub fn config(&self) -> &PongConfig {
        &self.config
    }

    /// Number of forced idle ticks run at the start of this episode.
    pub fn noop_ticks(&self) -> u32 {
        self.noop_ticks
    }

    pub fn window(&self) -> Vec<&PongState> {
        let depth = self.config.frame_stack;
        let pad = depth.saturating_sub(self.history.len());
        let mut out: Vec<&PongState> = (0..pad).map(|_| &self.history[0]).collect();
        out.extend(self.history.iter());
        out
    }

    fn push_history(&mut self) {
        self.history.push(self.state.clone());
        if self.history.len() > self.config.frame_stack {
            self.history.remove(0);
        }
    }
}

impl Environment for PongEnv {
    fn spec(&self) -> &GameSpec {
        &self.spec
    }

    fn reset(&mut self, seed: u64) {
        let cfg = &self.config;
        self.seed = seed;
        self.sticky_rng = stream_rng(seed, Stream::Sticky);
        self.serve_rng = stream_rng(seed, Stream::Serve);
        let mut noop_rng = stream_rng(seed, Stream::NoopStart);
        self.noop_ticks = noop_rng.gen_range(cfg.noop_min..=cfg.noop_max);
        let mut state = PongState::centered(cfg);
        // the opening serve goes to the built-in (left) paddle
        state.serve(cfg, 0, &mut self.serve_rng);
        for _ in 0..self.noop_ticks {
            state.tick([PongAction::Stay, PongAction::Stay], cfg);
        }
        self.state = state;
        self.history = vec![self.state.clone()];
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError> {
        check_joint(self, joint)?;
        let submitted = [
            PongAction::parse(&joint.0[0]).expect("legal token parses"),
            PongAction::parse(&joint.0[1]).expect("legal token parses"),
        ];
        let mut effective = submitted;
        for side in 0..2 {
            // one draw per side per step keeps the stream aligned
            let u: f64 = self.sticky_rng.gen();
            if u < self.config.sticky_prob {
                effective[side] = self.state.prev_action[side];
            }
        }
        self.state.prev_action = effective;
        let mut rewards = vec![0.0, 0.0];
        let mut events = Vec::new();
        if let Some(scorer) = self.state.tick(effective, &self.config) {
            self.state.scores[scorer] += 1;
            rewards[scorer] = 1.0;
            rewards[1 - scorer] = -1.0;
            events.push(
                GameEvent::new(EventKind::Point, vec![scorer])
                    .with_detail(format!("{}-{}", self.state.scores[0], self.state.scores[1])),
            );
            let cfg = self.config.clone();
            self.state.serve(&cfg, 1 - scorer, &mut self.serve_rng);
        }
        self.state.step += 1;
        if self.state.step >= self.config.max_steps && !self.state.is_terminal(&self.config) {
            self.state.truncated = true;
        }
        self.push_history();
        Ok(StepResult { rewards, terminal: self.state.is_terminal(&self.config), events })
    }

    fn legal_actions(&self, _agent: AgentId) -> Vec<String> {
        if self.is_terminal() {
            Vec::new()
        } else {
            PongAction::ALL.iter().map(|a| a.token().to_string()).collect()
        }
    }

    fn is_terminal(&self) -> bool {
        self.state.is_terminal(&self.config)
    }

    fn step_index(&self) -> usize {
        self.state.step
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn observe_text(&self, agent: AgentId) -> String {
        render::pong::text(&self.state, &self.config, agent.0)
    }

    fn observe(&self, agent: AgentId) -> Observation {
        Observation {
            frames: self.window().into_iter().map(|s| render::pong::image(s, &self.config)).collect(),
            text: self.observe_text(agent),
        }
    }

    fn view(&self) -> StateView<'_> {
        StateView::Pong(&self.state)
    }

    fn state_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.state).expect("state serializes")
    }

    fn box_clone(&self) -> Box<dyn Environment> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> PongConfig {
        PongConfig::default()
    }

    #[test]
    fn ball_past_right_paddle_scores_left() {
        let c = cfg();
        let mut s = PongState::centered(&c);
        s.paddles[1] = 0;
        s.ball = (c.right_face() - c.ball_size, 150);
        s.velocity = (2, 0);
        let mut scorer = None;
        for _ in 0..20 {
            if let Some(p) = s.tick([PongAction::Stay, PongAction::Stay], &c) {
                scorer = Some(p);
                break;
            }
        }
        assert_eq!(scorer, Some(0));
    }

    #[test]
    fn paddle_returns_ball() {
        let c = cfg();
        let mut s = PongState::centered(&c);
        s.paddles[1] = 90;
        s.ball = (c.right_face() - c.ball_size - 2, 96);
        s.velocity = (2, 0);
        s.tick([PongAction::Stay, PongAction::Stay], &c);
        s.tick([PongAction::Stay, PongAction::Stay], &c);
        assert!(s.velocity.0 < 0);
        assert!(s.ball.0 + c.ball_size <= c.right_face());
    }

    #[test]
    fn bounce_bands_cover_range() {
        let c = cfg();
        let vys: Vec<i32> = (-3..=17).map(|y| PongState::bounce_vy(100 + y, 100, 1, &c)).collect();
        assert_eq!(vys.first(), Some(&-3));
        assert_eq!(vys.last(), Some(&3));
        assert!(vys.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(PongState::bounce_vy(100 + 6, 100, -2, &c), -1);
    }

    #[test]
    fn episode_ends_at_three_points() {
        let mut e = PongEnv::new(cfg(), 5).unwrap();
        let mut points = [0u8; 2];
        while !e.is_terminal() {
            let r = e.step(&JointAction::new(["<STAY>", "<STAY>"])).unwrap();
            for ev in r.events {
                points[ev.actors[0]] += 1;
            }
        }
        assert_eq!(points.iter().copied().max(), Some(3));
        assert_eq!(points, e.state().scores);
        assert!(!e.state().truncated);
    }

    #[test]
    fn noop_start_within_range_and_deterministic() {
        for seed in 0..50 {
            let e = PongEnv::new(cfg(), seed).unwrap();
            assert!((1..=30).contains(&e.noop_ticks()));
            assert_eq!(e.state(), PongEnv::new(cfg(), seed).unwrap().state());
        }
    }

    #[test]
    fn frames_pad_then_roll() {
        let mut e = PongEnv::new(cfg(), 1).unwrap();
        let w = e.window();
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|s| *s == w[0]));
        for _ in 0..4 {
            e.step(&JointAction::new(["<STAY>", "<STAY>"])).unwrap();
        }
        let w = e.window();
        assert_eq!(w.last().unwrap().step, 4);
        assert_eq!(w[0].step, 1);
        for i in 0..3 {
            assert_ne!(w[i], w[i + 1]);
        }
    }

    #[test]
    fn sticky_rate_is_a_quarter() {
        let mut e = PongEnv::new(cfg(), 9).unwrap();
        let mut sticky = 0;
        let mut n = 0;
        for i in 0..4000 {
            if e.is_terminal() {
                e.reset(i);
            }
            // alternate so the previous action always differs
            let tok = if i % 2 == 0 { "<UP>" } else { "<DOWN>" };
            let before = e.state().prev_action[1];
            e.step(&JointAction::new(["<STAY>", tok])).unwrap();
            if before != PongAction::parse(tok).unwrap() {
                n += 1;
                if e.state().prev_action[1] == before {
                    sticky += 1;
                }
            }
        }
        let rate = sticky as f64 / n as f64;
        assert!((rate - 0.25).abs() < 0.03, "rate {rate}");
    }

    #[test]
    fn zero_sticky_is_deterministic_given_actions() {
        let c = PongConfig { sticky_prob: 0.0, ..cfg() };
        let mut a = PongEnv::new(c.clone(), 4).unwrap();
        let mut b = PongEnv::new(c, 4).unwrap();
        for i in 0..300 {
            if a.is_terminal() {
                break;
            }
            let t = ["<UP>", "<DOWN>", "<STAY>"][i % 3];
            a.step(&JointAction::new([t, "<STAY>"])).unwrap();
            b.step(&JointAction::new([t, "<STAY>"])).unwrap();
            assert_eq!(a.state(), b.state());
            assert_eq!(a.state().prev_action[0], PongAction::parse(t).unwrap());
        }
    }

    proptest! {
        #[test]
        fn ball_and_paddles_stay_in_court(seed in 0u64..1000, moves in prop::collection::vec(0usize..3, 1..400)) {
            let c = cfg();
            let mut e = PongEnv::new(c.clone(), seed).unwrap();
            for m in moves {
                if e.is_terminal() { break; }
                let t = PongAction::ALL[m].token();
                e.step(&JointAction::new([t, t])).unwrap();
                let s = e.state();
                prop_assert!((0..=c.height - c.ball_size).contains(&s.ball.1));
                prop_assert!((0..=c.width - c.ball_size).contains(&s.ball.0));
                prop_assert!(s.velocity.1.abs() <= c.max_vy);
                prop_assert!(s.velocity.0.abs() == c.ball_vx);
                for p in s.paddles {
                    prop_assert!((0..=c.height - c.paddle_len).contains(&p));
                }
                prop_assert!(s.scores.iter().map(|&x| x as u32).sum::<u32>() <= 5);
            }
        }
    }
}
