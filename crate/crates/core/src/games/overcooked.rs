//! A single-kitchen Overcooked with the three-onion soup recipe.
//!
//! Layout characters: `X` counter, `O` onion source, `D` dish source, `P`
//! pot, `S` serving window, `.` or space floor, `1`/`2` chef spawns.

use crate::events::{EventKind, GameEvent};
use crate::games::grid::Pos;
use crate::pomg::{
    check_joint, AgentId, EnvError, Environment, GameSpec, InteractionClass, JointAction,
    Observation, StateView, StepResult,
};
use crate::render;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

pub const INTERACT: &str = "<INTERACT>";
pub const SOUP_ONIONS: u8 = 3;

pub const DEFAULT_LAYOUT: [&str; 4] = ["XXPXX", "O1..D", "X..2X", "XXSXX"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tile {
    Floor,
    Counter,
    OnionSource,
    DishSource,
    Pot,
    Serve,
}

impl Tile {
    pub fn symbol(self) -> char {
        match self {
            Tile::Floor => '.',
            Tile::Counter => 'X',
            Tile::OnionSource => 'O',
            Tile::DishSource => 'D',
            Tile::Pot => 'P',
            Tile::Serve => 'S',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tile::Floor => "floor",
            Tile::Counter => "counter",
            Tile::OnionSource => "onion source",
            Tile::DishSource => "dish source",
            Tile::Pot => "pot",
            Tile::Serve => "serving window",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub width: i32,
    pub height: i32,
    pub tiles: Vec<Tile>,
    pub spawns: [Pos; 2],
}

impl Layout {
    pub fn parse<S: AsRef<str>>(rows: &[S]) -> Result<Self, EnvError> {
        let height = rows.len() as i32;
        let width = rows.first().map(|r| r.as_ref().chars().count()).unwrap_or(0) as i32;
        if height == 0 || width == 0 {
            return Err(EnvError::Config("empty kitchen layout".into()));
        }
        let mut tiles = Vec::with_capacity((width * height) as usize);
        let mut spawns: [Option<Pos>; 2] = [None, None];
        for (y, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.chars().count() as i32 != width {
                return Err(EnvError::Config(format!("layout row {y} has the wrong width")));
            }
            for (x, c) in row.chars().enumerate() {
                let tile = match c {
                    'X' => Tile::Counter,
                    'O' => Tile::OnionSource,
                    'D' => Tile::DishSource,
                    'P' => Tile::Pot,
                    'S' => Tile::Serve,
                    '.' | ' ' => Tile::Floor,
                    '1' | '2' => {
                        let i = if c == '1' { 0 } else { 1 };
                        spawns[i] = Some(Pos::new(x as i32, y as i32));
                        Tile::Floor
                    }
                    other => {
                        return Err(EnvError::Config(format!("unknown layout character `{other}`")))
                    }
                };
                tiles.push(tile);
            }
        }
        let layout = Layout {
            width,
            height,
            tiles,
            spawns: [
                spawns[0].ok_or_else(|| EnvError::Config("layout lacks chef 1 spawn".into()))?,
                spawns[1].ok_or_else(|| EnvError::Config("layout lacks chef 2 spawn".into()))?,
            ],
        };
        for t in [Tile::Pot, Tile::OnionSource, Tile::DishSource, Tile::Serve] {
            if layout.find(t).is_empty() {
                return Err(EnvError::Config(format!("layout lacks a {}", t.name())));
            }
        }
        if layout.find(Tile::Pot).len() != 1 {
            return Err(EnvError::Config("layout must contain exactly one pot".into()));
        }
        Ok(layout)
    }

    pub fn standard() -> Self {
        Self::parse(&DEFAULT_LAYOUT).expect("default layout is valid")
    }

    pub fn tile(&self, p: Pos) -> Tile {
        if p.x < 0 || p.y < 0 || p.x >= self.width || p.y >= self.height {
            Tile::Counter
        } else {
            self.tiles[(p.y * self.width + p.x) as usize]
        }
    }

    pub fn find(&self, tile: Tile) -> Vec<Pos> {
        (0..self.height)
            .flat_map(|y| (0..self.width).map(move |x| Pos::new(x, y)))
            .filter(|&p| self.tile(p) == tile)
            .collect()
    }

    pub fn pot_pos(&self) -> Pos {
        self.find(Tile::Pot)[0]
    }

    pub fn rows(&self) -> Vec<String> {
        (0..self.height)
            .map(|y| (0..self.width).map(|x| self.tile(Pos::new(x, y)).symbol()).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Facing {
    Up,
    Down,
    Left,
    Right,
}

impl Facing {
    pub fn delta(self) -> (i32, i32) {
        match self {
            Facing::Up => (0, -1),
            Facing::Down => (0, 1),
            Facing::Left => (-1, 0),
            Facing::Right => (1, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Facing::Up => "up",
            Facing::Down => "down",
            Facing::Left => "left",
            Facing::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Facing> {
        [Facing::Up, Facing::Down, Facing::Left, Facing::Right].into_iter().find(|f| f.name() == s)
    }

    pub fn ahead(self, p: Pos) -> Pos {
        let (dx, dy) = self.delta();
        Pos::new(p.x + dx, p.y + dy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChefAction {
    Move(Facing),
    Stay,
    Interact,
}

impl ChefAction {
    pub const ALL: [ChefAction; 6] = [
        ChefAction::Move(Facing::Up),
        ChefAction::Move(Facing::Down),
        ChefAction::Move(Facing::Left),
        ChefAction::Move(Facing::Right),
        ChefAction::Stay,
        ChefAction::Interact,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ChefAction::Move(Facing::Up) => "<UP>",
            ChefAction::Move(Facing::Down) => "<DOWN>",
            ChefAction::Move(Facing::Left) => "<LEFT>",
            ChefAction::Move(Facing::Right) => "<RIGHT>",
            ChefAction::Stay => "<STAY>",
            ChefAction::Interact => INTERACT,
        }
    }

    pub fn parse(token: &str) -> Option<ChefAction> {
        ChefAction::ALL.into_iter().find(|a| a.token() == token)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Item {
    Onion,
    Dish,
    Soup { onions: u8 },
}

impl Item {
    pub fn describe(self) -> String {
        match self {
            Item::Onion => "onion".into(),
            Item::Dish => "dish".into(),
            Item::Soup { onions } => format!("soup ({onions} onions)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chef {
    pub pos: Pos,
    pub facing: Facing,
    pub held: Option<Item>,
}

/// `cooking` is `None` until the cook is started; afterwards it counts
/// elapsed ticks up to the cook time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PotState {
    pub onions: u8,
    pub cooking: Option<u8>,
}

impl PotState {
    pub fn is_ready(&self, cook_time: u8) -> bool {
        self.cooking.is_some_and(|t| t >= cook_time)
    }

    pub fn is_active(&self) -> bool {
        self.onions > 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvercookedRewards {
    pub onion_added: f64,
    pub dish_pickup: f64,
    pub soup_plated: f64,
    pub delivery: f64,
}

impl Default for OvercookedRewards {
    fn default() -> Self {
        Self { onion_added: 2.0, dish_pickup: 2.0, soup_plated: 2.0, delivery: 10.0 }
    }
}

impl OvercookedRewards {
    /// Shared reward carried by one event.
    pub fn of_event(&self, e: &GameEvent) -> f64 {
        match e.kind {
            EventKind::OnionAdded => self.onion_added,
            EventKind::DishPickup if e.detail.as_deref() != Some("idle") => self.dish_pickup,
            EventKind::SoupPlated => self.soup_plated,
            EventKind::SoupDelivered => self.delivery,
            _ => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvercookedConfig {
    pub layout: Vec<String>,
    pub max_steps: usize,
    pub cook_time: u8,
    pub history_depth: usize,
    pub rewards: OvercookedRewards,
}

impl Default for OvercookedConfig {
    fn default() -> Self {
        Self {
            layout: DEFAULT_LAYOUT.iter().map(|s| s.to_string()).collect(),
            max_steps: 50,
            cook_time: 5,
            history_depth: 4,
            rewards: OvercookedRewards::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvercookedState {
    pub layout: Layout,
    pub chefs: [Chef; 2],
    pub pot: PotState,
    pub cook_time: u8,
    pub max_steps: usize,
    pub deliveries: u32,
    pub step: usize,
}

impl OvercookedState {
    pub fn new(layout: Layout, cook_time: u8, max_steps: usize) -> Self {
        let chefs = layout.spawns.map(|pos| Chef { pos, facing: Facing::Up, held: None });
        Self { layout, chefs, pot: PotState::default(), cook_time, max_steps, deliveries: 0, step: 0 }
    }

    pub fn is_terminal(&self) -> bool {
        self.step >= self.max_steps
    }

    pub fn walkable(&self, p: Pos) -> bool {
        self.layout.tile(p) == Tile::Floor
    }

    /// Advances one tick. Movement is simultaneous; interactions resolve in
    /// agent order; the pot timer ticks last.
    pub fn advance(&mut self, actions: [ChefAction; 2]) -> Vec<GameEvent> {
        let old = [self.chefs[0].pos, self.chefs[1].pos];
        let mut target = old;
        for i in 0..2 {
            if let ChefAction::Move(dir) = actions[i] {
                self.chefs[i].facing = dir;
                let to = dir.ahead(old[i]);
                if self.walkable(to) {
                    target[i] = to;
                }
            }
        }
        let collide = target[0] == target[1] || (target[0] == old[1] && target[1] == old[0]);
        if !collide {
            self.chefs[0].pos = target[0];
            self.chefs[1].pos = target[1];
        }

        let mut events = Vec::new();
        for i in 0..2 {
            if actions[i] == ChefAction::Interact {
                self.interact(i, &mut events);
            }
        }

        if let Some(t) = self.pot.cooking {
            let started_now = events.iter().any(|e| e.kind == EventKind::CookStarted);
            if !started_now && t < self.cook_time {
                self.pot.cooking = Some(t + 1);
            }
        }
        self.step += 1;
        events
    }

    fn interact(&mut self, i: usize, events: &mut Vec<GameEvent>) {
        let chef = self.chefs[i];
        let facing = chef.facing.ahead(chef.pos);
        let ev = |k| GameEvent::new(k, vec![i]);
        match (self.layout.tile(facing), chef.held) {
            (Tile::OnionSource, None) => {
                self.chefs[i].held = Some(Item::Onion);
                events.push(ev(EventKind::OnionPickup));
            }
            (Tile::DishSource, None) => {
                self.chefs[i].held = Some(Item::Dish);
                let e = ev(EventKind::DishPickup);
                events.push(if self.pot.is_active() { e } else { e.with_detail("idle") });
            }
            (Tile::Pot, Some(Item::Onion)) if self.pot.cooking.is_none() && self.pot.onions < SOUP_ONIONS => {
                self.pot.onions += 1;
                self.chefs[i].held = None;
                events.push(ev(EventKind::OnionAdded).with_detail(self.pot.onions.to_string()));
            }
            (Tile::Pot, None) if self.pot.cooking.is_none() && self.pot.onions > 0 => {
                self.pot.cooking = Some(0);
                events.push(ev(EventKind::CookStarted).with_detail(self.pot.onions.to_string()));
            }
            (Tile::Pot, Some(Item::Dish)) if self.pot.is_ready(self.cook_time) => {
                self.chefs[i].held = Some(Item::Soup { onions: self.pot.onions });
                self.pot = PotState::default();
                events.push(ev(EventKind::SoupPlated));
            }
            (Tile::Serve, Some(Item::Soup { onions })) => {
                self.chefs[i].held = None;
                if onions == SOUP_ONIONS {
                    self.deliveries += 1;
                    events.push(ev(EventKind::SoupDelivered));
                } else {
                    events.push(ev(EventKind::IncompleteSoupDelivered).with_detail(onions.to_string()));
                }
            }
            _ => {}
        }
    }

    /// Shortest walking distance between floor cells, treating `blocked` as
    /// impassable. `None` if unreachable.
    pub fn path_length(&self, from: Pos, to: Pos, blocked: Option<Pos>) -> Option<usize> {
        self.first_step(from, to, blocked).map(|(d, _)| d)
    }

    /// BFS from `from` to `to`; returns the distance and the first move
    /// (`None` when already there). Neighbors are expanded up, down, left,
    /// right, so ties resolve in that order.
    pub fn first_step(&self, from: Pos, to: Pos, blocked: Option<Pos>) -> Option<(usize, Option<Facing>)> {
        if from == to {
            return Some((0, None));
        }
        let dirs = [Facing::Up, Facing::Down, Facing::Left, Facing::Right];
        let mut seen = vec![false; (self.layout.width * self.layout.height) as usize];
        let idx = |p: Pos| (p.y * self.layout.width + p.x) as usize;
        let mut queue = VecDeque::new();
        seen[idx(from)] = true;
        for d in dirs {
            let n = d.ahead(from);
            if self.walkable(n) && Some(n) != blocked && !seen[idx(n)] {
                seen[idx(n)] = true;
                queue.push_back((n, 1usize, d));
            }
        }
        while let Some((p, dist, first)) = queue.pop_front() {
            if p == to {
                return Some((dist, Some(first)));
            }
            for d in dirs {
                let n = d.ahead(p);
                if self.walkable(n) && Some(n) != blocked && !seen[idx(n)] {
                    seen[idx(n)] = true;
                    queue.push_back((n, dist + 1, first));
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct OvercookedEnv {
    spec: GameSpec,
    config: OvercookedConfig,
    seed: u64,
    state: OvercookedState,
    /// Recent states, oldest first, at most `history_depth` long.
    history: Vec<OvercookedState>,
}

impl OvercookedEnv {
    pub fn new(config: OvercookedConfig, seed: u64) -> Result<Self, EnvError> {
        let layout = Layout::parse(&config.layout)?;
        if config.history_depth == 0 {
            return Err(EnvError::Config("history depth must be at least 1".into()));
        }
        let vocab = ChefAction::ALL.iter().map(|a| a.token().to_string()).collect();
        let spec = GameSpec::new(
            "overcooked",
            InteractionClass::Cooperative,
            Some(config.max_steps),
            vocab,
            config.history_depth,
            false,
        );
        let state = OvercookedState::new(layout, config.cook_time, config.max_steps);
        Ok(Self { spec, seed, history: vec![state.clone()], state, config })
    }

    pub fn state(&self) -> &OvercookedState {
        &self.state
    }

    pub fn config(&self) -> &OvercookedConfig {
        &self.config
    }

    pub fn set_state(&mut self, state: OvercookedState) {
        self.history = vec![state.clone()];
        self.state = state;
    }

    /// The frame window: `history_depth` states, padded at the start by
    /// repeating the oldest.
    pub fn window(&self) -> Vec<&OvercookedState> {
        let depth = self.config.history_depth;
        let mut out: Vec<&OvercookedState> = Vec::with_capacity(depth);
        let pad = depth.saturating_sub(self.history.len());
        for _ in 0..pad {
            out.push(&self.history[0]);
        }
        out.extend(self.history.iter());
        out
    }
}

impl Environment for OvercookedEnv {
    fn spec(&self) -> &GameSpec {
        &self.spec
    }

    fn reset(&mut self, seed: u64) {
        self.seed = seed;
        let layout = Layout::parse(&self.config.layout).expect("validated at construction");
        self.state = OvercookedState::new(layout, self.config.cook_time, self.config.max_steps);
        self.history = vec![self.state.clone()];
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError> {
        check_joint(self, joint)?;
        let actions = [
            ChefAction::parse(&joint.0[0]).expect("legal token parses"),
            ChefAction::parse(&joint.0[1]).expect("legal token parses"),
        ];
        let events = self.state.advance(actions);
        let r: f64 = events.iter().map(|e| self.config.rewards.of_event(e)).sum();
        self.history.push(self.state.clone());
        if self.history.len() > self.config.history_depth {
            self.history.remove(0);
        }
        Ok(StepResult { rewards: vec![r, r], terminal: self.state.is_terminal(), events })
    }

    fn legal_actions(&self, _agent: AgentId) -> Vec<String> {
        if self.state.is_terminal() {
            Vec::new()
        } else {
            ChefAction::ALL.iter().map(|a| a.token().to_string()).collect()
        }
    }

    fn is_terminal(&self) -> bool {
        self.state.is_terminal()
    }

    fn step_index(&self) -> usize {
        self.state.step
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn observe_text(&self, agent: AgentId) -> String {
        render::overcooked::text(&self.state, agent.0)
    }

    fn observe(&self, agent: AgentId) -> Observation {
        Observation {
            frames: self.window().into_iter().map(render::overcooked::image).collect(),
            text: self.observe_text(agent),
        }
    }

    fn view(&self) -> StateView<'_> {
        StateView::Overcooked(&self.state)
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

    fn env() -> OvercookedEnv {
        OvercookedEnv::new(OvercookedConfig::default(), 0).unwrap()
    }

    fn play(env: &mut OvercookedEnv, script: &[(&str, &str)]) -> f64 {
        let mut total = 0.0;
        for (a, b) in script {
            total += env.step(&JointAction::new([*a, *b])).unwrap().rewards[0];
        }
        total
    }

    const ONION: [(&str, &str); 5] = [
        ("<LEFT>", "<STAY>"),
        ("<INTERACT>", "<STAY>"),
        ("<RIGHT>", "<STAY>"),
        ("<UP>", "<STAY>"),
        ("<INTERACT>", "<STAY>"),
    ];

    #[test]
    fn layout_parses() {
        let l = Layout::standard();
        assert_eq!((l.width, l.height), (5, 4));
        assert_eq!(l.pot_pos(), Pos::new(2, 0));
        assert_eq!(l.spawns, [Pos::new(1, 1), Pos::new(3, 2)]);
        assert_eq!(l.rows()[1], "O...D");
        assert!(Layout::parse(&["XXX", "X1X"]).is_err());
    }

    #[test]
    fn onion_added_rewards_both_chefs() {
        let mut e = env();
        play(&mut e, &ONION[..4]);
        let r = e.step(&JointAction::new(["<INTERACT>", "<STAY>"])).unwrap();
        assert_eq!(r.rewards, vec![2.0, 2.0]);
        assert_eq!(e.state().pot.onions, 1);
    }

    #[test]
    fn chefs_block_each_other() {
        let mut s = OvercookedState::new(Layout::standard(), 5, 50);
        s.chefs[1].pos = Pos::new(3, 1);
        // both step into (2,1)
        s.advance([ChefAction::Move(Facing::Right), ChefAction::Move(Facing::Left)]);
        assert_eq!(s.chefs[0].pos, Pos::new(1, 1));
        assert_eq!(s.chefs[1].pos, Pos::new(3, 1));
        assert_eq!(s.chefs[0].facing, Facing::Right);
        // counters are impassable
        s.advance([ChefAction::Move(Facing::Up), ChefAction::Stay]);
        assert_eq!(s.chefs[0].pos, Pos::new(1, 1));
    }

    /// Hand-scripted single soup: three onions, cook, dish, plate, deliver.
    #[test]
    fn full_soup_cycle_returns_twenty() {
        let mut e = env();
        let mut total = 0.0;
        for _ in 0..3 {
            total += play(&mut e, &ONION);
        }
        assert_eq!(total, 6.0);
        // chef 2 fetches a dish while chef 1 starts the cook
        total += play(
            &mut e,
            &[
                ("<INTERACT>", "<UP>"),
                ("<STAY>", "<RIGHT>"),
                ("<STAY>", "<INTERACT>"),
                ("<LEFT>", "<STAY>"),
                ("<STAY>", "<LEFT>"),
                ("<STAY>", "<UP>"),
            ],
        );
        assert_eq!(e.state().pot.cooking, Some(5));
        total += play(&mut e, &[("<STAY>", "<INTERACT>"), ("<STAY>", "<DOWN>"), ("<STAY>", "<INTERACT>")]);
        assert_eq!(total, 20.0);
        assert_eq!(e.state().deliveries, 1);
    }

    #[test]
    fn premature_two_onion_cook_earns_no_delivery() {
        let mut e = env();
        let mut events = Vec::new();
        for _ in 0..2 {
            for (a, b) in ONION {
                events.extend(e.step(&JointAction::new([a, b])).unwrap().events);
            }
        }
        let script = [
            ("<INTERACT>", "<UP>"),
            ("<STAY>", "<RIGHT>"),
            ("<STAY>", "<INTERACT>"),
            ("<LEFT>", "<STAY>"),
            ("<STAY>", "<LEFT>"),
            ("<STAY>", "<UP>"),
            ("<STAY>", "<INTERACT>"),
            ("<STAY>", "<DOWN>"),
            ("<STAY>", "<INTERACT>"),
        ];
        let mut delivery_reward = 0.0;
        for (a, b) in script {
            let r = e.step(&JointAction::new([a, b])).unwrap();
            if r.events.iter().any(|ev| ev.kind == EventKind::IncompleteSoupDelivered) {
                delivery_reward = r.rewards[0];
            }
            events.extend(r.events);
        }
        assert!(events.iter().any(|ev| ev.kind == EventKind::IncompleteSoupDelivered));
        assert!(!events.iter().any(|ev| ev.kind == EventKind::SoupDelivered));
        assert_eq!(delivery_reward, 0.0);
        assert_eq!(e.state().deliveries, 0);
    }

    #[test]
    fn onions_cannot_exceed_three_or_join_a_cooking_pot() {
        let mut s = OvercookedState::new(Layout::standard(), 5, 50);
        s.chefs[0] = Chef { pos: Pos::new(2, 1), facing: Facing::Up, held: Some(Item::Onion) };
        s.pot = PotState { onions: 3, cooking: None };
        let ev = s.advance([ChefAction::Interact, ChefAction::Stay]);
        assert!(ev.is_empty());
        assert_eq!(s.chefs[0].held, Some(Item::Onion));
        s.pot = PotState { onions: 2, cooking: Some(1) };
        assert!(s.advance([ChefAction::Interact, ChefAction::Stay]).is_empty());
    }

    #[test]
    fn dish_pickup_with_empty_pot_is_unrewarded() {
        let mut e = env();
        let r = play(&mut e, &[("<STAY>", "<UP>"), ("<STAY>", "<RIGHT>"), ("<STAY>", "<INTERACT>")]);
        assert_eq!(r, 0.0);
        assert_eq!(e.state().chefs[1].held, Some(Item::Dish));
    }

    #[test]
    fn episode_caps_at_fifty_steps_and_stacks_four_frames() {
        let mut e = env();
        assert_eq!(e.observe(AgentId(0)).frames.len(), 4);
        for _ in 0..50 {
            e.step(&JointAction::new(["<STAY>", "<STAY>"])).unwrap();
        }
        assert!(e.is_terminal());
        assert_eq!(e.window().len(), 4);
    }

    #[test]
    fn bfs_distances() {
        let s = OvercookedState::new(Layout::standard(), 5, 50);
        assert_eq!(s.path_length(Pos::new(1, 1), Pos::new(3, 2), None), Some(3));
        assert_eq!(s.first_step(Pos::new(1, 1), Pos::new(2, 1), None), Some((1, Some(Facing::Right))));
        assert_eq!(s.path_length(Pos::new(1, 1), Pos::new(3, 1), Some(Pos::new(2, 1))), Some(4));
    }
}
