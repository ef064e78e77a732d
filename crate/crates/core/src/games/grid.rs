//! 5x5 simultaneous-move social dilemmas: Coin Dilemma, Monster Hunt and
//! Battle of the Colors.
//!
//! Coordinates are `(x, y)` with `(0, 0)` in the top-left corner; `<UP>`
//! decreases `y`. Agent 0 is the red player, agent 1 the blue player.

use crate::events::{EventKind, GameEvent};
use crate::pomg::{
    check_joint, movement_vocab, AgentId, EnvError, Environment, GameSpec, InteractionClass,
    JointAction, Observation, StateView, StepResult,
};
use crate::render;
use crate::rng::{stream_rng, GameRng, Stream};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn manhattan(self, other: Pos) -> i32 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move5 {
    Up,
    Down,
    Left,
    Right,
    Stay,
}

impl Move5 {
    pub const ALL: [Move5; 5] = [Move5::Up, Move5::Down, Move5::Left, Move5::Right, Move5::Stay];

    pub fn token(self) -> &'static str {
        match self {
            Move5::Up => "<UP>",
            Move5::Down => "<DOWN>",
            Move5::Left => "<LEFT>",
            Move5::Right => "<RIGHT>",
            Move5::Stay => "<STAY>",
        }
    }

    pub fn parse(token: &str) -> Option<Move5> {
        Move5::ALL.into_iter().find(|m| m.token() == token)
    }

    pub fn delta(self) -> (i32, i32) {
        match self {
            Move5::Up => (0, -1),
            Move5::Down => (0, 1),
            Move5::Left => (-1, 0),
            Move5::Right => (1, 0),
            Move5::Stay => (0, 0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DilemmaKind {
    Coin,
    Hunt,
    Battle,
}

impl DilemmaKind {
    pub fn env_name(self) -> &'static str {
        match self {
            DilemmaKind::Coin => "coin",
            DilemmaKind::Hunt => "hunt",
            DilemmaKind::Battle => "battle",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            DilemmaKind::Coin => "Coin Dilemma",
            DilemmaKind::Hunt => "Monster Hunt",
            DilemmaKind::Battle => "Battle of the Colors",
        }
    }
}

/// One row of a dilemma's event/reward table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardRow {
    RedOwnCoin,
    RedCrossCoin,
    BlueOwnCoin,
    BlueCrossCoin,
    RedApple,
    BlueApple,
    RedMonsterAlone,
    BlueMonsterAlone,
    JointDefeat,
    RedBlockMeet,
    BlueBlockMeet,
    BlockMismatch,
}

impl RewardRow {
    pub fn rows(kind: DilemmaKind) -> &'static [RewardRow] {
        use RewardRow::*;
        match kind {
            DilemmaKind::Coin => &[RedOwnCoin, RedCrossCoin, BlueOwnCoin, BlueCrossCoin],
            DilemmaKind::Hunt => &[RedApple, BlueApple, RedMonsterAlone, BlueMonsterAlone, JointDefeat],
            DilemmaKind::Battle => &[RedBlockMeet, BlueBlockMeet, BlockMismatch],
        }
    }

    pub fn description(self) -> &'static str {
        use RewardRow::*;
        match self {
            RedOwnCoin => "Red collects red coin",
            RedCrossCoin => "Red collects blue coin",
            BlueOwnCoin => "Blue collects blue coin",
            BlueCrossCoin => "Blue collects red coin",
            RedApple => "Red eats apple",
            BlueApple => "Blue eats apple",
            RedMonsterAlone => "Red meets monster alone",
            BlueMonsterAlone => "Blue meets monster alone",
            JointDefeat => "Both defeat monster",
            RedBlockMeet => "Both on red block",
            BlueBlockMeet => "Both on blue block",
            BlockMismatch => "Players on different blocks",
        }
    }

    pub fn event_kind(self) -> EventKind {
        use RewardRow::*;
        match self {
            RedOwnCoin | BlueOwnCoin => EventKind::OwnCoin,
            RedCrossCoin | BlueCrossCoin => EventKind::CrossCoin,
            RedApple | BlueApple => EventKind::Apple,
            RedMonsterAlone | BlueMonsterAlone => EventKind::MonsterAlone,
            JointDefeat => EventKind::MonsterJoint,
            RedBlockMeet => EventKind::RedBlockMeet,
            BlueBlockMeet => EventKind::BlueBlockMeet,
            BlockMismatch => EventKind::BlockMismatch,
        }
    }

    pub fn actors(self) -> Vec<usize> {
        use RewardRow::*;
        match self {
            RedOwnCoin | RedCrossCoin | RedApple | RedMonsterAlone => vec![0],
            BlueOwnCoin | BlueCrossCoin | BlueApple | BlueMonsterAlone => vec![1],
            JointDefeat | RedBlockMeet | BlueBlockMeet | BlockMismatch => vec![0, 1],
        }
    }

    /// Maps an emitted event back to its table row.
    pub fn of_event(event: &GameEvent) -> Option<RewardRow> {
        use RewardRow::*;
        let red = event.actors.first() == Some(&0);
        Some(match event.kind {
            EventKind::OwnCoin => if red { RedOwnCoin } else { BlueOwnCoin },
            EventKind::CrossCoin => if red { RedCrossCoin } else { BlueCrossCoin },
            EventKind::Apple => if red { RedApple } else { BlueApple },
            EventKind::MonsterAlone => if red { RedMonsterAlone } else { BlueMonsterAlone },
            EventKind::MonsterJoint => JointDefeat,
            EventKind::RedBlockMeet => RedBlockMeet,
            EventKind::BlueBlockMeet => BlueBlockMeet,
            EventKind::BlockMismatch => BlockMismatch,
            _ => return None,
        })
    }

    pub fn event(self) -> GameEvent {
        GameEvent::new(self.event_kind(), self.actors())
    }
}

/// Per-row reward vectors `[red, blue]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardTable(pub BTreeMap<RewardRow, [f64; 2]>);

impl RewardTable {
    pub fn standard(kind: DilemmaKind) -> Self {
        use RewardRow::*;
        let rows: &[(RewardRow, [f64; 2])] = match kind {
            DilemmaKind::Coin => &[
                (RedOwnCoin, [1.0, 0.0]),
                (RedCrossCoin, [1.0, -2.0]),
                (BlueOwnCoin, [0.0, 1.0]),
                (BlueCrossCoin, [-2.0, 1.0]),
            ],
            DilemmaKind::Hunt => &[
                (RedApple, [2.0, 0.0]),
                (BlueApple, [0.0, 2.0]),
                (RedMonsterAlone, [-2.0, 0.0]),
                (BlueMonsterAlone, [0.0, -2.0]),
                (JointDefeat, [5.0, 5.0]),
            ],
            DilemmaKind::Battle => &[
                (RedBlockMeet, [2.0, 1.0]),
                (BlueBlockMeet, [1.0, 2.0]),
                (BlockMismatch, [0.0, 0.0]),
            ],
        };
        RewardTable(rows.iter().copied().collect())
    }

    pub fn get(&self, row: RewardRow) -> [f64; 2] {
        self.0.get(&row).copied().unwrap_or([0.0, 0.0])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub kind: DilemmaKind,
    pub size: i32,
    pub max_steps: usize,
    pub rewards: RewardTable,
}

impl GridConfig {
    pub fn standard(kind: DilemmaKind) -> Self {
        Self { kind, size: 5, max_steps: 50, rewards: RewardTable::standard(kind) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "snake_case")]
pub enum GridEntities {
    Coin { red: Pos, blue: Pos },
    Hunt { apples: [Pos; 2], monster: Pos },
    Battle { red: Pos, blue: Pos },
}

impl GridEntities {
    pub fn positions(&self) -> Vec<Pos> {
        match *self {
            GridEntities::Coin { red, blue } | GridEntities::Battle { red, blue } => vec![red, blue],
            GridEntities::Hunt { apples, monster } => vec![apples[0], apples[1], monster],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridState {
    pub kind: DilemmaKind,
    pub size: i32,
    pub players: [Pos; 2],
    pub entities: GridEntities,
    pub counters: BTreeMap<RewardRow, u32>,
    pub step: usize,
}

impl GridState {
    pub fn spawn(kind: DilemmaKind, size: i32, seed: u64) -> Self {
        let mut rng = stream_rng(seed, Stream::Spawn);
        let mut taken: Vec<Pos> = Vec::new();
        let mut next = |taken: &mut Vec<Pos>| {
            let p = random_free_cell(size, taken, &mut rng);
            taken.push(p);
            p
        };
        let players = [next(&mut taken), next(&mut taken)];
        let entities = match kind {
            DilemmaKind::Coin => GridEntities::Coin { red: next(&mut taken), blue: next(&mut taken) },
            DilemmaKind::Hunt => GridEntities::Hunt {
                apples: [next(&mut taken), next(&mut taken)],
                monster: next(&mut taken),
            },
            DilemmaKind::Battle => GridEntities::Battle { red: next(&mut taken), blue: next(&mut taken) },
        };
        let counters = RewardRow::rows(kind).iter().map(|&r| (r, 0)).collect();
        Self { kind, size, players, entities, counters, step: 0 }
    }

    pub fn in_bounds(&self, p: Pos) -> bool {
        (0..self.size).contains(&p.x) && (0..self.size).contains(&p.y)
    }

    /// Where a move from `from` ends up; off-grid moves stay put.
    pub fn resolve(&self, from: Pos, mv: Move5) -> Pos {
        let (dx, dy) = mv.delta();
        let to = Pos::new(from.x + dx, from.y + dy);
        if self.in_bounds(to) {
            to
        } else {
            from
        }
    }

    /// Advances one tick; returns the reward rows that fired in order.
    pub fn advance(&mut self, moves: [Move5; 2], rng: &mut GameRng) -> Vec<RewardRow> {
        let prev = self.players;
        for i in 0..2 {
            self.players[i] = self.resolve(prev[i], moves[i]);
        }
        let mut fired = Vec::new();
        let size = self.size;
        match self.entities {
            GridEntities::Coin { red, blue } => {
                let mut respawn = [false; 2];
                for (color, coin) in [red, blue].into_iter().enumerate() {
                    for p in 0..2 {
                        if self.players[p] == coin {
                            fired.push(coin_row(p, color));
                            respawn[color] = true;
                        }
                    }
                }
                let mut coins = [red, blue];
                for color in 0..2 {
                    if respawn[color] {
                        let mut taken = self.players.to_vec();
                        taken.push(coins[1 - color]);
                        coins[color] = random_free_cell(size, &taken, rng);
                    }
                }
                self.entities = GridEntities::Coin { red: coins[0], blue: coins[1] };
            }
            GridEntities::Hunt { mut apples, monster } => {
                let new_monster = monster_step(monster, self.players);
                let mut eaten = [false; 2];
                for (a, &apple) in apples.iter().enumerate() {
                    for p in 0..2 {
                        if self.players[p] == apple {
                            fired.push(if p == 0 { RewardRow::RedApple } else { RewardRow::BlueApple });
                            eaten[a] = true;
                        }
                    }
                }
                let meets: Vec<usize> = (0..2)
                    .filter(|&p| {
                        self.players[p] == new_monster
                            || (prev[p] == new_monster && self.players[p] == monster)
                    })
                    .collect();
                let mut monster_now = new_monster;
                let mut respawn_monster = false;
                let mut respawn_player = None;
                match meets.as_slice() {
                    [_, _] => {
                        fired.push(RewardRow::JointDefeat);
                        respawn_monster = true;
                    }
                    [p] => {
                        fired.push(if *p == 0 { RewardRow::RedMonsterAlone } else { RewardRow::BlueMonsterAlone });
                        respawn_player = Some(*p);
                    }
                    _ => {}
                }
                for a in 0..2 {
                    if eaten[a] {
                        let mut taken = self.players.to_vec();
                        taken.extend([apples[1 - a], monster_now]);
                        apples[a] = random_free_cell(size, &taken, rng);
                    }
                }
                if respawn_monster {
                    let mut taken = self.players.to_vec();
                    taken.extend(apples);
                    monster_now = random_free_cell(size, &taken, rng);
                }
                if let Some(p) = respawn_player {
                    let mut taken = vec![self.players[1 - p], monster_now];
                    taken.extend(apples);
                    self.players[p] = random_free_cell(size, &taken, rng);
                }
                self.entities = GridEntities::Hunt { apples, monster: monster_now };
            }
            GridEntities::Battle { red, blue } => {
                let on = |b: Pos| self.players.iter().filter(|&&p| p == b).count();
                let (on_red, on_blue) = (on(red), on(blue));
                let mut blocks = [red, blue];
                let mut respawn = [false; 2];
                if on_red == 2 {
                    fired.push(RewardRow::RedBlockMeet);
                    respawn[0] = true;
                } else if on_blue == 2 {
                    fired.push(RewardRow::BlueBlockMeet);
                    respawn[1] = true;
                } else if on_red == 1 && on_blue == 1 {
                    fired.push(RewardRow::BlockMismatch);
                    respawn = [true, true];
                }
                for b in 0..2 {
                    if respawn[b] {
                        let mut taken = self.players.to_vec();
                        taken.push(blocks[1 - b]);
                        blocks[b] = random_free_cell(size, &taken, rng);
                    }
                }
                self.entities = GridEntities::Battle { red: blocks[0], blue: blocks[1] };
            }
        }
        for row in &fired {
            *self.counters.entry(*row).or_insert(0) += 1;
        }
        self.step += 1;
        fired
    }

    pub fn monster(&self) -> Option<Pos> {
        match self.entities {
            GridEntities::Hunt { monster, .. } => Some(monster),
            _ => None,
        }
    }
}

fn coin_row(player: usize, coin_color: usize) -> RewardRow {
    match (player, coin_color == player) {
        (0, true) => RewardRow::RedOwnCoin,
        (0, false) => RewardRow::RedCrossCoin,
        (_, true) => RewardRow::BlueOwnCoin,
        (_, false) => RewardRow::BlueCrossCoin,
    }
}

/// One step toward the Manhattan-nearest player (red on ties), moving along
/// the horizontal axis first.
pub fn monster_step(monster: Pos, players: [Pos; 2]) -> Pos {
    let target = if monster.manhattan(players[1]) < monster.manhattan(players[0]) {
        players[1]
    } else {
        players[0]
    };
    let dx = (target.x - monster.x).signum();
    let dy = (target.y - monster.y).signum();
    if dx != 0 {
        Pos::new(monster.x + dx, monster.y)
    } else {
        Pos::new(monster.x, monster.y + dy)
    }
}

fn random_free_cell(size: i32, taken: &[Pos], rng: &mut GameRng) -> Pos {
    let free: Vec<Pos> = (0..size)
        .flat_map(|y| (0..size).map(move |x| Pos::new(x, y)))
        .filter(|p| !taken.contains(p))
        .collect();
    free[rng.gen_range(0..free.len())]
}

#[derive(Clone, Debug)]
pub struct GridEnv {
    spec: GameSpec,
    config: GridConfig,
    seed: u64,
    state: GridState,
    rng: GameRng,
}

impl GridEnv {
    pub fn new(config: GridConfig, seed: u64) -> Result<Self, EnvError> {
        if config.size < 3 {
            return Err(EnvError::Config("grid size must be at least 3".into()));
        }
        let spec = GameSpec::new(
            config.kind.env_name(),
            InteractionClass::Mixed,
            Some(config.max_steps),
            movement_vocab(),
            1,
            false,
        );
        let state = GridState::spawn(config.kind, config.size, seed);
        let rng = stream_rng(seed, Stream::Respawn);
        Ok(Self { spec, config, seed, state, rng })
    }

    pub fn state(&self) -> &GridState {
        &self.state
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    /// Replaces the state, keeping the respawn stream; for tests and tools.
    pub fn set_state(&mut self, state: GridState) {
        self.state = state;
    }
}

impl Environment for GridEnv {
    fn spec(&self) -> &GameSpec {
        &self.spec
    }

    fn reset(&mut self, seed: u64) {
        self.seed = seed;
        self.state = GridState::spawn(self.config.kind, self.config.size, seed);
        self.rng = stream_rng(seed, Stream::Respawn);
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError> {
        check_joint(self, joint)?;
        let moves = [
            Move5::parse(&joint.0[0]).expect("legal token parses"),
            Move5::parse(&joint.0[1]).expect("legal token parses"),
        ];
        let fired = self.state.advance(moves, &mut self.rng);
        let mut rewards = vec![0.0, 0.0];
        let mut events = Vec::with_capacity(fired.len());
        for row in fired {
            let r = self.config.rewards.get(row);
            rewards[0] += r[0];
            rewards[1] += r[1];
            events.push(row.event());
        }
        Ok(StepResult { rewards, terminal: self.is_terminal(), events })
    }

    fn legal_actions(&self, _agent: AgentId) -> Vec<String> {
        if self.is_terminal() {
            Vec::new()
        } else {
            movement_vocab()
        }
    }

    fn is_terminal(&self) -> bool {
        self.state.step >= self.config.max_steps
    }

    fn step_index(&self) -> usize {
        self.state.step
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn observe_text(&self, agent: AgentId) -> String {
        render::grid::text(&self.state, &self.config.rewards, agent.0)
    }

    fn observe(&self, agent: AgentId) -> Observation {
        Observation {
            frames: vec![render::grid::image(&self.state, &self.config.rewards)],
            text: self.observe_text(agent),
        }
    }

    fn view(&self) -> StateView<'_> {
        StateView::Grid(&self.state)
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
    use rand::SeedableRng;

    fn env(kind: DilemmaKind) -> GridEnv {
        GridEnv::new(GridConfig::standard(kind), 3).unwrap()
    }

    fn rng() -> GameRng {
        GameRng::seed_from_u64(0)
    }

    #[test]
    fn off_grid_move_stays() {
        let mut s = GridState::spawn(DilemmaKind::Coin, 5, 1);
        s.players = [Pos::new(0, 0), Pos::new(4, 4)];
        s.entities = GridEntities::Coin { red: Pos::new(2, 2), blue: Pos::new(3, 3) };
        s.advance([Move5::Up, Move5::Right], &mut rng());
        assert_eq!(s.players, [Pos::new(0, 0), Pos::new(4, 4)]);
    }

    #[test]
    fn red_on_blue_coin_penalizes_blue() {
        let mut e = env(DilemmaKind::Coin);
        let mut s = e.state().clone();
        s.players = [Pos::new(1, 1), Pos::new(4, 4)];
        s.entities = GridEntities::Coin { red: Pos::new(3, 0), blue: Pos::new(1, 2) };
        e.set_state(s);
        let r = e.step(&JointAction::new(["<DOWN>", "<STAY>"])).unwrap();
        assert_eq!(r.rewards, vec![1.0, -2.0]);
        assert_eq!(r.events[0].kind, EventKind::CrossCoin);
        let GridEntities::Coin { blue, red } = e.state().entities else { panic!() };
        assert_ne!(blue, Pos::new(1, 2));
        assert!(!e.state().players.contains(&blue) && blue != red);
    }

    #[test]
    fn both_players_on_same_coin_both_collect() {
        let mut s = GridState::spawn(DilemmaKind::Coin, 5, 1);
        s.players = [Pos::new(1, 2), Pos::new(3, 2)];
        s.entities = GridEntities::Coin { red: Pos::new(2, 2), blue: Pos::new(0, 0) };
        let fired = s.advance([Move5::Right, Move5::Left], &mut rng());
        assert_eq!(fired, vec![RewardRow::RedOwnCoin, RewardRow::BlueCrossCoin]);
    }

    #[test]
    fn joint_monster_defeat() {
        let mut e = env(DilemmaKind::Hunt);
        let mut s = e.state().clone();
        s.players = [Pos::new(1, 2), Pos::new(3, 2)];
        s.entities = GridEntities::Hunt { apples: [Pos::new(0, 0), Pos::new(4, 0)], monster: Pos::new(2, 2) };
        e.set_state(s);
        let r = e.step(&JointAction::new(["<RIGHT>", "<LEFT>"])).unwrap();
        assert_eq!(r.rewards, vec![5.0, 5.0]);
        assert_ne!(e.state().monster(), Some(Pos::new(2, 2)));
    }

    #[test]
    fn monster_moves_toward_nearest_player() {
        assert_eq!(monster_step(Pos::new(2, 2), [Pos::new(0, 2), Pos::new(4, 4)]), Pos::new(1, 2));
        // equidistant: red wins the tie
        assert_eq!(monster_step(Pos::new(2, 2), [Pos::new(0, 2), Pos::new(4, 2)]), Pos::new(1, 2));
        assert_eq!(monster_step(Pos::new(2, 2), [Pos::new(4, 2), Pos::new(0, 2)]), Pos::new(3, 2));
    }

    /// Exhaustive over a 4x4 board: the step always shrinks the distance to
    /// the chosen (nearest, red-on-tie) player by one.
    #[test]
    fn monster_step_exhaustive_small_board() {
        let cells: Vec<Pos> = (0..4).flat_map(|y| (0..4).map(move |x| Pos::new(x, y))).collect();
        for &m in &cells {
            for &r in &cells {
                for &b in &cells {
                    let d = |p: Pos| m.manhattan(p);
                    let target = if d(b) < d(r) { b } else { r };
                    let n = monster_step(m, [r, b]);
                    if d(target) == 0 {
                        assert_eq!(n, m);
                    } else {
                        assert_eq!(n.manhattan(target), d(target) - 1);
                        assert_eq!(n.manhattan(m), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn lone_player_meeting_monster_is_penalized_and_respawned() {
        let mut s = GridState::spawn(DilemmaKind::Hunt, 5, 1);
        s.players = [Pos::new(1, 1), Pos::new(4, 4)];
        s.entities = GridEntities::Hunt { apples: [Pos::new(0, 4), Pos::new(4, 0)], monster: Pos::new(2, 1) };
        let fired = s.advance([Move5::Stay, Move5::Stay], &mut rng());
        assert_eq!(fired, vec![RewardRow::RedMonsterAlone]);
        assert_ne!(s.players[0], s.monster().unwrap());
    }

    #[test]
    fn walking_onto_monster_counts_as_meeting() {
        let mut s = GridState::spawn(DilemmaKind::Hunt, 5, 1);
        s.players = [Pos::new(1, 1), Pos::new(4, 4)];
        s.entities = GridEntities::Hunt { apples: [Pos::new(0, 4), Pos::new(4, 0)], monster: Pos::new(2, 1) };
        let fired = s.advance([Move5::Right, Move5::Stay], &mut rng());
        assert_eq!(fired, vec![RewardRow::RedMonsterAlone]);
        assert_ne!(s.players[0], s.monster().unwrap());
    }

    #[test]
    fn battle_resolution() {
        let table = RewardTable::standard(DilemmaKind::Battle);
        let mut s = GridState::spawn(DilemmaKind::Battle, 5, 1);
        s.players = [Pos::new(1, 1), Pos::new(3, 1)];
        s.entities = GridEntities::Battle { red: Pos::new(2, 1), blue: Pos::new(0, 0) };
        let fired = s.advance([Move5::Right, Move5::Left], &mut rng());
        assert_eq!(fired, vec![RewardRow::RedBlockMeet]);
        assert_eq!(table.get(fired[0]), [2.0, 1.0]);

        let mut s = GridState::spawn(DilemmaKind::Battle, 5, 1);
        s.players = [Pos::new(1, 1), Pos::new(3, 3)];
        s.entities = GridEntities::Battle { red: Pos::new(2, 1), blue: Pos::new(3, 4) };
        let fired = s.advance([Move5::Right, Move5::Down], &mut rng());
        assert_eq!(fired, vec![RewardRow::BlockMismatch]);
        let GridEntities::Battle { red, blue } = s.entities else { panic!() };
        assert_ne!(red, Pos::new(2, 1));
        assert_ne!(blue, Pos::new(3, 4));

        let mut s = GridState::spawn(DilemmaKind::Battle, 5, 1);
        s.players = [Pos::new(1, 1), Pos::new(4, 4)];
        s.entities = GridEntities::Battle { red: Pos::new(2, 1), blue: Pos::new(0, 0) };
        let fired = s.advance([Move5::Right, Move5::Stay], &mut rng());
        assert!(fired.is_empty());
        assert_eq!(s.entities, GridEntities::Battle { red: Pos::new(2, 1), blue: Pos::new(0, 0) });
    }

    #[test]
    fn spawn_is_deterministic_and_disjoint() {
        let a = GridState::spawn(DilemmaKind::Coin, 5, 3);
        assert_eq!(a, GridState::spawn(DilemmaKind::Coin, 5, 3));
        let h = GridState::spawn(DilemmaKind::Hunt, 5, 11);
        let mut all = h.players.to_vec();
        all.extend(h.entities.positions());
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
    }

    #[test]
    fn episode_ends_at_horizon() {
        let mut e = env(DilemmaKind::Battle);
        for _ in 0..50 {
            e.step(&JointAction::new(["<STAY>", "<STAY>"])).unwrap();
        }
        assert!(e.is_terminal());
        assert!(e.step(&JointAction::new(["<STAY>", "<STAY>"])).is_err());
    }
}
