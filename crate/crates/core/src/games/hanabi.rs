//! Two-player Hanabi, full deck and the tiny variant.

use crate::events::{EventKind, GameEvent};
use crate::pomg::{
    check_joint, with_noop, AgentId, EnvError, Environment, GameSpec, InteractionClass,
    JointAction, Observation, StateView, StepResult, NOOP,
};
use crate::render;
use crate::rng::{stream_rng, Stream};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const COLOR_CHARS: [char; 5] = ['R', 'Y', 'G', 'W', 'B'];
pub const COLOR_NAMES: [&str; 5] = ["Red", "Yellow", "Green", "White", "Blue"];
const RECENT_ACTIONS: usize = 2;
const PLAYERS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Card {
    pub color: u8,
    pub rank: u8,
}

impl Card {
    pub fn parse(s: &str) -> Option<Card> {
        let mut chars = s.chars();
        let c = chars.next()?;
        let r = chars.next()?.to_digit(10)? as u8;
        if chars.next().is_some() || !(1..=5).contains(&r) {
            return None;
        }
        let color = COLOR_CHARS.iter().position(|&x| x == c)? as u8;
        Some(Card { color, rank: r })
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", COLOR_CHARS[self.color as usize], self.rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HanabiConfig {
    pub colors: u8,
    pub ranks: u8,
    pub hand_size: usize,
    pub info_tokens: u8,
    pub life_tokens: u8,
    /// Copies of each rank per color, index 0 is rank 1.
    pub rank_counts: Vec<u8>,
}

impl HanabiConfig {
    pub fn standard() -> Self {
        Self {
            colors: 5,
            ranks: 5,
            hand_size: 5,
            info_tokens: 8,
            life_tokens: 3,
            rank_counts: vec![3, 2, 2, 2, 1],
        }
    }

    pub fn tiny() -> Self {
        Self {
            colors: 2,
            ranks: 3,
            hand_size: 3,
            info_tokens: 8,
            life_tokens: 3,
            rank_counts: vec![3, 2, 1],
        }
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: &str| Err(EnvError::Config(m.to_string()));
        if !(1..=5).contains(&self.colors) || !(1..=5).contains(&self.ranks) {
            return bad("hanabi colors and ranks must be in 1..=5");
        }
        if self.rank_counts.len() != self.ranks as usize || self.rank_counts.contains(&0) {
            return bad("hanabi rank_counts needs one positive count per rank");
        }
        if self.hand_size == 0 || self.life_tokens == 0 {
            return bad("hanabi hand size and life tokens must be positive");
        }
        if self.deck().len() < PLAYERS * self.hand_size {
            return bad("hanabi deck too small to deal both hands");
        }
        Ok(())
    }

    pub fn deck(&self) -> Vec<Card> {
        let mut cards = Vec::new();
        for color in 0..self.colors {
            for (i, &count) in self.rank_counts.iter().enumerate() {
                for _ in 0..count {
                    cards.push(Card { color, rank: i as u8 + 1 });
                }
            }
        }
        cards
    }

    pub fn max_score(&self) -> u32 {
        self.colors as u32 * self.ranks as u32
    }

    fn all_moves(&self) -> Vec<HanabiMove> {
        let mut moves: Vec<HanabiMove> = (0..self.hand_size).map(HanabiMove::Play).collect();
        moves.extend((0..self.hand_size).map(HanabiMove::Discard));
        moves.extend((0..self.colors).map(HanabiMove::RevealColor));
        moves.extend((1..=self.ranks).map(HanabiMove::RevealRank));
        moves
    }
}

/// Colors and ranks a hand slot can still be, given the hints received.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Knowledge {
    pub colors: u8,
    pub ranks: u8,
}

impl Knowledge {
    pub fn full(config: &HanabiConfig) -> Self {
        Self { colors: (1u8 << config.colors) - 1, ranks: (1u8 << config.ranks) - 1 }
    }

    pub fn admits(&self, card: Card) -> bool {
        self.colors & (1 << card.color) != 0 && self.ranks & (1 << (card.rank - 1)) != 0
    }

    pub fn is_subset_of(&self, other: &Knowledge) -> bool {
        self.colors & !other.colors == 0 && self.ranks & !other.ranks == 0
    }

    pub fn color_string(&self) -> String {
        (0..5).filter(|c| self.colors & (1 << c) != 0).map(|c| COLOR_CHARS[c]).collect()
    }

    pub fn rank_string(&self) -> String {
        (0..5)
            .filter(|r| self.ranks & (1 << r) != 0)
            .map(|r| char::from_digit(r + 1, 10).unwrap())
            .collect()
    }

    pub fn known_color(&self) -> Option<u8> {
        (self.colors.count_ones() == 1).then(|| self.colors.trailing_zeros() as u8)
    }

    pub fn known_rank(&self) -> Option<u8> {
        (self.ranks.count_ones() == 1).then(|| self.ranks.trailing_zeros() as u8 + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandCard {
    pub card: Card,
    pub knowledge: Knowledge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HanabiMove {
    Play(usize),
    Discard(usize),
    RevealColor(u8),
    RevealRank(u8),
}

impl HanabiMove {
    pub fn token(&self) -> String {
        match *self {
            HanabiMove::Play(i) => format!("<PLAY {i}>"),
            HanabiMove::Discard(i) => format!("<DISCARD {i}>"),
            HanabiMove::RevealColor(c) => format!("<REVEAL color {}>", COLOR_CHARS[c as usize]),
            HanabiMove::RevealRank(r) => format!("<REVEAL rank {r}>"),
        }
    }

    pub fn parse(token: &str) -> Option<HanabiMove> {
        let inner = token.strip_prefix('<')?.strip_suffix('>')?;
        let parts: Vec<&str> = inner.split_whitespace().collect();
        match parts.as_slice() {
            ["PLAY", i] => i.parse().ok().map(HanabiMove::Play),
            ["DISCARD", i] => i.parse().ok().map(HanabiMove::Discard),
            ["REVEAL", "color", c] if c.len() == 1 => {
                let ch = c.chars().next()?;
                COLOR_CHARS.iter().position(|&x| x == ch).map(|p| HanabiMove::RevealColor(p as u8))
            }
            ["REVEAL", "rank", r] => r.parse().ok().filter(|r| (1..=5).contains(r)).map(HanabiMove::RevealRank),
            _ => None,
        }
    }

    pub fn is_reveal(&self) -> bool {
        matches!(self, HanabiMove::RevealColor(_) | HanabiMove::RevealRank(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HanabiState {
    pub config: HanabiConfig,
    /// Remaining cards; the next draw is the last element.
    pub deck: Vec<Card>,
    pub hands: [Vec<HandCard>; PLAYERS],
    pub fireworks: Vec<u8>,
    pub info_tokens: u8,
    pub life_tokens: u8,
    pub discard_pile: Vec<Card>,
    /// Each player's most recent actions, oldest first.
    pub recent_actions: [Vec<String>; PLAYERS],
    /// Turns left once the deck has run out.
    pub final_round_remaining: Option<u8>,
    pub current_player: usize,
    pub terminal: bool,
    pub lives_exhausted: bool,
    pub step: usize,
}

impl HanabiState {
    pub fn deal(config: HanabiConfig, seed: u64) -> Self {
        let mut deck = config.deck();
        deck.shuffle(&mut stream_rng(seed, Stream::Deal));
        let mut state = HanabiState {
            fireworks: vec![0; config.colors as usize],
            info_tokens: config.info_tokens,
            life_tokens: config.life_tokens,
            config,
            deck,
            hands: [Vec::new(), Vec::new()],
            discard_pile: Vec::new(),
            recent_actions: [Vec::new(), Vec::new()],
            final_round_remaining: None,
            current_player: 0,
            terminal: false,
            lives_exhausted: false,
            step: 0,
        };
        for _ in 0..state.config.hand_size {
            for p in 0..PLAYERS {
                state.draw(p);
            }
        }
        state
    }

    fn draw(&mut self, player: usize) -> bool {
        match self.deck.pop() {
            Some(card) => {
                let knowledge = Knowledge::full(&self.config);
                self.hands[player].push(HandCard { card, knowledge });
                true
            }
            None => false,
        }
    }

    pub fn score(&self) -> u32 {
        self.fireworks.iter().map(|&f| f as u32).sum()
    }

    /// Zero if every life token was lost, otherwise the firework sum.
    pub fn standard_score(&self) -> u32 {
        if self.lives_exhausted {
            0
        } else {
            self.score()
        }
    }

    pub fn is_playable(&self, card: Card) -> bool {
        self.fireworks[card.color as usize] + 1 == card.rank
    }

    pub fn legal_moves(&self, player: usize) -> Vec<HanabiMove> {
        if self.terminal || player != self.current_player {
            return Vec::new();
        }
        let n = self.hands[player].len();
        let mut moves: Vec<HanabiMove> = (0..n).map(HanabiMove::Play).collect();
        moves.extend((0..n).map(HanabiMove::Discard));
        if self.info_tokens > 0 {
            let other = &self.hands[1 - player];
            for c in 0..self.config.colors {
                if other.iter().any(|h| h.card.color == c) {
                    moves.push(HanabiMove::RevealColor(c));
                }
            }
            for r in 1..=self.config.ranks {
                if other.iter().any(|h| h.card.rank == r) {
                    moves.push(HanabiMove::RevealRank(r));
                }
            }
        }
        moves
    }

    /// Applies `mv` for the current player; returns the shared reward.
    pub fn apply(&mut self, mv: HanabiMove) -> Result<(f64, Vec<GameEvent>), EnvError> {
        let player = self.current_player;
        if self.terminal {
            return Err(EnvError::StepAfterTerminal);
        }
        if !self.legal_moves(player).contains(&mv) {
            return Err(EnvError::IllegalAction {
                agent: player,
                token: mv.token(),
                legal: self.legal_moves(player).iter().map(HanabiMove::token).collect(),
            });
        }
        let in_final_round = self.final_round_remaining;
        let mut events = Vec::new();
        let mut reward = 0.0;
        let summary;
        match mv {
            HanabiMove::Play(i) => {
                let HandCard { card, .. } = self.hands[player].remove(i);
                if self.is_playable(card) {
                    self.fireworks[card.color as usize] = card.rank;
                    reward = 1.0;
                    events.push(GameEvent::new(EventKind::CardPlayed, vec![player]).with_detail(card.to_string()));
                    if card.rank == self.config.ranks {
                        self.info_tokens = (self.info_tokens + 1).min(self.config.info_tokens);
                        events.push(
                            GameEvent::new(EventKind::FireworkCompleted, vec![player])
                                .with_detail(COLOR_CHARS[card.color as usize].to_string()),
                        );
                    }
                    summary = format!("{} {card} played", mv.token());
                } else {
                    self.life_tokens -= 1;
                    self.discard_pile.push(card);
                    events.push(GameEvent::new(EventKind::Misplay, vec![player]).with_detail(card.to_string()));
                    summary = format!("{} {card} misplayed", mv.token());
                    if self.life_tokens == 0 {
                        self.lives_exhausted = true;
                        self.terminal = true;
                        events.push(GameEvent::new(EventKind::LivesExhausted, vec![0, 1]));
                    }
                }
                self.after_card_leaves(player, &mut events);
            }
            HanabiMove::Discard(i) => {
                let HandCard { card, .. } = self.hands[player].remove(i);
                self.discard_pile.push(card);
                self.info_tokens = (self.info_tokens + 1).min(self.config.info_tokens);
                events.push(GameEvent::new(EventKind::CardDiscarded, vec![player]).with_detail(card.to_string()));
                summary = format!("{} {card}", mv.token());
                self.after_card_leaves(player, &mut events);
            }
            HanabiMove::RevealColor(_) | HanabiMove::RevealRank(_) => {
                self.info_tokens -= 1;
                let target = 1 - player;
                let mut touched = Vec::new();
                for (slot, h) in self.hands[target].iter_mut().enumerate() {
                    let hit = match mv {
                        HanabiMove::RevealColor(c) => {
                            let hit = h.card.color == c;
                            h.knowledge.colors &= if hit { 1 << c } else { !(1 << c) };
                            hit
                        }
                        HanabiMove::RevealRank(r) => {
                            let bit = 1 << (r - 1);
                            let hit = h.card.rank == r;
                            h.knowledge.ranks &= if hit { bit } else { !bit };
                            hit
                        }
                        _ => unreachable!(),
                    };
                    if hit {
                        touched.push(slot.to_string());
                    }
                }
                summary = format!("{} slots {}", mv.token(), touched.join(","));
                events.push(GameEvent::new(EventKind::HintGiven, vec![player]).with_detail(summary.clone()));
            }
        }

        let recent = &mut self.recent_actions[player];
        recent.push(summary);
        if recent.len() > RECENT_ACTIONS {
            recent.remove(0);
        }

        if self.score() == self.config.max_score() {
            self.terminal = true;
        }
        if let Some(n) = in_final_round {
            let left = n - 1;
            self.final_round_remaining = Some(left);
            if left == 0 {
                self.terminal = true;
            }
        }
        self.current_player = 1 - player;
        self.step += 1;
        Ok((reward, events))
    }

    fn after_card_leaves(&mut self, player: usize, events: &mut Vec<GameEvent>) {
        if self.terminal {
            return;
        }
        if self.draw(player) && self.deck.is_empty() && self.final_round_remaining.is_none() {
            self.final_round_remaining = Some(PLAYERS as u8);
            events.push(GameEvent::new(EventKind::DeckExhausted, vec![player]));
        }
    }

    /// Every card in the game, wherever it currently is, sorted.
    pub fn card_census(&self) -> Vec<Card> {
        let mut cards: Vec<Card> = self.deck.clone();
        for hand in &self.hands {
            cards.extend(hand.iter().map(|h| h.card));
        }
        cards.extend(self.discard_pile.iter().copied());
        for (color, &top) in self.fireworks.iter().enumerate() {
            cards.extend((1..=top).map(|rank| Card { color: color as u8, rank }));
        }
        cards.sort();
        cards
    }

    pub fn conserves_cards(&self) -> bool {
        let mut full = self.config.deck();
        full.sort();
        full == self.card_census()
    }
}

#[derive(Clone, Debug)]
pub struct HanabiEnv {
    spec: GameSpec,
    config: HanabiConfig,
    seed: u64,
    state: HanabiState,
}

impl HanabiEnv {
    pub fn new(name: &str, config: HanabiConfig, seed: u64) -> Result<Self, EnvError> {
        config.validate()?;
        let vocab = with_noop(config.all_moves().iter().map(HanabiMove::token).collect());
        let spec = GameSpec::new(name, InteractionClass::Cooperative, None, vocab, 1, true);
        let state = HanabiState::deal(config.clone(), seed);
        Ok(Self { spec, config, seed, state })
    }

    pub fn state(&self) -> &HanabiState {
        &self.state
    }

    pub fn from_state(name: &str, state: HanabiState) -> Result<Self, EnvError> {
        let mut env = Self::new(name, state.config.clone(), 0)?;
        env.state = state;
        Ok(env)
    }
}

impl Environment for HanabiEnv {
    fn spec(&self) -> &GameSpec {
        &self.spec
    }

    fn reset(&mut self, seed: u64) {
        self.seed = seed;
        self.state = HanabiState::deal(self.config.clone(), seed);
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError> {
        check_joint(self, joint)?;
        let player = self.state.current_player;
        let mv = HanabiMove::parse(&joint.0[player]).expect("legal token parses");
        let (r, events) = self.state.apply(mv)?;
        Ok(StepResult { rewards: vec![r, r], terminal: self.state.terminal, events })
    }

    fn legal_actions(&self, agent: AgentId) -> Vec<String> {
        if self.state.terminal {
            return Vec::new();
        }
        if agent.0 != self.state.current_player {
            return vec![NOOP.to_string()];
        }
        self.state.legal_moves(agent.0).iter().map(HanabiMove::token).collect()
    }

    fn is_terminal(&self) -> bool {
        self.state.terminal
    }

    fn step_index(&self) -> usize {
        self.state.step
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn observe_text(&self, agent: AgentId) -> String {
        render::hanabi::text(&self.state, agent.0)
    }

    fn observe(&self, agent: AgentId) -> Observation {
        Observation {
            frames: vec![render::hanabi::image(&self.state, agent.0)],
            text: self.observe_text(agent),
        }
    }

    fn view(&self) -> StateView<'_> {
        StateView::Hanabi(&self.state)
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

    fn state_with(hands: [Vec<Card>; 2], deck: Vec<Card>) -> HanabiState {
        let config = HanabiConfig::standard();
        let full = Knowledge::full(&config);
        let mk = |cards: Vec<Card>| cards.into_iter().map(|card| HandCard { card, knowledge: full }).collect();
        let [a, b] = hands;
        HanabiState {
            fireworks: vec![0; 5],
            info_tokens: 8,
            life_tokens: 3,
            deck,
            hands: [mk(a), mk(b)],
            discard_pile: vec![],
            recent_actions: [vec![], vec![]],
            final_round_remaining: None,
            current_player: 0,
            terminal: false,
            lives_exhausted: false,
            step: 0,
            config,
        }
    }

    fn c(s: &str) -> Card {
        Card::parse(s).unwrap()
    }

    #[test]
    fn deck_composition() {
        let deck = HanabiConfig::standard().deck();
        assert_eq!(deck.len(), 50);
        for color in 0..5 {
            let ranks: Vec<u8> = deck.iter().filter(|c| c.color == color).map(|c| c.rank).collect();
            assert_eq!(ranks, vec![1, 1, 1, 2, 2, 3, 3, 4, 4, 5]);
        }
        let tiny = HanabiConfig::tiny();
        assert_eq!(tiny.deck().len(), 12);
        assert_eq!(tiny.max_score(), 6);
    }

    #[test]
    fn playing_next_rank_extends_firework() {
        let mut s = state_with([vec![c("R2"), c("Y1")], vec![c("G1"), c("B1")]], vec![c("W1")]);
        s.fireworks[0] = 1;
        let (r, ev) = s.apply(HanabiMove::Play(0)).unwrap();
        assert_eq!(r, 1.0);
        assert_eq!(s.fireworks[0], 2);
        assert_eq!(ev[0].kind, EventKind::CardPlayed);
    }

    #[test]
    fn last_life_misplay_ends_game_with_zero_standard_score() {
        let mut s = state_with([vec![c("R3"), c("Y1")], vec![c("G1")]], vec![c("W1"), c("W2")]);
        s.life_tokens = 1;
        s.fireworks[1] = 4;
        let (r, ev) = s.apply(HanabiMove::Play(0)).unwrap();
        assert_eq!(r, 0.0);
        assert!(s.terminal && s.lives_exhausted);
        assert_eq!(s.standard_score(), 0);
        assert_eq!(s.score(), 4);
        assert!(ev.iter().any(|e| e.kind == EventKind::LivesExhausted));
    }

    #[test]
    fn discard_restores_one_capped_token() {
        let mut s = state_with([vec![c("R3")], vec![c("G1")]], vec![c("W1")]);
        s.info_tokens = 8;
        s.apply(HanabiMove::Discard(0)).unwrap();
        assert_eq!(s.info_tokens, 8);
        s.info_tokens = 3;
        s.current_player = 0;
        s.apply(HanabiMove::Discard(0)).unwrap();
        assert_eq!(s.info_tokens, 4);
    }

    #[test]
    fn reveal_requires_tokens_and_a_matching_card() {
        let mut s = state_with([vec![c("R3")], vec![c("G1"), c("G4")]], vec![]);
        assert!(s.legal_moves(0).contains(&HanabiMove::RevealColor(2)));
        assert!(!s.legal_moves(0).contains(&HanabiMove::RevealColor(0)));
        s.info_tokens = 0;
        assert!(!s.legal_moves(0).iter().any(HanabiMove::is_reveal));
        assert!(s.apply(HanabiMove::RevealRank(1)).is_err());
    }

    #[test]
    fn reveal_narrows_every_slot() {
        let mut s = state_with([vec![c("R3")], vec![c("G1"), c("B1"), c("G4")]], vec![]);
        s.apply(HanabiMove::RevealColor(2)).unwrap();
        let k: Vec<String> = s.hands[1].iter().map(|h| h.knowledge.color_string()).collect();
        assert_eq!(k, vec!["G", "RYWB", "G"]);
        assert_eq!(s.info_tokens, 7);
        for h in &s.hands[1] {
            assert!(h.knowledge.admits(h.card));
        }
    }

    #[test]
    fn out_of_range_index_rejected() {
        let mut s = state_with([vec![c("R3")], vec![c("G1")]], vec![]);
        assert!(matches!(s.apply(HanabiMove::Play(4)), Err(EnvError::IllegalAction { .. })));
    }

    #[test]
    fn final_round_gives_each_player_one_more_turn() {
        let mut s = state_with([vec![c("R3"), c("R4")], vec![c("G3"), c("G4")]], vec![c("W1")]);
        s.apply(HanabiMove::Discard(0)).unwrap(); // draws the last card
        assert_eq!(s.final_round_remaining, Some(2));
        assert!(!s.terminal);
        s.apply(HanabiMove::Discard(0)).unwrap();
        assert!(!s.terminal);
        s.apply(HanabiMove::Discard(0)).unwrap();
        assert!(s.terminal);
        assert!(!s.lives_exhausted);
    }

    #[test]
    fn completing_every_firework_scores_max() {
        let mut s = state_with([vec![c("R5")], vec![c("G1")]], vec![c("W1")]);
        s.fireworks = vec![4, 5, 5, 5, 5];
        s.info_tokens = 2;
        s.apply(HanabiMove::Play(0)).unwrap();
        assert!(s.terminal);
        assert_eq!(s.standard_score(), 25);
        assert_eq!(s.info_tokens, 3);
    }

    #[test]
    fn token_round_trip() {
        for mv in HanabiConfig::standard().all_moves() {
            assert_eq!(HanabiMove::parse(&mv.token()), Some(mv));
        }
        assert_eq!(HanabiMove::parse("<PLAY>"), None);
    }

    #[test]
    fn env_deal_is_deterministic_and_conserves() {
        let a = HanabiEnv::new("hanabi", HanabiConfig::standard(), 7).unwrap();
        let b = HanabiEnv::new("hanabi", HanabiConfig::standard(), 7).unwrap();
        assert_eq!(a.state, b.state);
        assert!(a.state.conserves_cards());
        assert_eq!(a.state.deck.len(), 40);
        assert_eq!(a.legal_actions(AgentId(1)), vec![NOOP.to_string()]);
    }
}
