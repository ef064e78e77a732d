//! Kuhn poker: three cards, one ante each, a single betting round.

use crate::events::{EventKind, GameEvent};
use crate::pomg::{
    check_joint, with_noop, AgentId, EnvError, Environment, GameSpec, InteractionClass,
    JointAction, Observation, StateView, StepResult, NOOP,
};
use crate::render;
use crate::rng::{stream_rng, Stream};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

pub const PASS: &str = "<PASS>";
pub const BET: &str = "<BET>";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KuhnCard {
    J,
    Q,
    K,
}

impl KuhnCard {
    pub const ALL: [KuhnCard; 3] = [KuhnCard::J, KuhnCard::Q, KuhnCard::K];

    pub fn letter(self) -> char {
        match self {
            KuhnCard::J => 'J',
            KuhnCard::Q => 'Q',
            KuhnCard::K => 'K',
        }
    }

    pub fn from_letter(c: char) -> Option<KuhnCard> {
        KuhnCard::ALL.into_iter().find(|k| k.letter() == c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KuhnAction {
    Pass,
    Bet,
}

impl KuhnAction {
    pub fn token(self) -> &'static str {
        match self {
            KuhnAction::Pass => PASS,
            KuhnAction::Bet => BET,
        }
    }

    pub fn parse(token: &str) -> Option<KuhnAction> {
        match token {
            PASS => Some(KuhnAction::Pass),
            BET => Some(KuhnAction::Bet),
            _ => None,
        }
    }

    pub fn letter(self) -> char {
        match self {
            KuhnAction::Pass => 'P',
            KuhnAction::Bet => 'B',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KuhnState {
    pub cards: [KuhnCard; 2],
    pub history: Vec<KuhnAction>,
    pub pot: [u8; 2],
}

impl KuhnState {
    pub fn new(cards: [KuhnCard; 2]) -> Self {
        assert_ne!(cards[0], cards[1], "cards must be distinct");
        Self { cards, history: Vec::new(), pot: [1, 1] }
    }

    pub fn deal(seed: u64) -> Self {
        let mut deck = KuhnCard::ALL;
        deck.shuffle(&mut stream_rng(seed, Stream::Deal));
        Self::new([deck[0], deck[1]])
    }

    pub fn history_string(&self) -> String {
        self.history.iter().map(|a| a.letter()).collect()
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self.history_string().as_str(), "PP" | "BB" | "BP" | "PBB" | "PBP")
    }

    pub fn to_move(&self) -> usize {
        self.history.len() % 2
    }

    pub fn total_pot(&self) -> u8 {
        self.pot[0] + self.pot[1]
    }

    pub fn play(&mut self, action: KuhnAction) {
        let p = self.to_move();
        if action == KuhnAction::Bet {
            self.pot[p] += 1;
        }
        self.history.push(action);
    }

    /// Net chips for each player at a terminal history.
    pub fn payoffs(&self) -> Option<[f64; 2]> {
        if !self.is_terminal() {
            return None;
        }
        let h = self.history_string();
        let winner = if h.ends_with("BP") {
            // the player who bet takes the pot
            if h == "BP" {
                0
            } else {
                1
            }
        } else if self.cards[0] > self.cards[1] {
            0
        } else {
            1
        };
        let loser = 1 - winner;
        let amount = self.pot[loser] as f64;
        let mut out = [0.0; 2];
        out[winner] = amount;
        out[loser] = -amount;
        Some(out)
    }
}

#[derive(Clone, Debug)]
pub struct KuhnEnv {
    spec: GameSpec,
    seed: u64,
    state: KuhnState,
}

impl KuhnEnv {
    pub fn new(seed: u64) -> Self {
        let spec = GameSpec::new(
            "kuhn",
            InteractionClass::Competitive,
            None,
            with_noop(vec![PASS.to_string(), BET.to_string()]),
            1,
            true,
        );
        Self { spec, seed, state: KuhnState::deal(seed) }
    }

    pub fn from_state(state: KuhnState) -> Self {
        let mut env = Self::new(0);
        env.state = state;
        env
    }

    pub fn state(&self) -> &KuhnState {
        &self.state
    }
}

impl Environment for KuhnEnv {
    fn spec(&self) -> &GameSpec {
        &self.spec
    }

    fn reset(&mut self, seed: u64) {
        self.seed = seed;
        self.state = KuhnState::deal(seed);
    }

    fn step(&mut self, joint: &JointAction) -> Result<StepResult, EnvError> {
        check_joint(self, joint)?;
        let p = self.state.to_move();
        let action = KuhnAction::parse(&joint.0[p]).expect("legal token parses");
        let facing_bet = self.state.history.last() == Some(&KuhnAction::Bet);
        self.state.play(action);
        let kind = match action {
            KuhnAction::Bet => EventKind::Bet,
            KuhnAction::Pass => EventKind::Pass,
        };
        let mut events = vec![GameEvent::new(kind, vec![p])];
        let mut rewards = vec![0.0, 0.0];
        if let Some(pay) = self.state.payoffs() {
            rewards = pay.to_vec();
            let winner = if pay[0] > 0.0 { 0 } else { 1 };
            if facing_bet && action == KuhnAction::Pass {
                events.push(GameEvent::new(EventKind::Fold, vec![p]));
            } else {
                let detail = format!(
                    "{}{}",
                    self.state.cards[0].letter(),
                    self.state.cards[1].letter()
                );
                events.push(GameEvent::new(EventKind::Showdown, vec![winner]).with_detail(detail));
            }
        }
        Ok(StepResult { rewards, terminal: self.state.is_terminal(), events })
    }

    fn legal_actions(&self, agent: AgentId) -> Vec<String> {
        if self.state.is_terminal() {
            Vec::new()
        } else if agent.0 == self.state.to_move() {
            vec![PASS.to_string(), BET.to_string()]
        } else {
            vec![NOOP.to_string()]
        }
    }

    fn is_terminal(&self) -> bool {
        self.state.is_terminal()
    }

    fn step_index(&self) -> usize {
        self.state.history.len()
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn observe_text(&self, agent: AgentId) -> String {
        render::kuhn::text(&self.state, agent.0)
    }

    fn observe(&self, agent: AgentId) -> Observation {
        Observation {
            frames: vec![render::kuhn::image(&self.state, agent.0)],
            text: self.observe_text(agent),
        }
    }

    fn view(&self) -> StateView<'_> {
        StateView::Kuhn(&self.state)
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
    use KuhnCard::*;

    fn play(cards: [KuhnCard; 2], h: &str) -> KuhnState {
        let mut s = KuhnState::new(cards);
        for c in h.chars() {
            s.play(if c == 'P' { KuhnAction::Pass } else { KuhnAction::Bet });
        }
        s
    }

    #[test]
    fn payout_examples() {
        assert_eq!(play([K, Q], "PP").payoffs(), Some([1.0, -1.0]));
        assert_eq!(play([J, Q], "BP").payoffs(), Some([1.0, -1.0]));
        assert_eq!(play([Q, K], "BB").payoffs(), Some([-2.0, 2.0]));
        assert_eq!(play([K, J], "PBP").payoffs(), Some([-1.0, 1.0]));
        assert_eq!(play([K, J], "PBB").payoffs(), Some([2.0, -2.0]));
        assert_eq!(play([K, J], "PB").payoffs(), None);
    }

    /// Every deal and every action sequence: exactly five terminal histories,
    /// all zero-sum, at most three decisions.
    #[test]
    fn exhaustive_history_enumeration() {
        let mut terminal = std::collections::BTreeSet::new();
        for a in KuhnCard::ALL {
            for b in KuhnCard::ALL {
                if a == b {
                    continue;
                }
                let mut stack = vec![KuhnState::new([a, b])];
                while let Some(s) = stack.pop() {
                    if let Some(p) = s.payoffs() {
                        assert_eq!(p[0] + p[1], 0.0);
                        assert!(s.history.len() <= 3);
                        assert!(s.pot.iter().all(|&c| c <= 2));
                        terminal.insert(s.history_string());
                        continue;
                    }
                    for act in [KuhnAction::Pass, KuhnAction::Bet] {
                        let mut n = s.clone();
                        n.play(act);
                        stack.push(n);
                    }
                }
            }
        }
        let expect: std::collections::BTreeSet<String> =
            ["PP", "BB", "BP", "PBB", "PBP"].iter().map(|s| s.to_string()).collect();
        assert_eq!(terminal, expect);
    }

    #[test]
    fn deal_is_deterministic() {
        assert_eq!(KuhnState::deal(7), KuhnState::deal(7));
        let deals: std::collections::BTreeSet<_> = (0..200).map(|s| KuhnState::deal(s).cards).collect();
        assert_eq!(deals.len(), 6);
    }

    #[test]
    fn env_rejects_after_terminal() {
        let mut env = KuhnEnv::new(1);
        env.step(&JointAction::new([PASS, NOOP])).unwrap();
        let r = env.step(&JointAction::new([NOOP, PASS])).unwrap();
        assert!(r.terminal);
        assert_eq!(r.rewards[0] + r.rewards[1], 0.0);
        assert_eq!(
            env.step(&JointAction::new([PASS, NOOP])),
            Err(EnvError::StepAfterTerminal)
        );
    }
}
