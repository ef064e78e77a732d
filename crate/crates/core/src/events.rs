use serde::{Deserialize, Serialize};
use std::fmt;

/// Every kind of occurrence an environment can report from a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    // Hanabi
    CardPlayed,
    Misplay,
    CardDiscarded,
    HintGiven,
    FireworkCompleted,
    LivesExhausted,
    DeckExhausted,
    // Breakthrough / Tic-Tac-Toe
    PieceMoved,
    Capture,
    MarkPlaced,
    Win,
    Draw,
    // Kuhn poker
    Pass,
    Bet,
    Fold,
    Showdown,
    // Coin Dilemma
    OwnCoin,
    CrossCoin,
    // Monster Hunt
    Apple,
    MonsterAlone,
    MonsterJoint,
    // Battle of the Colors
    RedBlockMeet,
    BlueBlockMeet,
    BlockMismatch,
    // Overcooked
    OnionPickup,
    OnionAdded,
    CookStarted,
    DishPickup,
    SoupPlated,
    SoupDelivered,
    IncompleteSoupDelivered,
    // Pong
    Point,
}

impl EventKind {
    pub fn tag(self) -> &'static str {
        use EventKind::*;
        match self {
            CardPlayed => "card-played",
            Misplay => "misplay",
            CardDiscarded => "card-discarded",
            HintGiven => "hint-given",
            FireworkCompleted => "firework-completed",
            LivesExhausted => "lives-exhausted",
            DeckExhausted => "deck-exhausted",
            PieceMoved => "piece-moved",
            Capture => "capture",
            MarkPlaced => "mark-placed",
            Win => "win",
            Draw => "draw",
            Pass => "pass",
            Bet => "bet",
            Fold => "fold",
            Showdown => "showdown",
            OwnCoin => "own-coin",
            CrossCoin => "cross-coin",
            Apple => "apple",
            MonsterAlone => "monster-alone",
            MonsterJoint => "monster-joint",
            RedBlockMeet => "red-block-meet",
            BlueBlockMeet => "blue-block-meet",
            BlockMismatch => "block-mismatch",
            OnionPickup => "onion-pickup",
            OnionAdded => "onion-added",
            CookStarted => "cook-started",
            DishPickup => "dish-pickup",
            SoupPlated => "soup-plated",
            SoupDelivered => "soup-delivered",
            IncompleteSoupDelivered => "incomplete-soup-delivered",
            Point => "point",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameEvent {
    pub kind: EventKind,
    pub actors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl GameEvent {
    pub fn new(kind: EventKind, actors: impl Into<Vec<usize>>) -> Self {
        Self { kind, actors: actors.into(), detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn tag(&self) -> String {
        let actors: Vec<String> = self.actors.iter().map(|a| a.to_string()).collect();
        match &self.detail {
            Some(d) => format!("{}[{}]:{}", self.kind.tag(), actors.join(","), d),
            None => format!("{}[{}]", self.kind.tag(), actors.join(",")),
        }
    }
}
