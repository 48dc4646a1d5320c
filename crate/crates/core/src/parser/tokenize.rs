use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::ConcreteInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TokenClass {
    #[serde(rename = "contact")]
    ContactEvent,
    #[serde(rename = "motion")]
    MotionEvent,
    #[serde(rename = "state")]
    StateChange,
}

impl TokenClass {
    pub fn label(self) -> &'static str {
        match self {
            TokenClass::ContactEvent => "contact",
            TokenClass::MotionEvent => "motion",
            TokenClass::StateChange => "state",
        }
    }
}

/// One observation as logged, before tokenization.
///
/// `ends` / `begins` name a state type this event terminates or (re)starts
/// for the same set of participants, e.g. a separation ending `Contact`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawEvent {
    #[serde(rename = "type")]
    pub event_type: String,
    pub class: TokenClass,
    pub participants: Vec<String>,
    pub start: f64,
    pub end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ends: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub begins: Option<String>,
}

impl RawEvent {
    pub fn new<I, S>(class: TokenClass, event_type: &str, participants: I, start: f64, end: f64) -> RawEvent
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        RawEvent {
            event_type: event_type.to_string(),
            class,
            participants: participants.into_iter().map(Into::into).collect(),
            start,
            end,
            ends: None,
            begins: None,
        }
    }

    pub fn ending(mut self, state: &str) -> RawEvent {
        self.ends = Some(state.to_string());
        self
    }

    pub fn beginning(mut self, state: &str) -> RawEvent {
        self.begins = Some(state.to_string());
        self
    }

    fn participant_set(&self) -> BTreeSet<&str> {
        self.participants.iter().map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Token {
    pub id: String,
    pub class: TokenClass,
    pub type_tag: String,
    pub participants: Vec<String>,
    pub interval: ConcreteInterval,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TokenizeError {
    #[error("event {index} ({event_type}) ends at {end} before it starts at {start}")]
    NegativeDuration { index: usize, event_type: String, start: f64, end: f64 },
    #[error("event {index} ({event_type}) has a non-finite timestamp")]
    NonFiniteTimestamp { index: usize, event_type: String },
    #[error("event {index} ({event_type}) has no participants")]
    NoParticipants { index: usize, event_type: String },
    #[error("point widening needs a positive finite tolerance, got {0}")]
    InvalidTolerance(f64),
}

fn widen(start: f64, end: f64, eps: f64) -> ConcreteInterval {
    if end > start {
        ConcreteInterval::new(start, end)
    } else {
        ConcreteInterval::new(start, start + eps)
    }
}

/// Segments of a state event that survive interruptions by `ends` events and
/// resumptions by `begins` events over the same participant set.
fn state_segments(state: &RawEvent, events: &[RawEvent]) -> Vec<(f64, f64)> {
    let who = state.participant_set();
    // false sorts first: at equal times an ending is applied before a resumption.
    let mut marks: Vec<(f64, bool)> = events
        .iter()
        .filter(|e| !std::ptr::eq(*e, state) && e.participant_set() == who)
        .filter(|e| e.start > state.start && e.start < state.end)
        .flat_map(|e| {
            let end_mark = (e.ends.as_deref() == Some(state.event_type.as_str())).then_some((e.start, false));
            let begin_mark = (e.begins.as_deref() == Some(state.event_type.as_str())).then_some((e.start, true));
            end_mark.into_iter().chain(begin_mark)
        })
        .collect();
    marks.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut out = Vec::new();
    let mut open = Some(state.start);
    for (t, begins) in marks {
        match (open, begins) {
            (Some(s), false) => {
                if t > s {
                    out.push((s, t));
                }
                open = None;
            }
            (None, true) => open = Some(t),
            _ => {}
        }
    }
    if let Some(s) = open {
        out.push((s, state.end));
    }
    out
}

fn token_order(a: &Token, b: &Token) -> Ordering {
    a.interval
        .start
        .total_cmp(&b.interval.start)
        .then(a.interval.end.total_cmp(&b.interval.end))
        .then(a.class.cmp(&b.class))
        .then_with(|| a.type_tag.cmp(&b.type_tag))
        .then_with(|| a.participants.cmp(&b.participants))
}

/// Turns raw events into tokens sorted by start time.
///
/// Point events are widened to `[t, t + eps]`. State events are split at
/// interruptions so every state token carries one constant state.
pub fn tokenize(events: &[RawEvent], eps: f64) -> Result<Vec<Token>, TokenizeError> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(TokenizeError::InvalidTolerance(eps));
    }
    for (index, e) in events.iter().enumerate() {
        let event_type = e.event_type.clone();
        if !e.start.is_finite() || !e.end.is_finite() {
            return Err(TokenizeError::NonFiniteTimestamp { index, event_type });
        }
        if e.end < e.start {
            return Err(TokenizeError::NegativeDuration { index, event_type, start: e.start, end: e.end });
        }
        if e.participants.is_empty() {
            return Err(TokenizeError::NoParticipants { index, event_type });
        }
    }

    let mut tokens = Vec::new();
    for e in events {
        let spans = if e.class == TokenClass::StateChange { state_segments(e, events) } else { vec![(e.start, e.end)] };
        for (s, t) in spans {
            tokens.push(Token {
                id: String::new(),
                class: e.class,
                type_tag: e.event_type.clone(),
                participants: e.participants.clone(),
                interval: widen(s, t, eps),
            });
        }
    }
    tokens.sort_by(token_order);
    for (k, t) in tokens.iter_mut().enumerate() {
        t.id = format!("tok_{k}");
    }
    Ok(tokens)
}
