use serde::{Deserialize, Serialize};

use super::event::{BusinessEvent, PrimitiveKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LineageBreak {
    /// The chain does not open with an execution.
    MissingExecution,
    /// A before state does not equal the preceding after state.
    StateMismatch,
    /// The event refers to a different trade than the first event.
    TradeMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE", rename_all_fields = "camelCase")]
pub enum LineageReport {
    Intact,
    /// `index` counts primitives across all events, in order.
    Broken {
        index: usize,
        event_index: usize,
        reason: LineageBreak,
    },
}

impl LineageReport {
    pub fn is_intact(&self) -> bool {
        matches!(self, Self::Intact)
    }

    pub fn break_index(&self) -> Option<usize> {
        match self {
            Self::Intact => None,
            Self::Broken { index, .. } => Some(*index),
        }
    }
}

/// Walk the before/after chain across `events`, flattening their primitives.
pub fn check_lineage(events: &[BusinessEvent]) -> LineageReport {
    let mut previous = None;
    let mut trade_id = None;
    let mut index = 0;
    for (event_index, event) in events.iter().enumerate() {
        for primitive in &event.primitives {
            let broken = |reason| LineageReport::Broken { index, event_index, reason };
            let id = primitive.after.trade_id();
            match trade_id {
                None => trade_id = Some(id),
                Some(first) if first != id => return broken(LineageBreak::TradeMismatch),
                Some(_) => {}
            }
            match previous {
                None => {
                    if primitive.primitive != PrimitiveKind::Execution || primitive.before.is_some() {
                        return broken(LineageBreak::MissingExecution);
                    }
                }
                Some(prev) => {
                    if primitive.before.as_ref() != Some(prev) {
                        return broken(LineageBreak::StateMismatch);
                    }
                }
            }
            previous = Some(&primitive.after);
            index += 1;
        }
    }
    LineageReport::Intact
}
