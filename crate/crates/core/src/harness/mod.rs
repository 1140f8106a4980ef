//! The virtual network clock and the deadline scheduler. Both are folds over
//! the event stream, so they can be rebuilt from the store at any time.

mod book;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

pub use book::DeadlineBook;

use crate::events::SimEvent;
use crate::lifecycle::{Deadline, DeadlineStatus};
use crate::store::EventEnvelope;

pub const CLOCK_ID: &str = "clock-1";
pub const SCHEDULER_STREAM: &str = "scheduler";

pub fn clock_stream(clock_id: &str) -> String {
    format!("clock:{clock_id}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationClock {
    pub clock_id: String,
    pub current_time: NaiveDateTime,
}

/// Deadlines in the order they fired during one call to the harness.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TriggerReport {
    pub breached_deadlines: Vec<Deadline>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Harness {
    clock: Option<SimulationClock>,
    book: DeadlineBook,
}

impl Harness {
    pub fn clock(&self) -> Option<&SimulationClock> {
        self.clock.as_ref()
    }

    pub fn now(&self) -> Option<NaiveDateTime> {
        self.clock.as_ref().map(|c| c.current_time)
    }

    pub fn book(&self) -> &DeadlineBook {
        &self.book
    }

    pub fn rebuild<'a>(envelopes: impl IntoIterator<Item = &'a EventEnvelope>) -> Self {
        let mut harness = Self::default();
        for envelope in envelopes {
            harness.apply(envelope);
        }
        harness
    }

    pub fn apply(&mut self, envelope: &EventEnvelope) {
        let Some(event) = SimEvent::decode(envelope) else { return };
        match event {
            SimEvent::ClockCreated { clock_id, initial_time } => {
                self.clock = Some(SimulationClock { clock_id, current_time: initial_time });
            }
            SimEvent::ClockAdvanced { to, .. } => {
                if let Some(clock) = &mut self.clock {
                    clock.current_time = clock.current_time.max(to);
                }
            }
            SimEvent::DeadlineScheduled { deadline } => {
                self.book.schedule(Deadline { status: DeadlineStatus::Open, ..deadline });
            }
            SimEvent::DeadlineBreached { deadline } => {
                self.book.trigger(&deadline.deadline_id);
            }
            SimEvent::DeadlineCancelled { deadline_id, .. } => {
                self.book.cancel(&deadline_id);
            }
            _ => {}
        }
    }
}
