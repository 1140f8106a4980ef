//! The authoritative append-only event store, with publish-subscribe
//! delivery of appended envelopes and a point-to-point command bus.

mod bus;
mod envelope;
mod log;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use chrono::NaiveDateTime;

pub use bus::{CommandBus, CommandHandler, DuplicateHandler, Unroutable};
pub use envelope::{CommandEnvelope, EventEnvelope, NewEvent, SubscriptionFilter};
pub use log::{EventLog, FileLog, MemoryLog, LOG_FORMAT, LOG_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("concurrency conflict on {aggregate_id}: expected version {expected}, found {actual}")]
    ConcurrencyConflict { aggregate_id: String, expected: u64, actual: u64 },
    #[error("append needs at least one event")]
    EmptyAppend,
    #[error("event log i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("event log encoding: {0}")]
    Codec(#[from] serde_json::Error),
    #[error("event log is corrupt: {0}")]
    Corrupt(String),
    #[error("unsupported event log format {0}")]
    UnsupportedFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubscriptionId(u64);

impl fmt::Display for SubscriptionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sub-{}", self.0)
    }
}

pub type Listener = Box<dyn FnMut(&EventEnvelope) + Send>;

struct Subscription {
    id: SubscriptionId,
    filter: SubscriptionFilter,
    listener: Listener,
}

/// Append-only store of event envelopes.
///
/// Appends take `&mut self`, so there is a single writer; every accepted
/// envelope is handed to each matching subscriber, in global sequence order,
/// before `append` returns. Listeners run inside `append` and cannot touch the
/// store themselves.
pub struct EventStore {
    log: Box<dyn EventLog>,
    envelopes: Vec<EventEnvelope>,
    streams: HashMap<String, Vec<usize>>,
    subscriptions: Vec<Subscription>,
    next_subscription: u64,
}

impl fmt::Debug for EventStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EventStore")
            .field("envelopes", &self.envelopes.len())
            .field("subscriptions", &self.subscriptions.len())
            .finish()
    }
}

impl Default for EventStore {
    fn default() -> Self {
        Self::in_memory()
    }
}

impl EventStore {
    pub fn in_memory() -> Self {
        Self::with_log(Box::new(MemoryLog)).expect("memory log cannot fail")
    }

    pub fn open_file(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        Self::with_log(Box::new(FileLog::open(path)?))
    }

    pub fn with_log(mut log: Box<dyn EventLog>) -> Result<Self, StoreError> {
        let loaded = log.load()?;
        let mut store = Self {
            log,
            envelopes: Vec::with_capacity(loaded.len()),
            streams: HashMap::new(),
            subscriptions: Vec::new(),
            next_subscription: 1,
        };
        for envelope in loaded {
            if envelope.global_sequence != store.envelopes.len() as u64 + 1 {
                return Err(StoreError::Corrupt(format!("global sequence {} out of order", envelope.global_sequence)));
            }
            if envelope.aggregate_version != store.version(&envelope.aggregate_id) + 1 {
                return Err(StoreError::Corrupt(format!(
                    "{} version {} out of order",
                    envelope.aggregate_id, envelope.aggregate_version
                )));
            }
            store.index(envelope);
        }
        Ok(store)
    }

    fn index(&mut self, envelope: EventEnvelope) {
        self.streams.entry(envelope.aggregate_id.clone()).or_default().push(self.envelopes.len());
        self.envelopes.push(envelope);
    }

    /// Highest version of an aggregate, 0 if it has no events.
    pub fn version(&self, aggregate_id: &str) -> u64 {
        self.streams.get(aggregate_id).map_or(0, |s| s.len() as u64)
    }

    pub fn last_sequence(&self) -> u64 {
        self.envelopes.len() as u64
    }

    pub fn len(&self) -> usize {
        self.envelopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envelopes.is_empty()
    }

    /// Append `events` to one aggregate's stream as a single atomic batch.
    pub fn append(
        &mut self,
        aggregate_id: &str,
        expected_version: Option<u64>,
        events: Vec<NewEvent>,
        simulation_time: NaiveDateTime,
    ) -> Result<Vec<EventEnvelope>, StoreError> {
        if events.is_empty() {
            return Err(StoreError::EmptyAppend);
        }
        let current = self.version(aggregate_id);
        if let Some(expected) = expected_version {
            if expected != current {
                return Err(StoreError::ConcurrencyConflict {
                    aggregate_id: aggregate_id.to_owned(),
                    expected,
                    actual: current,
                });
            }
        }
        let first_sequence = self.last_sequence() + 1;
        let batch: Vec<EventEnvelope> = events
            .into_iter()
            .enumerate()
            .map(|(i, e)| EventEnvelope {
                global_sequence: first_sequence + i as u64,
                aggregate_id: aggregate_id.to_owned(),
                aggregate_version: current + 1 + i as u64,
                event_type: e.event_type,
                simulation_time,
                payload: e.payload,
                is_cdm_event: e.is_cdm_event,
            })
            .collect();
        self.log.persist(&batch)?;
        for envelope in &batch {
            self.index(envelope.clone());
        }
        for envelope in &batch {
            for sub in self.subscriptions.iter_mut() {
                if sub.filter.matches(envelope) {
                    (sub.listener)(envelope);
                }
            }
        }
        Ok(batch)
    }

    pub fn read_stream(&self, aggregate_id: &str) -> Vec<EventEnvelope> {
        self.streams
            .get(aggregate_id)
            .map(|idx| idx.iter().map(|&i| self.envelopes[i].clone()).collect())
            .unwrap_or_default()
    }

    /// Up to `limit` matching envelopes starting at `from_sequence` (1-based).
    pub fn read_all(&self, from_sequence: u64, filter: &SubscriptionFilter, limit: usize) -> Vec<EventEnvelope> {
        let start = from_sequence.max(1) as usize - 1;
        self.envelopes.iter().skip(start).filter(|e| filter.matches(e)).take(limit).cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EventEnvelope> {
        self.envelopes.iter()
    }

    /// Left fold of `apply` over an aggregate's stream.
    pub fn replay_aggregate<S, F>(&self, aggregate_id: &str, initial: S, mut apply: F) -> S
    where
        F: FnMut(S, &EventEnvelope) -> S,
    {
        let Some(indices) = self.streams.get(aggregate_id) else {
            return initial;
        };
        indices.iter().fold(initial, |state, &i| apply(state, &self.envelopes[i]))
    }

    pub fn subscribe(&mut self, filter: SubscriptionFilter, listener: Listener) -> SubscriptionId {
        let id = SubscriptionId(self.next_subscription);
        self.next_subscription += 1;
        self.subscriptions.push(Subscription { id, filter, listener });
        id
    }

    pub fn unsubscribe(&mut self, id: SubscriptionId) -> bool {
        let before = self.subscriptions.len();
        self.subscriptions.retain(|s| s.id != id);
        before != self.subscriptions.len()
    }

    /// Erase every envelope. Subscriptions survive.
    pub fn reset(&mut self) -> Result<(), StoreError> {
        self.log.clear()?;
        self.envelopes.clear();
        self.streams.clear();
        Ok(())
    }
}
