//! The whole simulation in one process: FMI command side, harness and query
//! views over one event store, with synchronous delivery of every appended
//! envelope.

use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::events::SimEvent;
use crate::fmi::{self, ConsentDecision, Fmi, FmiBus, FmiCommand, IrsAggregate};
use crate::harness::{clock_stream, Harness, SimulationClock, TriggerReport, CLOCK_ID, SCHEDULER_STREAM};
use crate::lifecycle::{Deadline, DeadlineId, DeadlineStatus};
use crate::model::{Party, PartyId, Trade, TradeId};
use crate::query::{BlotterRow, EventStreamRow, NextDeadlineView, Projections};
use crate::registry::PartyRegistry;
use crate::store::{CommandEnvelope, EventEnvelope, EventStore, SubscriptionFilter};

pub const DEFAULT_SEED: u64 = 42;
pub const EVENT_LOG_FILE: &str = "events.log";
pub const PARTIES_FILE: &str = "parties.json";
pub const RUN_FILE: &str = "run.json";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StorageBackend {
    #[default]
    Memory,
    File,
}

impl std::str::FromStr for StorageBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "memory" => Ok(Self::Memory),
            "file" => Ok(Self::File),
            other => Err(format!("unknown storage backend {other:?}, expected memory or file")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulatorConfig {
    pub seed: u64,
    pub storage: StorageBackend,
    pub data_dir: Option<PathBuf>,
}

impl Default for SimulatorConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, storage: StorageBackend::Memory, data_dir: None }
    }
}

impl SimulatorConfig {
    pub fn file(data_dir: impl Into<PathBuf>) -> Self {
        Self { storage: StorageBackend::File, data_dir: Some(data_dir.into()), ..Self::default() }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RunInfo {
    seed: u64,
}

fn storage_err(e: impl std::fmt::Display) -> SimError {
    SimError::Storage(e.to_string())
}

pub struct Simulator {
    fmi: Fmi,
    bus: FmiBus,
    harness: Harness,
    projections: Projections,
    inbox: Arc<Mutex<VecDeque<EventEnvelope>>>,
    breach_log: Vec<Deadline>,
    default_seed: u64,
    run_file: Option<PathBuf>,
    next_command: u64,
}

impl std::fmt::Debug for Simulator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Simulator")
            .field("seed", &self.fmi.seed())
            .field("events", &self.fmi.store().len())
            .field("clock", &self.harness.clock())
            .finish()
    }
}

impl Simulator {
    /// An in-memory simulator with the default seed.
    pub fn new() -> Self {
        Self::open(SimulatorConfig::default()).expect("in-memory simulator cannot fail to open")
    }

    pub fn with_seed(seed: u64) -> Self {
        Self::open(SimulatorConfig { seed, ..SimulatorConfig::default() })
            .expect("in-memory simulator cannot fail to open")
    }

    /// Open a simulator, resuming whatever run the data directory holds.
    pub fn open(config: SimulatorConfig) -> Result<Self, SimError> {
        let (store, registry, seed, run_file) = match config.storage {
            StorageBackend::Memory => (EventStore::in_memory(), PartyRegistry::in_memory(), config.seed, None),
            StorageBackend::File => {
                let dir = config
                    .data_dir
                    .as_deref()
                    .ok_or_else(|| SimError::InvalidRequest("file storage needs a data directory".into()))?;
                std::fs::create_dir_all(dir).map_err(storage_err)?;
                let store = EventStore::open_file(dir.join(EVENT_LOG_FILE))?;
                let registry = PartyRegistry::open(dir.join(PARTIES_FILE))?;
                let run_file = dir.join(RUN_FILE);
                let seed = match std::fs::read(&run_file) {
                    Ok(bytes) => serde_json::from_slice::<RunInfo>(&bytes).map_err(storage_err)?.seed,
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                        write_run_file(&run_file, config.seed)?;
                        config.seed
                    }
                    Err(e) => return Err(storage_err(e)),
                };
                (store, registry, seed, Some(run_file))
            }
        };
        let harness = Harness::rebuild(store.iter());
        let projections = Projections::rebuild(store.iter());
        let mut fmi = Fmi::new(store, registry, seed);
        fmi.set_now(harness.now());
        let inbox: Arc<Mutex<VecDeque<EventEnvelope>>> = Arc::default();
        let sink = Arc::clone(&inbox);
        fmi.store_mut().subscribe(
            SubscriptionFilter::all(),
            Box::new(move |e| sink.lock().expect("inbox lock").push_back(e.clone())),
        );
        Ok(Self {
            fmi,
            bus: fmi::command_bus(),
            harness,
            projections,
            inbox,
            breach_log: Vec::new(),
            default_seed: config.seed,
            run_file,
            next_command: 1,
        })
    }

    pub fn seed(&self) -> u64 {
        self.fmi.seed()
    }

    pub fn store(&self) -> &EventStore {
        self.fmi.store()
    }

    pub fn fmi(&self) -> &Fmi {
        &self.fmi
    }

    pub fn harness(&self) -> &Harness {
        &self.harness
    }

    pub fn projections(&self) -> &Projections {
        &self.projections
    }

    /// Every deadline breached since this simulator was opened or reset, in firing order.
    pub fn breach_log(&self) -> &[Deadline] {
        &self.breach_log
    }

    /// Start a new run: erase all events, the clock, the scheduler, the views
    /// and the aggregates. Registered parties are kept.
    pub fn reset(&mut self, seed: Option<u64>) -> Result<(), SimError> {
        let seed = seed.unwrap_or(self.default_seed);
        self.fmi.store_mut().reset()?;
        self.fmi.clear_aggregates();
        self.fmi.set_seed(seed);
        self.fmi.set_now(None);
        self.harness = Harness::default();
        self.projections = Projections::default();
        self.inbox.lock().expect("inbox lock").clear();
        self.breach_log.clear();
        if let Some(path) = &self.run_file {
            write_run_file(path, seed)?;
        }
        Ok(())
    }

    // ---- delivery ----

    fn drain(&mut self) -> Result<(), SimError> {
        loop {
            let next = self.inbox.lock().expect("inbox lock").pop_front();
            let Some(envelope) = next else { return Ok(()) };
            self.projections.project(&envelope);
            self.harness.apply(&envelope);
            self.fmi.set_now(self.harness.now());
            match SimEvent::decode(&envelope) {
                Some(SimEvent::DeadlineScheduled { deadline }) => {
                    let due = self.harness.now().is_some_and(|now| deadline.due_time <= now);
                    if due && self.harness.book().is_open(&deadline.deadline_id) {
                        self.breach(&deadline)?;
                    }
                }
                Some(SimEvent::DeadlineBreached { deadline }) => {
                    self.breach_log.push(deadline.clone());
                    fmi::on_deadline_breached(&mut self.fmi, &self.bus, &deadline)?;
                }
                _ => {}
            }
        }
    }

    fn breach(&mut self, deadline: &Deadline) -> Result<(), SimError> {
        let deadline = Deadline { status: DeadlineStatus::Triggered, ..deadline.clone() };
        self.fmi.commit(SCHEDULER_STREAM, None, &[SimEvent::DeadlineBreached { deadline }])?;
        Ok(())
    }

    // ---- commands ----

    fn next_command_id(&mut self) -> String {
        let id = format!("cmd-{}", self.next_command);
        self.next_command += 1;
        id
    }

    /// Route a raw command envelope to its handler and deliver the resulting events.
    pub fn dispatch_envelope(&mut self, cmd: &CommandEnvelope) -> Result<Vec<EventEnvelope>, SimError> {
        let result = self.bus.dispatch(&mut self.fmi, cmd);
        self.drain()?;
        result
    }

    pub fn dispatch(&mut self, cmd: FmiCommand) -> Result<Vec<EventEnvelope>, SimError> {
        let envelope = cmd.to_envelope(self.next_command_id(), None);
        self.dispatch_envelope(&envelope)
    }

    pub fn submit_trade(&mut self, trade: Trade) -> Result<Vec<EventEnvelope>, SimError> {
        self.dispatch(FmiCommand::SubmitExecution { trade })
    }

    pub fn consent(&mut self, trade_id: &TradeId, decision: ConsentDecision) -> Result<Vec<EventEnvelope>, SimError> {
        self.dispatch(FmiCommand::Consent { trade_id: trade_id.clone(), decision })
    }

    // ---- clock and scheduler ----

    pub fn create_clock(&mut self, initial_time: NaiveDateTime) -> Result<SimulationClock, SimError> {
        if let Some(clock) = self.harness.clock() {
            return Err(SimError::AlreadyExists(format!("clock {}", clock.clock_id)));
        }
        let event = SimEvent::ClockCreated { clock_id: CLOCK_ID.into(), initial_time };
        self.fmi.commit_at(&clock_stream(CLOCK_ID), Some(0), &[event], initial_time)?;
        self.drain()?;
        self.clock()
    }

    pub fn clock(&self) -> Result<SimulationClock, SimError> {
        self.harness.clock().cloned().ok_or(SimError::NoClock)
    }

    pub fn time(&self) -> Result<NaiveDateTime, SimError> {
        self.harness.now().ok_or(SimError::NoClock)
    }

    fn move_clock(&mut self, to: NaiveDateTime) -> Result<(), SimError> {
        let from = self.time()?;
        if to > from {
            let event = SimEvent::ClockAdvanced { clock_id: CLOCK_ID.into(), from, to };
            self.fmi.commit_at(&clock_stream(CLOCK_ID), None, &[event], to)?;
            self.drain()?;
        }
        Ok(())
    }

    /// Move the clock to `time`, firing every open deadline due on or before
    /// it in deadline order. Each breach is fully handled before the next.
    pub fn advance_to(&mut self, time: NaiveDateTime) -> Result<TriggerReport, SimError> {
        let current = self.time()?;
        if time < current {
            return Err(SimError::ClockRegression { current, requested: time });
        }
        let start = self.breach_log.len();
        while let Some(deadline) = self.harness.book().next_due(time).cloned() {
            self.move_clock(deadline.due_time)?;
            if self.harness.book().is_open(&deadline.deadline_id) {
                self.breach(&deadline)?;
                self.drain()?;
            }
        }
        self.move_clock(time)?;
        Ok(TriggerReport { breached_deadlines: self.breach_log[start..].to_vec() })
    }

    pub fn advance_to_next_deadline(&mut self) -> Result<TriggerReport, SimError> {
        let now = self.time()?;
        let due = self.harness.book().next_open().ok_or(SimError::NothingScheduled)?.due_time;
        self.advance_to(due.max(now))
    }

    /// Fire deadlines until none are open.
    pub fn play(&mut self) -> Result<TriggerReport, SimError> {
        self.time()?;
        let mut report = TriggerReport::default();
        while self.harness.book().open_count() > 0 {
            report.breached_deadlines.extend(self.advance_to_next_deadline()?.breached_deadlines);
        }
        Ok(report)
    }

    /// Put a deadline on the scheduler directly. One already due is breached at once.
    pub fn schedule_deadline(&mut self, deadline: Deadline) -> Result<(), SimError> {
        if self.harness.book().get(&deadline.deadline_id).is_some() {
            return Err(SimError::AlreadyExists(format!("deadline {}", deadline.deadline_id)));
        }
        let deadline = Deadline { status: DeadlineStatus::Open, ..deadline };
        self.fmi.commit(SCHEDULER_STREAM, None, &[SimEvent::DeadlineScheduled { deadline }])?;
        self.drain()
    }

    pub fn cancel_deadline(&mut self, deadline_id: &DeadlineId) -> Result<(), SimError> {
        let book = self.harness.book();
        let deadline = book
            .get(deadline_id)
            .filter(|_| book.is_open(deadline_id))
            .ok_or_else(|| SimError::NotFound(format!("open deadline {deadline_id}")))?;
        let event =
            SimEvent::DeadlineCancelled { deadline_id: deadline_id.clone(), trade_id: deadline.trade_id.clone() };
        self.fmi.commit(SCHEDULER_STREAM, None, &[event])?;
        self.drain()
    }

    // ---- parties ----

    pub fn create_party(&mut self, name: &str, legal_entity_id: &str) -> Result<Party, SimError> {
        self.fmi.registry_mut().create(name, legal_entity_id)
    }

    pub fn party(&self, id: &PartyId) -> Result<Party, SimError> {
        self.fmi.registry().get(id)
    }

    pub fn parties(&self) -> Vec<Party> {
        self.fmi.registry().list()
    }

    pub fn update_party(&mut self, id: &PartyId, name: &str, legal_entity_id: &str) -> Result<Party, SimError> {
        self.fmi.registry_mut().update(id, name, legal_entity_id)
    }

    /// Remove a party unless a live trade still references it.
    pub fn delete_party(&mut self, id: &PartyId) -> Result<(), SimError> {
        self.fmi.registry().get(id)?;
        let in_use = self
            .fmi
            .trades()
            .any(|t| !t.status().is_terminal() && t.current_state.trade.tradable_product.has_party(id));
        if in_use {
            return Err(SimError::PartyInUse(id.clone()));
        }
        self.fmi.registry_mut().delete(id).map(|_| ())
    }

    // ---- queries ----

    pub fn blotter(&self) -> Vec<BlotterRow> {
        self.projections.blotter()
    }

    pub fn trade(&self, trade_id: &TradeId) -> Result<BlotterRow, SimError> {
        self.projections.trade(trade_id)
    }

    pub fn event_stream(&self, limit: usize, cdm_only: bool) -> Vec<EventStreamRow> {
        self.projections.event_stream(limit, cdm_only)
    }

    pub fn next_deadline(&self) -> NextDeadlineView {
        self.projections.next_deadline()
    }

    pub fn irs(&self, trade_id: &TradeId) -> Option<&IrsAggregate> {
        self.fmi.trade(trade_id)
    }

    /// Fresh views folded from the full store, for comparison with the live ones.
    pub fn rebuild_projections(&self) -> Projections {
        Projections::rebuild(self.store().iter())
    }
}

impl Default for Simulator {
    fn default() -> Self {
        Self::new()
    }
}

fn write_run_file(path: &Path, seed: u64) -> Result<(), SimError> {
    let bytes = serde_json::to_vec(&RunInfo { seed }).map_err(storage_err)?;
    std::fs::write(path, bytes).map_err(storage_err)
}
