//! Process functions: calendars, schedules, day counts, cashflow amounts,
//! rate observation, business event creation and deadline projection.

mod amount;
mod calendar;
mod daycount;
mod deadline;
mod events;
mod observation;
mod schedule;

use chrono::NaiveDate;

pub use amount::{fixed_amount, floating_amount, round_currency};
pub use calendar::{adjust_date, is_business_day};
pub use daycount::{day_count_fraction, DayCountFraction};
pub use deadline::{
    due_at, project_deadlines, Deadline, DeadlineId, DeadlineKey, DeadlineKind, DeadlineStatus, LegKind,
};
pub use events::{
    create_cash_transfer_event, create_contract_formation_event, create_execution_event, create_reset_event,
};
pub use observation::{resolve_observation, Observation};
pub use schedule::{generate_schedule, CalculationPeriod};

use crate::model::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LifecycleError {
    #[error("invalid schedule: effective date must precede termination by a whole number of periods")]
    InvalidSchedule,
    #[error("invalid interval: {start} is after {end}")]
    InvalidInterval { start: NaiveDate, end: NaiveDate },
    #[error("invalid trade: {}", .0.messages().join("; "))]
    InvalidTrade(ValidationReport),
    #[error("{0}")]
    InvalidTransition(String),
}
