use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDateTime;

use crate::lifecycle::{Deadline, DeadlineId, DeadlineKey, DeadlineStatus};

/// Known deadlines with an ordered index of the open ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeadlineBook {
    deadlines: BTreeMap<DeadlineId, Deadline>,
    open: BTreeSet<DeadlineKey>,
}

impl DeadlineBook {
    /// Track a new deadline. Returns false if the id is already known.
    pub fn schedule(&mut self, deadline: Deadline) -> bool {
        if self.deadlines.contains_key(&deadline.deadline_id) {
            return false;
        }
        if deadline.status == DeadlineStatus::Open {
            self.open.insert(deadline.key());
        }
        self.deadlines.insert(deadline.deadline_id.clone(), deadline);
        true
    }

    /// Mark an open deadline as triggered. Returns false if it was not open.
    pub fn trigger(&mut self, id: &DeadlineId) -> bool {
        let Some(d) = self.deadlines.get_mut(id) else { return false };
        if d.status != DeadlineStatus::Open {
            return false;
        }
        d.status = DeadlineStatus::Triggered;
        self.open.remove(&d.key())
    }

    /// Forget an open deadline. Returns false if it was not open.
    pub fn cancel(&mut self, id: &DeadlineId) -> bool {
        if !self.is_open(id) {
            return false;
        }
        let d = self.deadlines.remove(id).expect("open deadlines are tracked");
        self.open.remove(&d.key())
    }

    pub fn get(&self, id: &DeadlineId) -> Option<&Deadline> {
        self.deadlines.get(id)
    }

    pub fn is_open(&self, id: &DeadlineId) -> bool {
        self.deadlines.get(id).is_some_and(|d| d.status == DeadlineStatus::Open)
    }

    pub fn open_count(&self) -> usize {
        self.open.len()
    }

    pub fn next_open(&self) -> Option<&Deadline> {
        self.open.first().map(|key| &self.deadlines[&key.4])
    }

    /// The earliest open deadline due on or before `time`.
    pub fn next_due(&self, time: NaiveDateTime) -> Option<&Deadline> {
        self.next_open().filter(|d| d.due_time <= time)
    }

    pub fn open(&self) -> impl Iterator<Item = &Deadline> {
        self.open.iter().map(|key| &self.deadlines[&key.4])
    }

    pub fn all(&self) -> impl Iterator<Item = &Deadline> {
        self.deadlines.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifecycle::{due_at, DeadlineKind};
    use chrono::NaiveDate;

    fn deadline(m: u32, kind: DeadlineKind, i: u32) -> Deadline {
        Deadline::new("T".into(), due_at(NaiveDate::from_ymd_opt(2024, m, 15).unwrap()), kind, i)
    }

    #[test]
    fn earliest_open_first() {
        let mut book = DeadlineBook::default();
        assert!(book.schedule(deadline(6, DeadlineKind::FixedPayment, 1)));
        assert!(book.schedule(deadline(3, DeadlineKind::FixedPayment, 0)));
        assert!(!book.schedule(deadline(3, DeadlineKind::FixedPayment, 0)));
        assert_eq!(book.next_open().unwrap().period_index, 0);
        assert!(book.trigger(&Deadline::id_for(&"T".into(), DeadlineKind::FixedPayment, 0)));
        assert_eq!(book.next_open().unwrap().period_index, 1);
        assert_eq!(book.open_count(), 1);
    }

    #[test]
    fn ties_break_by_kind() {
        let mut book = DeadlineBook::default();
        book.schedule(deadline(3, DeadlineKind::FloatingPayment, 0));
        book.schedule(deadline(3, DeadlineKind::FixedPayment, 0));
        book.schedule(deadline(3, DeadlineKind::Reset, 1));
        let kinds: Vec<_> = book.open().map(|d| d.kind).collect();
        assert_eq!(kinds, [DeadlineKind::Reset, DeadlineKind::FixedPayment, DeadlineKind::FloatingPayment]);
    }

    #[test]
    fn cancel_only_open() {
        let mut book = DeadlineBook::default();
        let d = deadline(3, DeadlineKind::Reset, 0);
        book.schedule(d.clone());
        assert!(book.cancel(&d.deadline_id));
        assert!(!book.cancel(&d.deadline_id));
        assert!(book.next_open().is_none());
        book.schedule(d.clone());
        book.trigger(&d.deadline_id);
        assert!(!book.cancel(&d.deadline_id));
        assert!(book.next_due(due_at(NaiveDate::from_ymd_opt(2025, 1, 1).unwrap())).is_none());
    }
}
