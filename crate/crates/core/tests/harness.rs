use chrono::{NaiveDate, NaiveDateTime};
use swapsim::fmi::ConsentDecision;
use swapsim::lifecycle::{due_at, Deadline, DeadlineKind, DeadlineStatus};
use swapsim::model::TradeId;
use swapsim::query::Projections;
use swapsim::scenario::{standard_clock_start, SwapTerms};
use swapsim::{ErrorCode, SimError, Simulator};

fn at(y: i32, m: u32, d: u32) -> NaiveDateTime {
    due_at(NaiveDate::from_ymd_opt(y, m, d).unwrap())
}

fn deadline(trade: &str, when: NaiveDateTime, kind: DeadlineKind, i: u32) -> Deadline {
    Deadline::new(trade.into(), when, kind, i)
}

fn with_clock() -> Simulator {
    let mut sim = Simulator::new();
    sim.create_clock(standard_clock_start()).unwrap();
    sim
}

#[test]
fn clock_lifecycle() {
    let mut sim = Simulator::new();
    assert_eq!(sim.time().unwrap_err(), SimError::NoClock);
    assert_eq!(sim.play().unwrap_err(), SimError::NoClock);
    let clock = sim.create_clock(standard_clock_start()).unwrap();
    assert_eq!(clock.current_time, standard_clock_start());
    assert_eq!(sim.time().unwrap(), standard_clock_start());
    assert_eq!(sim.create_clock(at(2030, 1, 1)).unwrap_err().code(), ErrorCode::AlreadyExists);
    let env = sim.store().iter().next().unwrap();
    assert_eq!(env.event_type, "ClockCreated");
    assert!(!env.is_cdm_event);
}

#[test]
fn advance_fires_in_due_order() {
    let mut sim = with_clock();
    for d in [
        deadline("X", at(2024, 6, 17), DeadlineKind::FixedPayment, 1),
        deadline("X", at(2024, 3, 15), DeadlineKind::FloatingPayment, 0),
        deadline("X", at(2024, 3, 15), DeadlineKind::Reset, 1),
        deadline("X", at(2024, 9, 1), DeadlineKind::Reset, 2),
    ] {
        sim.schedule_deadline(d).unwrap();
    }
    let report = sim.advance_to(at(2024, 7, 1)).unwrap();
    let fired: Vec<_> = report.breached_deadlines.iter().map(|d| (d.due_time, d.kind)).collect();
    assert_eq!(
        fired,
        [
            (at(2024, 3, 15), DeadlineKind::Reset),
            (at(2024, 3, 15), DeadlineKind::FloatingPayment),
            (at(2024, 6, 17), DeadlineKind::FixedPayment),
        ]
    );
    assert!(report.breached_deadlines.iter().all(|d| d.status == DeadlineStatus::Triggered));
    assert_eq!(sim.time().unwrap(), at(2024, 7, 1));
    assert!(sim.advance_to(at(2024, 7, 1)).unwrap().breached_deadlines.is_empty());

    let before = sim.store().len();
    let err = sim.advance_to(at(2024, 1, 1)).unwrap_err();
    assert_eq!(err.code(), ErrorCode::ClockRegression);
    assert_eq!(sim.time().unwrap(), at(2024, 7, 1));
    assert_eq!(sim.store().len(), before);
}

#[test]
fn forward_stops_at_next_deadline() {
    let mut sim = with_clock();
    assert_eq!(sim.advance_to_next_deadline().unwrap_err(), SimError::NothingScheduled);
    sim.schedule_deadline(deadline("X", at(2024, 6, 15), DeadlineKind::FixedPayment, 1)).unwrap();
    sim.schedule_deadline(deadline("X", at(2024, 3, 15), DeadlineKind::FixedPayment, 0)).unwrap();
    assert_eq!(sim.next_deadline().deadline.unwrap().due_time, at(2024, 3, 15));
    let report = sim.advance_to_next_deadline().unwrap();
    assert_eq!(report.breached_deadlines.len(), 1);
    assert_eq!(sim.time().unwrap(), at(2024, 3, 15));
    let next = sim.next_deadline().deadline.unwrap();
    assert_eq!(next.due_time, at(2024, 6, 15));
    assert_eq!(next.name, "Payment period 1 (Fixed)");
}

#[test]
fn forward_fires_ties_together() {
    let mut sim = with_clock();
    sim.schedule_deadline(deadline("X", at(2024, 3, 15), DeadlineKind::FloatingPayment, 0)).unwrap();
    sim.schedule_deadline(deadline("X", at(2024, 3, 15), DeadlineKind::FixedPayment, 0)).unwrap();
    let kinds: Vec<_> = sim.advance_to_next_deadline().unwrap().breached_deadlines.iter().map(|d| d.kind).collect();
    assert_eq!(kinds, [DeadlineKind::FixedPayment, DeadlineKind::FloatingPayment]);
}

#[test]
fn play_with_nothing_scheduled() {
    let mut sim = with_clock();
    assert!(sim.play().unwrap().breached_deadlines.is_empty());
    assert_eq!(sim.time().unwrap(), standard_clock_start());
}

#[test]
fn past_dated_deadline_breaches_immediately() {
    let mut sim = with_clock();
    sim.schedule_deadline(deadline("X", at(2024, 1, 1), DeadlineKind::Reset, 0)).unwrap();
    assert_eq!(sim.breach_log().len(), 1);
    assert_eq!(sim.harness().book().open_count(), 0);
    // due exactly now counts as breached too
    sim.schedule_deadline(deadline("X", standard_clock_start(), DeadlineKind::Reset, 1)).unwrap();
    assert_eq!(sim.breach_log().len(), 2);
    // the unknown trade makes each action fail, which is recorded rather than dropped
    let failed = sim.store().iter().filter(|e| e.event_type == "FailedLifecycleAction").count();
    assert_eq!(failed, 2);
}

#[test]
fn cancelled_deadline_never_fires() {
    let mut sim = with_clock();
    let d = deadline("X", at(2024, 3, 15), DeadlineKind::Reset, 0);
    sim.schedule_deadline(d.clone()).unwrap();
    assert_eq!(sim.schedule_deadline(d.clone()).unwrap_err().code(), ErrorCode::AlreadyExists);
    sim.cancel_deadline(&d.deadline_id).unwrap();
    assert_eq!(sim.cancel_deadline(&d.deadline_id).unwrap_err().code(), ErrorCode::NotFound);
    assert!(sim.advance_to(at(2025, 1, 1)).unwrap().breached_deadlines.is_empty());
    assert!(sim.next_deadline().deadline.is_none());
}

#[test]
fn reset_clears_run_but_keeps_parties() {
    let mut sim = Simulator::new();
    let a = sim.create_party("Bank A", "LEI-A").unwrap();
    let b = sim.create_party("Dealer B", "LEI-B").unwrap();
    sim.create_clock(standard_clock_start()).unwrap();
    sim.submit_trade(SwapTerms::standard().to_trade("T1", &a.party_id, &b.party_id)).unwrap();
    sim.reset(Some(7)).unwrap();
    assert!(sim.blotter().is_empty());
    assert!(sim.store().is_empty());
    assert!(sim.event_stream(25, false).is_empty());
    assert_eq!(sim.time().unwrap_err(), SimError::NoClock);
    assert_eq!(sim.parties(), vec![a.clone(), b.clone()]);
    assert_eq!(sim.seed(), 7);
    // the same trade id is free again in the new run
    sim.create_clock(standard_clock_start()).unwrap();
    sim.submit_trade(SwapTerms::standard().to_trade("T1", &a.party_id, &b.party_id)).unwrap();
    assert_eq!(sim.store().iter().next().unwrap().global_sequence, 1);
    sim.reset(None).unwrap();
    assert_eq!(sim.seed(), 42);
}

#[test]
fn referenced_party_cannot_be_deleted() {
    let mut sim = with_clock();
    let a = sim.create_party("Bank A", "").unwrap();
    let b = sim.create_party("Dealer B", "").unwrap();
    let c = sim.create_party("Fund C", "").unwrap();
    sim.submit_trade(SwapTerms::standard().to_trade("T1", &a.party_id, &b.party_id)).unwrap();
    assert_eq!(sim.delete_party(&a.party_id).unwrap_err(), SimError::PartyInUse(a.party_id.clone()));
    sim.delete_party(&c.party_id).unwrap();
    sim.consent(&TradeId::new("T1"), ConsentDecision::Reject).unwrap();
    sim.delete_party(&a.party_id).unwrap();
    assert_eq!(sim.delete_party(&a.party_id).unwrap_err().code(), ErrorCode::NotFound);
}

#[test]
fn event_stream_window() {
    let mut sim = with_clock();
    for i in 0..29 {
        sim.schedule_deadline(deadline("X", at(2025, 1, 1), DeadlineKind::Reset, i)).unwrap();
    }
    assert_eq!(sim.store().len(), 30);
    let rows = sim.event_stream(25, false);
    let seqs: Vec<u64> = rows.iter().map(|r| r.global_sequence).collect();
    assert_eq!(seqs, (6..=30).rev().collect::<Vec<_>>());
    assert!(sim.event_stream(25, true).is_empty());
    assert_eq!(sim.event_stream(100, false).len(), sim.store().len());
}

#[test]
fn projection_ignores_redelivery() {
    let mut sim = with_clock();
    let a = sim.create_party("A", "").unwrap();
    let b = sim.create_party("B", "").unwrap();
    sim.submit_trade(SwapTerms::standard().to_trade("T1", &a.party_id, &b.party_id)).unwrap();
    let mut p = Projections::rebuild(sim.store().iter());
    let snapshot = p.clone();
    for e in sim.store().iter() {
        p.project(e);
    }
    assert_eq!(p, snapshot);
    let row = p.trade(&"T1".into()).unwrap();
    assert_eq!(row.counterparty_names, ["A".to_string(), "B".to_string()]);
    assert_eq!(row.open_actions.len(), 1);
    assert_eq!(row.projected_cashflows.len(), 8);
    assert_eq!(row.projected_cashflows.iter().filter(|c| c.amount.is_none()).count(), 4);
    assert_eq!(p.trade(&"nope".into()).unwrap_err().code(), ErrorCode::NotFound);
}

#[test]
fn play_cascades_into_payments() {
    let mut sim = with_clock();
    let a = sim.create_party("A", "").unwrap();
    let b = sim.create_party("B", "").unwrap();
    sim.submit_trade(SwapTerms::standard().to_trade("T1", &a.party_id, &b.party_id)).unwrap();
    sim.consent(&"T1".into(), ConsentDecision::Confirm).unwrap();
    // the first forward fires only the first reset on its own timestamp
    let first = sim.advance_to_next_deadline().unwrap();
    assert_eq!(first.breached_deadlines.len(), 1);
    assert_eq!(first.breached_deadlines[0].kind, DeadlineKind::Reset);
    assert_eq!(sim.irs(&"T1".into()).unwrap().current_state.reset_history.len(), 1);
    // both legs pay and the next period resets on 2024-04-15
    let second = sim.advance_to_next_deadline().unwrap();
    let kinds: Vec<_> = second.breached_deadlines.iter().map(|d| d.kind).collect();
    assert_eq!(kinds, [DeadlineKind::Reset, DeadlineKind::FixedPayment, DeadlineKind::FloatingPayment]);
    assert_eq!(sim.trade(&"T1".into()).unwrap().cashflows.len(), 2);
}
