use chrono::NaiveDate;
use proptest::prelude::*;
use rust_decimal::Decimal;

use super::*;
use crate::lifecycle::{create_contract_formation_event, create_execution_event};
use crate::scenario::SwapTerms;

fn parties() -> (PartyId, PartyId) {
    (PartyId::new("party-1"), PartyId::new("party-2"))
}

fn standard_trade() -> Trade {
    let (a, b) = parties();
    SwapTerms::standard().to_trade("T1", &a, &b)
}

fn irp(rate: RateSpecification) -> Payout {
    let (a, b) = parties();
    let Payout::InterestRate(mut p) = standard_trade().tradable_product.product.payouts[0].clone() else {
        unreachable!()
    };
    p.payer_party_ref = a;
    p.receiver_party_ref = b;
    p.rate = rate;
    Payout::InterestRate(p)
}

fn fixed() -> Payout {
    irp(RateSpecification::Fixed { rate: dec!(0.02) })
}

fn floating() -> Payout {
    irp(RateSpecification::Floating { index: "SIM-IBOR".into(), tenor_months: 3, spread: Decimal::ZERO })
}

fn equity() -> Payout {
    let (a, b) = parties();
    Payout::Equity(EquityPayout { payer_party_ref: b, receiver_party_ref: a, underlier: "SIM-EQ".into() })
}

#[test]
fn product_qualification_cases() {
    let q = |payouts| qualify_product(&Product { payouts });
    assert_eq!(q(vec![fixed(), floating()]), ProductQualification::InterestRateSwapFixedFloat);
    assert_eq!(q(vec![floating(), equity()]), ProductQualification::EquitySwap);
    assert_eq!(q(vec![fixed()]), ProductQualification::Unqualified);
    assert_eq!(q(vec![floating(), floating()]), ProductQualification::InterestRateBasisSwap);
    assert_eq!(q(vec![fixed(), fixed()]), ProductQualification::Unqualified);
    assert_eq!(q(vec![fixed(), floating(), equity()]), ProductQualification::Unqualified);
    assert_eq!(q(vec![]), ProductQualification::Unqualified);
}

fn payout_strategy() -> impl Strategy<Value = Payout> {
    prop_oneof![Just(fixed()), Just(floating()), Just(equity())]
}

proptest! {
    #[test]
    fn product_qualification_ignores_order(
        payouts in prop::collection::vec(payout_strategy(), 0..5),
        seed in any::<u64>(),
    ) {
        let base = qualify_product(&Product { payouts: payouts.clone() });
        let mut permuted = payouts;
        // deterministic Fisher-Yates driven by the seed
        let mut s = seed;
        for i in (1..permuted.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            permuted.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(qualify_product(&Product { payouts: permuted }), base);
    }
}

fn t0() -> chrono::NaiveDateTime {
    crate::scenario::standard_clock_start()
}

fn prim(kind: PrimitiveKind) -> PrimitiveEvent {
    let state = TradeState::executed(standard_trade());
    PrimitiveEvent { primitive: kind, before: (kind != PrimitiveKind::Execution).then(|| state.clone()), after: state }
}

#[test]
fn business_event_qualification() {
    use BusinessEventType as T;
    let cases = [
        (PrimitiveKind::Execution, T::Execution),
        (PrimitiveKind::ContractFormation, T::ContractFormation),
        (PrimitiveKind::Reset, T::Reset),
        (PrimitiveKind::Transfer, T::CashTransfer),
    ];
    for (kind, expected) in cases {
        assert_eq!(qualify_business_event(&[prim(kind)], None), Ok(expected));
        assert_eq!(qualify_business_event(&[prim(kind)], Some("anything")), Ok(expected));
    }
    assert_eq!(
        qualify_business_event(&[prim(PrimitiveKind::Execution), prim(PrimitiveKind::Transfer)], None),
        Ok(T::Unqualified)
    );
    assert_eq!(qualify_business_event(&[], None), Err(ModelError::EmptyPrimitives));
    assert!(BusinessEvent::new(EventId("x".into()), t0(), None, vec![]).is_err());
}

#[test]
fn standard_swap_validates() {
    let trade = standard_trade();
    assert!(validate_tradable_product(&trade.tradable_product).is_valid());
    assert!(validate_trade(&trade).is_valid());
    assert_eq!(trade.tradable_product.qualify(), ProductQualification::InterestRateSwapFixedFloat);
}

fn with_fixed_leg(f: impl FnOnce(&mut InterestRatePayout)) -> TradableProduct {
    let mut tp = standard_trade().tradable_product;
    if let Payout::InterestRate(p) = &mut tp.product.payouts[0] {
        f(p);
    }
    tp
}

#[test]
fn zero_notional_is_the_only_violation() {
    let report = validate_tradable_product(&with_fixed_leg(|p| p.notional = Decimal::ZERO));
    assert_eq!(report.messages(), vec!["notional must be positive".to_string()]);
}

#[test]
fn unresolved_party_reference() {
    let report = validate_tradable_product(&with_fixed_leg(|p| p.payer_party_ref = "party-9".into()));
    assert!(report.messages().iter().any(|m| m.starts_with("unresolved party reference")));
}

#[test]
fn other_violations() {
    let report = validate_tradable_product(&with_fixed_leg(|p| p.receiver_party_ref = p.payer_party_ref.clone()));
    assert!(report.violations().contains(&Violation::SamePayerAndReceiver { payout_index: 0 }));

    let report = validate_tradable_product(&with_fixed_leg(|p| p.periods.termination_date = p.periods.effective_date));
    assert_eq!(report.violations(), &[Violation::EffectiveNotBeforeTermination { payout_index: 0 }]);

    let report = validate_tradable_product(&with_fixed_leg(|p| {
        p.periods.termination_date = NaiveDate::from_ymd_opt(2024, 12, 1).unwrap()
    }));
    assert_eq!(report.violations(), &[Violation::PeriodMultiple { payout_index: 0 }]);

    let mut tp = standard_trade().tradable_product;
    tp.counterparties[1].role = CounterpartyRole::Party1;
    assert!(validate_tradable_product(&tp).violations().contains(&Violation::CounterpartyRoles));

    let mut trade = standard_trade();
    trade.trade_date = NaiveDate::from_ymd_opt(2024, 2, 1).unwrap();
    assert!(validate_tradable_product(&trade.tradable_product).is_valid());
    assert!(!validate_trade(&trade).is_valid());
}

#[test]
fn lineage_two_link_chain() {
    let exec = create_execution_event(&standard_trade(), t0()).unwrap();
    let formed = create_contract_formation_event(exec.final_state(), t0()).unwrap();
    assert_eq!(check_lineage(&[exec.clone(), formed.clone()]), LineageReport::Intact);

    let mut tampered = formed.clone();
    tampered.primitives[0].before.as_mut().unwrap().status = TradeStatus::Confirmed;
    assert_eq!(check_lineage(&[exec.clone(), tampered]).break_index(), Some(1));

    assert_eq!(check_lineage(std::slice::from_ref(&formed)).break_index(), Some(0));
    assert!(check_lineage(&[]).is_intact());

    let mut other = create_execution_event(&standard_trade(), t0()).unwrap();
    other.primitives[0].after.trade.trade_id = TradeId::new("T2");
    assert!(matches!(
        check_lineage(&[exec, other]),
        LineageReport::Broken { index: 1, reason: LineageBreak::TradeMismatch, .. }
    ));
}

#[test]
fn primitive_transitions_are_checked() {
    let exec = create_execution_event(&standard_trade(), t0()).unwrap();
    assert_eq!(exec.primitives[0].verify_transition(), Ok(()));
    let formed = create_contract_formation_event(exec.final_state(), t0()).unwrap();
    assert_eq!(formed.primitives[0].verify_transition(), Ok(()));
    let mut sneaky = formed.primitives[0].clone();
    sneaky.after.trade.trade_date = NaiveDate::from_ymd_opt(2024, 1, 11).unwrap();
    assert!(sneaky.verify_transition().is_err());
}

fn status_strategy() -> impl Strategy<Value = TradeStatus> {
    prop_oneof![
        Just(TradeStatus::Executed),
        Just(TradeStatus::Confirmed),
        Just(TradeStatus::Rejected),
        Just(TradeStatus::Matured),
    ]
}

proptest! {
    #[test]
    fn only_three_status_edges(from in status_strategy(), to in status_strategy()) {
        use TradeStatus::*;
        let allowed = [(Executed, Confirmed), (Executed, Rejected), (Confirmed, Matured)];
        prop_assert_eq!(from.can_transition_to(to), allowed.contains(&(from, to)));
    }
}

#[test]
fn canonical_json_shapes() {
    let trade = standard_trade();
    let json = serde_json::to_value(&trade).unwrap();
    let fixed_leg = &json["tradableProduct"]["product"]["payouts"][0];
    assert_eq!(fixed_leg["payoutType"], "INTEREST_RATE");
    assert_eq!(fixed_leg["notional"], "10000000");
    assert_eq!(fixed_leg["rate"]["type"], "FIXED");
    assert_eq!(fixed_leg["rate"]["rate"], "0.02");
    assert_eq!(fixed_leg["dayCount"], "ACT_360");
    assert_eq!(fixed_leg["periods"]["businessDayConvention"], "MODIFIED_FOLLOWING");
    assert_eq!(fixed_leg["periods"]["frequency"], "QUARTERLY");
    assert_eq!(json["tradableProduct"]["counterparties"][0]["role"], "PARTY1");
    let floating = &json["tradableProduct"]["product"]["payouts"][1]["rate"];
    assert_eq!(floating["tenorMonths"], 3);
    let back: Trade = serde_json::from_value(json).unwrap();
    assert_eq!(back, trade);
    assert_eq!(serde_json::to_string(&DayCountConvention::Thirty360Us).unwrap(), "\"THIRTY_360_US\"");
    assert_eq!(serde_json::to_string(&DayCountConvention::Act365F).unwrap(), "\"ACT_365F\"");
}
