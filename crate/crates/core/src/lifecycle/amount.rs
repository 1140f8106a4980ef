use rust_decimal::{Decimal, RoundingStrategy};

use super::daycount::DayCountFraction;

/// Round to currency cents, halves away from zero.
pub fn round_currency(amount: Decimal) -> Decimal {
    let mut rounded = amount.round_dp_with_strategy(2, RoundingStrategy::MidpointAwayFromZero);
    rounded.rescale(2);
    rounded
}

pub fn fixed_amount(notional: Decimal, rate: Decimal, dcf: DayCountFraction) -> Decimal {
    round_currency(dcf.scale(notional * rate))
}

pub fn floating_amount(notional: Decimal, observed_rate: Decimal, spread: Decimal, dcf: DayCountFraction) -> Decimal {
    round_currency(dcf.scale(notional * (observed_rate + spread)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_quarter() {
        let amount = fixed_amount(dec!(10000000), dec!(0.02), DayCountFraction::new(90, 360));
        assert_eq!(amount.to_string(), "50000.00");
    }

    #[test]
    fn fixed_zero_fraction() {
        let amount = fixed_amount(dec!(10000000), dec!(0.02), DayCountFraction::ZERO);
        assert_eq!(amount.to_string(), "0.00");
    }

    #[test]
    fn fixed_91_days_rounds_half_up() {
        // 10_000_000 * 0.02 * 91 / 360 = 50555.5555...
        let amount = fixed_amount(dec!(10000000), dec!(0.02), DayCountFraction::new(91, 360));
        assert_eq!(amount.to_string(), "50555.56");
    }

    #[test]
    fn floating_cases() {
        let quarter = DayCountFraction::new(90, 360);
        let half = DayCountFraction::new(180, 360);
        assert_eq!(floating_amount(dec!(10000000), dec!(0.03), dec!(0), quarter).to_string(), "75000.00");
        assert_eq!(floating_amount(dec!(10000000), dec!(0), dec!(0), quarter).to_string(), "0.00");
        assert_eq!(floating_amount(dec!(10000000), dec!(0.03), dec!(0.001), half).to_string(), "155000.00");
    }

    #[test]
    fn exact_half_cent_rounds_up() {
        // 1 * 0.00005 * 360/360 * ... = 0.005 exactly
        assert_eq!(round_currency(dec!(0.005)), dec!(0.01));
        assert_eq!(round_currency(dec!(0.00499999)), dec!(0.00));
    }

    proptest! {
        #[test]
        fn amounts_are_monotone(
            notional in 1i64..1_000_000_000,
            rate in 0i64..100_000,
            bump in 0i64..1_000,
            days in 0i64..800,
        ) {
            let n = Decimal::from(notional);
            let r = Decimal::new(rate, 5);
            let dcf = DayCountFraction::new(days, 360);
            let base = fixed_amount(n, r, dcf);
            prop_assert!(fixed_amount(n + Decimal::from(bump), r, dcf) >= base);
            prop_assert!(fixed_amount(n, r + Decimal::new(bump, 5), dcf) >= base);
            prop_assert!(fixed_amount(n, r, DayCountFraction::new(days + bump, 360)) >= base);
            let fl = floating_amount(n, r, Decimal::ZERO, dcf);
            prop_assert_eq!(fl, base);
            prop_assert!(floating_amount(n, r, Decimal::new(bump, 5), dcf) >= fl);
        }
    }
}
