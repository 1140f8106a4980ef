use chrono::{Months, NaiveDate};
use serde::{Deserialize, Serialize};

use super::calendar::adjust_date;
use super::LifecycleError;
use crate::model::CalculationPeriodDates;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CalculationPeriod {
    pub period_index: u32,
    pub unadjusted_start: NaiveDate,
    pub unadjusted_end: NaiveDate,
    pub adjusted_start: NaiveDate,
    pub adjusted_end: NaiveDate,
    pub payment_date: NaiveDate,
}

/// Regular calculation periods rolled forward from the effective date.
///
/// Each boundary is computed as an offset from the effective date rather than
/// from the previous boundary, so month-end clamping never accumulates.
pub fn generate_schedule(dates: &CalculationPeriodDates) -> Result<Vec<CalculationPeriod>, LifecycleError> {
    let count = dates.period_count().ok_or(LifecycleError::InvalidSchedule)?;
    let step = dates.frequency.months();
    let boundary =
        |k: u32| dates.effective_date.checked_add_months(Months::new(k * step)).ok_or(LifecycleError::InvalidSchedule);
    let adjust = |d| adjust_date(d, dates.business_day_convention, dates.calendar);

    let mut periods = Vec::with_capacity(count as usize);
    for k in 0..count {
        let unadjusted_start = boundary(k)?;
        let unadjusted_end = boundary(k + 1)?;
        let adjusted_start = adjust(unadjusted_start);
        let adjusted_end = adjust(unadjusted_end);
        if adjusted_start >= adjusted_end {
            return Err(LifecycleError::InvalidSchedule);
        }
        periods.push(CalculationPeriod {
            period_index: k,
            unadjusted_start,
            unadjusted_end,
            adjusted_start,
            adjusted_end,
            payment_date: adjusted_end,
        });
    }
    Ok(periods)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BusinessDayConvention, HolidayCalendar, PaymentFrequency};
    use proptest::prelude::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn dates(start: NaiveDate, end: NaiveDate, frequency: PaymentFrequency) -> CalculationPeriodDates {
        CalculationPeriodDates {
            effective_date: start,
            termination_date: end,
            frequency,
            business_day_convention: BusinessDayConvention::None,
            calendar: HolidayCalendar::NoHolidays,
        }
    }

    #[test]
    fn quarterly_year_has_four_periods() {
        let periods = generate_schedule(&dates(d(2024, 1, 15), d(2025, 1, 15), PaymentFrequency::Quarterly)).unwrap();
        let bounds: Vec<_> = periods.iter().map(|p| p.unadjusted_start).collect();
        assert_eq!(bounds, vec![d(2024, 1, 15), d(2024, 4, 15), d(2024, 7, 15), d(2024, 10, 15)]);
        assert_eq!(periods.last().unwrap().unadjusted_end, d(2025, 1, 15));
        assert!(periods.iter().all(|p| p.payment_date == p.adjusted_end));
    }

    #[test]
    fn annual_year_is_one_period() {
        let periods = generate_schedule(&dates(d(2024, 1, 15), d(2025, 1, 15), PaymentFrequency::Annual)).unwrap();
        assert_eq!(periods.len(), 1);
    }

    #[test]
    fn zero_length_span_is_rejected() {
        let err = generate_schedule(&dates(d(2024, 1, 15), d(2024, 1, 15), PaymentFrequency::Quarterly)).unwrap_err();
        assert_eq!(err, LifecycleError::InvalidSchedule);
    }

    #[test]
    fn off_cycle_termination_is_rejected() {
        assert!(generate_schedule(&dates(d(2024, 1, 15), d(2024, 12, 15), PaymentFrequency::Quarterly)).is_err());
        assert!(generate_schedule(&dates(d(2024, 1, 15), d(2025, 1, 16), PaymentFrequency::Annual)).is_err());
    }

    #[test]
    fn month_end_start_does_not_drift() {
        let periods = generate_schedule(&dates(d(2024, 1, 31), d(2024, 7, 31), PaymentFrequency::Monthly)).unwrap();
        let ends: Vec<_> = periods.iter().map(|p| p.unadjusted_end).collect();
        assert_eq!(
            ends,
            vec![d(2024, 2, 29), d(2024, 3, 31), d(2024, 4, 30), d(2024, 5, 31), d(2024, 6, 30), d(2024, 7, 31)]
        );
    }

    proptest! {
        #[test]
        fn schedule_tiles_the_span(
            offset in 0u64..3000,
            freq in prop::sample::select(vec![
                PaymentFrequency::Monthly, PaymentFrequency::Quarterly,
                PaymentFrequency::SemiAnnual, PaymentFrequency::Annual,
            ]),
            n in 1u32..12,
            conv in prop::sample::select(vec![
                BusinessDayConvention::None, BusinessDayConvention::Following,
                BusinessDayConvention::ModifiedFollowing,
            ]),
        ) {
            let start = d(2020, 1, 1) + chrono::Days::new(offset);
            let end = start.checked_add_months(Months::new(n * freq.months())).unwrap();
            let mut terms = dates(start, end, freq);
            terms.business_day_convention = conv;
            terms.calendar = HolidayCalendar::WeekendsOnly;
            // month-end starts may clamp so the span is not always a clean multiple
            prop_assume!(terms.period_count().is_some());
            let periods = generate_schedule(&terms).unwrap();
            prop_assert_eq!(periods.len() as u32, n);
            prop_assert_eq!(periods[0].unadjusted_start, start);
            prop_assert_eq!(periods.last().unwrap().unadjusted_end, end);
            for w in periods.windows(2) {
                prop_assert_eq!(w[0].unadjusted_end, w[1].unadjusted_start);
                prop_assert!(w[0].adjusted_end <= w[1].adjusted_start);
            }
            for p in &periods {
                prop_assert!(p.adjusted_start < p.adjusted_end);
            }
        }
    }
}
