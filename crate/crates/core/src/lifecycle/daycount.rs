use chrono::{Datelike, NaiveDate};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::LifecycleError;
use crate::model::DayCountConvention;

/// A year fraction kept as an exact ratio of day counts.
///
/// Amounts are computed from the ratio directly so the only rounding is the
/// final rounding to currency units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DayCountFraction {
    pub days: i64,
    pub basis: i64,
}

impl DayCountFraction {
    pub const ZERO: Self = Self { days: 0, basis: 360 };

    pub fn new(days: i64, basis: i64) -> Self {
        assert!(basis > 0, "day count basis must be positive");
        Self { days, basis }
    }

    pub fn to_decimal(self) -> Decimal {
        Decimal::from(self.days) / Decimal::from(self.basis)
    }

    /// `value × days / basis`, exact up to a single division.
    pub fn scale(self, value: Decimal) -> Decimal {
        value * Decimal::from(self.days) / Decimal::from(self.basis)
    }
}

fn thirty_360_us(start: NaiveDate, end: NaiveDate) -> i64 {
    let (y1, m1, mut d1) = (start.year() as i64, start.month() as i64, start.day() as i64);
    let (y2, m2, mut d2) = (end.year() as i64, end.month() as i64, end.day() as i64);
    if d1 == 31 {
        d1 = 30;
    }
    if d2 == 31 && d1 >= 30 {
        d2 = 30;
    }
    360 * (y2 - y1) + 30 * (m2 - m1) + (d2 - d1)
}

pub fn day_count_fraction(
    start: NaiveDate,
    end: NaiveDate,
    convention: DayCountConvention,
) -> Result<DayCountFraction, LifecycleError> {
    if start > end {
        return Err(LifecycleError::InvalidInterval { start, end });
    }
    let actual = (end - start).num_days();
    Ok(match convention {
        DayCountConvention::Act360 => DayCountFraction::new(actual, 360),
        DayCountConvention::Act365F => DayCountFraction::new(actual, 365),
        DayCountConvention::Thirty360Us => DayCountFraction::new(thirty_360_us(start, end), 360),
    })
}
