use chrono::{Datelike, Days, NaiveDate, Weekday};

use crate::model::{BusinessDayConvention, HolidayCalendar};

pub fn is_business_day(date: NaiveDate, calendar: HolidayCalendar) -> bool {
    match calendar {
        HolidayCalendar::NoHolidays => true,
        HolidayCalendar::WeekendsOnly => !matches!(date.weekday(), Weekday::Sat | Weekday::Sun),
    }
}

fn roll(mut date: NaiveDate, calendar: HolidayCalendar, forward: bool) -> NaiveDate {
    while !is_business_day(date, calendar) {
        date = if forward { date + Days::new(1) } else { date - Days::new(1) };
    }
    date
}

/// Move `date` onto a good business day according to `convention`.
pub fn adjust_date(date: NaiveDate, convention: BusinessDayConvention, calendar: HolidayCalendar) -> NaiveDate {
    match convention {
        BusinessDayConvention::None => date,
        BusinessDayConvention::Following => roll(date, calendar, true),
        BusinessDayConvention::ModifiedFollowing => {
            let following = roll(date, calendar, true);
            if following.month() == date.month() {
                following
            } else {
                roll(date, calendar, false)
            }
        }
    }
}
