use chrono::NaiveDate;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Number of 0.00001 steps in the simulated rate range [0, 0.10).
const RATE_STEPS: u64 = 10_000;
const RATE_SCALE: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Observation {
    pub index: String,
    pub tenor_months: u32,
    pub observation_date: NaiveDate,
    pub rate: Decimal,
}

/// Simulated fixing of a floating rate index.
///
/// The rate is a pure function of its inputs: a SHA-256 digest of the seed,
/// index, tenor and date picks one of the 10,000 five-decimal values in
/// [0, 0.10).
pub fn resolve_observation(index: &str, tenor_months: u32, observation_date: NaiveDate, seed: u64) -> Observation {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_be_bytes());
    hasher.update(index.as_bytes());
    hasher.update([0u8]);
    hasher.update(tenor_months.to_be_bytes());
    hasher.update(observation_date.to_string().as_bytes());
    let digest = hasher.finalize();
    let mut word = [0u8; 8];
    word.copy_from_slice(&digest[..8]);
    let step = u64::from_be_bytes(word) % RATE_STEPS;
    Observation { index: index.to_owned(), tenor_months, observation_date, rate: Decimal::new(step as i64, RATE_SCALE) }
}
