#[cfg(test)]
macro_rules! dec {
    ($x:literal) => {
        <rust_decimal::Decimal as std::str::FromStr>::from_str(stringify!($x)).unwrap()
    };
}

pub mod api;
pub mod error;
pub mod events;
pub mod fmi;
pub mod harness;
pub mod lifecycle;
pub mod model;
pub mod query;
pub mod registry;
pub mod scenario;
pub mod sim;
pub mod store;

pub use error::{ErrorCode, SimError};
pub use sim::{Simulator, SimulatorConfig, StorageBackend};
