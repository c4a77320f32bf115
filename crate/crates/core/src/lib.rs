pub mod cache;
pub mod cli;
pub mod engine;
pub mod error;
pub mod exact;
pub mod hurwitz;
pub mod linalg;
pub mod numerics;
pub mod oracle;
pub mod partitions;
pub mod pseries;
pub mod quasimod;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Rational;
