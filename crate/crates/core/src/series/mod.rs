//! Exact truncated power series in `z` and the w-variables.

pub(crate) mod dense;
mod index;
pub mod ring;
pub mod serial;
mod wseries;
mod zwseries;

pub use index::{MultiIndex, Vars};
pub use ring::TruncatedRing;
pub use wseries::WSeries;
pub use zwseries::ZWSeries;
