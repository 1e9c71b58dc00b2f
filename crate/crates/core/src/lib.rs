//! Exact power-series solutions of `z = G(z, w)` and `F(z, w) = 0`.
//!
//! The crate computes the unique formal power series `φ(w)` with zero
//! constant term satisfying `φ = G(φ, w)` from closed-form Lagrange-type
//! sums, over exact rationals, and cross-checks it against independent
//! routes: undetermined coefficients, plane-forest enumeration, and a
//! floating-point contour integral.
//!
//! Module map:
//! - [`series`]: exact truncated series in `z` and `w`.
//! - [`expr`]: the text input language and its elaboration into series.
//! - [`lagrange`]: classical reversion `f(z) = w`.
//! - [`implicit`]: the fixed-point / implicit-function solvers.
//! - [`universal`]: plane-forest coefficients and the universal series.
//! - [`analytic`]: complex floating-point verification at concrete `w`.
//! - [`reproduce`]: the worked examples (rooted trees, the lattice-gas root).

pub mod analytic;
pub mod cli;
pub mod error;
pub mod expr;
pub mod implicit;
pub mod lagrange;
pub mod rat;
pub mod reproduce;
pub mod series;
pub mod universal;

pub use error::{Error, Result};
pub use rat::Rat;
pub use series::{MultiIndex, Vars, WSeries, ZWSeries};
