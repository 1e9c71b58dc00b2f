//! Classical Lagrange inversion: the power series `φ(w)` with `f(φ(w)) = w`,
//! and `h(φ(w))` for a given `h`.
//!
//! With `g(z) = z/f(z)`,
//!
//! ```text
//! [w^m] φ      = (1/m) [ζ^{m-1}] g^m
//! [w^m] h(φ)   = (1/m) [ζ^{m-1}] h'·g^m                    (m ≥ 1)
//!              = [ζ^m] h·(g^m − ζ g' g^{m-1})
//! ```

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::dense;
use crate::series::{WSeries, ZWSeries};

/// A series `f(z) = a₁z + a₂z² + …` with `a₁ ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevertibleSeries {
    coeffs: Vec<Rat>,
}

impl RevertibleSeries {
    /// Dense coefficients `[a₀, a₁, …]`; `a₀` must be zero and `a₁` nonzero.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Result<Self> {
        while coeffs.len() > 2 && coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        if !dense::at(&coeffs, 0).is_zero() {
            return Err(Error::domain(format!(
                "f(0) must be 0 (got {})",
                coeffs[0]
            )));
        }
        if dense::at(&coeffs, 1).is_zero() {
            return Err(Error::domain("f'(0) must be nonzero to invert f"));
        }
        Ok(RevertibleSeries { coeffs })
    }

    /// Reads `f` from a series without w-dependence. Coefficients beyond the
    /// series' z-order are taken to be zero.
    pub fn new(f: &ZWSeries) -> Result<Self> {
        Self::from_coeffs(z_only(f, "f")?)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn a1(&self) -> &Rat {
        &self.coeffs[1]
    }

    /// `g = z/f` to degree `< len`.
    fn g(&self, len: usize) -> Vec<Rat> {
        dense::reciprocal(&self.coeffs[1..], len).expect("a1 is nonzero")
    }
}

fn z_only(s: &ZWSeries, name: &str) -> Result<Vec<Rat>> {
    if !s.is_z_only() {
        return Err(Error::domain(format!("{name} must not depend on the w-variables")));
    }
    Ok(s.at_w_zero())
}

/// `φ` with `f(φ(w)) = w`, to order `n`.
pub fn revert(f: &RevertibleSeries, n: u32) -> WSeries {
    let g = f.g(n as usize);
    let mut coeffs = vec![Rat::zero()];
    let mut gm = vec![Rat::one()];
    for m in 1..=n as usize {
        gm = dense::mul(&gm, &g, n as usize);
        coeffs.push(dense::at(&gm, m - 1) / Rat::from(m as i64));
    }
    WSeries::univariate("w", n, &coeffs)
}

/// `h(φ(w))` to order `n` from `h(0) + Σ (w^m/m) [ζ^{m-1}] h'·g^m`.
pub fn revert_compose(f: &RevertibleSeries, h: &ZWSeries, n: u32) -> Result<WSeries> {
    let h = z_only(h, "h")?;
    let dh = dense::derivative(&h);
    let g = f.g(n as usize);
    let mut coeffs = vec![dense::at(&h, 0)];
    let mut gm = vec![Rat::one()];
    for m in 1..=n as usize {
        gm = dense::mul(&gm, &g, n as usize);
        let c: Rat = (0..m).map(|j| dense::at(&dh, j) * &gm[m - 1 - j]).sum();
        coeffs.push(c / Rat::from(m as i64));
    }
    Ok(WSeries::univariate("w", n, &coeffs))
}

/// `h(φ(w))` to order `n` from `h(0) + Σ w^m [ζ^m] h·(g^m − ζ g' g^{m-1})`.
pub fn revert_compose_alt(f: &RevertibleSeries, h: &ZWSeries, n: u32) -> Result<WSeries> {
    let h = z_only(h, "h")?;
    let len = n as usize + 1;
    let g = f.g(len);
    let zdg: Vec<Rat> = std::iter::once(Rat::zero()).chain(dense::derivative(&g)).collect();
    let mut coeffs = vec![dense::at(&h, 0)];
    let mut gm_prev = vec![Rat::one()]; // g^{m-1}
    for m in 1..=n as usize {
        let gm = dense::mul(&gm_prev, &g, len);
        let kernel: Vec<Rat> = dense::mul(&zdg, &gm_prev, m + 1)
            .iter()
            .zip(&gm)
            .map(|(a, b)| b - a)
            .collect();
        let c: Rat = (0..=m).map(|j| dense::at(&h, j) * &kernel[m - j]).sum();
        coeffs.push(c);
        gm_prev = gm;
    }
    Ok(WSeries::univariate("w", n, &coeffs))
}
