//! Operations shared by both truncated series types: composition with a
//! univariate series, and the elementary functions built on it.

use crate::error::{Error, Result};
use crate::rat::Rat;

/// A commutative ring of truncated power series over [`Rat`] in which every
/// element with zero constant term is nilpotent.
pub trait TruncatedRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn constant_term(&self) -> Rat;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rat) -> Self;

    /// Smallest `n` such that `u^n == 0` for every `u` with zero constant term.
    fn nilpotency_index(&self) -> u32;

    fn constant_like(&self, c: Rat) -> Self {
        self.one_like().scale(&c)
    }

    /// `self - constant_term()`.
    fn without_constant(&self) -> Self {
        self.add_ref(&self.constant_like(-self.constant_term()))
    }
}

/// `Σ_k coeffs[k] · u^k` by Horner's rule. Requires `u` to have zero
/// constant term; coefficients beyond the nilpotency index are ignored.
pub fn compose_univariate<T: TruncatedRing>(coeffs: &[Rat], u: &T) -> Result<T> {
    if !u.constant_term().is_zero() {
        return Err(Error::domain(
            "inner series of a composition must have zero constant term",
        ));
    }
    let n = coeffs.len().min(u.nilpotency_index() as usize);
    let mut acc = u.zero_like();
    for c in coeffs[..n].iter().rev() {
        acc = acc.mul_ref(u);
        if !c.is_zero() {
            acc = acc.add_ref(&u.constant_like(c.clone()));
        }
    }
    Ok(acc)
}

/// Taylor coefficients of `e^x` up to `x^(n-1)`.
pub fn exp_coeffs(n: u32) -> Vec<Rat> {
    let mut out = Vec::with_capacity(n as usize);
    let mut c = Rat::one();
    for k in 0..n {
        if k > 0 {
            c = c / Rat::from(k as i64);
        }
        out.push(c.clone());
    }
    out
}

/// Taylor coefficients of `log(1+x)` up to `x^(n-1)`.
pub fn log1p_coeffs(n: u32) -> Vec<Rat> {
    (0..n)
        .map(|k| match k {
            0 => Rat::zero(),
            k if k % 2 == 1 => Rat::new(1, k),
            k => Rat::new(-1, k),
        })
        .collect()
}

/// Taylor coefficients of `1/(1+x)` up to `x^(n-1)`.
pub fn recip1p_coeffs(n: u32) -> Vec<Rat> {
    (0..n)
        .map(|k| if k % 2 == 0 { Rat::one() } else { -Rat::one() })
        .collect()
}

/// `e^s`; requires `s` to have zero constant term.
pub fn exp<T: TruncatedRing>(s: &T) -> Result<T> {
    if !s.constant_term().is_zero() {
        return Err(Error::domain(format!(
            "exp needs an argument with zero constant term (got {})",
            s.constant_term()
        )));
    }
    compose_univariate(&exp_coeffs(s.nilpotency_index()), s)
}

/// `log s`; requires constant term exactly 1 so the result stays rational.
pub fn log<T: TruncatedRing>(s: &T) -> Result<T> {
    if !s.constant_term().is_one() {
        return Err(Error::domain(format!(
            "log needs an argument with constant term 1 (got {})",
            s.constant_term()
        )));
    }
    compose_univariate(&log1p_coeffs(s.nilpotency_index()), &s.without_constant())
}

/// `1/s`; requires an invertible constant term.
pub fn reciprocal<T: TruncatedRing>(s: &T) -> Result<T> {
    let c0 = s.constant_term();
    let inv = c0.recip().map_err(|_| {
        Error::domain("reciprocal needs a series with nonzero constant term")
    })?;
    // 1/s = c0^{-1} · 1/(1+u) with u = s/c0 - 1
    let u = s.scale(&inv).without_constant();
    Ok(compose_univariate(&recip1p_coeffs(s.nilpotency_index()), &u)?.scale(&inv))
}

/// `s^m` by repeated squaring.
pub fn pow<T: TruncatedRing>(s: &T, m: u32) -> T {
    let mut result = s.one_like();
    let mut base = s.clone();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_ref(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_ref(&base);
        }
    }
    result
}
