//! Dense univariate truncated series as plain coefficient vectors.

use crate::error::Result;
use crate::rat::Rat;

/// Product truncated to degree `< len`.
pub fn mul(a: &[Rat], b: &[Rat], len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `1/a` to degree `< len`; `a[0]` must be invertible.
pub fn reciprocal(a: &[Rat], len: usize) -> Result<Vec<Rat>> {
    let inv = a.first().cloned().unwrap_or_else(Rat::zero).recip()?;
    let mut out: Vec<Rat> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            out.push(inv.clone());
            continue;
        }
        let s: Rat = (1..=n.min(a.len().saturating_sub(1)))
            .map(|k| &a[k] * &out[n - k])
            .sum();
        out.push(-(s * &inv));
    }
    Ok(out)
}

pub fn derivative(a: &[Rat]) -> Vec<Rat> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &Rat::from(k as i64))
        .collect()
}

/// Coefficient `k`, zero when absent.
pub fn at(a: &[Rat], k: usize) -> Rat {
    a.get(k).cloned().unwrap_or_else(Rat::zero)
}
