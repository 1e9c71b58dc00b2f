use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::index::{MultiIndex, Vars};
use crate::series::ring::{self, TruncatedRing};
use crate::series::wseries::WSeries;

/// Truncated formal power series `Σ_k g_k(w) z^k` in `z` and the w-variables.
///
/// `z` is truncated by plain degree (`k <= z_order`), each `g_k` by total
/// w-degree (`<= w_order`). Rows that are identically zero are not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ZWSeries {
    vars: Vars,
    z_order: u32,
    w_order: u32,
    rows: BTreeMap<u32, WSeries>,
}

impl ZWSeries {
    pub fn zero(vars: Vars, z_order: u32, w_order: u32) -> Self {
        ZWSeries { vars, z_order, w_order, rows: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, z_order: u32, w_order: u32, c: Rat) -> Self {
        let row = WSeries::constant(vars.clone(), w_order, c);
        ZWSeries::from_rows(vars, z_order, w_order, [(0, row)])
    }

    pub fn one(vars: Vars, z_order: u32, w_order: u32) -> Self {
        ZWSeries::constant(vars, z_order, w_order, Rat::one())
    }

    /// The series `z` (zero when `z_order == 0`).
    pub fn z(vars: Vars, z_order: u32, w_order: u32) -> Self {
        let row = WSeries::constant(vars.clone(), w_order, Rat::one());
        ZWSeries::from_rows(vars, z_order, w_order, [(1, row)])
    }

    /// The w-variable with index `i`.
    pub fn w(vars: Vars, z_order: u32, w_order: u32, i: usize) -> Self {
        let row = WSeries::variable(vars.clone(), w_order, i);
        ZWSeries::from_rows(vars, z_order, w_order, [(0, row)])
    }

    /// `s(w) · z^0`.
    pub fn from_w(s: &WSeries, z_order: u32) -> Self {
        ZWSeries::from_rows(s.vars().clone(), z_order, s.order(), [(0, s.clone())])
    }

    /// Builds from `(k, g_k)` rows; rows beyond `z_order` are dropped and
    /// every row is re-truncated to `w_order`.
    pub fn from_rows(
        vars: Vars,
        z_order: u32,
        w_order: u32,
        rows: impl IntoIterator<Item = (u32, WSeries)>,
    ) -> Self {
        let mut out = ZWSeries::zero(vars, z_order, w_order);
        for (k, row) in rows {
            assert_eq!(row.vars(), &out.vars, "row variables differ from series variables");
            if k > z_order {
                continue;
            }
            let row = row.with_order(w_order);
            match out.rows.get_mut(&k) {
                Some(existing) => {
                    existing.add_scaled_assign(&row, &Rat::one());
                    if existing.is_empty() {
                        out.rows.remove(&k);
                    }
                }
                None if !row.is_empty() => {
                    out.rows.insert(k, row);
                }
                None => {}
            }
        }
        out
    }

    /// Builds from `(k, α, c)` triples.
    pub fn from_terms(
        vars: Vars,
        z_order: u32,
        w_order: u32,
        terms: impl IntoIterator<Item = (u32, MultiIndex, Rat)>,
    ) -> Self {
        let mut by_row: BTreeMap<u32, Vec<(MultiIndex, Rat)>> = BTreeMap::new();
        for (k, a, c) in terms {
            by_row.entry(k).or_default().push((a, c));
        }
        let rows = by_row
            .into_iter()
            .map(|(k, ts)| (k, WSeries::from_terms(vars.clone(), w_order, ts)))
            .collect::<Vec<_>>();
        ZWSeries::from_rows(vars, z_order, w_order, rows)
    }

    /// Series in `z` alone from dense coefficients (no w-dependence).
    pub fn from_z_coeffs(vars: Vars, z_order: u32, w_order: u32, coeffs: &[Rat]) -> Self {
        let rows = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (k as u32, WSeries::constant(vars.clone(), w_order, c.clone())))
            .collect::<Vec<_>>();
        ZWSeries::from_rows(vars, z_order, w_order, rows)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn z_order(&self) -> u32 {
        self.z_order
    }

    pub fn w_order(&self) -> u32 {
        self.w_order
    }

    /// Nonzero rows `(k, g_k)` in increasing `k`.
    pub fn rows(&self) -> impl Iterator<Item = (u32, &WSeries)> {
        self.rows.iter().map(|(k, v)| (*k, v))
    }

    /// All nonzero terms `(k, α, c)` sorted by `(k, graded-lex α)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &MultiIndex, &Rat)> {
        self.rows
            .iter()
            .flat_map(|(k, row)| row.terms().map(move |(a, c)| (*k, a, c)))
    }

    pub fn num_terms(&self) -> usize {
        self.rows.values().map(WSeries::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// `g_k(w)`; the zero series if `k` has no terms or exceeds `z_order`.
    pub fn row(&self, k: u32) -> WSeries {
        self.rows
            .get(&k)
            .cloned()
            .unwrap_or_else(|| WSeries::zero(self.vars.clone(), self.w_order))
    }

    /// `[z^k w^α]`, checked against both truncation orders.
    pub fn coeff(&self, k: u32, alpha: &MultiIndex) -> Result<Rat> {
        if k > self.z_order {
            return Err(Error::Range(format!(
                "z-exponent {k} exceeds z truncation order {}",
                self.z_order
            )));
        }
        match self.rows.get(&k) {
            Some(row) => row.coeff(alpha),
            None => WSeries::zero(self.vars.clone(), self.w_order).coeff(alpha),
        }
    }

    /// `G(0,0)`.
    pub fn constant_term(&self) -> Rat {
        self.rows.get(&0).map(WSeries::constant_term).unwrap_or_else(Rat::zero)
    }

    /// `(∂G/∂z)(0,0) = g_1(0)`.
    pub fn dz_at_origin(&self) -> Rat {
        self.rows.get(&1).map(WSeries::constant_term).unwrap_or_else(Rat::zero)
    }

    /// True if no row depends on w (a series in `z` only).
    pub fn is_z_only(&self) -> bool {
        self.rows.values().all(|r| r.valuation().is_none_or(|d| d == 0) && r.len() <= 1)
    }

    /// True if `G(z, 0) ≡ 0`, i.e. every term carries at least one w.
    pub fn vanishes_at_w_zero(&self) -> bool {
        self.rows.values().all(|r| r.constant_term().is_zero())
    }

    /// `G(z, 0)` as dense rational coefficients `[z^0], ..., [z^z_order]`.
    pub fn at_w_zero(&self) -> Vec<Rat> {
        (0..=self.z_order)
            .map(|k| self.rows.get(&k).map(WSeries::constant_term).unwrap_or_else(Rat::zero))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.rows.values().all(WSeries::is_integral)
    }

    /// Reinterprets the series at new truncation orders: terms beyond them
    /// are dropped, and when an order grows the series is read as a
    /// polynomial (absent terms are zero).
    pub fn with_orders(&self, z_order: u32, w_order: u32) -> ZWSeries {
        let rows = self
            .rows
            .iter()
            .filter(|(k, _)| **k <= z_order)
            .map(|(k, r)| (*k, r.with_order(w_order)))
            .filter(|(_, r)| !r.is_empty())
            .collect();
        ZWSeries { vars: self.vars.clone(), z_order, w_order, rows }
    }

    pub fn add(&self, other: &ZWSeries) -> Result<ZWSeries> {
        self.vars.check_same(&other.vars)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &ZWSeries) -> Result<ZWSeries> {
        self.vars.check_same(&other.vars)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    /// Product truncated to the smaller of each pair of orders.
    pub fn mul(&self, other: &ZWSeries) -> Result<ZWSeries> {
        self.vars.check_same(&other.vars)?;
        Ok(self.mul_truncated(
            other,
            self.z_order.min(other.z_order),
            self.w_order.min(other.w_order),
        ))
    }

    pub fn pow(&self, m: u32) -> ZWSeries {
        ring::pow(self, m)
    }

    fn add_unchecked(&self, other: &ZWSeries) -> ZWSeries {
        let z_order = self.z_order.min(other.z_order);
        let w_order = self.w_order.min(other.w_order);
        let mut out = self.with_orders(z_order, w_order);
        for (k, row) in &other.rows {
            if *k > z_order {
                continue;
            }
            match out.rows.get_mut(k) {
                Some(existing) => {
                    existing.add_scaled_assign(row, &Rat::one());
                    if existing.is_empty() {
                        out.rows.remove(k);
                    }
                }
                None => {
                    let r = row.with_order(w_order);
                    if !r.is_empty() {
                        out.rows.insert(*k, r);
                    }
                }
            }
        }
        out
    }

    fn neg_ref(&self) -> ZWSeries {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> ZWSeries {
        if c.is_zero() {
            return ZWSeries::zero(self.vars.clone(), self.z_order, self.w_order);
        }
        ZWSeries {
            vars: self.vars.clone(),
            z_order: self.z_order,
            w_order: self.w_order,
            rows: self.rows.iter().map(|(k, r)| (*k, r.scale(c))).collect(),
        }
    }

    /// Product keeping `k <= z_order` and total w-degree `<= w_order`.
    pub(crate) fn mul_truncated(&self, other: &ZWSeries, z_order: u32, w_order: u32) -> ZWSeries {
        debug_assert_eq!(self.vars, other.vars);
        let mut rows: BTreeMap<u32, WSeries> = BTreeMap::new();
        for (i, a) in &self.rows {
            if *i > z_order {
                break;
            }
            for (j, b) in &other.rows {
                if i + j > z_order {
                    break;
                }
                let p = a.mul_truncated(b, w_order);
                if p.is_empty() {
                    continue;
                }
                match rows.get_mut(&(i + j)) {
                    Some(acc) => acc.add_scaled_assign(&p, &Rat::one()),
                    None => {
                        rows.insert(i + j, p);
                    }
                }
            }
        }
        rows.retain(|_, r| !r.is_empty());
        ZWSeries { vars: self.vars.clone(), z_order, w_order, rows }
    }

    /// Drops every term `z^k w^α` with `k + |α| > bound`.
    pub(crate) fn retain_weight(&mut self, bound: u32) {
        for (k, row) in self.rows.iter_mut() {
            row.retain(|a| k + a.degree() <= bound);
        }
        self.rows.retain(|_, r| !r.is_empty());
    }

    /// `[z^k](self · other)` without forming the full product.
    pub(crate) fn product_row(&self, other: &ZWSeries, k: u32, w_order: u32) -> WSeries {
        let mut acc = WSeries::zero(self.vars.clone(), w_order);
        for (i, a) in self.rows.range(..=k) {
            if let Some(b) = other.rows.get(&(k - i)) {
                acc.add_scaled_assign(&a.mul_truncated(b, w_order), &Rat::one());
            }
        }
        acc
    }

    /// Formal `∂/∂z`; the z-order drops by one.
    pub fn d_dz(&self) -> ZWSeries {
        let rows = self
            .rows
            .iter()
            .filter(|(k, _)| **k >= 1)
            .map(|(k, r)| (k - 1, r.scale(&Rat::from(*k as i64))))
            .collect();
        ZWSeries {
            vars: self.vars.clone(),
            z_order: self.z_order.saturating_sub(1),
            w_order: self.w_order,
            rows,
        }
    }

    /// Multiplies by `z^j` (z-order grows by `j`).
    pub fn shift_z(&self, j: u32) -> ZWSeries {
        ZWSeries {
            vars: self.vars.clone(),
            z_order: self.z_order + j,
            w_order: self.w_order,
            rows: self.rows.iter().map(|(k, r)| (k + j, r.clone())).collect(),
        }
    }

    /// Divides by `z`; requires `g_0 ≡ 0`.
    pub fn divide_by_z(&self) -> Result<ZWSeries> {
        if self.rows.contains_key(&0) {
            return Err(Error::domain("series is not divisible by z (nonzero z^0 row)"));
        }
        Ok(ZWSeries {
            vars: self.vars.clone(),
            z_order: self.z_order.saturating_sub(1),
            w_order: self.w_order,
            rows: self.rows.iter().map(|(k, r)| (k - 1, r.clone())).collect(),
        })
    }

    /// `Σ_k g_k(w) s(w)^k`, truncated to the w-order of the result.
    ///
    /// Requires `s(0) = 0` so the truncated composition is well defined.
    pub fn substitute_z(&self, s: &WSeries) -> Result<WSeries> {
        self.vars.check_same(s.vars())?;
        if !s.constant_term().is_zero() {
            return Err(Error::domain(format!(
                "substituted series must have zero constant term (got {})",
                s.constant_term()
            )));
        }
        let order = self.w_order.min(s.order());
        let s = s.with_order(order);
        // Horner in z: (((g_K) s + g_{K-1}) s + ...) + g_0
        let top = match self.rows.keys().next_back() {
            Some(&k) => k,
            None => return Ok(WSeries::zero(self.vars.clone(), order)),
        };
        let mut acc = WSeries::zero(self.vars.clone(), order);
        for k in (0..=top).rev() {
            acc = acc.mul_truncated(&s, order);
            if let Some(r) = self.rows.get(&k) {
                acc.add_scaled_assign(&r.with_order(order), &Rat::one());
            }
        }
        Ok(acc)
    }

    /// `e^s`, requiring `s(0,0) = 0`.
    pub fn exp_series(&self) -> Result<ZWSeries> {
        ring::exp(self)
    }

    /// `log s`, requiring `s(0,0) = 1`.
    pub fn log_series(&self) -> Result<ZWSeries> {
        ring::log(self)
    }

    /// `1/s`, requiring `s(0,0) != 0`.
    pub fn reciprocal(&self) -> Result<ZWSeries> {
        ring::reciprocal(self)
    }

    /// Floating-point coefficients `(k, exponents, value)` for evaluation.
    pub fn to_f64_terms(&self) -> Vec<(u32, Vec<u32>, f64)> {
        self.terms()
            .map(|(k, a, c)| (k, a.exponents().to_vec(), c.to_f64()))
            .collect()
    }

    /// Evaluates the truncated series as a polynomial at complex `(z, w)`.
    pub fn eval_complex(&self, z: Complex64, w: &[Complex64]) -> Complex64 {
        assert_eq!(w.len(), self.vars.len(), "point dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        let top = self.rows.keys().next_back().copied().unwrap_or(0);
        for k in (0..=top).rev() {
            acc *= z;
            if let Some(row) = self.rows.get(&k) {
                for (a, c) in row.terms() {
                    acc += a
                        .exponents()
                        .iter()
                        .zip(w)
                        .fold(Complex64::new(c.to_f64(), 0.0), |t, (&e, wi)| t * wi.powu(e));
                }
            }
        }
        acc
    }
}

impl TruncatedRing for ZWSeries {
    fn zero_like(&self) -> Self {
        ZWSeries::zero(self.vars.clone(), self.z_order, self.w_order)
    }
    fn one_like(&self) -> Self {
        ZWSeries::one(self.vars.clone(), self.z_order, self.w_order)
    }
    fn constant_term(&self) -> Rat {
        ZWSeries::constant_term(self)
    }
    fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add_unchecked(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul_truncated(other, self.z_order.min(other.z_order), self.w_order.min(other.w_order))
    }
    fn scale(&self, c: &Rat) -> Self {
        ZWSeries::scale(self, c)
    }
    fn nilpotency_index(&self) -> u32 {
        self.z_order + self.w_order + 1
    }
}

impl std::fmt::Debug for ZWSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ZWSeries{:?}(O(z^{}), O(w^{})) {{",
            self.vars,
            self.z_order + 1,
            self.w_order + 1
        )?;
        for (i, (k, a, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "z^{k} w^{a}: {c}")?;
        }
        f.write_str("}")
    }
}

impl Add for &ZWSeries {
    type Output = ZWSeries;
    fn add(self, rhs: &ZWSeries) -> ZWSeries {
        ZWSeries::add(self, rhs).expect("ZWSeries + ZWSeries")
    }
}

impl Sub for &ZWSeries {
    type Output = ZWSeries;
    fn sub(self, rhs: &ZWSeries) -> ZWSeries {
        ZWSeries::sub(self, rhs).expect("ZWSeries - ZWSeries")
    }
}

impl Mul for &ZWSeries {
    type Output = ZWSeries;
    fn mul(self, rhs: &ZWSeries) -> ZWSeries {
        ZWSeries::mul(self, rhs).expect("ZWSeries * ZWSeries")
    }
}

impl Neg for &ZWSeries {
    type Output = ZWSeries;
    fn neg(self) -> ZWSeries {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(zo: u32, wo: u32) -> ZWSeries {
        ZWSeries::z(Vars::w(), zo, wo)
    }
    fn w(zo: u32, wo: u32) -> ZWSeries {
        ZWSeries::w(Vars::w(), zo, wo, 0)
    }
    fn c(zo: u32, wo: u32, v: i64) -> ZWSeries {
        ZWSeries::constant(Vars::w(), zo, wo, Rat::from(v))
    }
    fn a(e: u32) -> MultiIndex {
        MultiIndex::from([e])
    }

    #[test]
    fn additive_inverse() {
        let zz = z(3, 3);
        assert!(zz.add(&-&zz).unwrap().is_zero());
    }

    #[test]
    fn product_truncates_in_z() {
        let s = &c(1, 0, 1) + &z(1, 0);
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq, &c(1, 0, 1) + &z(1, 0).scale(&Rat::from(2)));
    }

    #[test]
    fn binomial_square() {
        let s = &w(4, 2) + &z(4, 2).pow(2);
        let expect = &(&w(4, 2).pow(2) + &(&w(4, 2) * &z(4, 2).pow(2)).scale(&Rat::from(2)))
            + &z(4, 2).pow(4);
        assert_eq!(s.pow(2), expect);
    }

    #[test]
    fn derivative() {
        assert_eq!(z(3, 0).pow(3).d_dz(), z(2, 0).pow(2).scale(&Rat::from(3)));
        assert!(w(3, 2).d_dz().is_zero());
        let s = &(&z(3, 2) * &w(3, 2)) + &z(3, 2).pow(2);
        assert_eq!(s.d_dz(), &w(2, 2) + &z(2, 2).scale(&Rat::from(2)));
    }

    #[test]
    fn coefficient_extraction() {
        let s = &c(2, 2, 1) + &(&z(2, 2) * &w(2, 2)).scale(&Rat::from(2));
        assert_eq!(s.coeff(1, &a(1)).unwrap(), Rat::from(2));
        assert_eq!(s.coeff(3, &a(0)).unwrap_err().code(), "range");
        // (w + z^2)^3 = w^3 + 3 w^2 z^2 + 3 w z^4 + z^6
        let cube = (&w(6, 3) + &z(6, 3).pow(2)).pow(3);
        assert_eq!(cube.coeff(2, &a(2)).unwrap(), Rat::from(3));
    }

    #[test]
    fn substitution() {
        let s = WSeries::univariate("w", 3, &[Rat::zero(), Rat::one(), Rat::one()]);
        assert_eq!(z(3, 3).substitute_z(&s).unwrap(), s);
        let sq = z(3, 3).pow(2).substitute_z(&s).unwrap();
        let expect = WSeries::univariate(
            "w",
            3,
            &[Rat::zero(), Rat::zero(), Rat::one(), Rat::from(2)],
        );
        assert_eq!(sq, expect);
        let bad = WSeries::univariate("w", 3, &[Rat::one()]);
        assert_eq!(z(3, 3).substitute_z(&bad).unwrap_err().code(), "domain");
    }

    #[test]
    fn origin_accessors() {
        let g = &(&z(3, 3).scale(&Rat::new(1, 2)) + &w(3, 3)) + &z(3, 3).pow(2);
        assert_eq!(g.constant_term(), Rat::zero());
        assert_eq!(g.dz_at_origin(), Rat::new(1, 2));
        assert!(!g.vanishes_at_w_zero());
    }

    #[test]
    fn complex_evaluation_matches_horner() {
        let g = &(&w(4, 2) + &z(4, 2).pow(2)) + &(&z(4, 2) * &w(4, 2));
        let zz = Complex64::new(0.3, -0.1);
        let ww = [Complex64::new(0.2, 0.05)];
        let expect = ww[0] + zz * zz + zz * ww[0];
        assert!((g.eval_complex(zz, &ww) - expect).norm() < 1e-15);
    }
}
