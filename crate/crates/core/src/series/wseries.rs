use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::index::{MultiIndex, Vars};
use crate::series::ring::{self, TruncatedRing};

/// Truncated formal power series in the w-variables.
///
/// Only terms of total degree `<= order` are kept and zero coefficients are
/// never stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq)]
pub struct WSeries {
    vars: Vars,
    order: u32,
    terms: BTreeMap<MultiIndex, Rat>,
}

impl WSeries {
    pub fn zero(vars: Vars, order: u32) -> Self {
        WSeries { vars, order, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, order: u32, c: Rat) -> Self {
        let len = vars.len();
        WSeries::from_terms(vars, order, [(MultiIndex::zero(len), c)])
    }

    /// The variable `w_i` (zero if `order == 0`).
    pub fn variable(vars: Vars, order: u32, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let len = vars.len();
        WSeries::from_terms(vars, order, [(MultiIndex::unit(len, i), Rat::one())])
    }

    /// Builds a series from `(index, coefficient)` pairs, summing duplicates
    /// and dropping anything beyond `order`.
    pub fn from_terms(
        vars: Vars,
        order: u32,
        terms: impl IntoIterator<Item = (MultiIndex, Rat)>,
    ) -> Self {
        let mut map: BTreeMap<MultiIndex, Rat> = BTreeMap::new();
        for (idx, c) in terms {
            assert_eq!(idx.len(), vars.len(), "multi-index length mismatch");
            if idx.degree() <= order {
                *map.entry(idx).or_insert_with(Rat::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        WSeries { vars, order, terms: map }
    }

    /// Univariate series `Σ coeffs[k] w^k` over a single variable.
    pub fn univariate(name: &str, order: u32, coeffs: &[Rat]) -> Self {
        WSeries::from_terms(
            Vars::new([name]),
            order,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (MultiIndex::from([k as u32]), c.clone())),
        )
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<&Rat> {
        self.terms.get(alpha)
    }

    /// `[w^α]`, checked against the truncation order.
    pub fn coeff(&self, alpha: &MultiIndex) -> Result<Rat> {
        if alpha.len() != self.vars.len() {
            return Err(Error::Range(format!(
                "multi-index {alpha} has {} entries, series has {} variables",
                alpha.len(),
                self.vars.len()
            )));
        }
        if alpha.degree() > self.order {
            return Err(Error::Range(format!(
                "|{alpha}| = {} exceeds truncation order {}",
                alpha.degree(),
                self.order
            )));
        }
        Ok(self.coeff_or_zero(alpha))
    }

    pub(crate) fn coeff_or_zero(&self, alpha: &MultiIndex) -> Rat {
        self.terms.get(alpha).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of `w^k` for a univariate series.
    pub fn coeff_at(&self, k: u32) -> Rat {
        assert_eq!(self.vars.len(), 1, "coeff_at needs a univariate series");
        self.coeff_or_zero(&MultiIndex::from([k]))
    }

    /// Dense coefficient list `[w^0], ..., [w^order]` of a univariate series.
    pub fn to_univariate(&self) -> Vec<Rat> {
        (0..=self.order).map(|k| self.coeff_at(k)).collect()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff_or_zero(&MultiIndex::zero(self.vars.len()))
    }

    /// Lowest total degree present, or `None` for the zero series.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(MultiIndex::degree)
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> WSeries {
        WSeries {
            vars: self.vars.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() == d)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Same series viewed at another truncation order (dropping terms, or
    /// treating absent higher terms as zero).
    pub fn with_order(&self, order: u32) -> WSeries {
        WSeries {
            vars: self.vars.clone(),
            order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() <= order)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Rat::is_integer)
    }

    pub fn add(&self, other: &WSeries) -> Result<WSeries> {
        self.vars.check_same(&other.vars)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &WSeries) -> Result<WSeries> {
        self.vars.check_same(&other.vars)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn mul(&self, other: &WSeries) -> Result<WSeries> {
        self.vars.check_same(&other.vars)?;
        Ok(self.mul_truncated(other, self.order.min(other.order)))
    }

    pub fn pow(&self, m: u32) -> WSeries {
        ring::pow(self, m)
    }

    fn add_unchecked(&self, other: &WSeries) -> WSeries {
        let order = self.order.min(other.order);
        let mut terms = self.with_order(order).terms;
        for (k, v) in &other.terms {
            if k.degree() > order {
                continue;
            }
            let entry = terms.entry(k.clone()).or_insert_with(Rat::zero);
            *entry += v;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        WSeries { vars: self.vars.clone(), order, terms }
    }

    fn neg_ref(&self) -> WSeries {
        WSeries {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// Product keeping total degree `<= order`.
    pub(crate) fn mul_truncated(&self, other: &WSeries, order: u32) -> WSeries {
        debug_assert_eq!(self.vars, other.vars);
        let mut acc: BTreeMap<MultiIndex, Rat> = BTreeMap::new();
        for (a, x) in &self.terms {
            let da = a.degree();
            if da > order {
                break;
            }
            for (b, y) in &other.terms {
                // terms are graded, so everything after this is too high
                if da + b.degree() > order {
                    break;
                }
                let prod = x * y;
                match acc.entry(a + b) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        WSeries { vars: self.vars.clone(), order, terms: acc }
    }

    /// Accumulates `c · other` into `self` in place (orders must agree).
    pub(crate) fn retain(&mut self, keep: impl Fn(&MultiIndex) -> bool) {
        self.terms.retain(|a, _| keep(a));
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &WSeries, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            if k.degree() > self.order {
                continue;
            }
            let entry = self.terms.entry(k.clone()).or_insert_with(Rat::zero);
            *entry += v * c;
            if entry.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> WSeries {
        if c.is_zero() {
            return WSeries::zero(self.vars.clone(), self.order);
        }
        WSeries {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// `e^s`, requiring `s(0) = 0`.
    pub fn exp_series(&self) -> Result<WSeries> {
        ring::exp(self)
    }

    /// `log s`, requiring `s(0) = 1`.
    pub fn log_series(&self) -> Result<WSeries> {
        ring::log(self)
    }

    /// `1/s`, requiring `s(0) != 0`.
    pub fn reciprocal(&self) -> Result<WSeries> {
        ring::reciprocal(self)
    }

    /// Replaces `w_i` by `subs[i]` (a series in another variable set).
    /// Every substituted series must have zero constant term.
    pub fn substitute_vars(&self, subs: &[WSeries]) -> Result<WSeries> {
        if subs.len() != self.vars.len() {
            return Err(Error::Range(format!(
                "need {} substitutions, got {}",
                self.vars.len(),
                subs.len()
            )));
        }
        let Some(first) = subs.first() else {
            return Ok(self.clone());
        };
        let target_vars = first.vars().clone();
        let order = subs.iter().map(WSeries::order).min().unwrap_or(0);
        for s in subs {
            target_vars.check_same(s.vars())?;
            if !s.constant_term().is_zero() {
                return Err(Error::domain("substituted series must have zero constant term"));
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<WSeries>> = subs
            .iter()
            .map(|s| vec![WSeries::constant(target_vars.clone(), order, Rat::one()), s.with_order(order)])
            .collect();
        let mut out = WSeries::zero(target_vars.clone(), order);
        for (idx, c) in &self.terms {
            let mut term = WSeries::constant(target_vars.clone(), order, c.clone());
            for (i, &e) in idx.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_truncated(&powers[i][1], order);
                    powers[i].push(next);
                }
                term = term.mul_truncated(&powers[i][e as usize], order);
                if term.is_empty() {
                    break;
                }
            }
            out.add_scaled_assign(&term, &Rat::one());
        }
        Ok(out)
    }
}

impl TruncatedRing for WSeries {
    fn zero_like(&self) -> Self {
        WSeries::zero(self.vars.clone(), self.order)
    }
    fn one_like(&self) -> Self {
        WSeries::constant(self.vars.clone(), self.order, Rat::one())
    }
    fn constant_term(&self) -> Rat {
        WSeries::constant_term(self)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add_unchecked(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul_truncated(other, self.order.min(other.order))
    }
    fn scale(&self, c: &Rat) -> Self {
        WSeries::scale(self, c)
    }
    fn nilpotency_index(&self) -> u32 {
        self.order + 1
    }
}

impl std::fmt::Debug for WSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WSeries{:?}(O({})) {{", self.vars, self.order + 1)?;
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

// Operator forms panic on a variable-list mismatch; the named methods
// return `Error::Structural` instead.
impl Add for &WSeries {
    type Output = WSeries;
    fn add(self, rhs: &WSeries) -> WSeries {
        WSeries::add(self, rhs).expect("WSeries + WSeries")
    }
}

impl Sub for &WSeries {
    type Output = WSeries;
    fn sub(self, rhs: &WSeries) -> WSeries {
        WSeries::sub(self, rhs).expect("WSeries - WSeries")
    }
}

impl Mul for &WSeries {
    type Output = WSeries;
    fn mul(self, rhs: &WSeries) -> WSeries {
        WSeries::mul(self, rhs).expect("WSeries * WSeries")
    }
}

impl Neg for &WSeries {
    type Output = WSeries;
    fn neg(self) -> WSeries {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(order: u32, c: &[i64]) -> WSeries {
        let c: Vec<Rat> = c.iter().map(|&x| Rat::from(x)).collect();
        WSeries::univariate("w", order, &c)
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = WSeries::zero(Vars::w(), 5);
        assert_eq!(z.exp_series().unwrap(), uni(5, &[1]));
    }

    #[test]
    fn log_inverts_exp() {
        let w = WSeries::variable(Vars::w(), 8, 0);
        assert_eq!(w.exp_series().unwrap().log_series().unwrap(), w);
    }

    #[test]
    fn geometric_reciprocal() {
        let s = uni(3, &[1, -1]);
        assert_eq!(s.reciprocal().unwrap(), uni(3, &[1, 1, 1, 1]));
    }

    #[test]
    fn elementary_preconditions() {
        assert_eq!(uni(3, &[1, 1]).exp_series().unwrap_err().code(), "domain");
        assert_eq!(uni(3, &[2, 1]).log_series().unwrap_err().code(), "domain");
        assert_eq!(uni(3, &[0, 1]).reciprocal().unwrap_err().code(), "domain");
    }

    #[test]
    fn mismatched_variables_are_structural_errors() {
        let a = WSeries::variable(Vars::w(), 3, 0);
        let b = WSeries::variable(Vars::new(["u"]), 3, 0);
        assert_eq!(a.add(&b).unwrap_err().code(), "structural");
        assert_eq!(a.mul(&b).unwrap_err().code(), "structural");
    }

    #[test]
    fn coeff_range_checked() {
        let a = uni(3, &[1, 2]);
        assert_eq!(a.coeff(&MultiIndex::from([1])).unwrap(), Rat::from(2));
        assert_eq!(a.coeff(&MultiIndex::from([4])).unwrap_err().code(), "range");
        assert_eq!(a.coeff(&MultiIndex::from([1, 0])).unwrap_err().code(), "range");
    }

    #[test]
    fn multivariate_product_truncates_total_degree() {
        let vars = Vars::new(["u", "v"]);
        let u = WSeries::variable(vars.clone(), 2, 0);
        let v = WSeries::variable(vars.clone(), 2, 1);
        let s = &u + &v;
        let sq = s.pow(3);
        assert!(sq.is_empty());
        let sq = s.pow(2);
        assert_eq!(sq.coeff(&MultiIndex::from([1, 1])).unwrap(), Rat::from(2));
    }

    #[test]
    fn substitute_vars_composes() {
        // (u)^2 with u <- w + w^2 at order 3 gives w^2 + 2w^3
        let vars = Vars::new(["u"]);
        let u2 = WSeries::variable(vars, 5, 0).pow(2);
        let s = uni(3, &[0, 1, 1]);
        assert_eq!(u2.substitute_vars(&[s]).unwrap(), uni(3, &[0, 0, 1, 2]));
    }
}
