//! Formal power-series solutions of `z = G(z, w)` with `G(0,0) = 0`.
//!
//! Writing `b₁₀ = (∂G/∂z)(0,0)`, the unique solution `φ(w)` with `φ(0) = 0`
//! is computed by several independent routes:
//!
//! | variant      | hypothesis     | coefficient formula                                             |
//! |--------------|----------------|-----------------------------------------------------------------|
//! | `Finite`     | `b₁₀ = 0`      | `Σ_{m=1}^{2|α|-1} (1/m) [ζ^{m-1} w^α] G^m`                        |
//! | `Integer`    | `b₁₀ = 0`      | `Σ_{m=1}^{2|α|} [ζ^{m-1} w^α] (G^m − ζ G' G^{m-1})`, no division  |
//! | `Contraction`| `|b₁₀| < 1`    | the `Finite` sum extended to `m → ∞`, summed in floating point   |
//! | `Recurrence` | `b₁₀ ≠ 1`      | undetermined coefficients, one total degree at a time             |
//!
//! When `G(z,0) ≡ 0` only `m ≤ |α|` contribute. An implicit equation
//! `F(z,w) = 0` is brought to fixed-point form with [`gamma_transform`], and a
//! problem with `b₁₀ ≠ 0` is made suitable for the finite sums by
//! [`normalize`].
//!
//! Coefficients of `G` above its z-order are taken to be zero. Since
//! `[w^α]φ` only involves `[z^k]G` for `k ≤ |α|`, a z-order at least the
//! w-order loses nothing.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::{MultiIndex, Vars, WSeries, ZWSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Finite,
    Integer,
    Contraction,
    Recurrence,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Finite => "finite",
            Variant::Integer => "integer",
            Variant::Contraction => "contraction",
            Variant::Recurrence => "recurrence",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `z = G(z, w)` to be solved to total w-degree `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitProblem {
    g: ZWSeries,
    b10: Rat,
    order: u32,
}

impl ImplicitProblem {
    /// Solves to the w-order of `g`.
    pub fn new(g: ZWSeries) -> Result<Self> {
        let order = g.w_order();
        Self::with_order(g, order)
    }

    pub fn with_order(g: ZWSeries, order: u32) -> Result<Self> {
        if order > g.w_order() {
            return Err(Error::Range(format!(
                "requested order {order} exceeds the w-order {} of G",
                g.w_order()
            )));
        }
        let g00 = g.constant_term();
        if !g00.is_zero() {
            return Err(Error::domain(format!("G(0,0) must be 0 (got {g00})")));
        }
        let b10 = g.dz_at_origin();
        Ok(ImplicitProblem { g, b10, order })
    }

    /// `F(z,w) = 0` rewritten as `z = z − γ·F`.
    pub fn from_implicit(f: &ZWSeries, gamma: &ZWSeries) -> Result<Self> {
        Self::new(gamma_transform(f, gamma)?)
    }

    pub fn g(&self) -> &ZWSeries {
        &self.g
    }

    /// `(∂G/∂z)(0,0)`.
    pub fn b10(&self) -> &Rat {
        &self.b10
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vars(&self) -> &Vars {
        self.g.vars()
    }

    /// True when `G(z, 0) ≡ 0`, which tightens every range to `m ≤ |α|`.
    pub fn vanishes_at_w_zero(&self) -> bool {
        self.g.vanishes_at_w_zero()
    }

    fn require_b10_zero(&self, what: &str) -> Result<()> {
        if self.b10.is_zero() {
            Ok(())
        } else {
            Err(Error::Condition(format!(
                "the {what} sums need (dG/dz)(0,0) = 0 but it is {}; normalize G first",
                self.b10
            )))
        }
    }

    /// Largest `m` contributing to a coefficient of total degree `d`.
    fn m_bound(&self, variant: Variant, d: u32) -> u32 {
        if self.vanishes_at_w_zero() {
            return d;
        }
        match variant {
            Variant::Integer => 2 * d,
            _ => (2 * d).saturating_sub(1),
        }
    }

    fn m_ranges(&self, variant: Variant) -> BTreeMap<MultiIndex, u32> {
        MultiIndex::up_to_degree(self.vars().len(), self.order)
            .into_iter()
            .filter(|a| a.degree() > 0)
            .map(|a| {
                let m = self.m_bound(variant, a.degree());
                (a, m)
            })
            .collect()
    }

    fn z(&self) -> ZWSeries {
        ZWSeries::z(self.vars().clone(), self.order, self.order)
    }
}

/// Floating-point side of a contraction solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCheck {
    /// Partial sums of the infinite series, per coefficient.
    pub values: BTreeMap<MultiIndex, f64>,
    /// Largest `|float − exact|` over all coefficients.
    pub max_deviation: f64,
    pub tol_exp: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub phi: WSeries,
    pub variant: Variant,
    /// Whether `G` was normalized before summing.
    pub normalized: bool,
    /// For each `α`, the sum ran over `m = 1..=m_ranges[α]`.
    pub m_ranges: BTreeMap<MultiIndex, u32>,
    /// `H(φ(w), w)` when requested.
    pub h: Option<WSeries>,
    pub numeric: Option<NumericCheck>,
}

/// `G = z − γ·F`, whose fixed points are the zeros of `F`.
pub fn gamma_transform(f: &ZWSeries, gamma: &ZWSeries) -> Result<ZWSeries> {
    f.vars().check_same(gamma.vars())?;
    if !f.constant_term().is_zero() {
        return Err(Error::domain(format!(
            "F(0,0) must be 0 (got {})",
            f.constant_term()
        )));
    }
    if gamma.constant_term().is_zero() {
        return Err(Error::domain("γ(0,0) must be nonzero"));
    }
    let zo = f.z_order().min(gamma.z_order());
    let wo = f.w_order().min(gamma.w_order());
    let z = ZWSeries::z(f.vars().clone(), zo, wo);
    z.sub(&gamma.mul(f)?)
}

/// `G̃ = (G − b₁₀ z)/(1 − b₁₀)`: same fixed point, `(∂G̃/∂z)(0,0) = 0`.
pub fn normalize(g: &ZWSeries) -> Result<ZWSeries> {
    let b10 = g.dz_at_origin();
    if b10.is_zero() {
        return Ok(g.clone());
    }
    let inv = (Rat::one() - &b10).recip().map_err(|_| {
        Error::Singular("(dG/dz)(0,0) = 1: the fixed-point equation is degenerate".into())
    })?;
    let z = ZWSeries::z(g.vars().clone(), g.z_order(), g.w_order());
    Ok(g.sub(&z.scale(&b10))?.scale(&inv))
}

fn add_filtered(acc: &mut BTreeMap<MultiIndex, Rat>, row: &WSeries, c: &Rat, keep: impl Fn(u32) -> bool) {
    for (a, v) in row.terms() {
        if keep(a.degree()) {
            let e = acc.entry(a.clone()).or_insert_with(Rat::zero);
            *e += v * c;
        }
    }
}

fn collect(vars: &Vars, order: u32, acc: BTreeMap<MultiIndex, Rat>) -> WSeries {
    WSeries::from_terms(vars.clone(), order, acc)
}

/// `[w^α]H(0,w) + Σ_m (1/m) [ζ^{m-1} w^α] ∂_ζH · G^m`, summing each `α`
/// over `m ≤ limit(|α|)`.
fn finite_sum(p: &ImplicitProblem, h: &ZWSeries, limit: impl Fn(u32) -> u32) -> WSeries {
    let n = p.order;
    let m_max = limit(n);
    let zo = m_max.max(1);
    let g = p.g.with_orders(zo, n);
    let dh = h.with_orders(zo, n).d_dz();
    let mut acc = BTreeMap::new();
    add_filtered(&mut acc, &h.row(0).with_order(n), &Rat::one(), |_| true);
    let mut gm = ZWSeries::one(p.vars().clone(), zo, n);
    for m in 1..=m_max {
        gm = gm.mul_truncated(&g, zo, n);
        // Every later factor that lowers the z-excess k − (m−1) carries w.
        gm.retain_weight(n + m - 1);
        let row = dh.product_row(&gm, m - 1, n);
        add_filtered(&mut acc, &row, &Rat::new(1, m), |d| m <= limit(d));
    }
    collect(p.vars(), n, acc)
}

/// `[w^α]H(0,w) + Σ_m [ζ^m w^α] H·(G^m − ζ G' G^{m-1})`.
fn integer_sum(p: &ImplicitProblem, h: &ZWSeries, limit: impl Fn(u32) -> u32) -> WSeries {
    let n = p.order;
    let m_max = limit(n);
    let zo = m_max.max(1);
    let g = p.g.with_orders(zo, n);
    let h = h.with_orders(zo, n);
    let zdg = g.d_dz().shift_z(1).with_orders(zo, n);
    let hzdg = h.mul_truncated(&zdg, zo, n);
    let mut acc = BTreeMap::new();
    add_filtered(&mut acc, &h.row(0), &Rat::one(), |_| true);
    let mut prev = ZWSeries::one(p.vars().clone(), zo, n);
    for m in 1..=m_max {
        let mut gm = prev.mul_truncated(&g, zo, n);
        gm.retain_weight(n + m);
        let row = h.product_row(&gm, m, n).sub(&hzdg.product_row(&prev, m, n)).expect("same vars");
        add_filtered(&mut acc, &row, &Rat::one(), |d| m <= limit(d));
        prev = gm;
    }
    collect(p.vars(), n, acc)
}

/// `φ` from the finite sums with rational weights `1/m`.
pub fn solve_finite(p: &ImplicitProblem) -> Result<SolveReport> {
    p.require_b10_zero("finite")?;
    let phi = finite_sum(p, &p.z(), |d| p.m_bound(Variant::Finite, d));
    Ok(SolveReport {
        phi,
        variant: Variant::Finite,
        normalized: false,
        m_ranges: p.m_ranges(Variant::Finite),
        h: None,
        numeric: None,
    })
}

/// The finite sum run over `m = 1..=m_max` for every coefficient,
/// ignoring the degree bound.
pub fn solve_finite_to(p: &ImplicitProblem, m_max: u32) -> Result<WSeries> {
    p.require_b10_zero("finite")?;
    Ok(finite_sum(p, &p.z(), |_| m_max))
}

/// The single term `(1/m)[ζ^{m-1}] G^m` as a series in `w`.
pub fn finite_term(p: &ImplicitProblem, m: u32) -> WSeries {
    assert!(m >= 1, "terms start at m = 1");
    let n = p.order;
    let g = p.g.with_orders(m, n);
    g.pow(m).row(m - 1).with_order(n).scale(&Rat::new(1, m))
}

/// `φ` from the division-free sums. With integer `G` every coefficient is
/// an integer; a violation is reported as an invariant error.
pub fn solve_finite_integer(p: &ImplicitProblem) -> Result<SolveReport> {
    p.require_b10_zero("integer")?;
    let phi = integer_sum(p, &p.z(), |d| p.m_bound(Variant::Integer, d));
    if p.g.is_integral() && !phi.is_integral() {
        return Err(Error::Invariant(
            "division-free sums produced a non-integer coefficient from integer input".into(),
        ));
    }
    Ok(SolveReport {
        phi,
        variant: Variant::Integer,
        normalized: false,
        m_ranges: p.m_ranges(Variant::Integer),
        h: None,
        numeric: None,
    })
}

/// `H(φ(w), w)` through the sums of the chosen variant.
///
/// `Contraction` normalizes `G` and uses the finite sums; `Recurrence`
/// substitutes the recurrence solution into `H` directly.
pub fn compose_h(p: &ImplicitProblem, h: &ZWSeries, variant: Variant) -> Result<WSeries> {
    p.vars().check_same(h.vars())?;
    let n = p.order;
    if h.w_order() < n {
        return Err(Error::Range(format!(
            "H is known to w-order {} but {n} was requested",
            h.w_order()
        )));
    }
    match variant {
        Variant::Finite => {
            p.require_b10_zero("finite")?;
            Ok(finite_sum(p, h, |d| p.m_bound(Variant::Finite, d)))
        }
        Variant::Integer => {
            p.require_b10_zero("integer")?;
            Ok(integer_sum(p, h, |d| p.m_bound(Variant::Integer, d)))
        }
        Variant::Contraction => {
            let q = ImplicitProblem::with_order(normalize(&p.g)?, n)?;
            compose_h(&q, h, Variant::Finite)
        }
        Variant::Recurrence => {
            let phi = solve_by_recurrence(p)?;
            h.with_orders(h.z_order().max(n), n).substitute_z(&phi)
        }
    }
}

/// `φ` by undetermined coefficients: with `G̃` the normalized series,
/// `φ_d = G̃(φ_{d-1}, w)` is exact through total degree `d`.
pub fn solve_by_recurrence(p: &ImplicitProblem) -> Result<WSeries> {
    let gt = normalize(&p.g)?;
    let n = p.order;
    let mut phi = WSeries::zero(p.vars().clone(), 0);
    for d in 1..=n {
        phi = gt.with_orders(d, d).substitute_z(&phi.with_order(d))?;
    }
    Ok(phi.with_order(n))
}

/// Introduces a parameter `t`, solves `z = t·G(z,w)` by recurrence in
/// `(w, t)`, and checks that `[w^α]Φ(w,t)` is the polynomial
/// `Σ_m t^m (1/m)[ζ^{m-1}w^α]G^m` of degree `≤ 2|α| − 1` whose value at
/// `t = 1` is the finite-sum coefficient.
pub fn gessel_check(p: &ImplicitProblem, alpha: &MultiIndex) -> Result<bool> {
    p.require_b10_zero("finite")?;
    if alpha.len() != p.vars().len() {
        return Err(Error::Range(format!(
            "multi-index {alpha} has {} entries for {} variables",
            alpha.len(),
            p.vars().len()
        )));
    }
    let d = alpha.degree();
    if d > p.order {
        return Err(Error::Range(format!("|{alpha}| exceeds the order {}", p.order)));
    }
    if d == 0 {
        return Ok(true);
    }
    let top = 2 * d; // the coefficient of t^{2|α|} must vanish
    let total = d + top;

    let mut names: Vec<String> = p.vars().names().to_vec();
    let mut t = String::from("t");
    while names.contains(&t) {
        t.push('_');
    }
    names.push(t);
    let ext = Vars::new(names);
    let nv = ext.len();
    let lifted = p.g.with_orders(total, total.min(p.g.w_order()));
    let g_ext = ZWSeries::from_terms(
        ext.clone(),
        total,
        total,
        lifted.terms().map(|(k, a, c)| {
            let mut e = a.exponents().to_vec();
            e.push(0);
            (k, MultiIndex::from(e), c.clone())
        }),
    );
    let tg = ZWSeries::w(ext.clone(), total, total, nv - 1).mul(&g_ext)?;
    let big_phi = solve_by_recurrence(&ImplicitProblem::new(tg)?)?;

    let at = |m: u32| {
        let mut e = alpha.exponents().to_vec();
        e.push(m);
        big_phi.coeff_or_zero(&MultiIndex::from(e))
    };
    let q = ImplicitProblem::with_order(p.g.clone(), d)?;
    let mut value = Rat::zero();
    for m in 0..=top {
        let c = at(m);
        let expected = if m == 0 || m == top {
            Rat::zero()
        } else {
            finite_term(&q, m).coeff_or_zero(alpha)
        };
        if c != expected {
            return Ok(false);
        }
        value += c;
    }
    let phi = solve_finite(&q)?.phi;
    Ok(value == phi.coeff_or_zero(alpha))
}

/// Exact `φ` via normalization, plus the infinite series
/// `Σ_{m≥1} (1/m)[ζ^{m-1}w^α]G^m` summed in `f64` until both
/// `|b₁₀|^{m-c} · max|term| < 10^tol_exp` (with `c = 2|α| − 1`) and the
/// geometric tail estimate from the last two terms fall below the tolerance.
pub fn solve_contraction(p: &ImplicitProblem, tol_exp: i32) -> Result<SolveReport> {
    let b = p.b10.to_f64();
    if b.abs() >= 1.0 {
        return Err(Error::Condition(format!(
            "the contraction sums need |(dG/dz)(0,0)| < 1 but it is {}",
            p.b10
        )));
    }
    let q = ImplicitProblem::with_order(normalize(&p.g)?, p.order)?;
    let exact = solve_finite(&q)?.phi;
    let (values, m_ranges) = float_partial_sums(p, b.abs(), 10f64.powi(tol_exp))?;
    let max_deviation = values
        .iter()
        .map(|(a, v)| (v - exact.coeff_or_zero(a).to_f64()).abs())
        .fold(0.0, f64::max);
    Ok(SolveReport {
        phi: exact,
        variant: Variant::Contraction,
        normalized: true,
        m_ranges,
        h: None,
        numeric: Some(NumericCheck { values, max_deviation, tol_exp }),
    })
}

const MAX_CONTRACTION_TERMS: u32 = 20_000;

type FloatSums = (BTreeMap<MultiIndex, f64>, BTreeMap<MultiIndex, u32>);

fn float_partial_sums(p: &ImplicitProblem, b: f64, tol: f64) -> Result<FloatSums> {
    let n = p.order;
    let monos = MultiIndex::up_to_degree(p.vars().len(), n);
    let index: BTreeMap<&MultiIndex, usize> = monos.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut triples = Vec::new();
    for (i, a) in monos.iter().enumerate() {
        for (j, c) in monos.iter().enumerate() {
            if a.degree() + c.degree() <= n {
                triples.push((i, j, index[&(a + c)]));
            }
        }
    }
    let width = monos.len();
    let g_rows: Vec<(usize, Vec<f64>)> = p
        .g
        .rows()
        .map(|(k, row)| {
            let mut v = vec![0.0; width];
            for (a, c) in row.terms() {
                if let Some(&i) = index.get(a) {
                    v[i] = c.to_f64();
                }
            }
            (k as usize, v)
        })
        .collect();

    let mut sums = vec![0.0; width];
    let mut max_term = vec![0.0f64; width];
    let mut last_term = vec![0.0f64; width];
    let mut done: Vec<Option<u32>> = monos.iter().map(|a| (a.degree() == 0).then_some(0)).collect();
    // [ζ^{m-1}] of later powers never reads rows of G^m beyond m − 1 + n.
    let mut power: Vec<Vec<f64>> = vec![vec![0.0; width]];
    power[0][0] = 1.0;
    let mut residual = f64::INFINITY;
    for m in 1..=MAX_CONTRACTION_TERMS {
        let rows = (m - 1 + n) as usize + 1;
        let mut next = vec![vec![0.0; width]; rows];
        for (k, pr) in power.iter().enumerate() {
            if pr.iter().all(|x| *x == 0.0) {
                continue;
            }
            for (j, gr) in &g_rows {
                if k + j >= rows {
                    continue;
                }
                let out = &mut next[k + j];
                for &(a, c, r) in &triples {
                    out[r] += pr[a] * gr[c];
                }
            }
        }
        power = next;
        let row = &power[(m - 1) as usize];
        residual = 0.0;
        for (i, a) in monos.iter().enumerate() {
            if done[i].is_some() {
                continue;
            }
            let term = row[i] / m as f64;
            sums[i] += term;
            max_term[i] = max_term[i].max(term.abs());
            let tail = tail_estimate(last_term[i], term, b);
            last_term[i] = term;
            let c = (2 * a.degree()).saturating_sub(1);
            if m >= c {
                let bound = (b.powi((m - c) as i32) * max_term[i]).max(tail);
                if bound < tol {
                    done[i] = Some(m);
                } else {
                    residual = residual.max(bound);
                }
            } else {
                residual = f64::INFINITY;
            }
        }
        if done.iter().all(Option::is_some) {
            let values = monos.iter().cloned().zip(sums).filter(|(a, _)| a.degree() > 0).collect();
            let ranges = monos
                .into_iter()
                .zip(done)
                .filter(|(a, _)| a.degree() > 0)
                .map(|(a, m)| (a, m.expect("all done")))
                .collect();
            return Ok((values, ranges));
        }
    }
    Err(Error::Convergence { iterations: MAX_CONTRACTION_TERMS as usize, residual })
}

/// Remainder of a series whose terms decay at least geometrically, judged
/// from the last two terms; `b` is the asymptotic ratio.
fn tail_estimate(prev: f64, cur: f64, b: f64) -> f64 {
    let r = if prev != 0.0 && cur != 0.0 { (cur / prev).abs().max(b) } else { b };
    if r >= 1.0 {
        return f64::INFINITY;
    }
    prev.abs().max(cur.abs()) * r / (1.0 - r)
}

/// Options for [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub variant: Variant,
    /// Normalize `G` before the `Finite`/`Integer` sums.
    pub normalize: bool,
    pub h: Option<ZWSeries>,
    /// Decimal exponent of the `Contraction` stopping tolerance.
    pub tol_exp: i32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { variant: Variant::Finite, normalize: false, h: None, tol_exp: -12 }
    }
}

/// Runs one variant, optionally normalizing first and composing with `H`.
pub fn solve(p: &ImplicitProblem, opts: &SolveOptions) -> Result<SolveReport> {
    let normalized;
    let q = if opts.normalize && matches!(opts.variant, Variant::Finite | Variant::Integer) {
        normalized = !p.b10.is_zero();
        ImplicitProblem::with_order(normalize(&p.g)?, p.order)?
    } else {
        normalized = false;
        p.clone()
    };
    let mut report = match opts.variant {
        Variant::Finite => solve_finite(&q)?,
        Variant::Integer => solve_finite_integer(&q)?,
        Variant::Contraction => solve_contraction(&q, opts.tol_exp)?,
        Variant::Recurrence => SolveReport {
            phi: solve_by_recurrence(&q)?,
            variant: Variant::Recurrence,
            normalized: false,
            m_ranges: BTreeMap::new(),
            h: None,
            numeric: None,
        },
    };
    report.normalized |= normalized;
    if let Some(h) = &opts.h {
        report.h = Some(compose_h(&q, h, opts.variant)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr;
    use crate::rat::factorial;

    fn problem(text: &str, n: u32) -> ImplicitProblem {
        ImplicitProblem::new(expr::series(text, &Vars::w(), n, n).unwrap()).unwrap()
    }

    fn uni(coeffs: &[i64], n: u32) -> WSeries {
        WSeries::univariate("w", n, &coeffs.iter().map(|&c| Rat::from(c)).collect::<Vec<_>>())
    }

    const CATALAN: [i64; 9] = [0, 1, 1, 2, 5, 14, 42, 132, 429];

    #[test]
    fn trivial_problems() {
        let p = problem("w", 6);
        let w = uni(&[0, 1], 6);
        assert_eq!(solve_finite(&p).unwrap().phi, w);
        assert_eq!(solve_finite_integer(&p).unwrap().phi, w);
        assert_eq!(solve_by_recurrence(&p).unwrap(), w);
        let zero = problem("0", 5);
        assert!(solve_finite(&zero).unwrap().phi.is_empty());
    }

    #[test]
    fn catalan_by_every_route() {
        let p = problem("w + z^2", 8);
        let expected = uni(&CATALAN, 8);
        assert_eq!(solve_finite(&p).unwrap().phi, expected);
        assert_eq!(solve_finite_integer(&p).unwrap().phi, expected);
        assert_eq!(solve_by_recurrence(&p).unwrap(), expected);
        let report = solve_contraction(&p, -12).unwrap();
        assert_eq!(report.phi, expected);
        assert!(report.numeric.unwrap().max_deviation < 1e-9);
    }

    #[test]
    fn rooted_trees_from_yuzhakov_form() {
        let p = problem("w + z*(1 - exp(-z))", 10);
        let phi = solve_finite(&p).unwrap().phi;
        for m in 1..=10u32 {
            let expected = Rat::new(num_bigint::BigInt::from(m).pow(m - 1), factorial(m));
            assert_eq!(phi.coeff_at(m), expected);
        }
    }

    #[test]
    fn integer_input_gives_integers() {
        let p = problem("w + 3*z^2 + z^3*w", 9);
        let phi = solve_finite_integer(&p).unwrap().phi;
        assert!(phi.is_integral());
        assert_eq!(phi, solve_finite(&p).unwrap().phi);
    }

    #[test]
    fn conditions_are_enforced() {
        let p = problem("z/2 + w", 4);
        assert_eq!(solve_finite(&p).unwrap_err().code(), "condition");
        assert_eq!(solve_finite_integer(&p).unwrap_err().code(), "condition");
        let g = expr::series("1 + z + w", &Vars::w(), 3, 3).unwrap();
        assert_eq!(ImplicitProblem::new(g).unwrap_err().code(), "domain");
        let p = problem("z + w", 3);
        assert_eq!(normalize(p.g()).unwrap_err().code(), "singular");
        assert_eq!(solve_by_recurrence(&p).unwrap_err().code(), "singular");
        assert_eq!(solve_contraction(&problem("2*z + w", 3), -10).unwrap_err().code(), "condition");
    }

    #[test]
    fn normalization_of_linear_problems() {
        let p = problem("z/2 + w", 5);
        let gt = normalize(p.g()).unwrap();
        assert_eq!(gt, expr::series("2*w", &Vars::w(), 5, 5).unwrap());
        let q = ImplicitProblem::new(gt).unwrap();
        assert_eq!(solve_finite(&q).unwrap().phi, uni(&[0, 2], 5));
        assert_eq!(solve_by_recurrence(&p).unwrap(), uni(&[0, 2], 5));
        // G = αz + β(w)
        let p = problem("z/3 + w - w^2/5", 6);
        let phi = solve_finite(&ImplicitProblem::new(normalize(p.g()).unwrap()).unwrap()).unwrap().phi;
        let beta = expr::series("(w - w^2/5)*3/2", &Vars::w(), 0, 6).unwrap().row(0);
        assert_eq!(phi, beta);
        assert_eq!(normalize(problem("w + z^2", 3).g()).unwrap(), *problem("w + z^2", 3).g());
    }

    #[test]
    fn contraction_partial_sums() {
        let p = problem("z/2 + w", 4);
        let report = solve_contraction(&p, -12).unwrap();
        let numeric = report.numeric.unwrap();
        assert!((numeric.values[&MultiIndex::from([1])] - 2.0).abs() < 1e-11);
        assert!(report.m_ranges[&MultiIndex::from([1])] > 30);

        let p = problem("z/2 + w + z^2", 6);
        let report = solve_contraction(&p, -10).unwrap();
        let exact = report.phi.coeff_at(2).to_f64();
        let float = report.numeric.as_ref().unwrap().values[&MultiIndex::from([2])];
        assert!((exact - float).abs() < 1e-10, "{exact} vs {float}");
        assert_eq!(exact, 8.0);
    }

    #[test]
    fn contraction_with_b10_zero_stops_right_after_the_finite_range() {
        let p = problem("w + z^2", 5);
        let report = solve_contraction(&p, -12).unwrap();
        for (a, m) in &report.m_ranges {
            assert_eq!(*m, 2 * a.degree());
        }
    }

    #[test]
    fn gamma_transforms() {
        let v = Vars::w();
        let f = expr::series("z - w", &v, 4, 4).unwrap();
        let one = expr::series("1", &v, 6, 6).unwrap();
        assert_eq!(gamma_transform(&f, &one).unwrap(), expr::series("w", &v, 4, 4).unwrap());
        let f = expr::series("z*exp(-z) - w", &v, 6, 6).unwrap();
        let yuz = gamma_transform(&f, &one).unwrap();
        assert_eq!(yuz, expr::series("w + z*(1 - exp(-z))", &v, 6, 6).unwrap());
        let lag = gamma_transform(&f, &expr::series("exp(z)", &v, 6, 6).unwrap()).unwrap();
        assert_eq!(lag, expr::series("w*exp(z)", &v, 6, 6).unwrap());
        let zero = expr::series("0", &v, 4, 4).unwrap();
        assert_eq!(gamma_transform(&f, &zero).unwrap_err().code(), "domain");
    }

    #[test]
    fn gessel_examples() {
        assert!(gessel_check(&problem("w + z^2", 6), &MultiIndex::from([3])).unwrap());
        assert!(gessel_check(&problem("w", 6), &MultiIndex::from([2])).unwrap());
        assert!(gessel_check(&problem("w + z^2*w", 6), &MultiIndex::from([4])).unwrap());
        let two = ImplicitProblem::new(
            expr::series("u + z*v + z^2", &Vars::new(["u", "v"]), 5, 5).unwrap(),
        )
        .unwrap();
        assert!(gessel_check(&two, &MultiIndex::from([2, 1])).unwrap());
    }

    #[test]
    fn composition_with_h() {
        let p = problem("w + z^2 + z*w", 7);
        let phi = solve_finite(&p).unwrap().phi;
        let h = expr::series("log(1 + z) + w*z^2 + w", &Vars::w(), 7, 7).unwrap();
        let direct = h.substitute_z(&phi).unwrap();
        for v in [Variant::Finite, Variant::Integer, Variant::Recurrence, Variant::Contraction] {
            assert_eq!(compose_h(&p, &h, v).unwrap(), direct, "{v}");
        }
        let z = expr::series("z", &Vars::w(), 7, 7).unwrap();
        assert_eq!(compose_h(&p, &z, Variant::Integer).unwrap(), phi);
    }

    #[test]
    fn extra_terms_change_nothing() {
        let p = problem("w + z^2 + z^3*w", 6);
        let phi = solve_finite(&p).unwrap().phi;
        assert_eq!(solve_finite_to(&p, 2 * 6).unwrap(), phi);
        // G(z,0) = 0: m > |α| vanish
        let p = problem("w*exp(z)", 6);
        for m in 2..=8 {
            let t = finite_term(&p, m);
            assert!(t.terms().all(|(a, _)| a.degree() >= m), "m = {m}");
        }
    }
}
