//! Floating-point checks of the analytic implicit-function formula at a
//! fixed complex point `w`.
//!
//! For `|G(ζ,w)| < |ζ|` on `|ζ| = ρ` the fixed point `φ(w)` is the unique
//! root of `ζ − G` in the disc, and
//!
//! ```text
//! H(φ(w), w) = (1/2πi) ∮ H (1 − ∂G/∂ζ) / (ζ − G) dζ
//!            = H(0,w) + Σ_{m≥1} [ζ^m] H (G^m − ζ G' G^{m−1})
//! ```
//!
//! Both are evaluated with the trapezoid rule on `Q` equally spaced points,
//! and compared with plain fixed-point iteration. `G` and `H` are evaluated
//! as the truncated polynomials they are.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::ZWSeries;

pub const DEFAULT_RHO: f64 = 0.5;
pub const DEFAULT_QPOINTS: usize = 128;
pub const DEFAULT_ITER_TOL: f64 = 1e-14;
pub const MAX_ITERATIONS: usize = 10_000;
const SINGULAR_DISTANCE: f64 = 1e-12;

/// `G` at a concrete point `w`, with the circle `|ζ| = ρ` and `Q` nodes.
#[derive(Debug, Clone)]
pub struct AnalyticProblem {
    w: Vec<Complex64>,
    rho: f64,
    q: usize,
    iter_tol: f64,
    /// `[ζ^k] G(ζ, w)` and of `∂G/∂ζ`.
    g: Vec<Complex64>,
    dg: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoucheReport {
    pub rho: f64,
    /// `min_θ (ρ − |G(ρe^{iθ}, w)|)` over the sample points.
    pub min_margin: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub value: Complex64,
    /// `|z − G(z, w)|` at the returned value.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourResult {
    /// `H(φ(w), w)` from the Cauchy integral.
    pub total: Complex64,
    /// Terms `m = 0 ..= m_max` of the series expansion.
    pub terms: Vec<Complex64>,
}

/// Coefficients in `ζ` after substituting the point `w`.
fn z_poly_at(s: &ZWSeries, w: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); s.z_order() as usize + 1];
    for (k, a, c) in s.terms() {
        let wa = a
            .exponents()
            .iter()
            .zip(w)
            .fold(Complex64::new(1.0, 0.0), |t, (&e, wi)| t * wi.powu(e));
        out[k as usize] += wa * c.to_f64();
    }
    out
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

impl AnalyticProblem {
    pub fn new(g: &ZWSeries, w: Vec<Complex64>, rho: f64, q: usize, iter_tol: f64) -> Result<Self> {
        if w.len() != g.vars().len() {
            return Err(Error::Range(format!(
                "point has {} coordinates but G has {} w-variables",
                w.len(),
                g.vars().len()
            )));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::domain(format!("ρ must be positive (got {rho})")));
        }
        if q < 16 || !q.is_power_of_two() {
            return Err(Error::domain(format!(
                "the number of quadrature points must be a power of two ≥ 16 (got {q})"
            )));
        }
        if iter_tol.is_nan() || iter_tol <= 0.0 {
            return Err(Error::domain(format!("iteration tolerance must be positive (got {iter_tol})")));
        }
        let gp = z_poly_at(g, &w);
        let dg = gp
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        Ok(AnalyticProblem { w, rho, q, iter_tol, g: gp, dg })
    }

    /// Default circle, node count and tolerance.
    pub fn with_defaults(g: &ZWSeries, w: Vec<Complex64>) -> Result<Self> {
        Self::new(g, w, DEFAULT_RHO, DEFAULT_QPOINTS, DEFAULT_ITER_TOL)
    }

    /// Picks the radius from [`auto_radius`].
    pub fn with_auto_radius(g: &ZWSeries, w: Vec<Complex64>, q: usize, iter_tol: f64) -> Result<Self> {
        let p = Self::new(g, w, DEFAULT_RHO, q, iter_tol)?;
        let rho = auto_radius(&p)?.rho;
        Ok(AnalyticProblem { rho, ..p })
    }

    pub fn w(&self) -> &[Complex64] {
        &self.w
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn qpoints(&self) -> usize {
        self.q
    }

    pub fn g_at(&self, z: Complex64) -> Complex64 {
        horner(&self.g, z)
    }

    fn nodes(&self, rho: f64) -> impl Iterator<Item = Complex64> + '_ {
        let q = self.q;
        (0..q).map(move |j| Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / q as f64))
    }

    fn rouche_at(&self, rho: f64) -> RoucheReport {
        let min_margin = self
            .nodes(rho)
            .map(|z| rho - self.g_at(z).norm())
            .fold(f64::INFINITY, f64::min);
        RoucheReport { rho, min_margin, satisfied: min_margin > 0.0 }
    }
}

/// Samples `ρ − |G|` on the circle.
pub fn check_rouche(p: &AnalyticProblem) -> RoucheReport {
    p.rouche_at(p.rho)
}

/// Scans `ρ_k = ρ₀·2^{−k/8}`, `k = 0..=48` (the range of six halvings of
/// `ρ₀`), and returns the radius with the largest relative margin
/// `min(ρ − |G|)/ρ`.
pub fn auto_radius(p: &AnalyticProblem) -> Result<RoucheReport> {
    (0..=48)
        .map(|k| p.rouche_at(DEFAULT_RHO * 2f64.powf(-(k as f64) / 8.0)))
        .filter(|r| r.satisfied)
        .max_by(|a, b| (a.min_margin / a.rho).total_cmp(&(b.min_margin / b.rho)))
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no radius in [{}, {DEFAULT_RHO}] satisfies |G| < |z| on the circle",
                DEFAULT_RHO / 64.0
            ))
        })
}

/// Iterates `z ← G(z, w)` from `z0` until successive values differ by less
/// than the tolerance.
pub fn fixed_point_iterate(p: &AnalyticProblem, z0: Complex64) -> Result<FixedPoint> {
    let mut z = z0;
    let mut step = f64::INFINITY;
    for n in 1..=MAX_ITERATIONS {
        let next = p.g_at(z);
        step = (next - z).norm();
        z = next;
        if !z.is_finite() {
            break;
        }
        if step < p.iter_tol {
            let residual = (z - p.g_at(z)).norm();
            return Ok(FixedPoint { value: z, residual, iterations: n });
        }
    }
    Err(Error::Convergence { iterations: MAX_ITERATIONS, residual: step })
}

/// `H(φ(w), w)` by the trapezoid rule on the contour, and the first
/// `m_max + 1` terms `[ζ^m] H (G^m − ζG'G^{m−1})` as discrete circle
/// averages.
pub fn contour_coefficients(p: &AnalyticProblem, h: &ZWSeries, m_max: usize) -> Result<ContourResult> {
    let r = check_rouche(p);
    if !r.satisfied {
        return Err(Error::Precondition(format!(
            "|G| < |z| fails on |z| = {} (margin {:e})",
            p.rho, r.min_margin
        )));
    }
    if h.vars().len() != p.w.len() {
        return Err(Error::Range("H and G must share the w-variables".into()));
    }
    let hp = z_poly_at(h, &p.w);
    let qf = p.q as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut terms = vec![Complex64::new(0.0, 0.0); m_max + 1];
    for z in p.nodes(p.rho) {
        let g = p.g_at(z);
        let dg = horner(&p.dg, z);
        let hv = horner(&hp, z);
        let gap = z - g;
        if gap.norm() < SINGULAR_DISTANCE {
            return Err(Error::NumericalSingularity(format!(
                "|ζ − G(ζ,w)| < {SINGULAR_DISTANCE:e} at ζ = {z}"
            )));
        }
        // dζ/(2πi) = ζ dθ/2π
        total += hv * (1.0 - dg) / gap * z / qf;
        terms[0] += hv / qf;
        let ratio = g / z;
        let kernel = hv * (g - z * dg) / z; // H (G − ζG')/ζ
        let mut pow = Complex64::new(1.0, 0.0); // (G/ζ)^{m−1}
        for t in terms.iter_mut().skip(1) {
            *t += kernel * pow / qf;
            pow *= ratio;
        }
    }
    Ok(ContourResult { total, terms })
}
