//! Universal Lagrange inversion over indeterminates `g₀, g₁, …`.
//!
//! The series `φ(g)` solving `φ = Σ g_n φ^n` is the generating function of
//! unlabeled plane trees in which a vertex with `n` children has weight
//! `g_n`. Its powers have the closed form
//!
//! ```text
//! [g₀^{k₀} g₁^{k₁} …] φ^ℓ = ℓ (Σk − 1)! / Π k_n!    if Σ (n−1) k_n = −ℓ
//! ```
//!
//! which this module checks against brute-force forest enumeration.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::implicit::{solve_finite, ImplicitProblem};
use crate::rat::{factorial_u, Rat};
use crate::series::{MultiIndex, Vars, WSeries, ZWSeries};

/// Default cap on the vertex count for [`enumerate_forests`].
pub const FOREST_VERTEX_CAP: u32 = 8;

/// A component count `ℓ` and out-degree counts `k = (k₀, k₁, …)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ForestType {
    pub ell: u32,
    k: Vec<u32>,
}

impl ForestType {
    /// Trailing zero counts are dropped so equal types compare equal.
    pub fn new(ell: u32, mut k: Vec<u32>) -> Self {
        while k.last() == Some(&0) {
            k.pop();
        }
        ForestType { ell, k }
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn vertices(&self) -> u32 {
        self.k.iter().sum()
    }

    /// `Σ (n−1) k_n = −ℓ`.
    pub fn is_admissible(&self) -> bool {
        let s: i64 = self.k.iter().enumerate().map(|(n, &c)| (n as i64 - 1) * c as i64).sum();
        self.ell >= 1 && s == -(self.ell as i64)
    }
}

impl fmt::Display for ForestType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k: Vec<String> = self.k.iter().map(u32::to_string).collect();
        write!(f, "{}; ({})", self.ell, k.join(","))
    }
}

/// Rooted tree whose children are ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneTree {
    pub children: Vec<PlaneTree>,
}

/// Ordered list of plane trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneForest {
    pub trees: Vec<PlaneTree>,
}

impl PlaneTree {
    fn count_into(&self, k: &mut Vec<u32>) {
        let n = self.children.len();
        if k.len() <= n {
            k.resize(n + 1, 0);
        }
        k[n] += 1;
        for c in &self.children {
            c.count_into(k);
        }
    }
}

impl PlaneForest {
    pub fn type_of(&self) -> ForestType {
        let mut k = Vec::new();
        for t in &self.trees {
            t.count_into(&mut k);
        }
        ForestType::new(self.trees.len() as u32, k)
    }
}

/// `ℓ (Σk − 1)! / Π k_n!` for admissible types, 0 otherwise.
///
/// Evaluated as `Σ_i (1−i) · multinomial(Σk − 1; …, k_i − 1, …)`, a sum of
/// integers, and asserted equal to the factorial quotient.
pub fn universal_coeff(t: &ForestType) -> BigUint {
    if !t.is_admissible() {
        return BigUint::zero();
    }
    let total = t.vertices();
    let denom: BigUint = t.k.iter().map(|&c| factorial_u(c)).product();
    let top = factorial_u(total - 1);
    let mut sum = BigInt::zero();
    for (i, &ki) in t.k.iter().enumerate() {
        if ki == 0 || i == 1 {
            continue;
        }
        let multinomial = &top * ki / &denom;
        sum += BigInt::from(multinomial) * (1 - i as i64);
    }
    let direct = Rat::new(BigInt::from(top * t.ell), BigInt::from(denom));
    assert!(
        !sum.is_negative() && Rat::from_integer(sum.clone()) == direct,
        "closed form is not an integer for {t}"
    );
    sum.to_biguint().expect("non-negative")
}

/// Every plane forest with `ell` components and `vertices` vertices.
pub fn generate_forests(ell: u32, vertices: u32) -> Result<Vec<PlaneForest>> {
    check_cap(vertices)?;
    Ok(forests(ell, vertices).into_iter().map(|trees| PlaneForest { trees }).collect())
}

fn forests(ell: u32, vertices: u32) -> Vec<Vec<PlaneTree>> {
    if ell == 0 {
        return if vertices == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=vertices.saturating_sub(ell - 1) {
        let heads = trees(first);
        if heads.is_empty() {
            continue;
        }
        for rest in forests(ell - 1, vertices - first) {
            for head in &heads {
                let mut f = Vec::with_capacity(ell as usize);
                f.push(head.clone());
                f.extend(rest.iter().cloned());
                out.push(f);
            }
        }
    }
    out
}

fn trees(vertices: u32) -> Vec<PlaneTree> {
    if vertices == 0 {
        return vec![];
    }
    (0..vertices)
        .flat_map(|n| forests(n, vertices - 1))
        .map(|children| PlaneTree { children })
        .collect()
}

fn check_cap(vertices: u32) -> Result<()> {
    if vertices > FOREST_VERTEX_CAP {
        return Err(Error::Resource(format!(
            "forest enumeration is capped at {FOREST_VERTEX_CAP} vertices (asked for {vertices})"
        )));
    }
    Ok(())
}

type TypeCounts = BTreeMap<Vec<u32>, BigUint>;

/// Counts of `ell`-component forests on `vertices` vertices, by type.
pub fn enumerate_forests(ell: u32, vertices: u32) -> Result<BTreeMap<ForestType, BigUint>> {
    check_cap(vertices)?;
    let mut memo = HashMap::new();
    Ok(forest_counts(ell, vertices, &mut memo)
        .into_iter()
        .map(|(k, c)| (ForestType::new(ell, k), c))
        .collect())
}

fn add_vec(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn forest_counts(ell: u32, vertices: u32, memo: &mut HashMap<(u32, u32), TypeCounts>) -> TypeCounts {
    if let Some(c) = memo.get(&(ell, vertices)) {
        return c.clone();
    }
    let mut out = TypeCounts::new();
    if ell == 0 {
        if vertices == 0 {
            out.insert(vec![], BigUint::one());
        }
    } else if vertices >= ell {
        // first tree: a root with n children over a forest of size `first − 1`
        for first in 1..=vertices - (ell - 1) {
            let rest = forest_counts(ell - 1, vertices - first, memo);
            if rest.is_empty() {
                continue;
            }
            for n in 0..first {
                let below = forest_counts(n, first - 1, memo);
                let mut root = vec![0; n as usize + 1];
                root[n as usize] = 1;
                for (kb, cb) in &below {
                    let tree = add_vec(&root, kb);
                    for (kr, cr) in &rest {
                        *out.entry(add_vec(&tree, kr)).or_default() += cb * cr;
                    }
                }
            }
        }
    }
    memo.insert((ell, vertices), out.clone());
    out
}

/// All admissible types with `ell` components and exactly `vertices` vertices.
pub fn admissible_types(ell: u32, vertices: u32) -> Vec<ForestType> {
    let mut out = Vec::new();
    let mut k = vec![0u32; vertices as usize + 1];
    fn rec(n: usize, left: u32, k: &mut Vec<u32>, ell: u32, out: &mut Vec<ForestType>) {
        if n == k.len() {
            if left == 0 {
                let t = ForestType::new(ell, k.clone());
                if t.is_admissible() {
                    out.push(t);
                }
            }
            return;
        }
        for c in 0..=left {
            k[n] = c;
            rec(n + 1, left - c, k, ell, out);
        }
        k[n] = 0;
    }
    rec(0, vertices, &mut k, ell, &mut out);
    out.sort();
    out
}

/// For fixed `(k₀, k₁)`, every `(k₂, k₃, …)` making the type admissible;
/// they solve `Σ_{n≥2} (n−1) k_n = k₀ − ℓ`, so there are finitely many.
pub fn admissible_extensions(ell: u32, k0: u32, k1: u32) -> Vec<ForestType> {
    if k0 < ell {
        return vec![];
    }
    let budget = k0 - ell;
    let mut out = Vec::new();
    // k[i] counts vertices of out-degree i + 2, each using i + 1 of the budget.
    fn rec(part: u32, left: u32, k: &mut Vec<u32>, base: (u32, u32, u32), out: &mut Vec<ForestType>) {
        if left == 0 {
            let mut full = vec![base.1, base.2];
            full.extend(k.iter().copied());
            out.push(ForestType::new(base.0, full));
            return;
        }
        if part > left {
            return;
        }
        let idx = (part - 1) as usize;
        for c in 0..=left / part {
            if k.len() <= idx {
                k.resize(idx + 1, 0);
            }
            k[idx] = c;
            rec(part + 1, left - c * part, k, base, out);
        }
        k.truncate(idx);
    }
    rec(1, budget, &mut Vec::new(), (ell, k0, k1), &mut out);
    out.sort();
    out
}

/// Rows `(type, coefficient)` for every admissible type with at most
/// `max_vertices` vertices, ordered by vertex count.
pub fn universal_table(ell: u32, max_vertices: u32) -> Vec<(ForestType, BigUint)> {
    (1..=max_vertices)
        .flat_map(|v| admissible_types(ell, v))
        .map(|t| {
            let c = universal_coeff(&t);
            (t, c)
        })
        .collect()
}

fn g_vars(max_out_degree: u32) -> Vars {
    Vars::new((0..=max_out_degree).map(|n| format!("g{n}")))
}

/// `Σ_n c_n g_n ζ^n` over the variables `g₀ … g_D`.
fn weighted_g_series(max_out_degree: u32, degree: u32, weight: impl Fn(u32) -> i64) -> ZWSeries {
    let vars = g_vars(max_out_degree);
    let len = vars.len();
    let terms = (0..=max_out_degree)
        .map(|n| (n, MultiIndex::unit(len, n as usize), Rat::from(weight(n))))
        .collect::<Vec<_>>();
    ZWSeries::from_terms(vars, degree, degree, terms)
}

/// `φ^ℓ = Σ_m [ζ^{m−ℓ}] (Σ g_n ζ^n)^{m−1} (Σ (1−n) g_n ζ^n)` through total
/// g-degree `degree`, over `g₀ … g_D` with `D = max_out_degree`.
pub fn universal_series_alt(ell: u32, max_out_degree: u32, degree: u32) -> WSeries {
    let s = weighted_g_series(max_out_degree, degree, |_| 1);
    let t = weighted_g_series(max_out_degree, degree, |n| 1 - n as i64);
    let mut acc = WSeries::zero(s.vars().clone(), degree);
    let mut power = ZWSeries::one(s.vars().clone(), degree, degree);
    for m in 1..=degree {
        if m >= ell {
            acc.add_scaled_assign(&power.product_row(&t, m - ell, degree), &Rat::one());
        }
        power = power.mul_truncated(&s, degree, degree);
    }
    acc
}

/// `φ^ℓ = Σ_m (ℓ/m) [ζ^{m−ℓ}] (Σ g_n ζ^n)^m`, same truncation.
pub fn universal_series_rational(ell: u32, max_out_degree: u32, degree: u32) -> WSeries {
    let s = weighted_g_series(max_out_degree, degree, |_| 1);
    let mut acc = WSeries::zero(s.vars().clone(), degree);
    let mut power = ZWSeries::one(s.vars().clone(), degree, degree);
    for m in 1..=degree {
        power = power.mul_truncated(&s, degree, degree);
        if m >= ell {
            acc.add_scaled_assign(&power.row(m - ell), &Rat::new(ell, m));
        }
    }
    acc
}

/// Substitutes `g_n ← g_n(w) = [z^n]G` into the universal series for `φ^ℓ`
/// and compares with `φ^ℓ` from the finite sums.
///
/// Only types with `Σk ≤ 2N − ℓ` and out-degrees `≤ N` can reach w-degree
/// `N`, so those truncations lose nothing.
pub fn substitution_check(p: &ImplicitProblem, ell: u32) -> Result<bool> {
    if ell == 0 {
        return Err(Error::Range("ℓ must be at least 1".into()));
    }
    let n = p.order();
    let phi = solve_finite(p)?.phi;
    let expected = phi.pow(ell);
    let degree = (2 * n).saturating_sub(ell);
    let d = p.g().z_order().min(n);
    let universal = universal_series_alt(ell, d, degree);
    let g_rows: Vec<WSeries> = (0..=d).map(|k| p.g().row(k).with_order(n)).collect();
    Ok(evaluate_polynomial(&universal, &g_rows, p.vars(), n) == expected)
}

/// `P(s₀, s₁, …)` for a polynomial `P`, truncated to order `order`.
/// Substitutes may have nonzero constant terms since `P` is finite.
fn evaluate_polynomial(poly: &WSeries, subs: &[WSeries], vars: &Vars, order: u32) -> WSeries {
    let mut powers: Vec<Vec<WSeries>> = subs
        .iter()
        .map(|s| vec![WSeries::constant(vars.clone(), order, Rat::one()), s.clone()])
        .collect();
    let mut acc = WSeries::zero(vars.clone(), order);
    for (a, c) in poly.terms() {
        let mut term = WSeries::constant(vars.clone(), order, c.clone());
        for (i, &e) in a.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().mul_truncated(&subs[i], order);
                powers[i].push(next);
            }
            term = term.mul_truncated(&powers[i][e as usize], order);
            if term.is_empty() {
                break;
            }
        }
        acc.add_scaled_assign(&term, &Rat::one());
    }
    acc
}
