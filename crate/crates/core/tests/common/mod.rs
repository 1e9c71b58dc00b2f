#![allow(dead_code)]

use implicit_series::{MultiIndex, Rat, Vars, ZWSeries};
use rand::Rng;

pub fn vars(n: usize) -> Vars {
    Vars::new((1..=n).map(|i| if n == 1 { "w".to_string() } else { format!("w{i}") }))
}

fn random_index(rng: &mut impl Rng, len: usize, max_degree: u32) -> MultiIndex {
    let d = rng.gen_range(0..=max_degree);
    let mut e = vec![0u32; len];
    for _ in 0..d {
        e[rng.gen_range(0..len)] += 1;
    }
    MultiIndex::from(e)
}

/// Integer `G` with `G(0,0) = 0`, `(∂G/∂z)(0,0) = 0` and at least one term
/// that carries `w`.
pub fn random_admissible_g(rng: &mut impl Rng, nvars: usize, order: u32) -> ZWSeries {
    let vars = vars(nvars);
    let mut terms = vec![(rng.gen_range(0..=2u32), random_nonconstant(rng, nvars, order), nonzero(rng))];
    for _ in 0..rng.gen_range(0..6) {
        let k = rng.gen_range(0..=order.min(4));
        let a = random_index(rng, nvars, order);
        if a.degree() == 0 && k <= 1 {
            continue;
        }
        terms.push((k, a, nonzero(rng)));
    }
    ZWSeries::from_terms(vars, order, order, terms)
}

fn random_nonconstant(rng: &mut impl Rng, len: usize, order: u32) -> MultiIndex {
    loop {
        let a = random_index(rng, len, order.min(3));
        if a.degree() > 0 {
            return a;
        }
    }
}

fn nonzero(rng: &mut impl Rng) -> Rat {
    let v = rng.gen_range(1..=3i64);
    Rat::from(if rng.gen_bool(0.5) { v } else { -v })
}

/// Dense `[0, a₁, …, a_n]` with integer `a₁ ≠ 0`.
pub fn random_revertible(rng: &mut impl Rng, n: u32) -> Vec<Rat> {
    let mut c = vec![Rat::zero(), nonzero(rng)];
    for _ in 2..=n {
        c.push(Rat::new(rng.gen_range(-4..=4i64), rng.gen_range(1..=3i64)));
    }
    c
}

/// Dense `[h₀, …, h_n]` with small rational entries.
pub fn random_dense(rng: &mut impl Rng, n: u32) -> Vec<Rat> {
    (0..=n).map(|_| Rat::new(rng.gen_range(-5..=5i64), rng.gen_range(1..=4i64))).collect()
}
