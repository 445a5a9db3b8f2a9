//! Inputs shared by the benchmarks.

use polyrank_core::expansion::{self, SetKind};
use polyrank_core::{Polynomial, Rational, VarSet};

/// `(x1 + x2 + … + xk + 1)^e`, a dense polynomial.
pub fn dense_power(k: usize, e: u32) -> Polynomial {
    let vars = VarSet::numbered(k);
    let mut s = Polynomial::one(&vars);
    for i in 0..k {
        s = &s + &Polynomial::var(&vars, i);
    }
    s.pow(e)
}

/// `x1*xk + x2*xk^2 + … + x_{k-1}*xk^{k-1}`, which has full rank `k-1`.
pub fn full_rank_family(k: usize) -> Polynomial {
    let vars = VarSet::numbered(k);
    let text: Vec<String> = (1..k).map(|i| format!("x{i}*x{k}^{i}")).collect();
    Polynomial::parse(&text.join(" + "), &vars).expect("valid expression")
}

pub fn random_grid(k: usize, n: usize, seed: u64) -> Vec<Vec<Rational>> {
    expansion::grid_sets(&SetKind::RandomInt, k, n, seed).expect("valid sizes")
}

pub fn mixed_cubic() -> Polynomial {
    Polynomial::parse("x1^2*x2 + x2*x3^2 + x1*x3", &VarSet::numbered(3)).expect("valid expression")
}
