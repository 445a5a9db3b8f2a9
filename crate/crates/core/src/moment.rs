//! Simplex volumes with vertices on the moment curve `t ↦ (t, t², …, t^d)`.
//!
//! The volume of the simplex on parameters `x1, …, x_{d+1}` is
//! `(1/d!) Π_{i<j} (x_j − x_i)`, a Vandermonde determinant. As a polynomial
//! in `x_{d+1}` it factors as `g · Σ s_ℓ x_{d+1}^ℓ`, where `g` is the same
//! product over the first `d` parameters and the `s_ℓ` are signed elementary
//! symmetric polynomials. The Jacobian `M` of `(s_0, …, s_{d-1})` has
//! determinant `±Π_{i<j≤d}(x_j − x_i)`, so the volume has rank `d` in `x_{d+1}`.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{self, SetKind, SetSpec};
use crate::matrix::PolyMatrix;
use crate::poly::{Polynomial, Rational, VarSet};
use crate::rank::{self, RankMethod};

fn factorial(d: usize) -> Rational {
    Rational::from_integer((1..=d).fold(BigInt::one(), |acc, i| acc * i))
}

/// `Π_{i<j<m} (x_j − x_i)` over the first `m` variables of `vars`.
pub fn vandermonde_product(vars: &VarSet, m: usize) -> Polynomial {
    let mut p = Polynomial::one(vars);
    for j in 0..m {
        for i in 0..j {
            p = &p * &(&Polynomial::var(vars, j) - &Polynomial::var(vars, i));
        }
    }
    p
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Precondition("dimension must be at least 1".into()));
    }
    Ok(())
}

/// `(1/d!) Π_{1≤i<j≤d+1} (x_j − x_i)` over `x1, …, x_{d+1}`.
pub fn volume_poly(d: usize) -> Result<Polynomial> {
    check_d(d)?;
    let vars = VarSet::numbered(d + 1);
    Ok(vandermonde_product(&vars, d + 1).scale(&(Rational::one() / factorial(d))))
}

/// Coefficients `s_0, …, s_d` of `Π_{k≤d} (x_{d+1} − x_k)` in `x_{d+1}`,
/// as polynomials over `x1, …, xd`: `s_ℓ = (−1)^{d−ℓ} e_{d−ℓ}`.
pub fn symmetric_polys(d: usize) -> Result<Vec<Polynomial>> {
    check_d(d)?;
    let vars = VarSet::numbered(d);
    // multiply out one linear factor (t − x_k) at a time
    let mut coefs = vec![Polynomial::one(&vars)];
    for k in 0..d {
        let xk = Polynomial::var(&vars, k);
        let mut next = vec![Polynomial::zero(&vars); coefs.len() + 1];
        for (l, c) in coefs.iter().enumerate() {
            next[l + 1] = &next[l + 1] + c;
            next[l] = &next[l] - &(c * &xk);
        }
        coefs = next;
    }
    Ok(coefs)
}

/// `M_{i,j} = ∂s_i/∂x_j` for `0 ≤ i < d`, `1 ≤ j ≤ d`.
pub fn matrix_m(d: usize) -> Result<PolyMatrix> {
    let s = symmetric_polys(d)?;
    let vars = VarSet::numbered(d);
    let rows = s[..d].iter().map(|si| (0..d).map(|j| si.partial(j)).collect()).collect();
    PolyMatrix::from_rows(&vars, rows)
}

pub fn det_m(d: usize) -> Result<Polynomial> {
    matrix_m(d)?.det()
}

/// The sign `σ` with `det M = σ · Π_{i<j≤d} (x_j − x_i)`, found by exact
/// comparison; `None` if neither sign matches.
pub fn det_m_sign(d: usize) -> Result<Option<i8>> {
    let det = det_m(d)?;
    let v = vandermonde_product(det.vars(), d);
    Ok(if det == v {
        Some(1)
    } else if det == -v {
        Some(-1)
    } else {
        None
    })
}

/// Whether the engine finds `rank_{x_{d+1}}` of the volume polynomial to be `d`.
pub fn verify_rank(d: usize, method: RankMethod) -> Result<bool> {
    let f = volume_poly(d)?;
    Ok(rank::rank_in(&f, d, method)?.rank == d)
}

#[derive(Clone, Debug)]
pub struct MomentInstance {
    pub d: usize,
    /// The volume polynomial over `x1, …, x_{d+1}`.
    pub f: Polynomial,
    /// `(1/d!) Π_{i<j≤d} (x_j − x_i)` over `x1, …, xd`.
    pub g: Polynomial,
    pub s: Vec<Polynomial>,
    pub m: PolyMatrix,
}

impl MomentInstance {
    pub fn new(d: usize) -> Result<Self> {
        let f = volume_poly(d)?;
        let vars = VarSet::numbered(d);
        let g = vandermonde_product(&vars, d).scale(&(Rational::one() / factorial(d)));
        Ok(MomentInstance { d, f, g, s: symmetric_polys(d)?, m: matrix_m(d)? })
    }

    /// `g · Σ s_ℓ x_{d+1}^ℓ`, which must equal `f`.
    pub fn factored(&self) -> Result<Polynomial> {
        let vars = self.f.vars();
        let t = Polynomial::var(vars, self.d);
        let mut fhat = Polynomial::zero(vars);
        for (l, s) in self.s.iter().enumerate() {
            fhat = &fhat + &(&s.project(vars)? * &t.pow(l as u32));
        }
        Ok(&self.g.project(vars)? * &fhat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeSet {
    pub d: usize,
    pub params: Vec<Rational>,
    /// Ascending.
    pub volumes: Vec<Rational>,
    pub signed: bool,
}

impl VolumeSet {
    pub fn count(&self) -> usize {
        self.volumes.len()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k as u128 {
        r = r.saturating_mul(n as u128 - i) / (i + 1);
    }
    r
}

/// Volumes of all simplices on `d+1` of the parameters. Absolute values by
/// default; with `signed`, the vertices are taken in parameter order.
pub fn distinct_volumes(params: &[Rational], d: usize, signed: bool, budget: u128) -> Result<VolumeSet> {
    check_d(d)?;
    let n = params.len();
    if n < d + 1 {
        return Err(Error::Precondition(format!("need at least {} parameters, got {n}", d + 1)));
    }
    let mut sorted = params.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != n {
        return Err(Error::Precondition("parameters must be distinct".into()));
    }
    let needed = binomial(n, d + 1);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let inv = Rational::one() / factorial(d);

    fn walk(params: &[Rational], chosen: &mut Vec<usize>, size: usize, acc: &Rational, out: &mut BTreeSet<Rational>) {
        if chosen.len() == size {
            out.insert(acc.clone());
            return;
        }
        let last = *chosen.last().unwrap();
        for next in last + 1..params.len() {
            let mut a = acc.clone();
            for &c in chosen.iter() {
                a *= &params[next] - &params[c];
            }
            chosen.push(next);
            walk(params, chosen, size, &a, out);
            chosen.pop();
        }
    }

    let blocks: Vec<BTreeSet<Rational>> = (0..n)
        .into_par_iter()
        .map(|lead| {
            let mut out = BTreeSet::new();
            walk(params, &mut vec![lead], d + 1, &Rational::one(), &mut out);
            out
        })
        .collect();
    let mut all = BTreeSet::new();
    for b in blocks {
        all.extend(b.into_iter().map(|v| {
            let v = v * &inv;
            if signed {
                v
            } else {
                v.abs()
            }
        }));
    }
    Ok(VolumeSet { d, params: params.to_vec(), volumes: all.into_iter().collect(), signed })
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeRow {
    pub n: usize,
    pub count: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    pub d: usize,
    pub rows: Vec<VolumeRow>,
    pub theoretical_exponent: f64,
    pub theoretical_exponent_exact: String,
    pub fitted_exponent: Option<f64>,
    pub generator: String,
    pub seed: u64,
    pub signed_mode: bool,
}

impl VolumeReport {
    pub fn csv(&self) -> String {
        let mut s = String::from("n,count,elapsed_ms\n");
        for r in &self.rows {
            s += &format!("{},{},{:.3}\n", r.n, r.count, r.elapsed_ms);
        }
        s
    }
}

/// `(5d−4)/(2d)` as a reduced fraction string.
pub fn theoretical_exponent_exact(d: usize) -> Option<String> {
    rank::theoretical_exponent(d).map(|(p, q)| if q == 1 { p.to_string() } else { format!("{p}/{q}") })
}

pub fn volume_expansion_report(
    kind: &SetKind,
    n_list: &[usize],
    d: usize,
    seed: u64,
    signed: bool,
    budget: u128,
) -> Result<VolumeReport> {
    check_d(d)?;
    if matches!(kind, SetKind::Explicit(_)) {
        return Err(Error::Precondition("a volume report needs a generated set kind".into()));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("n values must be nonempty and strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let params = expansion::generate_set(&SetSpec { kind: kind.clone(), n, seed })?;
        let start = Instant::now();
        let count = distinct_volumes(&params, d, signed, budget)?.count();
        rows.push(VolumeRow { n, count, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
    }
    let (p, q) = rank::theoretical_exponent(d).expect("d >= 1");
    let points: Vec<(usize, usize)> = rows.iter().map(|r| (r.n, r.count)).collect();
    Ok(VolumeReport {
        d,
        rows,
        theoretical_exponent: p as f64 / q as f64,
        theoretical_exponent_exact: theoretical_exponent_exact(d).expect("d >= 1"),
        fitted_exponent: expansion::fit_exponent(&points),
        generator: kind.name().to_string(),
        seed,
        signed_mode: signed,
    })
}
