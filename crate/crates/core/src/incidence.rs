//! Point–curve incidence instances built from a grid.
//!
//! For `f` of rank `k-1` in `x1`, every tuple `(a2, …, ak)` gives the curve
//! `y = f(x, a2, …, ak)`, identified by its coefficient vector in `x`. Grid
//! points `(a1, …, ak, f(a))` split into `S0`, where a fixed nonsingular
//! `(k-1) × (k-1)` minor of the Jacobian vanishes at `(a2, …, ak)`, and the
//! rest `S'`. Curves come from `S'`, points are `A1 × B` with `B` the image
//! of `f`, and incidences are counted by testing every pair.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational};
use crate::rank;

pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct IncidenceInstance {
    pub k: usize,
    pub degree: u32,
    /// Jacobian rows (coefficient indices) of the minor defining `S0`.
    pub witness_rows: Vec<usize>,
    pub s_size: u64,
    pub s0_size: u64,
    pub sprime_size: u64,
    pub a1: Vec<Rational>,
    /// `B = f(A1, …, Ak)`, ascending.
    pub image: Vec<Rational>,
    /// Distinct coefficient vectors `(c0, …, cd)` of curves from `S'`.
    pub curves: Vec<Vec<Rational>>,
    /// Number of tuples `(a2, …, ak)` with nonzero minor mapping to each curve.
    pub multiplicities: Vec<u64>,
    pub incidence_count: u64,
    pub max_multiplicity: u64,
}

impl IncidenceInstance {
    pub fn points(&self) -> u64 {
        (self.a1.len() * self.image.len()) as u64
    }
}

fn horner(c: &[Rational], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, ci| acc * x + ci)
}

fn grid(sets: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for s in sets {
        out = out
            .iter()
            .flat_map(|p| s.iter().map(move |x| {
                let mut q = p.clone();
                q.push(x.clone());
                q
            }))
            .collect();
    }
    out
}

/// Builds the instance with pivot `x1`. `witness` picks the rows of the
/// minor; by default the rows found by fraction-free elimination are used.
pub fn build_instance(
    f: &Polynomial,
    sets: &[Vec<Rational>],
    witness: Option<&[usize]>,
    budget: u128,
) -> Result<IncidenceInstance> {
    let k = f.nvars();
    if sets.len() != k {
        return Err(Error::LengthMismatch { expected: k, got: sets.len() });
    }
    let cm = rank::coefficient_map(f, 0)?;
    let j = rank::jacobian(&cm);
    let g = rank::generic_rank_exact(&j);
    if g.rank + 1 != k {
        return Err(Error::Precondition(format!("rank in {} is {}, not k-1 = {}", cm.pivot_name(), g.rank, k - 1)));
    }
    let rows = match witness {
        None => g.witness.rows.clone(),
        Some(w) => {
            let mut w = w.to_vec();
            w.sort_unstable();
            w.dedup();
            if w.len() != k - 1 || w.iter().any(|&r| r >= j.rows()) {
                return Err(Error::Precondition(format!("witness needs {} distinct rows below {}", k - 1, j.rows())));
            }
            w
        }
    };
    let all_cols: Vec<usize> = (0..k - 1).collect();
    let det = j.submatrix(&rows, &all_cols).det()?;
    if det.is_zero() {
        return Err(Error::Precondition("the witness minor vanishes identically".into()));
    }

    let s_size = sets.iter().try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128)).unwrap_or(u128::MAX);
    if s_size > budget {
        return Err(Error::BudgetExceeded { needed: s_size, budget });
    }
    let a1 = sets[0].clone();
    let tuples = grid(&sets[1..]);
    let evaluated: Vec<(bool, Vec<Rational>)> = tuples
        .par_iter()
        .map(|t| {
            let zero = det.eval(t).expect("arity").is_zero();
            let coefs = cm.alphas().iter().map(|a| a.eval(t).expect("arity")).collect();
            (zero, coefs)
        })
        .collect();

    let image: BTreeSet<Rational> = evaluated
        .par_iter()
        .flat_map_iter(|(_, c)| a1.iter().map(move |x| horner(c, x)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let image: Vec<Rational> = image.into_iter().collect();

    let zero_tuples = evaluated.iter().filter(|e| e.0).count() as u64;
    let mut curve_mult: BTreeMap<&[Rational], u64> = BTreeMap::new();
    for (_, c) in evaluated.iter().filter(|e| !e.0) {
        *curve_mult.entry(c).or_default() += 1;
    }
    let curves: Vec<Vec<Rational>> = curve_mult.keys().map(|c| c.to_vec()).collect();
    let multiplicities: Vec<u64> = curve_mult.values().copied().collect();

    let pairs = (a1.len() as u128) * (image.len() as u128) * (curves.len() as u128);
    if pairs > budget {
        return Err(Error::BudgetExceeded { needed: pairs, budget });
    }
    let incidence_count = curves
        .par_iter()
        .map(|c| {
            a1.iter()
                .map(|x| {
                    let y = horner(c, x);
                    image.iter().filter(|b| **b == y).count() as u64
                })
                .sum::<u64>()
        })
        .sum();

    let n1 = a1.len() as u64;
    let s_size = s_size as u64;
    let s0_size = n1 * zero_tuples;
    Ok(IncidenceInstance {
        k,
        degree: f.total_degree().unwrap_or(0),
        witness_rows: rows,
        s_size,
        s0_size,
        sprime_size: s_size - s0_size,
        a1,
        image,
        max_multiplicity: multiplicities.iter().copied().max().unwrap_or(0),
        curves,
        multiplicities,
        incidence_count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub sprime: u64,
    pub incidences: u64,
    pub max_multiplicity: u64,
    pub multiplicity_cap: u64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub cap_holds: bool,
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds && self.cap_holds
    }
}

/// Checks `I ≤ |S'| ≤ m·I` and `m ≤ cap`, where `m` is the largest curve
/// multiplicity; the default cap is `deg(f)^k`.
pub fn verify_claim(inst: &IncidenceInstance, cap: Option<u64>) -> ClaimReport {
    let cap = cap.unwrap_or_else(|| (inst.degree as u64).saturating_pow(inst.k as u32));
    ClaimReport {
        sprime: inst.sprime_size,
        incidences: inst.incidence_count,
        max_multiplicity: inst.max_multiplicity,
        multiplicity_cap: cap,
        lower_holds: inst.incidence_count <= inst.sprime_size,
        upper_holds: inst.sprime_size <= inst.max_multiplicity * inst.incidence_count,
        cap_holds: inst.max_multiplicity <= cap,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub n: u64,
    pub s: usize,
    pub epsilon: f64,
    /// `m^{2/3} n^{2/3} + m + n`.
    pub st_bound: f64,
    /// `m^{2s/(5s-4)} n^{(5s-6)/(5s-4)+ε} + m^{2/3} n^{2/3} + m + n`.
    pub sz_bound: f64,
    pub st_ratio: f64,
    pub sz_ratio: f64,
}

/// Both incidence bounds at `m = |P|` points and `n = |C|` curves with
/// constant 1 and `s = k - 1`; ratios are `I / bound`, or 0 when the bound
/// is 0.
pub fn bound_compare(inst: &IncidenceInstance, epsilon: f64) -> BoundReport {
    let (m, n) = (inst.points(), inst.curves.len() as u64);
    let (mf, nf) = (m as f64, n as f64);
    let s = inst.k - 1;
    let st = mf.powf(2.0 / 3.0) * nf.powf(2.0 / 3.0) + mf + nf;
    let sf = s as f64;
    let (a, b) = (2.0 * sf / (5.0 * sf - 4.0), (5.0 * sf - 6.0) / (5.0 * sf - 4.0) + epsilon);
    let main = if m == 0 || n == 0 { 0.0 } else { mf.powf(a) * nf.powf(b) };
    let sz = main + st;
    let ratio = |bound: f64| if bound > 0.0 { inst.incidence_count as f64 / bound } else { 0.0 };
    BoundReport { m, n, s, epsilon, st_bound: st, sz_bound: sz, st_ratio: ratio(st), sz_ratio: ratio(sz) }
}

/// Exponents `(2s/(5s-4), (5s-6)/(5s-4))` as reduced fractions.
pub fn bound_exponents(s: u64) -> ((i64, i64), (i64, i64)) {
    let den = 5 * s as i64 - 4;
    let reduce = |p: i64, q: i64| {
        let r = Rational::new(p.into(), q.into());
        (i64::try_from(r.numer()).unwrap(), i64::try_from(r.denom()).unwrap())
    };
    (reduce(2 * s as i64, den), reduce(5 * s as i64 - 6, den))
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceSummary {
    #[serde(rename = "S")]
    pub s: u64,
    #[serde(rename = "S0")]
    pub s0: u64,
    #[serde(rename = "Sprime")]
    pub sprime: u64,
    pub points: u64,
    pub curves: u64,
    pub incidences: u64,
    pub max_multiplicity: u64,
    pub st_ratio: f64,
    pub sz_ratio: f64,
}

pub fn summary(inst: &IncidenceInstance) -> IncidenceSummary {
    let b = bound_compare(inst, DEFAULT_EPSILON);
    IncidenceSummary {
        s: inst.s_size,
        s0: inst.s0_size,
        sprime: inst.sprime_size,
        points: inst.points(),
        curves: inst.curves.len() as u64,
        incidences: inst.incidence_count,
        max_multiplicity: inst.max_multiplicity,
        st_ratio: b.st_ratio,
        sz_ratio: b.sz_ratio,
    }
}

/// `true` when each curve value at `x` lies in the image; used to check the
/// one-incidence-per-`a1` structure.
pub fn curves_hit_image(inst: &IncidenceInstance) -> bool {
    inst.curves
        .iter()
        .all(|c| inst.a1.iter().all(|x| inst.image.binary_search(&horner(c, x)).is_ok()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::DEFAULT_BUDGET;
    use crate::poly::{rat, VarSet};

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, &VarSet::numbered(3)).unwrap()
    }

    fn n_sets(n: i64) -> Vec<Vec<Rational>> {
        vec![(1..=n).map(rat).collect(); 3]
    }

    #[test]
    fn linear_instance() {
        let inst = build_instance(&p("x1*x2 + x3"), &n_sets(3), None, DEFAULT_BUDGET).unwrap();
        assert_eq!((inst.s_size, inst.s0_size, inst.sprime_size), (27, 0, 27));
        assert_eq!(inst.curves.len(), 9);
        assert!(inst.curves.iter().all(|c| c.len() == 2));
        assert_eq!(inst.incidence_count, 27);
        assert_eq!(inst.max_multiplicity, 1);
        assert_eq!(inst.witness_rows, vec![0, 1]);
        let claim = verify_claim(&inst, None);
        assert!(claim.holds());
        assert_eq!(claim.multiplicity_cap, 8);
        assert!(curves_hit_image(&inst));
    }

    #[test]
    fn degenerate_minor_splits_s() {
        // coefficients (0, x2 - x3): J rows [0 0], [1 -1], rank 1 = k-2
        assert!(matches!(
            build_instance(&p("x1*(x2 - x3)"), &n_sets(3), None, DEFAULT_BUDGET),
            Err(Error::Precondition(_))
        ));
        // coefficients (x2*x3, x2 + x3): minor det x3 - x2 vanishes on the diagonal
        let inst = build_instance(&p("x1*(x2 + x3) + x2*x3"), &n_sets(3), None, DEFAULT_BUDGET).unwrap();
        assert_eq!(inst.s0_size, 9);
        assert_eq!(inst.sprime_size, 18);
        // (a2, a3) and (a3, a2) give the same curve
        assert_eq!(inst.curves.len(), 3);
        assert_eq!(inst.max_multiplicity, 2);
        assert!(verify_claim(&inst, None).holds());
    }

    #[test]
    fn witness_choice() {
        let f = p("x1^2*x2 + x1*x3 + x2*x3");
        let sets = n_sets(3);
        assert!(build_instance(&f, &sets, Some(&[1, 2]), DEFAULT_BUDGET).is_ok());
        assert!(build_instance(&f, &sets, Some(&[0]), DEFAULT_BUDGET).is_err());
        assert!(build_instance(&f, &sets, Some(&[0, 7]), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn bounds() {
        let inst = build_instance(&p("x1*x2 + x3"), &vec![vec![rat(1), rat(2), rat(3)]; 3], None, DEFAULT_BUDGET).unwrap();
        let b = bound_compare(&inst, DEFAULT_EPSILON);
        assert_eq!(b.s, 2);
        let st = (b.m as f64 * b.n as f64).powf(2.0 / 3.0) + (b.m + b.n) as f64;
        assert!((b.st_bound - st).abs() < 1e-9);
        assert!((b.st_ratio - 27.0 / st).abs() < 1e-12);
        assert!(b.sz_bound > b.st_bound);
        assert_eq!(bound_exponents(2), ((2, 3), (2, 3)));
        assert_eq!(bound_exponents(3), ((6, 11), (9, 11)));

        let empty = IncidenceInstance {
            k: 3,
            degree: 2,
            witness_rows: vec![0, 1],
            s_size: 0,
            s0_size: 0,
            sprime_size: 0,
            a1: vec![],
            image: vec![],
            curves: vec![],
            multiplicities: vec![],
            incidence_count: 0,
            max_multiplicity: 0,
        };
        let b = bound_compare(&empty, DEFAULT_EPSILON);
        assert_eq!((b.st_ratio, b.sz_ratio), (0.0, 0.0));
        assert!(verify_claim(&empty, None).holds());
    }

    #[test]
    fn st_example_arithmetic() {
        let v: f64 = 9f64.powf(2.0 / 3.0) * 9f64.powf(2.0 / 3.0);
        assert!((v - 18.72).abs() < 0.01);
    }
}
