//! Rank-preserving restriction.
//!
//! If `f` has rank `r < k-1` in the pivot `v`, some `r` Jacobian columns are
//! generically independent. Keeping the pivot and those `r` variables free
//! and fixing every other variable to a generic constant gives an
//! `(r+1)`-variate polynomial that still has rank `r` in `v`. The bad
//! constants form a proper subvariety; rather than computing it (it is cut out
//! by the sum of squared `r × r` minors, far too large to expand) each
//! candidate assignment is accepted only after an exact rank computation on
//! the restricted polynomial.

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{Polynomial, Rational};
use crate::rank::{self, RankMethod};
use crate::seed;

pub const DEFAULT_MAX_ATTEMPTS: usize = 64;

fn rational_map<S: Serializer>(m: &IndexMap<String, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, v.to_string())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionResult {
    pub pivot: String,
    pub kept: Vec<String>,
    /// Values are written as exact rational strings.
    #[serde(serialize_with = "rational_map")]
    pub fixed: IndexMap<String, Rational>,
    /// Over the pivot and the kept variables, in source order.
    pub restricted: Polynomial,
    pub certified_rank: usize,
    pub attempts: usize,
}

/// Column indices of `r` generically independent columns: the columns of the
/// first `r` pivots of fraction-free elimination, ascending.
pub fn select_independent_columns(j: &PolyMatrix, r: usize) -> Result<Vec<usize>> {
    let e = j.bareiss();
    if e.rank() < r {
        return Err(Error::RankDeficient { requested: r, found: e.rank() });
    }
    let mut cols: Vec<usize> = e.pivots[..r].iter().map(|p| p.1).collect();
    cols.sort_unstable();
    Ok(cols)
}

struct Plan {
    pivot: usize,
    rank: usize,
    /// Kept source variables, ascending.
    kept: Vec<usize>,
    /// Source variables to be fixed, ascending.
    free: Vec<usize>,
}

fn plan(f: &Polynomial, pivot: usize) -> Result<Plan> {
    let k = f.nvars();
    if pivot >= k {
        return Err(Error::Precondition(format!("pivot index {pivot} out of range")));
    }
    let cm = rank::coefficient_map(f, pivot)?;
    let j = rank::jacobian(&cm);
    let r = rank::generic_rank_exact(&j).rank;
    if r + 1 >= k {
        return Err(Error::Precondition(format!("rank {r} equals k-1 = {}; nothing to reduce", k - 1)));
    }
    if r == 0 {
        return Err(Error::Precondition("rank 0: the restriction would be univariate".into()));
    }
    let to_source = |c: usize| if c < pivot { c } else { c + 1 };
    let kept: Vec<usize> = select_independent_columns(&j, r)?.into_iter().map(to_source).collect();
    let free = (0..k).filter(|i| *i != pivot && !kept.contains(i)).collect();
    Ok(Plan { pivot, rank: r, kept, free })
}

impl Plan {
    /// Substitutes `values` for the free variables and certifies the rank.
    fn attempt(&self, f: &Polynomial, values: &[Rational], attempts: usize) -> Result<Option<ReductionResult>> {
        let bindings: Vec<(usize, Rational)> = self.free.iter().copied().zip(values.iter().cloned()).collect();
        let mut slots = self.kept.clone();
        slots.push(self.pivot);
        slots.sort_unstable();
        let target = f.vars().select(&slots)?;
        let restricted = f.substitute(&bindings).project(&target)?;
        if restricted.is_zero() {
            return Ok(None);
        }
        let new_pivot = slots.iter().position(|&s| s == self.pivot).expect("pivot kept");
        let certified = rank::rank_in(&restricted, new_pivot, RankMethod::Exact)?.rank;
        if certified != self.rank {
            return Ok(None);
        }
        let names = f.vars();
        Ok(Some(ReductionResult {
            pivot: names.name(self.pivot).to_string(),
            kept: self.kept.iter().map(|&i| names.name(i).to_string()).collect(),
            fixed: bindings.into_iter().map(|(i, v)| (names.name(i).to_string(), v)).collect(),
            restricted,
            certified_rank: certified,
            attempts,
        }))
    }
}

/// Fixes the non-kept variables to random integers in `[-B, B]`,
/// `B = 2^16 (deg f + 1)`, until the restriction certifies rank `r`.
/// Attempts run in parallel batches; the lowest successful attempt index wins.
pub fn reduce(f: &Polynomial, pivot: usize, seed: u64, max_attempts: usize) -> Result<ReductionResult> {
    let plan = plan(f, pivot)?;
    let bound = seed::sample_bound(f.total_degree().unwrap_or(0));
    let batch = rayon::current_num_threads().max(1);
    let mut start = 0;
    while start < max_attempts {
        let end = (start + batch).min(max_attempts);
        let found = (start..end)
            .into_par_iter()
            .map(|a| {
                let mut rng = seed::rng(seed, a as u64);
                let values: Vec<Rational> = plan.free.iter().map(|_| seed::symmetric_int(&mut rng, bound)).collect();
                plan.attempt(f, &values, a + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(hit) = found.into_iter().flatten().next() {
            return Ok(hit);
        }
        start = end;
    }
    Err(Error::AttemptsExhausted { attempts: max_attempts })
}

/// Like [`reduce`], but fixed values come from the given per-variable sets
/// (one set per variable of `f`; sets of kept variables and the pivot are
/// ignored). Grid points are tried in lexicographic order.
pub fn grid_reduce(f: &Polynomial, pivot: usize, sets: &[Vec<Rational>], max_attempts: usize) -> Result<ReductionResult> {
    if sets.len() != f.nvars() {
        return Err(Error::LengthMismatch { expected: f.nvars(), got: sets.len() });
    }
    if sets.iter().any(Vec::is_empty) {
        return Err(Error::Precondition("every set must be nonempty".into()));
    }
    let plan = plan(f, pivot)?;
    let dims: Vec<usize> = plan.free.iter().map(|&i| sets[i].len()).collect();
    let mut odometer = vec![0usize; dims.len()];
    for attempt in 0..max_attempts {
        let values: Vec<Rational> = plan.free.iter().zip(&odometer).map(|(&i, &o)| sets[i][o].clone()).collect();
        if let Some(hit) = plan.attempt(f, &values, attempt + 1)? {
            return Ok(hit);
        }
        // advance, last digit fastest
        let mut d = dims.len();
        loop {
            if d == 0 {
                return Err(Error::AttemptsExhausted { attempts: attempt + 1 });
            }
            d -= 1;
            odometer[d] += 1;
            if odometer[d] < dims[d] {
                break;
            }
            odometer[d] = 0;
        }
    }
    Err(Error::AttemptsExhausted { attempts: max_attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, VarSet};

    fn p(s: &str, k: usize) -> Polynomial {
        Polynomial::parse(s, &VarSet::numbered(k)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn column_selection_examples() {
        let v2 = VarSet::numbered(2);
        let j = PolyMatrix::parse(&v2, &[&["0", "0"], &["1", "0"], &["0", "1"]]).unwrap();
        assert_eq!(select_independent_columns(&j, 2).unwrap(), vec![0, 1]);
        let j = PolyMatrix::parse(&v2, &[&["1", "1"], &["0", "0"]]).unwrap();
        assert_eq!(select_independent_columns(&j, 1).unwrap(), vec![0]);
        assert_eq!(select_independent_columns(&j, 2), Err(Error::RankDeficient { requested: 2, found: 1 }));

        let f = p("x1*(x2 + x3) + x1^2*x4", 4);
        let j = rank::jacobian(&rank::coefficient_map(&f, 0).unwrap());
        let cols = select_independent_columns(&j, 2).unwrap();
        assert!(cols == vec![0, 2] || cols == vec![1, 2]);
        let minor = j.submatrix(&[1, 2], &cols);
        assert!(!minor.det().unwrap().is_zero());
    }

    #[test]
    fn reduce_linear_example() {
        let f = p("x1*x2 + x3 + x4", 4);
        let r = reduce(&f, 0, 7, DEFAULT_MAX_ATTEMPTS).unwrap();
        assert_eq!(r.kept, ["x2", "x3"]);
        assert_eq!(r.fixed.keys().collect::<Vec<_>>(), ["x4"]);
        assert_eq!(r.certified_rank, 2);
        assert_eq!(r.attempts, 1);
        let c = &r.fixed["x4"];
        let expected = Polynomial::parse(&format!("x1*x2 + x3 + {c}").replace("+ -", "- "), r.restricted.vars()).unwrap();
        assert_eq!(r.restricted, expected);
    }

    #[test]
    fn reduce_five_variables() {
        let f = p("x1*x5 + x2*x5^2 + (x3 + x4)*x5^3", 5);
        let r = reduce(&f, 4, 1, DEFAULT_MAX_ATTEMPTS).unwrap();
        assert_eq!(r.certified_rank, 3);
        assert_eq!(r.kept.len(), 3);
        assert!(r.kept.contains(&"x1".to_string()) && r.kept.contains(&"x2".to_string()));
        assert_eq!(r.fixed.len(), 1);
    }

    #[test]
    fn reduce_rejects_full_rank() {
        let f = p("x1*x3 + x2*x3^2", 3);
        assert!(matches!(reduce(&f, 2, 0, 8), Err(Error::Precondition(_))));
    }

    #[test]
    fn grid_reduce_examples() {
        let f = p("x1*x2 + x3 + x4", 4);
        let sets = vec![ints(&(1..=10).collect::<Vec<_>>()); 4];
        let r = grid_reduce(&f, 0, &sets, 64).unwrap();
        assert_eq!(r.certified_rank, 2);
        assert_eq!(r.fixed["x4"], rat(1));

        let f = p("x1*x2 + x3*x4", 4);
        let r = grid_reduce(&f, 0, &sets, 64).unwrap();
        assert_eq!(r.certified_rank, 2);
        assert_eq!(r.kept, ["x2", "x3"]);

        // x4 = 0 collapses x1*x2*x4 + x3 to rank 1
        let f = p("x1*x2*x4 + x3", 4);
        let degenerate = vec![ints(&[1, 2]), ints(&[1, 2]), ints(&[1, 2]), ints(&[0])];
        assert_eq!(grid_reduce(&f, 0, &degenerate, 64), Err(Error::AttemptsExhausted { attempts: 1 }));
        let mut fine = degenerate.clone();
        fine[3] = ints(&[0, 5]);
        let r = grid_reduce(&f, 0, &fine, 64).unwrap();
        assert_eq!((r.fixed["x4"].clone(), r.attempts), (rat(5), 2));
    }

    #[test]
    fn result_serializes() {
        let f = p("x1*x2 + x3 + x4", 4);
        let r = grid_reduce(&f, 0, &vec![ints(&[3]); 4], 4).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"pivot":"x1","kept":["x2","x3"],"fixed":{"x4":"3"},"restricted":"x1*x2 + x3 + 3","certified_rank":2,"attempts":1}"#
        );
    }
}
