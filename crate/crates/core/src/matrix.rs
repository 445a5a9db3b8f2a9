//! Matrices of polynomials and fraction-free elimination over the
//! polynomial ring.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, VarSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: VarSet,
    entries: Vec<Polynomial>,
}

/// Row and column indices of a minor with nonzero determinant.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Outcome of an elimination: pivots in the order they were chosen.
#[derive(Clone, Debug)]
pub struct Elimination<T> {
    pub pivots: Vec<(usize, usize)>,
    /// Value of the last pivot. For a fraction-free run this is, up to sign,
    /// the determinant of the pivot minor.
    pub last_pivot: T,
}

impl<T> Elimination<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn minor(&self) -> Minor {
        let mut rows: Vec<usize> = self.pivots.iter().map(|p| p.0).collect();
        let mut cols: Vec<usize> = self.pivots.iter().map(|p| p.1).collect();
        rows.sort_unstable();
        cols.sort_unstable();
        Minor { rows, cols }
    }
}

impl PolyMatrix {
    /// Entries in row-major order.
    pub fn new(rows: usize, cols: usize, vars: &VarSet, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, got: entries.len() });
        }
        if entries.iter().any(|e| e.vars() != vars) {
            return Err(Error::VarSetMismatch);
        }
        Ok(PolyMatrix { rows, cols, vars: vars.clone(), entries })
    }

    pub fn from_rows(vars: &VarSet, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Precondition("rows have different lengths".into()));
        }
        Self::new(n, m, vars, rows.into_iter().flatten().collect())
    }

    /// Parses every entry over `vars`.
    pub fn parse(vars: &VarSet, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| Polynomial::parse(s, vars)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(vars, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Largest total degree of an entry (0 for the zero matrix).
    pub fn total_degree(&self) -> u32 {
        self.entries.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        PolyMatrix { rows: rows.len(), cols: cols.len(), vars: self.vars.clone(), entries }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.eval(point)).collect())
            .collect()
    }

    /// Fraction-free (Bareiss) elimination. The pivot at each step is the
    /// first nonzero entry, in row-major order, of the part of the matrix not
    /// yet eliminated. Each division by the previous pivot is exact.
    pub fn bareiss(&self) -> Elimination<Polynomial> {
        let mut a: Vec<Vec<Polynomial>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut live_rows: Vec<usize> = (0..self.rows).collect();
        let mut live_cols: Vec<usize> = (0..self.cols).collect();
        let mut prev = Polynomial::one(&self.vars);
        let mut pivots = Vec::new();

        while let Some((pr, pc)) = first_nonzero(&a, &live_rows, &live_cols, Polynomial::is_zero) {
            live_rows.retain(|&r| r != pr);
            live_cols.retain(|&c| c != pc);
            pivots.push((pr, pc));
            let pivot_row = a[pr].clone();
            let pivot = pivot_row[pc].clone();
            let updated: Vec<(usize, Vec<(usize, Polynomial)>)> = live_rows
                .par_iter()
                .map(|&r| {
                    let lead = &a[r][pc];
                    let row = live_cols
                        .iter()
                        .map(|&c| {
                            let num = &(&pivot * &a[r][c]) - &(lead * &pivot_row[c]);
                            let q = num.div_exact(&prev).expect("Bareiss division is exact");
                            (c, q)
                        })
                        .collect();
                    (r, row)
                })
                .collect();
            for (r, row) in updated {
                for (c, q) in row {
                    a[r][c] = q;
                }
                a[r][pc] = Polynomial::zero(&self.vars);
            }
            prev = pivot;
        }
        Elimination { pivots, last_pivot: prev }
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::Precondition(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(Polynomial::one(&self.vars));
        }
        let e = self.bareiss();
        if e.rank() < self.rows {
            return Ok(Polynomial::zero(&self.vars));
        }
        let rows: Vec<usize> = e.pivots.iter().map(|p| p.0).collect();
        let cols: Vec<usize> = e.pivots.iter().map(|p| p.1).collect();
        let negate = permutation_is_odd(&rows) != permutation_is_odd(&cols);
        Ok(if negate { -e.last_pivot } else { e.last_pivot })
    }
}

fn first_nonzero<T>(
    a: &[Vec<T>],
    rows: &[usize],
    cols: &[usize],
    is_zero: impl Fn(&T) -> bool,
) -> Option<(usize, usize)> {
    rows.iter()
        .find_map(|&r| cols.iter().find(|&&c| !is_zero(&a[r][c])).map(|&c| (r, c)))
}

pub(crate) fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Gaussian elimination over the rationals with the same pivot rule as
/// [`PolyMatrix::bareiss`].
pub fn rational_elimination(mut a: Vec<Vec<Rational>>) -> Elimination<Rational> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut live_rows: Vec<usize> = (0..nrows).collect();
    let mut live_cols: Vec<usize> = (0..ncols).collect();
    let mut pivots = Vec::new();
    let mut last = Rational::one();
    while let Some((pr, pc)) = first_nonzero(&a, &live_rows, &live_cols, Rational::is_zero) {
        live_rows.retain(|&r| r != pr);
        live_cols.retain(|&c| c != pc);
        pivots.push((pr, pc));
        let pivot_row = a[pr].clone();
        for &r in &live_rows {
            if a[r][pc].is_zero() {
                continue;
            }
            let factor = &a[r][pc] / &pivot_row[pc];
            for &c in &live_cols {
                let delta = &factor * &pivot_row[c];
                a[r][c] -= delta;
            }
            a[r][pc] = Rational::zero();
        }
        last = pivot_row[pc].clone();
    }
    Elimination { pivots, last_pivot: last }
}
