//! Coefficient maps, their Jacobians, and the rank of a polynomial.
//!
//! Viewing `f` as a polynomial in a pivot variable `v`,
//! `f = α₀ + α₁·v + … + α_d·v^d`, the coefficient map sends the remaining
//! `k-1` variables to `(α₀, …, α_d)`. The rank of `f` in `v` is the generic
//! rank of the `(d+1) × (k-1)` Jacobian of that map, and the rank of `f` is
//! the maximum over all pivots. Variables that `f` does not involve still
//! contribute a (zero) Jacobian column.

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{rational_elimination, Minor, PolyMatrix};
use crate::poly::{Polynomial, VarSet};
use crate::seed;

pub const DEFAULT_TRIALS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMap {
    source: VarSet,
    pivot: usize,
    vars: VarSet,
    alphas: Vec<Polynomial>,
}

impl CoefficientMap {
    /// Position of the pivot in the source variable set.
    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn pivot_name(&self) -> &str {
        self.source.name(self.pivot)
    }

    /// The `k-1` non-pivot variables, in source order.
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn source_vars(&self) -> &VarSet {
        &self.source
    }

    /// `α₀, …, α_d`, each over [`Self::vars`].
    pub fn alphas(&self) -> &[Polynomial] {
        &self.alphas
    }

    pub fn degree(&self) -> usize {
        self.alphas.len() - 1
    }

    /// `Σ α_i · v^i` over the source variables.
    pub fn reconstruct(&self) -> Polynomial {
        let v = Polynomial::var(&self.source, self.pivot);
        let mut acc = Polynomial::zero(&self.source);
        for alpha in self.alphas.iter().rev() {
            let a = alpha.project(&self.source).expect("coefficient vars are a subset");
            acc = &(&acc * &v) + &a;
        }
        acc
    }
}

pub fn coefficient_map(f: &Polynomial, pivot: usize) -> Result<CoefficientMap> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let source = f.vars().clone();
    let vars = source
        .without(pivot)
        .ok_or(Error::TooFewVariables { needed: 2, got: source.len() })?;
    let d = f.degree_in(pivot).expect("nonzero") as usize;
    let mut buckets: Vec<Vec<(Vec<u32>, crate::poly::Rational)>> = vec![Vec::new(); d + 1];
    for (m, c) in f.terms() {
        let e = m.exponents();
        let rest: Vec<u32> = e.iter().enumerate().filter(|(i, _)| *i != pivot).map(|(_, &x)| x).collect();
        buckets[e[pivot] as usize].push((rest, c.clone()));
    }
    let alphas = buckets
        .into_iter()
        .map(|b| Polynomial::from_terms(&vars, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientMap { source, pivot, vars, alphas })
}

/// Entry `(i, j)` is `∂α_i / ∂y_j` where `y` are the non-pivot variables.
pub fn jacobian(cm: &CoefficientMap) -> PolyMatrix {
    let k1 = cm.vars.len();
    let entries = cm
        .alphas
        .iter()
        .flat_map(|a| (0..k1).map(move |j| a.partial(j)))
        .collect();
    PolyMatrix::new(cm.alphas.len(), k1, &cm.vars, entries).expect("shape is consistent")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericRank {
    pub rank: usize,
    /// A `rank × rank` minor with nonzero determinant.
    pub witness: Minor,
}

/// Rank over the field of rational functions, by fraction-free elimination
/// with exact zero tests.
pub fn generic_rank_exact(m: &PolyMatrix) -> GenericRank {
    let e = m.bareiss();
    GenericRank { rank: e.rank(), witness: e.minor() }
}

/// Maximum rank of `m` evaluated at `trials` random integer points with
/// coordinates uniform in `[-B, B]`, `B = 2^16 (deg m + 1)`. Never exceeds the
/// generic rank; equals it unless every trial hits the vanishing set of the
/// relevant minors.
pub fn generic_rank_randomized(m: &PolyMatrix, trials: usize, seed: u64) -> GenericRank {
    let bound = seed::sample_bound(m.total_degree());
    let k = m.vars().len();
    let results: Vec<GenericRank> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(seed, t as u64);
            let point: Vec<_> = (0..k).map(|_| seed::symmetric_int(&mut rng, bound)).collect();
            let values = m.eval(&point).expect("point has one value per variable");
            let e = rational_elimination(values);
            GenericRank { rank: e.rank(), witness: e.minor() }
        })
        .collect();
    // first trial attaining the maximum
    let best = results.iter().map(|r| r.rank).max().unwrap_or(0);
    results.into_iter().find(|r| r.rank == best).expect("at least one trial")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    Exact,
    /// Randomized evaluation; the returned witness minor is then certified
    /// by an exact symbolic determinant.
    Randomized { trials: usize, seed: u64 },
}

impl Default for RankMethod {
    fn default() -> Self {
        RankMethod::Randomized { trials: DEFAULT_TRIALS, seed: 0 }
    }
}

impl RankMethod {
    pub fn name(&self) -> &'static str {
        match self {
            RankMethod::Exact => "exact",
            RankMethod::Randomized { .. } => "randomized",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotRank {
    pub rank: usize,
    pub witness: Minor,
    /// Whether the witness minor's determinant was verified to be a nonzero
    /// polynomial. Always true for the exact method.
    pub certified: bool,
}

/// Rank of an arbitrary polynomial matrix by the chosen method.
pub fn matrix_rank(m: &PolyMatrix, method: RankMethod) -> PivotRank {
    match method {
        RankMethod::Exact => {
            let g = generic_rank_exact(m);
            PivotRank { rank: g.rank, witness: g.witness, certified: true }
        }
        RankMethod::Randomized { trials, seed } => {
            let g = generic_rank_randomized(m, trials, seed);
            let certified = g.rank == 0
                || !m.submatrix(&g.witness.rows, &g.witness.cols).det().expect("square").is_zero();
            PivotRank { rank: g.rank, witness: g.witness, certified }
        }
    }
}

/// Rank of `f` with respect to the variable at `pivot`.
pub fn rank_in(f: &Polynomial, pivot: usize, method: RankMethod) -> Result<PivotRank> {
    let cm = coefficient_map(f, pivot)?;
    Ok(matrix_rank(&jacobian(&cm), method))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub var: String,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub vars: Vec<String>,
    pub per_variable: IndexMap<String, usize>,
    pub overall: usize,
    pub method: &'static str,
    pub trials: usize,
    pub seed: u64,
    /// One entry per pivot variable of positive rank. Rows index the
    /// coefficients `α_i`, columns the non-pivot variables in order.
    pub witness: Vec<WitnessEntry>,
    pub certified: bool,
}

pub fn rank(f: &Polynomial, method: RankMethod) -> Result<RankReport> {
    let k = f.nvars();
    let per: Vec<PivotRank> = (0..k)
        .into_par_iter()
        .map(|i| rank_in(f, i, method))
        .collect::<Result<Vec<_>>>()?;
    let names = f.vars().names();
    let (trials, seed) = match method {
        RankMethod::Exact => (0, 0),
        RankMethod::Randomized { trials, seed } => (trials, seed),
    };
    Ok(RankReport {
        vars: names.to_vec(),
        per_variable: names.iter().cloned().zip(per.iter().map(|p| p.rank)).collect(),
        overall: per.iter().map(|p| p.rank).max().unwrap_or(0),
        method: method.name(),
        trials,
        seed,
        witness: per
            .iter()
            .zip(names)
            .filter(|(p, _)| p.rank > 0)
            .map(|(p, n)| WitnessEntry { var: n.clone(), rows: p.witness.rows.clone(), cols: p.witness.cols.clone() })
            .collect(),
        certified: per.iter().all(|p| p.certified),
    })
}

/// `(5r - 4) / (2r)` as a reduced fraction, `None` for `r = 0`.
pub fn theoretical_exponent(r: usize) -> Option<(u64, u64)> {
    if r == 0 {
        return None;
    }
    let (n, d) = (5 * r as u64 - 4, 2 * r as u64);
    let g = num_integer::gcd(n, d);
    Some((n / g, d / g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;

    fn p(s: &str, k: usize) -> Polynomial {
        Polynomial::parse(s, &VarSet::numbered(k)).unwrap()
    }

    fn alphas(cm: &CoefficientMap) -> Vec<String> {
        cm.alphas().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn coefficient_map_examples() {
        let cm = coefficient_map(&p("x1*x3 + x2*x3^2", 3), 2).unwrap();
        assert_eq!(alphas(&cm), ["0", "x1", "x2"]);
        let cm = coefficient_map(&p("x1 + x2 + x3", 3), 0).unwrap();
        assert_eq!(alphas(&cm), ["x2 + x3", "1"]);
        let f = p("1/2*(x2-x1)*(x3-x1)*(x3-x2)", 3);
        let cm = coefficient_map(&f, 2).unwrap();
        let v2 = VarSet::numbered(2);
        let q = |s: &str| Polynomial::parse(s, &v2).unwrap();
        assert_eq!(cm.alphas()[0], q("1/2*(x2-x1)*x1*x2"));
        assert_eq!(cm.alphas()[1], q("-1/2*(x2-x1)*(x1+x2)"));
        assert_eq!(cm.alphas()[2], q("1/2*(x2-x1)"));
        assert_eq!(cm.reconstruct(), f);
    }

    #[test]
    fn coefficient_map_errors() {
        assert_eq!(coefficient_map(&p("0", 3), 0), Err(Error::ZeroPolynomial));
        assert_eq!(coefficient_map(&p("x1^2", 1), 0), Err(Error::TooFewVariables { needed: 2, got: 1 }));
    }

    #[test]
    fn jacobian_examples() {
        let v2 = VarSet::numbered(2);
        let j = jacobian(&coefficient_map(&p("x1*x3 + x2*x3^2", 3), 2).unwrap());
        assert_eq!(j, PolyMatrix::parse(&v2, &[&["0", "0"], &["1", "0"], &["0", "1"]]).unwrap());
        let names = VarSet::new(["x2", "x3"]).unwrap();
        let j = jacobian(&coefficient_map(&p("x1 + x2 + x3", 3), 0).unwrap());
        assert_eq!(j, PolyMatrix::parse(&names, &[&["1", "1"], &["0", "0"]]).unwrap());
        let j = jacobian(&coefficient_map(&p("x1*x2*x3", 3), 0).unwrap());
        assert_eq!(j, PolyMatrix::parse(&names, &[&["0", "0"], &["x3", "x2"]]).unwrap());
    }

    #[test]
    fn exact_rank_examples() {
        let v2 = VarSet::numbered(2);
        let g = generic_rank_exact(&PolyMatrix::parse(&v2, &[&["0", "0"], &["1", "0"], &["0", "1"]]).unwrap());
        assert_eq!(g.rank, 2);
        assert_eq!(g.witness.rows, vec![1, 2]);
        let g = generic_rank_exact(&PolyMatrix::parse(&v2, &[&["1", "1"], &["0", "0"]]).unwrap());
        assert_eq!(g.rank, 1);
        let f = p("1/2*(x2-x1)*(x3-x1)*(x3-x2)", 3);
        assert_eq!(generic_rank_exact(&jacobian(&coefficient_map(&f, 2).unwrap())).rank, 2);
    }

    #[test]
    fn randomized_rank_examples() {
        let v2 = VarSet::numbered(2);
        let zero = PolyMatrix::parse(&v2, &[&["0", "0"], &["0", "0"]]).unwrap();
        assert_eq!(generic_rank_randomized(&zero, 3, 1).rank, 0);
        let row = PolyMatrix::parse(&v2, &[&["x2", "x1"]]).unwrap();
        assert_eq!(generic_rank_randomized(&row, 1, 9).rank, 1);
    }

    #[test]
    fn rank_in_examples() {
        for method in [RankMethod::Exact, RankMethod::default()] {
            assert_eq!(rank_in(&p("x1*x3 + x2*x3^2", 3), 2, method).unwrap().rank, 2);
            for v in 0..3 {
                assert_eq!(rank_in(&p("x1 + x2 + x3", 3), v, method).unwrap().rank, 1);
            }
            assert_eq!(rank_in(&p("x1*x2 + x3", 3), 0, method).unwrap().rank, 2);
        }
    }

    #[test]
    fn rank_examples() {
        let r = rank(&p("x1*x4 + x2*x4^2 + x3*x4^3", 4), RankMethod::Exact).unwrap();
        assert_eq!(r.overall, 3);
        assert_eq!(r.per_variable["x4"], 3);
        assert_eq!(rank(&p("x1*x2*x3", 3), RankMethod::default()).unwrap().overall, 1);
        let r = rank(&p("x1*x3 + (x1 + x2^2)*x3^2", 3), RankMethod::default()).unwrap();
        assert_eq!(r.overall, 2);
        assert!(r.certified);
    }

    #[test]
    fn report_serializes_in_var_order() {
        let vars = VarSet::new(["x10", "x2", "a"]).unwrap();
        let f = Polynomial::parse("x10*a + x2", &vars).unwrap();
        let r = rank(&f, RankMethod::Exact).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"vars":["x10","x2","a"],"per_variable":{"x10":"#), "{json}");
        for key in ["overall", "method", "trials", "seed", "witness"] {
            assert!(json.contains(&format!("\"{key}\"")));
        }
    }

    #[test]
    fn theoretical_exponents() {
        assert_eq!(theoretical_exponent(2), Some((3, 2)));
        assert_eq!(theoretical_exponent(3), Some((11, 6)));
        assert_eq!(theoretical_exponent(0), None);
    }
}
