//! Rank-one special forms.
//!
//! A polynomial depending on all of its `k >= 3` variables has rank one
//! exactly when it is `h(p₁(x₁) + … + p_k(x_k))` or `h(p₁(x₁) ⋯ p_k(x_k))`.
//! Detection goes through identities between partial derivatives instead of
//! recovering `h` and the `p_i`:
//!
//! * the ratio `f_i / f_j` does not depend on any third variable `x_m`, and
//! * the ratio is separated, `r(x_i) · s(x_j)`, i.e. `∂_i ∂_j log(f_i / f_j) = 0`.
//!
//! Both are checked as polynomial identities after clearing denominators.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, RationalFunction};
use crate::rank::{self, RankMethod};
use crate::seed;

pub const DEFAULT_IDENTITY_TRIALS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IdentityMode {
    /// Full symbolic expansion.
    #[default]
    Exact,
    /// Evaluate both sides at random integer points. A reported failure is a
    /// proof; a reported success holds with high probability.
    Randomized { trials: usize, seed: u64 },
}

pub fn depends_on_all(f: &Polynomial) -> bool {
    (0..f.nvars()).all(|i| f.involves(i))
}

fn distinct(ix: &[usize], k: usize) -> Result<()> {
    for (a, &x) in ix.iter().enumerate() {
        if x >= k {
            return Err(Error::Precondition(format!("variable index {x} out of range")));
        }
        if ix[..a].contains(&x) {
            return Err(Error::Precondition("variable indices must be distinct".into()));
        }
    }
    Ok(())
}

/// Random points for the randomized identity mode; half-width from the
/// degree of the identity being tested.
fn sample_points(f: &Polynomial, degree: u32, trials: usize, seed: u64) -> Vec<Vec<Rational>> {
    let bound = seed::sample_bound(degree);
    (0..trials.max(1))
        .map(|t| {
            let mut rng = seed::rng(seed, t as u64);
            (0..f.nvars()).map(|_| seed::symmetric_int(&mut rng, bound)).collect()
        })
        .collect()
}

fn at(p: &Polynomial, x: &[Rational]) -> Rational {
    p.eval(x).expect("point matches variable count")
}

/// Whether `∂/∂x_m (f_i / f_j) ≡ 0`, tested as
/// `f_im · f_j − f_i · f_jm ≡ 0`.
pub fn ratio_independent_of(f: &Polynomial, i: usize, j: usize, m: usize, mode: IdentityMode) -> Result<bool> {
    distinct(&[i, j, m], f.nvars())?;
    let fi = f.partial(i);
    let fj = f.partial(j);
    if fj.is_zero() {
        return Err(Error::DivisionByZero);
    }
    match mode {
        // the quotient-rule numerator is exactly f_im·f_j − f_i·f_jm
        IdentityMode::Exact => Ok(RationalFunction::new(fi, fj)?.partial(m).is_zero()),
        IdentityMode::Randomized { trials, seed } => {
            let fim = fi.partial(m);
            let fjm = fj.partial(m);
            let deg = 2 * f.total_degree().unwrap_or(0);
            Ok(sample_points(f, deg, trials, seed)
                .iter()
                .all(|x| at(&fim, x) * at(&fj, x) == at(&fi, x) * at(&fjm, x)))
        }
    }
}

/// Whether `f_i / f_j` factors as `r(x_i) · s(x_j)` times something free of
/// both, tested as `(g g_ij − g_i g_j) h² ≡ (h h_ij − h_i h_j) g²` with
/// `g = f_i`, `h = f_j`.
pub fn ratio_separated(f: &Polynomial, i: usize, j: usize, mode: IdentityMode) -> Result<bool> {
    distinct(&[i, j], f.nvars())?;
    let g = f.partial(i);
    let h = f.partial(j);
    if g.is_zero() || h.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (gi, gj) = (g.partial(i), g.partial(j));
    let gij = gi.partial(j);
    let (hi, hj) = (h.partial(i), h.partial(j));
    let hij = hi.partial(j);
    match mode {
        IdentityMode::Exact => {
            let lhs = &(&(&g * &gij) - &(&gi * &gj)) * &(&h * &h);
            let rhs = &(&(&h * &hij) - &(&hi * &hj)) * &(&g * &g);
            Ok(lhs == rhs)
        }
        IdentityMode::Randomized { trials, seed } => {
            let deg = 4 * f.total_degree().unwrap_or(0);
            Ok(sample_points(f, deg, trials, seed).iter().all(|x| {
                let (g, h) = (at(&g, x), at(&h, x));
                let lhs = (&g * at(&gij, x) - at(&gi, x) * at(&gj, x)) * &h * &h;
                let rhs = (&h * at(&hij, x) - at(&hi, x) * at(&hj, x)) * &g * &g;
                lhs == rhs
            }))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Special,
    NotSpecial,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub i: String,
    pub j: String,
    pub independence_ok: bool,
    pub separation_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialFormVerdict {
    pub rank1: bool,
    pub depends_on_all: bool,
    pub pairs: Vec<PairCheck>,
    pub verdict: Verdict,
}

impl SpecialFormVerdict {
    /// The derivative identities alone, without the rank.
    pub fn identities_hold(&self) -> bool {
        self.depends_on_all && self.pairs.iter().all(|p| p.independence_ok && p.separation_ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecialOptions {
    pub identity: IdentityMode,
    pub rank: RankMethod,
}

impl Default for SpecialOptions {
    fn default() -> Self {
        SpecialOptions { identity: IdentityMode::Exact, rank: RankMethod::Exact }
    }
}

pub fn check_pair(f: &Polynomial, i: usize, j: usize, mode: IdentityMode) -> Result<PairCheck> {
    let mut independence_ok = true;
    for m in (0..f.nvars()).filter(|&m| m != i && m != j) {
        if !ratio_independent_of(f, i, j, m, mode)? {
            independence_ok = false;
            break;
        }
    }
    Ok(PairCheck {
        i: f.vars().name(i).to_string(),
        j: f.vars().name(j).to_string(),
        independence_ok,
        separation_ok: ratio_separated(f, i, j, mode)?,
    })
}

pub fn is_special(f: &Polynomial, opts: SpecialOptions) -> Result<SpecialFormVerdict> {
    let k = f.nvars();
    if k < 3 {
        return Err(Error::TooFewVariables { needed: 3, got: k });
    }
    let all = depends_on_all(f);
    let rank1 = rank::rank(f, opts.rank)?.overall == 1;
    if !all {
        return Ok(SpecialFormVerdict { rank1, depends_on_all: false, pairs: Vec::new(), verdict: Verdict::Degenerate });
    }
    let pairs_ix: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let pairs = pairs_ix
        .par_iter()
        .map(|&(i, j)| check_pair(f, i, j, opts.identity))
        .collect::<Result<Vec<_>>>()?;
    let ok = pairs.iter().all(|p| p.independence_ok && p.separation_ok);
    let verdict = if rank1 && ok { Verdict::Special } else { Verdict::NotSpecial };
    Ok(SpecialFormVerdict { rank1, depends_on_all: true, pairs, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;

    const EXACT: IdentityMode = IdentityMode::Exact;
    const RANDOM: IdentityMode = IdentityMode::Randomized { trials: DEFAULT_IDENTITY_TRIALS, seed: 3 };

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, &VarSet::numbered(3)).unwrap()
    }

    #[test]
    fn depends_on_all_examples() {
        assert!(depends_on_all(&p("x1 + x2 + x3")));
        assert!(!depends_on_all(&p("x1*x2")));
        assert!(depends_on_all(&p("x1*x3 + x2*x3^2")));
    }

    #[test]
    fn independence_examples() {
        for mode in [EXACT, RANDOM] {
            assert!(ratio_independent_of(&p("(x1+x2+x3)^2"), 0, 1, 2, mode).unwrap());
            assert!(!ratio_independent_of(&p("x1*x2 + x3*x2^2"), 0, 2, 1, mode).unwrap());
            assert!(ratio_independent_of(&p("x1*x2*x3"), 0, 1, 2, mode).unwrap());
        }
        assert_eq!(ratio_independent_of(&p("x1 + x3"), 0, 1, 2, EXACT), Err(Error::DivisionByZero));
        assert!(matches!(ratio_independent_of(&p("x1"), 0, 0, 2, EXACT), Err(Error::Precondition(_))));
    }

    #[test]
    fn separation_examples() {
        for mode in [EXACT, RANDOM] {
            assert!(ratio_separated(&p("x1*x2*x3"), 0, 1, mode).unwrap());
            assert!(ratio_separated(&p("(x1+x2+x3)^2"), 0, 1, mode).unwrap());
            assert!(ratio_separated(&p("x1*x2 + x3"), 0, 2, mode).unwrap());
            assert!(!ratio_separated(&p("x1^2*x2 + x1*x2^2"), 0, 1, mode).unwrap());
        }
        assert_eq!(ratio_separated(&p("x2 + x3"), 0, 1, EXACT), Err(Error::DivisionByZero));
    }

    #[test]
    fn verdict_examples() {
        let opts = SpecialOptions::default();
        let v = is_special(&p("(x1 + x2^2 + x3^3)^3"), opts).unwrap();
        assert!(v.rank1);
        assert_eq!(v.verdict, Verdict::Special);
        assert_eq!(is_special(&p("x1*x2*x3"), opts).unwrap().verdict, Verdict::Special);
        let v = is_special(&p("x1*x2 + x3"), opts).unwrap();
        assert_eq!(v.verdict, Verdict::NotSpecial);
        assert!(!v.rank1);
        assert!(!v.identities_hold());
        let v = is_special(&p("x1*x2"), opts).unwrap();
        assert_eq!(v.verdict, Verdict::Degenerate);
        assert!(v.pairs.is_empty());
        let two = Polynomial::parse("x1*x2", &VarSet::numbered(2)).unwrap();
        assert_eq!(is_special(&two, opts), Err(Error::TooFewVariables { needed: 3, got: 2 }));
    }

    #[test]
    fn pair_checks_are_symmetric() {
        for s in ["x1*x2 + x3*x2^2", "x1^2*x2 + x1*x2^2 + x3", "(x1*x2^2 + 1)^2*x3", "x1 + x2*x3"] {
            let f = p(s);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let a = check_pair(&f, i, j, EXACT).unwrap();
                let b = check_pair(&f, j, i, EXACT).unwrap();
                assert_eq!((a.independence_ok, a.separation_ok), (b.independence_ok, b.separation_ok), "{s} ({i},{j})");
            }
        }
    }

    #[test]
    fn verdict_serializes() {
        let v = is_special(&p("x1*x2*x3"), SpecialOptions::default()).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["verdict"], "special");
        assert_eq!(json["pairs"].as_array().unwrap().len(), 3);
        assert_eq!(json["pairs"][0]["i"], "x1");
    }
}
