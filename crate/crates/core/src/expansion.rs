//! Exact image sizes `|f(A₁, …, A_k)|` over finite grids.
//!
//! The grid is swept with the last variable innermost. Substituting the outer
//! variables one at a time collapses `f` to a univariate polynomial in the
//! last variable, which is then evaluated by Horner's rule over the last set.
//! When every set element is an integer, `f` is scaled to integer
//! coefficients and the sweep runs in checked `i128`, dropping to `BigInt`
//! for any block that overflows. Values are deduplicated exactly.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, VarSet};
use crate::rank::{self, RankMethod};
use crate::seed;

/// Default cap on the number of evaluated grid points.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetKind {
    /// `{1, …, n}`.
    Interval,
    /// `n` distinct integers drawn from `[0, n³]`.
    RandomInt,
    /// `{2⁰, …, 2ⁿ⁻¹}`.
    Geometric,
    Explicit(Vec<Rational>),
}

impl SetKind {
    pub fn name(&self) -> &'static str {
        match self {
            SetKind::Interval => "interval",
            SetKind::RandomInt => "random_int",
            SetKind::Geometric => "geometric",
            SetKind::Explicit(_) => "explicit",
        }
    }

    pub fn from_name(name: &str) -> Option<SetKind> {
        Some(match name {
            "interval" => SetKind::Interval,
            "random_int" => SetKind::RandomInt,
            "geometric" => SetKind::Geometric,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSpec {
    pub kind: SetKind,
    pub n: usize,
    pub seed: u64,
}

/// The generated set, ascending.
pub fn generate_set(spec: &SetSpec) -> Result<Vec<Rational>> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Precondition("set size must be at least 1".into()));
    }
    let int = |v: BigInt| Rational::from_integer(v);
    Ok(match &spec.kind {
        SetKind::Interval => (1..=n).map(|i| int(i.into())).collect(),
        SetKind::Geometric => (0..n).map(|i| int(BigInt::one() << i)).collect(),
        SetKind::RandomInt => {
            let range = n
                .checked_mul(n)
                .and_then(|m| m.checked_mul(n))
                .and_then(|m| m.checked_add(1))
                .ok_or_else(|| Error::Precondition(format!("n = {n} exceeds the sampling range")))?;
            let mut rng = seed::rng(spec.seed, 0);
            let mut picks = index::sample(&mut rng, range, n).into_vec();
            picks.sort_unstable();
            picks.into_iter().map(|i| int(i.into())).collect()
        }
        SetKind::Explicit(values) => {
            let mut v = values.clone();
            v.sort();
            v.dedup();
            if v.len() != values.len() {
                return Err(Error::Precondition("explicit set has repeated elements".into()));
            }
            if v.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: v.len() });
            }
            v
        }
    })
}

/// An exact image. Values are stored as `scale · f(a)` so that the integer
/// case can use machine words; `scale` is 1 whenever some input is not an
/// integer, in which case `rational` holds everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    scale: BigInt,
    small: Vec<i128>,
    big: Vec<BigInt>,
    rational: Vec<Rational>,
}

impl Image {
    pub fn len(&self) -> usize {
        self.small.len() + self.big.len() + self.rational.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All values, ascending.
    pub fn values(&self) -> Vec<Rational> {
        let s = Rational::from_integer(self.scale.clone());
        let mut out: Vec<Rational> = self
            .small
            .iter()
            .map(|&v| Rational::from_integer(v.into()) / &s)
            .chain(self.big.iter().map(|v| Rational::from_integer(v.clone()) / &s))
            .chain(self.rational.iter().cloned())
            .collect();
        out.sort();
        out
    }

    pub fn is_subset_of(&self, other: &Image) -> bool {
        let theirs = other.values();
        self.values().iter().all(|v| theirs.binary_search(v).is_ok())
    }

    pub fn same_values(&self, other: &Image) -> bool {
        if self.scale == other.scale {
            return self == other;
        }
        self.values() == other.values()
    }
}

/// Arithmetic used by the sweep; `None` signals overflow.
trait Ring: Clone + Send + Sync {
    fn nil() -> Self;
    fn times(&self, b: &Self) -> Option<Self>;
    fn plus(&self, b: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn nil() -> Self {
        0
    }
    fn times(&self, b: &Self) -> Option<Self> {
        self.checked_mul(*b)
    }
    fn plus(&self, b: &Self) -> Option<Self> {
        self.checked_add(*b)
    }
}

macro_rules! exact_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn nil() -> Self {
                <$t>::zero()
            }
            fn times(&self, b: &Self) -> Option<Self> {
                Some(self * b)
            }
            fn plus(&self, b: &Self) -> Option<Self> {
                Some(self + b)
            }
        }
    };
}
exact_ring!(BigInt);
exact_ring!(Rational);

/// Substituting variable `t` maps the distinct exponent suffixes
/// `(e_t, …, e_{k-1})` onto the suffixes `(e_{t+1}, …)`.
struct Step {
    parent: Vec<usize>,
    exp: Vec<u32>,
    next_len: usize,
}

struct Plan {
    steps: Vec<Step>,
    /// Exponent of the last variable for each final suffix.
    last_exp: Vec<u32>,
    last_deg: u32,
}

impl Plan {
    fn new(exps: &[Vec<u32>]) -> Plan {
        let k = exps[0].len();
        let mut keys: Vec<Vec<u32>> = exps.to_vec();
        let mut steps = Vec::with_capacity(k - 1);
        for _ in 0..k - 1 {
            let mut ids: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
            let mut parent = Vec::with_capacity(keys.len());
            let mut exp = Vec::with_capacity(keys.len());
            for key in &keys {
                let n = ids.len();
                parent.push(*ids.entry(key[1..].to_vec()).or_insert(n));
                exp.push(key[0]);
            }
            let mut next = vec![Vec::new(); ids.len()];
            for (key, id) in ids {
                next[id] = key;
            }
            steps.push(Step { parent, exp, next_len: next.len() });
            keys = next;
        }
        let last_exp: Vec<u32> = keys.iter().map(|key| key.first().copied().unwrap_or(0)).collect();
        let last_deg = last_exp.iter().copied().max().unwrap_or(0);
        Plan { steps, last_exp, last_deg }
    }

    fn k(&self) -> usize {
        self.steps.len() + 1
    }

    /// Sweeps the sub-grid whose first coordinate is `only` (or the whole
    /// grid if `None`), pushing `f` at every point.
    fn sweep<T: Ring>(&self, t: usize, vals: &[T], sets: &Sets<T>, only: Option<usize>, out: &mut Vec<T>) -> Option<()> {
        let range = match only {
            Some(i) => i..i + 1,
            None => 0..sets.elems[t].len(),
        };
        if t + 1 == self.k() {
            let mut coefs = vec![T::nil(); self.last_deg as usize + 1];
            for (v, &e) in vals.iter().zip(&self.last_exp) {
                coefs[e as usize] = v.clone();
            }
            for i in range {
                let a = &sets.elems[t][i];
                let mut acc = coefs[self.last_deg as usize].clone();
                for c in coefs[..self.last_deg as usize].iter().rev() {
                    acc = acc.times(a)?.plus(c)?;
                }
                out.push(acc);
            }
            return Some(());
        }
        let step = &self.steps[t];
        for i in range {
            let pows = &sets.pows[t][i];
            let mut next = vec![T::nil(); step.next_len];
            for ((v, &p), &e) in vals.iter().zip(&step.parent).zip(&step.exp) {
                next[p] = next[p].plus(&v.times(&pows[e as usize])?)?;
            }
            self.sweep(t + 1, &next, sets, None, out)?;
        }
        Some(())
    }
}

struct Sets<T> {
    elems: Vec<Vec<T>>,
    /// `pows[t][i][e] = elems[t][i]^e` for `e ≤ deg_t f`.
    pows: Vec<Vec<Vec<T>>>,
}

impl<T: Ring> Sets<T> {
    fn new(elems: Vec<Vec<T>>, degs: &[u32], one: T) -> Option<Self> {
        let pows = elems
            .iter()
            .zip(degs)
            .map(|(set, &d)| {
                set.iter()
                    .map(|a| {
                        let mut row = vec![one.clone()];
                        for _ in 0..d {
                            let next = row.last().unwrap().times(a)?;
                            row.push(next);
                        }
                        Some(row)
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Sets { elems, pows })
    }
}

fn sorted_unique<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort_unstable();
    v.dedup();
    v
}

fn blocks(k: usize, first: usize) -> Vec<Option<usize>> {
    if k == 1 {
        vec![None]
    } else {
        (0..first).map(Some).collect()
    }
}

fn check_grid(f: &Polynomial, sets: &[Vec<Rational>], budget: u128) -> Result<()> {
    if sets.len() != f.nvars() {
        return Err(Error::LengthMismatch { expected: f.nvars(), got: sets.len() });
    }
    let needed = sets.iter().try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128)).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// The exact image of `f` over `A₁ × ⋯ × A_k`.
pub fn image(f: &Polynomial, sets: &[Vec<Rational>], budget: u128) -> Result<Image> {
    check_grid(f, sets, budget)?;
    let k = f.nvars();
    let empty = Image { scale: BigInt::one(), small: Vec::new(), big: Vec::new(), rational: Vec::new() };
    if sets.iter().any(Vec::is_empty) {
        return Ok(empty);
    }
    // the zero polynomial sweeps as a single zero constant term
    let (exps, coefs): (Vec<Vec<u32>>, Vec<Rational>) = if f.is_zero() {
        (vec![vec![0; k]], vec![Rational::zero()])
    } else {
        f.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).unzip()
    };
    let plan = Plan::new(&exps);
    let degs: Vec<u32> = (0..k).map(|t| f.degree_in(t).unwrap_or(0)).collect();

    if !sets.iter().flatten().all(Rational::is_integer) {
        let table = Sets::new(sets.to_vec(), &degs, Rational::one()).expect("exact");
        let parts: Vec<Vec<Rational>> = blocks(k, sets[0].len())
            .into_par_iter()
            .map(|b| {
                let mut out = Vec::new();
                plan.sweep(0, &coefs, &table, b, &mut out).expect("exact");
                sorted_unique(out)
            })
            .collect();
        return Ok(Image { rational: sorted_unique(parts.concat()), ..empty });
    }

    let scale = coefs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let big_coefs: Vec<BigInt> = coefs.iter().map(|c| (c * Rational::from_integer(scale.clone())).to_integer()).collect();
    let big_sets: Vec<Vec<BigInt>> = sets.iter().map(|s| s.iter().map(Rational::to_integer).collect()).collect();
    let small_coefs: Option<Vec<i128>> = big_coefs.iter().map(ToPrimitive::to_i128).collect();
    let small_table = small_coefs.as_ref().and_then(|_| {
        let elems: Option<Vec<Vec<i128>>> = big_sets.iter().map(|s| s.iter().map(ToPrimitive::to_i128).collect()).collect();
        Sets::new(elems?, &degs, 1i128)
    });
    let big_table = Sets::new(big_sets, &degs, BigInt::one()).expect("exact");

    let parts: Vec<(Vec<i128>, Vec<BigInt>)> = blocks(k, sets[0].len())
        .into_par_iter()
        .map(|b| {
            if let (Some(c), Some(t)) = (&small_coefs, &small_table) {
                let mut out = Vec::new();
                if plan.sweep(0, c, t, b, &mut out).is_some() {
                    return (sorted_unique(out), Vec::new());
                }
            }
            let mut out = Vec::new();
            plan.sweep(0, &big_coefs, &big_table, b, &mut out).expect("exact");
            let (small, big): (Vec<_>, Vec<_>) = out.into_iter().partition(|v| v.to_i128().is_some());
            (sorted_unique(small.iter().map(|v| v.to_i128().unwrap()).collect()), sorted_unique(big))
        })
        .collect();
    let mut small = Vec::with_capacity(parts.iter().map(|p| p.0.len()).sum());
    let mut big = Vec::new();
    for (s, b) in parts {
        small.extend(s);
        big.extend(b);
    }
    small.par_sort_unstable();
    small.dedup();
    Ok(Image { scale, small, big: sorted_unique(big), rational: Vec::new() })
}

pub fn image_size(f: &Polynomial, sets: &[Vec<Rational>], budget: u128) -> Result<usize> {
    image(f, sets, budget).map(|im| im.len())
}

/// Unweighted least-squares slope of `log size` against `log n`; needs at
/// least three points with positive sizes.
pub fn fit_exponent(points: &[(usize, usize)]) -> Option<f64> {
    if points.len() < 3 || points.iter().any(|&(n, s)| n == 0 || s == 0) {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, s)| (s as f64).ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionRow {
    pub n: usize,
    pub image_size: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub poly: String,
    pub rank: usize,
    pub rows: Vec<ExpansionRow>,
    pub fitted_exponent: Option<f64>,
    pub theoretical_exponent: Option<f64>,
    /// `(5r-4)/(2r)` as an exact fraction.
    pub theoretical_exponent_exact: Option<String>,
    pub lower_bound_respected: Option<bool>,
    pub generator: String,
    pub seed: u64,
}

impl ExpansionReport {
    pub fn csv(&self) -> String {
        let mut s = String::from("n,image_size,elapsed_ms\n");
        for r in &self.rows {
            s += &format!("{},{},{:.3}\n", r.n, r.image_size, r.elapsed_ms);
        }
        s
    }
}

/// The sets used for size `n`: variable `i` gets stream `i` of `seed`.
pub fn grid_sets(kind: &SetKind, k: usize, n: usize, seed: u64) -> Result<Vec<Vec<Rational>>> {
    (0..k).map(|i| generate_set(&SetSpec { kind: kind.clone(), n, seed: seed::derive(seed, i as u64) })).collect()
}

pub fn expansion_report(
    f: &Polynomial,
    kind: &SetKind,
    n_list: &[usize],
    seed: u64,
    budget: u128,
    method: RankMethod,
) -> Result<ExpansionReport> {
    if matches!(kind, SetKind::Explicit(_)) {
        return Err(Error::Precondition("an expansion report needs a generated set kind".into()));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("n values must be nonempty and strictly increasing".into()));
    }
    let k = f.nvars();
    let last = *n_list.last().unwrap();
    check_grid(f, &vec![vec![Rational::zero(); last]; k], budget)?;
    let r = rank::rank(f, method)?.overall;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let sets = grid_sets(kind, k, n, seed)?;
        let start = Instant::now();
        let image_size = image_size(f, &sets, budget)?;
        rows.push(ExpansionRow { n, image_size, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
    }
    let points: Vec<(usize, usize)> = rows.iter().map(|r| (r.n, r.image_size)).collect();
    let theo = rank::theoretical_exponent(r);
    let theo_f = theo.map(|(p, q)| p as f64 / q as f64);
    let lower = theo_f.map(|e| {
        let row = rows.last().unwrap();
        row.image_size as f64 >= (row.n as f64).powf(e - 0.25)
    });
    Ok(ExpansionReport {
        poly: f.to_string(),
        rank: r,
        rows,
        fitted_exponent: fit_exponent(&points),
        theoretical_exponent: theo_f,
        theoretical_exponent_exact: theo.map(|(p, q)| if q == 1 { p.to_string() } else { format!("{p}/{q}") }),
        lower_bound_respected: lower,
        generator: kind.name().to_string(),
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerateDemo {
    pub k: usize,
    pub n: usize,
    /// `|C₁ + ⋯ + C_k|`, expected `kn − k + 1`.
    pub sumset_size: usize,
    pub sumset_is_interval: bool,
    pub f_image_size: usize,
    pub g_image_size: usize,
    pub images_equal: bool,
}

/// Compares `xy + z₁ + ⋯ + z_k` over `A × B × [n]^k` with `xy + z` over
/// `A × B × {k, …, kn}`, with `A`, `B` random integer sets of size `n`.
pub fn degenerate_demo(k: usize, n: usize, seed: u64, budget: u128) -> Result<DegenerateDemo> {
    if k == 0 || n == 0 {
        return Err(Error::Precondition("k and n must be at least 1".into()));
    }
    let mut names = vec!["x".to_string(), "y".to_string()];
    names.extend((1..=k).map(|i| format!("z{i}")));
    let vars = VarSet::new(names)?;
    let mut f = &Polynomial::var(&vars, 0) * &Polynomial::var(&vars, 1);
    for i in 0..k {
        f = &f + &Polynomial::var(&vars, i + 2);
    }
    let gvars = VarSet::new(["x", "y", "z"])?;
    let g = Polynomial::parse("x*y + z", &gvars)?;

    let a = generate_set(&SetSpec { kind: SetKind::RandomInt, n, seed: seed::derive(seed, 0) })?;
    let b = generate_set(&SetSpec { kind: SetKind::RandomInt, n, seed: seed::derive(seed, 1) })?;
    let c = generate_set(&SetSpec { kind: SetKind::Interval, n, seed: 0 })?;

    let mut sumset = vec![Rational::zero()];
    for _ in 0..k {
        sumset = sorted_unique(sumset.iter().flat_map(|s| c.iter().map(move |x| s + x)).collect());
    }
    let interval: Vec<Rational> = (k..=k * n).map(|v| Rational::from_integer(v.into())).collect();

    let mut fsets = vec![a.clone(), b.clone()];
    fsets.extend(std::iter::repeat_n(c, k));
    let fim = image(&f, &fsets, budget)?;
    let gim = image(&g, &[a, b, interval.clone()], budget)?;
    Ok(DegenerateDemo {
        k,
        n,
        sumset_size: sumset.len(),
        sumset_is_interval: sumset == interval,
        f_image_size: fim.len(),
        g_image_size: gim.len(),
        images_equal: fim.same_values(&gim),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str, k: usize) -> Polynomial {
        Polynomial::parse(s, &VarSet::numbered(k)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn brute(f: &Polynomial, sets: &[Vec<Rational>]) -> Vec<Rational> {
        let mut points: Vec<Vec<Rational>> = vec![vec![]];
        for s in sets {
            points = points.iter().flat_map(|p| s.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
        }
        sorted_unique(points.iter().map(|x| f.eval(x).unwrap()).collect())
    }

    #[test]
    fn generated_sets() {
        let spec = |kind, n| SetSpec { kind, n, seed: 7 };
        assert_eq!(generate_set(&spec(SetKind::Interval, 5)).unwrap(), ints(&[1, 2, 3, 4, 5]));
        assert_eq!(generate_set(&spec(SetKind::Geometric, 4)).unwrap(), ints(&[1, 2, 4, 8]));
        let r = generate_set(&spec(SetKind::RandomInt, 100)).unwrap();
        assert_eq!(r, generate_set(&spec(SetKind::RandomInt, 100)).unwrap());
        assert_eq!(sorted_unique(r.clone()).len(), 100);
        assert!(r.iter().all(|x| *x >= rat(0) && *x <= rat(1_000_000)));
        assert_ne!(r, generate_set(&SetSpec { kind: SetKind::RandomInt, n: 100, seed: 8 }).unwrap());
        assert!(generate_set(&spec(SetKind::Interval, 0)).is_err());
        assert!(generate_set(&spec(SetKind::Explicit(ints(&[1, 1])), 2)).is_err());
    }

    #[test]
    fn image_examples() {
        let f = p("x1 + x2 + x3", 3);
        let sets = vec![ints(&(1..=10).collect::<Vec<_>>()); 3];
        assert_eq!(image_size(&f, &sets, DEFAULT_BUDGET).unwrap(), 28);
        let f = p("x1*x2*x3", 3);
        assert_eq!(image_size(&f, &vec![ints(&[1, 2]); 3], DEFAULT_BUDGET).unwrap(), 4);
        let f = p("x1*x2 + x3", 3);
        let im = image(&f, &[ints(&[1, 2]), ints(&[1, 3]), ints(&[0, 1])], DEFAULT_BUDGET).unwrap();
        assert_eq!(im.values(), ints(&[1, 2, 3, 4, 6, 7]));
    }

    #[test]
    fn image_matches_brute_force() {
        let sets = vec![ints(&[-3, 0, 2, 5]), ints(&[1, 4, 7]), ints(&[-2, 6])];
        let halves = vec![vec![rat(1) / rat(2), rat(3)], ints(&[1, -1]), vec![rat(-2) / rat(3), rat(0)]];
        for s in ["x1^2*x2 - 1/3*x2*x3^2 + 7", "x1*x2*x3 + x3^3", "5", "0", "x2 - x3", "1/2*x1^3 + 1/6*x1"] {
            let f = p(s, 3);
            for grid in [&sets, &halves] {
                assert_eq!(image(&f, grid, DEFAULT_BUDGET).unwrap().values(), brute(&f, grid), "{s}");
            }
        }
        let u = p("x1^2 - x1", 1);
        assert_eq!(image_size(&u, &[ints(&[0, 1, 2, 3])], DEFAULT_BUDGET).unwrap(), 3);
    }

    #[test]
    fn overflow_falls_back_to_bigints() {
        let f = p("x1^5*x2^5 + x2", 2);
        let sets = vec![ints(&[1 << 20, 3, -(1 << 21)]), ints(&[1 << 20, 2, 5])];
        assert_eq!(image(&f, &sets, DEFAULT_BUDGET).unwrap().values(), brute(&f, &sets));
    }

    #[test]
    fn budget_guard() {
        let f = p("x1 + x2", 2);
        let sets = vec![ints(&[1, 2, 3]); 2];
        assert_eq!(image_size(&f, &sets, 8), Err(Error::BudgetExceeded { needed: 9, budget: 8 }));
        assert_eq!(image_size(&f, &sets[..1], 8), Err(Error::LengthMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn exponent_fit() {
        let pts: Vec<(usize, usize)> = [10, 20, 40].iter().map(|&n| (n, n * n)).collect();
        assert!((fit_exponent(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(fit_exponent(&pts[..2]), None);
    }

    #[test]
    fn reports() {
        let f = p("x1 + x2 + x3", 3);
        let r = expansion_report(&f, &SetKind::Interval, &[10, 20, 40, 80], 0, DEFAULT_BUDGET, RankMethod::Exact).unwrap();
        assert_eq!(r.rows.iter().map(|r| r.image_size).collect::<Vec<_>>(), [28, 58, 118, 238]);
        assert!((r.fitted_exponent.unwrap() - 1.0).abs() < 0.05);
        assert!(r.csv().starts_with("n,image_size,elapsed_ms\n10,28,"));

        let f = p("x1*x2 + x3", 3);
        let r = expansion_report(&f, &SetKind::RandomInt, &[10, 20, 40], 5, DEFAULT_BUDGET, RankMethod::Exact).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.theoretical_exponent_exact.as_deref(), Some("3/2"));
        assert!(r.fitted_exponent.unwrap() > 2.5);
        assert_eq!(r.lower_bound_respected, Some(true));
        assert!(r.rows.iter().all(|row| row.image_size <= row.n.pow(3)));

        assert!(expansion_report(&f, &SetKind::Interval, &[20, 10], 0, DEFAULT_BUDGET, RankMethod::Exact).is_err());
    }

    #[test]
    fn degenerate_identity() {
        for (k, n) in [(1, 5), (2, 6), (3, 4)] {
            let d = degenerate_demo(k, n, 11, DEFAULT_BUDGET).unwrap();
            assert!(d.images_equal && d.sumset_is_interval);
            assert_eq!(d.f_image_size, d.g_image_size);
            assert_eq!(d.sumset_size, k * n - k + 1);
        }
    }
}
