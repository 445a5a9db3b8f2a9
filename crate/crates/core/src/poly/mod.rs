//! Exact sparse multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] is a map from exponent vectors to nonzero coefficients
//! over a fixed [`VarSet`]. The map is kept canonical (no zero coefficients,
//! coefficients in lowest terms) so structural equality is polynomial
//! equality. Values are immutable after construction.

mod monomial;
mod mul;
mod parse;
mod ratfun;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use monomial::{Monomial, VarSet};
pub use ratfun::RationalFunction;

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &VarSet) -> Self {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Polynomial { vars: vars.clone(), terms }
    }

    /// The polynomial consisting of the variable at position `idx`.
    pub fn var(vars: &VarSet, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Polynomial { vars: vars.clone(), terms: BTreeMap::from([(Monomial(e), Rational::one())]) }
    }

    pub fn var_named(vars: &VarSet, name: &str) -> Result<Self> {
        Ok(Self::var(vars, vars.index_of(name)?))
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing repeats.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::LengthMismatch { expected: vars.len(), got: e.len() });
            }
            *map.entry(Monomial(e)).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { vars: vars.clone(), terms: map })
    }

    pub fn parse(expr: &str, vars: &VarSet) -> Result<Self> {
        parse::parse(expr, vars)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` stands for minus infinity (the zero polynomial).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Degree in the variable at `idx`; `None` stands for minus infinity.
    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[idx]).max()
    }

    pub fn degree_in_named(&self, name: &str) -> Result<Option<u32>> {
        Ok(self.degree_in(self.vars.index_of(name)?))
    }

    /// Whether the variable at `idx` occurs in some term.
    pub fn involves(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarSetMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m, c);
        }
        Ok(Polynomial { vars: self.vars.clone(), terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m, &-c);
        }
        Ok(Polynomial { vars: self.vars.clone(), terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let terms = mul::multiply(self.nvars(), &self.terms, &other.terms);
        Ok(Polynomial { vars: self.vars.clone(), terms })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        Polynomial { vars: self.vars.clone(), terms }
    }

    /// Formal partial derivative in the variable at `idx`.
    pub fn partial(&self, idx: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m = m.clone();
            m.0[idx] = e - 1;
            terms.insert(m, c * rat(e as i64));
        }
        Polynomial { vars: self.vars.clone(), terms }
    }

    pub fn partial_named(&self, name: &str) -> Result<Self> {
        Ok(self.partial(self.vars.index_of(name)?))
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::LengthMismatch { expected: self.nvars(), got: point.len() });
        }
        let powers = self.power_table(point);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    fn power_table(&self, point: &[Rational]) -> Vec<Vec<Rational>> {
        (0..self.nvars())
            .map(|i| {
                let d = self.degree_in(i).unwrap_or(0) as usize;
                let mut row = Vec::with_capacity(d + 1);
                row.push(Rational::one());
                for j in 1..=d {
                    let next = &row[j - 1] * &point[i];
                    row.push(next);
                }
                row
            })
            .collect()
    }

    /// Replaces the bound variables (by position) with constants. The result
    /// stays over the same variable set; bound variables no longer occur.
    pub fn substitute(&self, bindings: &[(usize, Rational)]) -> Self {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let mut c = c.clone();
            for (idx, value) in bindings {
                let e = std::mem::take(&mut m.0[*idx]);
                if e > 0 {
                    c *= num_traits::pow(value.clone(), e as usize);
                }
            }
            accumulate(&mut terms, &m, &c);
        }
        Polynomial { vars: self.vars.clone(), terms }
    }

    pub fn substitute_named(&self, bindings: &[(&str, Rational)]) -> Result<Self> {
        let b = bindings
            .iter()
            .map(|(n, v)| Ok((self.vars.index_of(n)?, v.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.substitute(&b))
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    /// Fails if a variable that occurs in `self` is missing from `target`.
    pub fn project(&self, target: &VarSet) -> Result<Self> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index_of(name) {
                Ok(j) => map.push(Some(j)),
                Err(_) if !self.involves(i) => map.push(None),
                Err(e) => return Err(e),
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; target.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    if let Some(j) = map[i] {
                        e[j] = x;
                    }
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Ok(Polynomial { vars: target.clone(), terms })
    }

    /// Same exponent vectors over a different variable set of equal size.
    pub fn relabel(&self, vars: &VarSet) -> Result<Self> {
        if vars.len() != self.nvars() {
            return Err(Error::LengthMismatch { expected: self.nvars(), got: vars.len() });
        }
        Ok(Polynomial { vars: vars.clone(), terms: self.terms.clone() })
    }

    /// Moves the exponent of variable `i` to slot `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; m.0.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    e[perm[i]] = x;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial { vars: self.vars.clone(), terms }
    }

    /// Divides by `divisor`, returning `None` unless the division is exact.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(self.vars == divisor.vars, "operands have different variable sets");
        let (lead_m, lead_c) = divisor.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((m, c)) = rem.terms.iter().next_back() {
            let qm = m.checked_div(lead_m)?;
            let qc = c / lead_c;
            for (dm, dc) in &divisor.terms {
                accumulate(&mut rem.terms, &dm.mul(&qm), &-(dc * &qc));
            }
            quot.insert(qm, qc);
        }
        Some(Polynomial { vars: self.vars.clone(), terms: quot })
    }
}

fn accumulate(terms: &mut BTreeMap<Monomial, Rational>, m: &Monomial, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                terms.remove(m);
            }
        }
        None => {
            terms.insert(m.clone(), c.clone());
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics if the operands have different variable sets; use the
            /// `try_` method for a fallible version.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("operands have different variable sets")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { vars: self.vars.clone(), terms }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Canonical form: terms in descending graded-lex order, explicit `*`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (n, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| match e {
                    1 => self.vars.name(i).to_string(),
                    _ => format!("{}^{}", self.vars.name(i), e),
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars, self)
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
