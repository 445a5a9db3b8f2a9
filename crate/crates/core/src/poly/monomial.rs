use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered list of distinct variable names. The position of a name is its
/// slot in every exponent vector over this set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidVarSet("at least one variable is required".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidVarSet(format!("`{name}` is not a valid identifier")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidVarSet(format!("duplicate variable `{name}`")));
            }
        }
        Ok(VarSet(names.into()))
    }

    /// `x1, …, xk`.
    pub fn numbered(k: usize) -> Self {
        Self::new((1..=k).map(|i| format!("x{i}"))).expect("k must be at least 1")
    }

    /// Parses a comma-separated list such as `x1,x2,x3`.
    pub fn parse_list(list: &str) -> Result<Self> {
        Self::new(list.split(',').map(str::trim))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.0[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// The sub-list at the given positions, in the order given.
    pub fn select(&self, positions: &[usize]) -> Result<Self> {
        Self::new(positions.iter().map(|&i| self.0[i].clone()))
    }

    /// Every variable except the one at `idx`; `None` if that would leave nothing.
    pub fn without(&self, idx: usize) -> Option<Self> {
        if self.len() < 2 {
            return None;
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != idx).collect();
        self.select(&keep).ok()
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(k: usize) -> Self {
        Monomial(vec![0; k])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub(crate) fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when every exponent of `other` is at most ours.
    pub(crate) fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
