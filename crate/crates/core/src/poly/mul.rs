//! Product kernel.
//!
//! Both operands are scaled to integer coefficients by the lcm of their
//! denominators. Exponent vectors are packed into a mixed-radix index whose
//! digit bounds are the per-variable degree bounds of the product, so adding
//! two packed indices multiplies the monomials without carries. Accumulation
//! runs in `i128` with overflow checks and restarts in `BigInt` on overflow.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Monomial, Rational};

const DENSE_LIMIT: u128 = 1 << 21;

struct Packed {
    idx: Vec<u128>,
    num: Vec<BigInt>,
    denom: BigInt,
}

fn pack(terms: &BTreeMap<Monomial, Rational>, strides: &[u128]) -> Packed {
    let denom = terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut idx = Vec::with_capacity(terms.len());
    let mut num = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        idx.push(m.0.iter().zip(strides).map(|(&e, &s)| e as u128 * s).sum());
        num.push(c.numer() * (&denom / c.denom()));
    }
    Packed { idx, num, denom }
}

pub(super) fn multiply(
    k: usize,
    a: &BTreeMap<Monomial, Rational>,
    b: &BTreeMap<Monomial, Rational>,
) -> BTreeMap<Monomial, Rational> {
    if a.is_empty() || b.is_empty() {
        return BTreeMap::new();
    }
    let bound = |t: &BTreeMap<Monomial, Rational>, i: usize| {
        t.keys().map(|m| m.0[i]).max().unwrap_or(0) as u128
    };
    let dims: Vec<u128> = (0..k).map(|i| bound(a, i) + bound(b, i) + 1).collect();
    let mut strides = vec![1u128; k];
    let mut total: Option<u128> = Some(1);
    for i in (0..k).rev() {
        strides[i] = total.unwrap_or(0);
        total = total.and_then(|t| t.checked_mul(dims[i]));
    }
    let Some(total) = total else {
        return naive(a, b);
    };

    let pa = pack(a, &strides);
    let pb = pack(b, &strides);
    let denom = &pa.denom * &pb.denom;

    let work = (pa.idx.len() as u128) * (pb.idx.len() as u128);
    let dense = total <= DENSE_LIMIT && total <= 16 * work + 1024;

    let acc: Vec<(u128, BigInt)> = match small_product(&pa, &pb, total, dense) {
        Some(acc) => acc,
        None => big_product(&pa, &pb),
    };

    let mut out = BTreeMap::new();
    for (idx, n) in acc {
        if n.is_zero() {
            continue;
        }
        let mut rest = idx;
        let exps = strides
            .iter()
            .map(|&s| {
                let e = rest / s;
                rest %= s;
                e as u32
            })
            .collect();
        let c = if denom.is_one() {
            Rational::from_integer(n)
        } else {
            Rational::new(n, denom.clone())
        };
        out.insert(Monomial(exps), c);
    }
    out
}

fn small_product(pa: &Packed, pb: &Packed, total: u128, dense: bool) -> Option<Vec<(u128, BigInt)>> {
    let na: Vec<i128> = pa.num.iter().map(|n| n.to_i128()).collect::<Option<_>>()?;
    let nb: Vec<i128> = pb.num.iter().map(|n| n.to_i128()).collect::<Option<_>>()?;
    if dense {
        let mut acc = vec![0i128; total as usize];
        for (&ia, &ca) in pa.idx.iter().zip(&na) {
            for (&ib, &cb) in pb.idx.iter().zip(&nb) {
                let slot = &mut acc[(ia + ib) as usize];
                *slot = slot.checked_add(ca.checked_mul(cb)?)?;
            }
        }
        Some(
            acc.into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(i, c)| (i as u128, BigInt::from(c)))
                .collect(),
        )
    } else {
        let mut acc: HashMap<u128, i128> = HashMap::with_capacity((pa.idx.len() * pb.idx.len()).min(1 << 20));
        for (&ia, &ca) in pa.idx.iter().zip(&na) {
            for (&ib, &cb) in pb.idx.iter().zip(&nb) {
                let slot = acc.entry(ia + ib).or_insert(0);
                *slot = slot.checked_add(ca.checked_mul(cb)?)?;
            }
        }
        Some(acc.into_iter().map(|(i, c)| (i, BigInt::from(c))).collect())
    }
}

fn big_product(pa: &Packed, pb: &Packed) -> Vec<(u128, BigInt)> {
    let mut acc: HashMap<u128, BigInt> = HashMap::new();
    for (&ia, ca) in pa.idx.iter().zip(&pa.num) {
        for (&ib, cb) in pb.idx.iter().zip(&pb.num) {
            *acc.entry(ia + ib).or_default() += ca * cb;
        }
    }
    acc.into_iter().collect()
}

fn naive(a: &BTreeMap<Monomial, Rational>, b: &BTreeMap<Monomial, Rational>) -> BTreeMap<Monomial, Rational> {
    let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Polynomial, VarSet};

    #[test]
    fn kernel_matches_naive_including_overflow() {
        let vars = VarSet::numbered(3);
        let big = Polynomial::parse("170141183460469231731687303715884105727*x1 + x2 - 1/3*x3", &vars).unwrap();
        let q = Polynomial::parse("(x1 + 2*x2 - 5/7*x3 + 1)^3", &vars).unwrap();
        for (a, b) in [(&big, &q), (&q, &q), (&big, &big)] {
            let fast = multiply(3, &a.terms, &b.terms);
            let slow = naive(&a.terms, &b.terms);
            assert_eq!(fast, slow);
        }
    }
}
