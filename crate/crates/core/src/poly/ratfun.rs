use super::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Quotient of two polynomials. Never reduced; equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.vars() != den.vars() {
            return Err(Error::VarSetMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Quotient rule; the denominator is squared, not simplified.
    pub fn partial(&self, idx: usize) -> Self {
        let num = &(&self.num.partial(idx) * &self.den) - &(&self.num * &self.den.partial(idx));
        RationalFunction { num, den: &self.den * &self.den }
    }

    /// `None` when the denominator vanishes at `point`.
    pub fn eval(&self, point: &[Rational]) -> Result<Option<Rational>> {
        let d = self.den.eval(point)?;
        if num_traits::Zero::is_zero(&d) {
            return Ok(None);
        }
        Ok(Some(self.num.eval(point)? / d))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.vars() == other.num.vars() && &self.num * &other.den == &other.num * &self.den
    }
}
