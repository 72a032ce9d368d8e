//! Coefficient rings the Bailey relations are evaluated in.
//!
//! [`FormalSeries`] keeps `q` formal and works modulo `q^{N+1}`;
//! [`AtRational`] specializes `q` to an exact rational in `(0, 1)`.
//! Everything in this module is exact.

use std::fmt;

use rug::ops::Pow;
use rug::Rational;

use crate::error::{Error, Result};
use crate::qcore::{QMonomial, QSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKey {
    Order(usize),
    Point(Rational),
}

/// Outcome of comparing an expected element with a recomputed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Equal. `vacuous` is set when both sides vanish at this resolution,
    /// so the comparison carried no information.
    Equal { vacuous: bool },
    /// Differ, with the first differing power of `q` when `q` is formal.
    Differ { power: Option<usize> },
}

pub trait QAlgebra: Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn key(&self) -> AlgebraKey;
    fn describe(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn scalar(&self, c: &Rational) -> Self::Elem;
    fn monomial(&self, m: &QMonomial) -> Result<Self::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// `(a; q)_n`.
    fn pochhammer(&self, a: &QMonomial, n: usize) -> Result<Self::Elem>;

    /// `[r]_q = 1 + q + ... + q^{r-1}`.
    fn q_integer(&self, r: u64) -> Result<Self::Elem>;

    /// Evaluates `eval` and divides the result by `q^k`. Formal series are
    /// evaluated at a raised order first so no coefficient is lost.
    fn divide_by_q_power(
        &self,
        k: usize,
        eval: &dyn Fn(&Self) -> Result<Self::Elem>,
    ) -> Result<Self::Elem>;

    fn compare(&self, expected: &Self::Elem, found: &Self::Elem) -> Comparison;

    fn q_power(&self, k: i64) -> Result<Self::Elem> {
        self.monomial(&QMonomial::q_power(k))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// Formal `q`, arithmetic modulo `q^{order+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormalSeries {
    pub order: usize,
}

impl FormalSeries {
    pub fn new(order: usize) -> Self {
        FormalSeries { order }
    }
}

impl QAlgebra for FormalSeries {
    type Elem = QSeries;

    fn key(&self) -> AlgebraKey {
        AlgebraKey::Order(self.order)
    }

    fn describe(&self) -> String {
        format!("formal q mod q^{}", self.order + 1)
    }

    fn zero(&self) -> QSeries {
        QSeries::zero(self.order)
    }

    fn one(&self) -> QSeries {
        QSeries::one(self.order)
    }

    fn scalar(&self, c: &Rational) -> QSeries {
        QSeries::constant(c.clone(), self.order)
    }

    fn monomial(&self, m: &QMonomial) -> Result<QSeries> {
        m.to_series(self.order)
    }

    fn add(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a + b
    }

    fn sub(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a - b
    }

    fn mul(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a * b
    }

    fn inv(&self, a: &QSeries) -> Result<QSeries> {
        a.inverse()
    }

    fn pochhammer(&self, a: &QMonomial, n: usize) -> Result<QSeries> {
        a.pochhammer(1, n, self.order)
    }

    fn q_integer(&self, r: u64) -> Result<QSeries> {
        crate::qcore::q_integer_series(r, self.order)
    }

    fn divide_by_q_power(
        &self,
        k: usize,
        eval: &dyn Fn(&Self) -> Result<QSeries>,
    ) -> Result<QSeries> {
        let raised = eval(&FormalSeries::new(self.order + k))?;
        Ok(raised.unshift(k)?.with_order(self.order))
    }

    fn compare(&self, expected: &QSeries, found: &QSeries) -> Comparison {
        match expected.first_difference(found) {
            Some(power) => Comparison::Differ { power: Some(power) },
            None => Comparison::Equal { vacuous: expected.is_zero() },
        }
    }
}

/// `q` specialized to an exact rational in `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtRational {
    q: Rational,
}

impl AtRational {
    pub fn new(q: Rational) -> Result<Self> {
        if q <= 0 || q >= 1 {
            return Err(Error::GridOutOfRange(q.to_string()));
        }
        Ok(AtRational { q })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }
}

impl QAlgebra for AtRational {
    type Elem = Rational;

    fn key(&self) -> AlgebraKey {
        AlgebraKey::Point(self.q.clone())
    }

    fn describe(&self) -> String {
        format!("q = {}", self.q)
    }

    fn zero(&self) -> Rational {
        Rational::new()
    }

    fn one(&self) -> Rational {
        Rational::from(1)
    }

    fn scalar(&self, c: &Rational) -> Rational {
        c.clone()
    }

    fn monomial(&self, m: &QMonomial) -> Result<Rational> {
        Ok(m.eval(&self.q))
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a + b)
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a - b)
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a * b)
    }

    fn inv(&self, a: &Rational) -> Result<Rational> {
        if *a == 0 {
            return Err(Error::DegenerateDenominator(format!("division by zero at q = {}", self.q)));
        }
        Ok(Rational::from(a.recip_ref()))
    }

    fn pochhammer(&self, a: &QMonomial, n: usize) -> Result<Rational> {
        let mut acc = Rational::from(1);
        let mut term = a.eval(&self.q);
        for _ in 0..n {
            acc *= Rational::from(1 - &term);
            term *= &self.q;
        }
        Ok(acc)
    }

    fn q_integer(&self, r: u64) -> Result<Rational> {
        crate::qcore::q_integer(r, &self.q)
    }

    fn divide_by_q_power(
        &self,
        k: usize,
        eval: &dyn Fn(&Self) -> Result<Rational>,
    ) -> Result<Rational> {
        let value = eval(self)?;
        Ok(value / Rational::from((&self.q).pow(k as u32)))
    }

    fn compare(&self, expected: &Rational, found: &Rational) -> Comparison {
        if expected == found {
            Comparison::Equal { vacuous: false }
        } else {
            Comparison::Differ { power: None }
        }
    }
}
