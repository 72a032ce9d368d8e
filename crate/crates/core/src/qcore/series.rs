use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use crate::error::{Error, Result};

/// Truncated power series in `q` with exact rational coefficients.
///
/// All arithmetic is modulo `q^{N+1}` where `N` is the truncation order, so
/// a series of order `N` always carries exactly `N + 1` coefficients.
/// Binary operators require both operands to share the same order and
/// panic otherwise; use [`QSeries::checked_mul`] and friends to get an
/// error instead.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::new(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::from(1), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * q^power`, which is zero when `power > order`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Builds a series from leading coefficients, zero-padding or truncating
    /// to `order + 1` entries.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::new());
        QSeries { coeffs }
    }

    pub fn from_i64s(values: &[i64], order: usize) -> Self {
        Self::from_coeffs(values.iter().map(|&v| Rational::from(v)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, power: usize) -> &Rational {
        &self.coeffs[power]
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, power: usize, value: Rational) {
        self.coeffs[power] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| Rational::from(x * c)).collect() }
    }

    /// Multiplies by `q^k`, dropping terms beyond the truncation order.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k > order {
                break;
            }
            out.coeffs[i + k] = c.clone();
        }
        out
    }

    /// Divides by `q^k`. Fails unless the valuation is at least `k`; the top
    /// `k` coefficients of the result are unknown and reported as zero, so
    /// callers that need them must work at a higher order.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::NotDivisible(format!(
                    "series with valuation {v} is not divisible by q^{k}"
                )));
            }
        }
        let order = self.order();
        let mut out = Self::zero(order);
        for i in k..=order {
            out.coeffs[i - k] = self.coeffs[i].clone();
        }
        Ok(out)
    }

    /// Same series at a different truncation order (zero-extending upward).
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn checked_add(&self, other: &QSeries) -> Result<QSeries> {
        self.same_order(other)?;
        Ok(QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &QSeries) -> Result<QSeries> {
        self.same_order(other)?;
        Ok(QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &QSeries) -> Result<QSeries> {
        self.same_order(other)?;
        let order = self.order();
        let mut out = vec![Rational::new(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if *b != 0 {
                    out[i + j] += Rational::from(a * b);
                }
            }
        }
        Ok(QSeries { coeffs: out })
    }

    /// Multiplicative inverse modulo `q^{N+1}`; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<QSeries> {
        let c0 = &self.coeffs[0];
        if *c0 == 0 {
            return Err(Error::DegenerateDenominator(
                "cannot invert a series without constant term".into(),
            ));
        }
        let order = self.order();
        let inv_c0 = Rational::from(c0.recip_ref());
        let mut out = vec![Rational::new(); order + 1];
        out[0] = inv_c0.clone();
        for k in 1..=order {
            let mut acc = Rational::new();
            for j in 1..=k {
                if self.coeffs[j] != 0 {
                    acc += Rational::from(&self.coeffs[j] * &out[k - j]);
                }
            }
            out[k] = -(acc * &inv_c0);
        }
        Ok(QSeries { coeffs: out })
    }

    pub fn checked_div(&self, denom: &QSeries) -> Result<QSeries> {
        self.checked_mul(&denom.inverse()?)
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut out = QSeries::one(self.order());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Evaluates the truncated polynomial at a rational point.
    pub fn eval(&self, q: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= q;
            acc += c;
        }
        acc
    }

    /// First power at which the two series differ.
    pub fn first_difference(&self, other: &QSeries) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }

    fn same_order(&self, other: &QSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let negative = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            match (k, abs == 1) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => {}
                (_, false) => write!(f, "{abs}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QSeries> for &QSeries {
            type Output = QSeries;
            fn $method(self, rhs: &QSeries) -> QSeries {
                self.$checked(rhs).expect("QSeries operands must share a truncation order")
            }
        }

        impl $trait<QSeries> for QSeries {
            type Output = QSeries;
            fn $method(self, rhs: QSeries) -> QSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect() }
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_series(order: usize) -> impl Strategy<Value = QSeries> {
        proptest::collection::vec((-9i64..=9, 1i64..=5), order + 1).prop_map(move |v| {
            QSeries::from_coeffs(v.into_iter().map(|(n, d)| Rational::from((n, d))).collect(), order)
        })
    }

    #[test]
    fn length_tracks_order() {
        assert_eq!(QSeries::zero(0).coefficients().len(), 1);
        assert_eq!(QSeries::one(7).coefficients().len(), 8);
        assert_eq!(QSeries::monomial(Rational::from(3), 9, 4), QSeries::zero(4));
    }

    #[test]
    fn inverse_of_one_minus_q_is_geometric() {
        let s = QSeries::from_i64s(&[1, -1], 6);
        assert_eq!(s.inverse().unwrap(), QSeries::from_i64s(&[1; 7], 6));
    }

    #[test]
    fn inverse_requires_constant_term() {
        let s = QSeries::from_i64s(&[0, 1], 3);
        assert!(matches!(s.inverse(), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let a = QSeries::one(3);
        let b = QSeries::one(4);
        assert_eq!(a.checked_mul(&b), Err(Error::OrderMismatch(3, 4)));
    }

    #[test]
    fn display_is_readable() {
        let s = QSeries::from_i64s(&[1, -1, -1, 1], 3);
        assert_eq!(s.to_string(), "1 - q - q^2 + q^3 + O(q^4)");
    }

    #[test]
    fn unshift_needs_divisibility() {
        let s = QSeries::from_i64s(&[0, 0, 2, 3], 3);
        assert_eq!(s.unshift(2).unwrap(), QSeries::from_i64s(&[2, 3], 3));
        assert!(s.unshift(3).is_err());
    }

    proptest! {
        #[test]
        fn distributive_at_fixed_order(f in small_series(8), g in small_series(8), h in small_series(8)) {
            prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        }

        #[test]
        fn product_is_truncation_of_full_product(f in small_series(6), g in small_series(6)) {
            // Full product computed at a generous order and cut back down.
            let full = f.with_order(14).checked_mul(&g.with_order(14)).unwrap();
            prop_assert_eq!(full.with_order(6), &f * &g);
        }

        #[test]
        fn inverse_is_two_sided(f in small_series(7)) {
            prop_assume!(*f.coeff(0) != 0);
            let inv = f.inverse().unwrap();
            prop_assert_eq!(&f * &inv, QSeries::one(7));
        }
    }
}
