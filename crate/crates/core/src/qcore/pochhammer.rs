use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::series::QSeries;
use crate::error::{Error, Result};

/// `coeff * q^power`, the shape every `a` parameter and chain parameter takes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMonomial {
    pub coeff: Rational,
    pub power: i64,
}

impl QMonomial {
    pub fn new(coeff: impl Into<Rational>, power: i64) -> Self {
        QMonomial { coeff: coeff.into(), power }
    }

    pub fn constant(coeff: impl Into<Rational>) -> Self {
        Self::new(coeff, 0)
    }

    pub fn q_power(power: i64) -> Self {
        Self::new(1, power)
    }

    pub fn one() -> Self {
        Self::q_power(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    pub fn mul(&self, other: &QMonomial) -> QMonomial {
        QMonomial::new(Rational::from(&self.coeff * &other.coeff), self.power + other.power)
    }

    pub fn div(&self, other: &QMonomial) -> Result<QMonomial> {
        if other.is_zero() {
            return Err(Error::ZeroChainParameter);
        }
        Ok(QMonomial::new(Rational::from(&self.coeff / &other.coeff), self.power - other.power))
    }

    pub fn pow(&self, e: u32) -> QMonomial {
        QMonomial::new(Rational::from((&self.coeff).pow(e)), self.power * i64::from(e))
    }

    /// As a truncated series; negative powers have no power-series image.
    pub fn to_series(&self, order: usize) -> Result<QSeries> {
        if self.is_zero() {
            return Ok(QSeries::zero(order));
        }
        if self.power < 0 {
            return Err(Error::NegativePower(self.power));
        }
        Ok(QSeries::monomial(self.coeff.clone(), self.power as usize, order))
    }

    /// Value at a specific nonzero rational `q`.
    pub fn eval(&self, q: &Rational) -> Rational {
        let p = Rational::from(q.pow(self.power.unsigned_abs() as u32));
        let p = if self.power < 0 { p.recip() } else { p };
        p * &self.coeff
    }

    /// `(self; q^step)_n` as a truncated series. The factor `1 - c q^{p}`
    /// has no power-series meaning when `p < 0` and is a zero divisor when
    /// `p = 0, c = 1`; the first is an error, the second produces a series
    /// with zero constant term that later inversion rejects.
    pub fn pochhammer(&self, step: usize, n: usize, order: usize) -> Result<QSeries> {
        let mut out = QSeries::one(order);
        for j in 0..n {
            let p = self.power + (step * j) as i64;
            if self.is_zero() {
                break;
            }
            if p < 0 {
                return Err(Error::NegativePower(p));
            }
            out = out.checked_mul(&one_minus_monomial(&self.coeff, p as usize, order))?;
        }
        Ok(out)
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.power, self.coeff == 1) {
            (0, _) => write!(f, "{}", self.coeff),
            (1, true) => f.write_str("q"),
            (p, true) => write!(f, "q^{p}"),
            (1, false) => write!(f, "{}*q", self.coeff),
            (p, false) => write!(f, "{}*q^{p}", self.coeff),
        }
    }
}

fn one_minus_monomial(c: &Rational, power: usize, order: usize) -> QSeries {
    let mut s = QSeries::one(order);
    if power <= order {
        let updated = Rational::from(s.coeff(power) - c);
        s.set_coeff(power, updated);
    }
    s
}

/// `(a; q)_n = (1 - a)(1 - a q) ... (1 - a q^{n-1})` for a series `a`;
/// the empty product is `1`.
pub fn q_pochhammer(a: &QSeries, n: usize) -> QSeries {
    q_pochhammer_base(a, 1, n)
}

/// `(a; q^step)_n = prod_{j<n} (1 - a q^{step j})`.
pub fn q_pochhammer_base(a: &QSeries, step: usize, n: usize) -> QSeries {
    let order = a.order();
    let one = QSeries::one(order);
    let mut out = one.clone();
    for j in 0..n {
        let factor = &one - &a.shift(step * j);
        out = &out * &factor;
    }
    out
}

/// `(q; q)_m` evaluated exactly at a rational point.
pub fn q_factorial_at(q: &Rational, m: usize) -> Rational {
    let mut acc = Rational::from(1);
    let mut qj = Rational::from(1);
    for _ in 0..m {
        qj *= q;
        acc *= Rational::from(1 - &qj);
    }
    acc
}

/// All of `(q;q)_0, ..., (q;q)_m` at a rational point.
pub fn q_factorials_at(q: &Rational, m: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(m + 1);
    let mut acc = Rational::from(1);
    let mut qj = Rational::from(1);
    out.push(acc.clone());
    for _ in 0..m {
        qj *= q;
        acc *= Rational::from(1 - &qj);
        out.push(acc.clone());
    }
    out
}

/// `[r]_q = 1 + q + ... + q^{r-1}` at an exact rational `q` (exactly `r` at `q = 1`).
pub fn q_integer(r: u64, q: &Rational) -> Result<Rational> {
    if r == 0 {
        return Err(Error::ZeroQInteger);
    }
    let mut acc = Rational::new();
    let mut qj = Rational::from(1);
    for _ in 0..r {
        acc += &qj;
        qj *= q;
    }
    Ok(acc)
}

/// `[r]_q` as a truncated series in the formal variable.
pub fn q_integer_series(r: u64, order: usize) -> Result<QSeries> {
    if r == 0 {
        return Err(Error::ZeroQInteger);
    }
    let top = (r as usize).min(order + 1);
    Ok(QSeries::from_coeffs(vec![Rational::from(1); top], order))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub q: Rational,
    /// `(q;q)_m / (1-q)^m`, which equals `prod_{j<=m} [j]_q`.
    pub ratio: Rational,
    /// `|ratio - m!|`
    pub deviation: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingTable {
    pub m: usize,
    pub rows: Vec<ScalingRow>,
}

impl ScalingTable {
    /// Whether deviations strictly decrease over the last `k` grid points.
    pub fn tail_decreasing(&self, k: usize) -> bool {
        let start = self.rows.len().saturating_sub(k);
        self.rows[start..].windows(2).all(|w| w[1].deviation < w[0].deviation)
    }
}

/// Tabulates `|(q;q)_m/(1-q)^m - m!|` over a grid of exact rationals in (0,1).
pub fn pochhammer_scaling_limit_check(m: usize, q_grid: &[Rational]) -> Result<ScalingTable> {
    if q_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let m_factorial = Rational::from(Integer::from(Integer::factorial(m as u32)));
    let mut rows = Vec::with_capacity(q_grid.len());
    for q in q_grid {
        if *q <= 0 || *q >= 1 {
            return Err(Error::GridOutOfRange(q.to_string()));
        }
        let one_minus_q = Rational::from(1 - q);
        let ratio = q_factorial_at(q, m) / Rational::from((&one_minus_q).pow(m as u32));
        let deviation = Rational::from(&ratio - &m_factorial).abs();
        rows.push(ScalingRow { q: q.clone(), ratio, deviation });
    }
    Ok(ScalingTable { m, rows })
}
