//! Configurable-precision evaluation contract shared by the numeric modules.
//!
//! Every numeric routine works at [`PrecisionContext::working_bits`] (the
//! requested precision plus guard bits) and rounds exactly once when handing
//! a value back, so two algebraically equal routes land within an ulp of
//! each other at the requested precision.

use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummationPolicy {
    /// Left fold in ascending index order.
    #[default]
    SequentialAscending,
    /// Recursive halving; split points depend only on the number of terms.
    Pairwise,
}

impl fmt::Display for SummationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SummationPolicy::SequentialAscending => "sequential-ascending",
            SummationPolicy::Pairwise => "pairwise",
        })
    }
}

impl FromStr for SummationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential-ascending" | "sequential" => Ok(SummationPolicy::SequentialAscending),
            "pairwise" => Ok(SummationPolicy::Pairwise),
            other => Err(Error::InvalidParameter(format!("unknown summation policy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    precision_bits: u32,
    truncation_order: usize,
    summation: SummationPolicy,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT_BITS: u32 = 192;
    pub const GUARD_BITS: u32 = 64;

    pub fn new(precision_bits: u32, truncation_order: usize) -> Result<Self> {
        if precision_bits < Self::MIN_BITS {
            return Err(Error::PrecisionTooLow { got: precision_bits, min: Self::MIN_BITS });
        }
        Ok(PrecisionContext {
            precision_bits,
            truncation_order,
            summation: SummationPolicy::default(),
        })
    }

    pub fn with_bits(precision_bits: u32) -> Result<Self> {
        Self::new(precision_bits, 0)
    }

    pub fn with_summation(mut self, summation: SummationPolicy) -> Self {
        self.summation = summation;
        self
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn summation(&self) -> SummationPolicy {
        self.summation
    }

    pub fn working_bits(&self) -> u32 {
        self.precision_bits + Self::GUARD_BITS
    }

    pub fn finish(&self, z: &Complex) -> Complex {
        Complex::with_val(self.precision_bits, z)
    }

    pub fn finish_real(&self, x: &Float) -> Float {
        Float::with_val(self.precision_bits, x)
    }

    pub fn sum(&self, terms: &[Complex]) -> Complex {
        let prec = self.working_bits();
        match self.summation {
            SummationPolicy::SequentialAscending => {
                let mut acc = Complex::new(prec);
                for t in terms {
                    acc += t;
                }
                acc
            }
            SummationPolicy::Pairwise => pairwise(terms, prec),
        }
    }

    pub fn sum_real(&self, terms: &[Float]) -> Float {
        let prec = self.working_bits();
        match self.summation {
            SummationPolicy::SequentialAscending => {
                let mut acc = Float::new(prec);
                for t in terms {
                    acc += t;
                }
                acc
            }
            SummationPolicy::Pairwise => pairwise_real(terms, prec),
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            precision_bits: Self::DEFAULT_BITS,
            truncation_order: 0,
            summation: SummationPolicy::default(),
        }
    }
}

fn pairwise(terms: &[Complex], prec: u32) -> Complex {
    match terms.len() {
        0 => Complex::new(prec),
        1 => Complex::with_val(prec, &terms[0]),
        len => {
            let (lo, hi) = terms.split_at(len / 2);
            pairwise(lo, prec) + pairwise(hi, prec)
        }
    }
}

fn pairwise_real(terms: &[Float], prec: u32) -> Float {
    match terms.len() {
        0 => Float::new(prec),
        1 => Float::with_val(prec, &terms[0]),
        len => {
            let (lo, hi) = terms.split_at(len / 2);
            pairwise_real(lo, prec) + pairwise_real(hi, prec)
        }
    }
}

/// Returns `Some(k)` when `s` is exactly the nonnegative integer `k`.
pub fn small_integer_exponent(s: &Complex) -> Option<u32> {
    if !s.imag().is_zero() || !s.real().is_integer() || s.real().is_sign_negative() {
        return None;
    }
    s.real().to_u32_saturating().filter(|&k| k < 4096)
}

/// `r^{-s}` on the principal branch. Integer exponents go through an exact
/// integer power and a single correctly rounded reciprocal.
pub fn inv_power(r: u64, s: &Complex, prec: u32) -> Complex {
    if let Some(k) = small_integer_exponent(s) {
        let denom = Integer::from(r).pow(k);
        let recip = Float::with_val(prec, Rational::from((Integer::from(1), denom)));
        return Complex::with_val(prec, (recip, 0));
    }
    let log = Float::with_val(prec, r).ln();
    let exponent = -Complex::with_val(prec, s) * log;
    exponent.exp()
}

/// `x^{-s}` for a positive rational `x`, principal branch.
pub fn rational_inv_power(x: &Rational, s: &Complex, prec: u32) -> Complex {
    if let Some(k) = small_integer_exponent(s) {
        let p = Rational::from(x.pow(k));
        let recip = Float::with_val(prec, p.recip());
        return Complex::with_val(prec, (recip, 0));
    }
    let log = Float::with_val(prec, x).ln();
    let exponent = -Complex::with_val(prec, s) * log;
    exponent.exp()
}

pub fn rational_to_float(x: &Rational, prec: u32) -> Float {
    Float::with_val_round(prec, x, Round::Nearest).0
}

pub fn gaussian_to_complex(re: &Rational, im: &Rational, prec: u32) -> Complex {
    Complex::with_val(prec, (re, im))
}

/// Parses a decimal or `p/q` literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::InvalidParameter("empty number".into()));
    }
    if let Ok(r) = Rational::from_str_radix(t, 10) {
        return Ok(r);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..]
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent in `{t}`")))?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all = format!("{int_part}{frac_part}");
    if all.is_empty() || !all.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidParameter(format!("`{t}` is not a number")));
    }
    let mut value = Rational::from(Integer::from_str_radix(&all, 10).expect("digits checked"));
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from(10);
    if scale >= 0 {
        value *= ten.pow(scale as u32);
    } else {
        value /= ten.pow((-scale) as u32);
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert_eq!(
            PrecisionContext::new(32, 0),
            Err(Error::PrecisionTooLow { got: 32, min: 64 })
        );
        assert!(PrecisionContext::new(64, 0).is_ok());
    }

    #[test]
    fn integer_power_is_correctly_rounded() {
        let s = Complex::with_val(128, (2, 0));
        let v = inv_power(3, &s, 128);
        let expected = Float::with_val(128, Rational::from((1, 9)));
        assert_eq!(v.real(), &expected);
        assert!(v.imag().is_zero());
    }

    #[test]
    fn complex_power_matches_polar_form() {
        let s = Complex::with_val(128, (2, 1));
        let v = inv_power(2, &s, 128);
        // 2^{-2-i} = exp(-(2+i) ln 2)
        let ln2 = Float::with_val(128, 2).ln();
        let modulus = Float::with_val(128, -(Float::with_val(128, 2) * &ln2)).exp();
        let diff = Float::with_val(128, v.abs_ref()) - modulus;
        assert!(diff.abs() < 1e-35);
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.9").unwrap(), Rational::from((9, 10)));
        assert_eq!(parse_rational("-1.25e-2").unwrap(), Rational::from((-1, 80)));
        assert_eq!(parse_rational("3/4").unwrap(), Rational::from((3, 4)));
        assert_eq!(parse_rational("7").unwrap(), Rational::from(7));
        assert!(parse_rational("x1").is_err());
    }

    #[test]
    fn pairwise_and_sequential_agree_on_exact_sums() {
        let ctx = PrecisionContext::new(128, 0).unwrap();
        let terms: Vec<Complex> = (1..=37).map(|k| Complex::with_val(128, (k, -k))).collect();
        let seq = ctx.sum(&terms);
        let pw = ctx.with_summation(SummationPolicy::Pairwise).sum(&terms);
        assert_eq!(seq, pw);
        assert_eq!(seq.real().to_f64(), 703.0);
    }
}
