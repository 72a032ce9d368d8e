//! Bounded periodic arithmetic weights `chi: N -> C` and the direct partial
//! L-series used as an oracle.

use std::fmt;
use std::path::Path;

use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{eval, PrecisionContext, SummationPolicy};

/// Exact complex number with rational parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        GaussianRational { re: re.into(), im: im.into() }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::new(v, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn norm_squared(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(Rational::from(&self.re + &other.re), Rational::from(&self.im + &other.im))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = Rational::from(&self.re * &other.re) - Rational::from(&self.im * &other.im);
        let im = Rational::from(&self.re * &other.im) + Rational::from(&self.im * &other.re);
        Self::new(re, im)
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        eval::gaussian_to_complex(&self.re, &self.im, prec)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re == 0, self.im == 0) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            _ if self.im < 0 => write!(f, "{}-{}i", self.re, Rational::from(-&self.im)),
            _ => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl std::str::FromStr for GaussianRational {
    type Err = Error;

    /// `re`, `re+imi`, `re-imi`, `imi` or `i`, with decimal or `p/q` parts.
    fn from_str(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidParameter(format!("`{text}` is not a complex number of the form re[+imi]"));
        let Some(body) = t.strip_suffix('i') else {
            return eval::parse_rational(&t).map(|re| Self::new(re, 0)).map_err(|_| bad());
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re_text, im_text) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_text {
            "" | "+" => Rational::from(1),
            "-" => Rational::from(-1),
            other => eval::parse_rational(other).map_err(|_| bad())?,
        };
        let re = eval::parse_rational(re_text).map_err(|_| bad())?;
        Ok(Self::new(re, im))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Trivial,
    Alternating,
    Mod4,
    Periodic,
}

/// `chi(r)` depends on `r mod period`; `values[i]` is the value at residue
/// `i + 1`, so residue 0 is stored last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticWeight {
    kind: WeightKind,
    values: Vec<GaussianRational>,
}

fn ints(v: &[i64]) -> Vec<GaussianRational> {
    v.iter().map(|&x| GaussianRational::from_integer(x)).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Descriptor {
    kind: WeightKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<[serde_json::Value; 2]>>,
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::Number(n) => eval::parse_rational(&n.to_string()),
        serde_json::Value::String(s) => eval::parse_rational(s),
        other => Err(Error::InvalidWeight(format!("`{other}` is not a number"))),
    }
}

fn rational_json(r: &Rational) -> serde_json::Value {
    if *r.denom() == 1 {
        serde_json::Value::Number(r.numer().to_string().parse().expect("integer literal"))
    } else {
        serde_json::Value::String(r.to_string())
    }
}

impl ArithmeticWeight {
    pub fn trivial() -> Self {
        ArithmeticWeight { kind: WeightKind::Trivial, values: ints(&[1]) }
    }

    /// `(-1)^{r-1}`
    pub fn alternating() -> Self {
        ArithmeticWeight { kind: WeightKind::Alternating, values: ints(&[1, -1]) }
    }

    /// The nonprincipal character modulo 4.
    pub fn mod4() -> Self {
        ArithmeticWeight { kind: WeightKind::Mod4, values: ints(&[1, 0, -1, 0]) }
    }

    pub fn periodic(values: Vec<GaussianRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeight("a periodic weight needs at least one value".into()));
        }
        Ok(ArithmeticWeight { kind: WeightKind::Periodic, values })
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "trivial" => Some(Self::trivial()),
            "alternating" => Some(Self::alternating()),
            "mod4" => Some(Self::mod4()),
            _ => None,
        }
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["trivial", "alternating", "mod4"]
    }

    /// A preset name, or else a path to a JSON descriptor.
    pub fn resolve(descriptor: &str) -> Result<Self> {
        if let Some(w) = Self::preset(descriptor) {
            return Ok(w);
        }
        let path = Path::new(descriptor);
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidWeight(format!(
                "`{descriptor}` is neither a preset ({}) nor a readable file: {e}",
                Self::preset_names().join(", ")
            ))
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: Descriptor = serde_json::from_str(text).map_err(|e| Error::InvalidWeight(e.to_string()))?;
        let preset = match d.kind {
            WeightKind::Trivial => Some(Self::trivial()),
            WeightKind::Alternating => Some(Self::alternating()),
            WeightKind::Mod4 => Some(Self::mod4()),
            WeightKind::Periodic => None,
        };
        let values = match &d.values {
            Some(vs) => Some(
                vs.iter()
                    .map(|[re, im]| Ok(GaussianRational::new(json_rational(re)?, json_rational(im)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        if let (Some(p), Some(vs)) = (d.period, &values) {
            if p != vs.len() {
                return Err(Error::InvalidWeight(format!("period {p} but {} values", vs.len())));
            }
        }
        match preset {
            Some(w) => {
                let period_ok = d.period.is_none_or(|p| p == w.period());
                let values_ok = values.as_ref().is_none_or(|vs| *vs == w.values);
                if !(period_ok && values_ok) {
                    return Err(Error::InvalidWeight(format!(
                        "table does not match the `{}` preset",
                        w.name()
                    )));
                }
                Ok(w)
            }
            None => match values {
                Some(vs) => Self::periodic(vs),
                None => Err(Error::InvalidWeight("a periodic weight needs `values`".into())),
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d = Descriptor {
            kind: self.kind,
            period: Some(self.period()),
            values: Some(self.values.iter().map(|v| [rational_json(&v.re), rational_json(&v.im)]).collect()),
        };
        serde_json::to_value(d).expect("descriptor serializes")
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            WeightKind::Trivial => "trivial",
            WeightKind::Alternating => "alternating",
            WeightKind::Mod4 => "mod4",
            WeightKind::Periodic => "periodic",
        }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[GaussianRational] {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(GaussianRational::is_real)
    }

    pub fn evaluate(&self, r: u64) -> Result<GaussianRational> {
        if r == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.values[((r - 1) % self.period() as u64) as usize].clone())
    }

    pub fn evaluate_complex(&self, r: u64, prec: u32) -> Result<Complex> {
        Ok(self.evaluate(r)?.to_complex(prec))
    }

    /// `max |chi|` squared, exact.
    pub fn bound_squared(&self) -> Rational {
        self.values.iter().map(GaussianRational::norm_squared).max().unwrap_or_default()
    }

    pub fn bound(&self, prec: u32) -> Float {
        eval::rational_to_float(&self.bound_squared(), prec).sqrt()
    }

    /// Average of `chi` over one period.
    pub fn mean(&self) -> GaussianRational {
        let mut acc = GaussianRational::default();
        for v in &self.values {
            acc = acc.add(v);
        }
        let p = Rational::from(self.period() as u64);
        GaussianRational::new(acc.re / &p, acc.im / &p)
    }

    /// Pointwise sum, as a periodic weight of period `lcm` of the two.
    pub fn pointwise_sum(&self, other: &Self) -> Self {
        let period = num_lcm(self.period(), other.period());
        let values = (1..=period as u64)
            .map(|r| self.evaluate(r).unwrap().add(&other.evaluate(r).unwrap()))
            .collect();
        ArithmeticWeight { kind: WeightKind::Periodic, values }
    }
}

fn num_lcm(a: usize, b: usize) -> usize {
    let g = rug::Integer::from(a).gcd(&rug::Integer::from(b)).to_usize().expect("small");
    a / g * b
}

impl fmt::Display for ArithmeticWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WeightKind::Periodic => {
                let vs: Vec<String> = self.values.iter().map(ToString::to_string).collect();
                write!(f, "periodic[{}]", vs.join(", "))
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// `sum_{r <= R} chi(r) r^{-s}` with the crude integral tail bound.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialLSeries {
    pub value: Complex,
    pub cutoff: u64,
    /// `bound * R^{1 - Re s} / (Re s - 1)`
    pub tail_bound: Float,
}

pub fn partial_l_series(chi: &ArithmeticWeight, s: &Complex, cutoff: u64, ctx: &PrecisionContext) -> Result<PartialLSeries> {
    if *s.real() <= 1 {
        return Err(Error::NotAbsolutelyConvergent(s.real().to_string()));
    }
    if cutoff == 0 {
        return Err(Error::InvalidParameter("partial L-series cutoff must be >= 1".into()));
    }
    let prec = ctx.working_bits();
    let term = |r: u64| -> Option<Complex> {
        let c = chi.evaluate(r).expect("r >= 1");
        if c.is_zero() {
            return None;
        }
        let p = eval::inv_power(r, s, prec);
        Some(if c.is_real() && c.re == 1 { p } else { p * c.to_complex(prec) })
    };
    let value = match ctx.summation() {
        SummationPolicy::SequentialAscending => {
            let mut acc = Complex::new(prec);
            for r in 1..=cutoff {
                if let Some(t) = term(r) {
                    acc += t;
                }
            }
            acc
        }
        SummationPolicy::Pairwise => {
            let terms: Vec<Complex> = (1..=cutoff).filter_map(term).collect();
            ctx.sum(&terms)
        }
    };
    let sigma = Float::with_val(prec, s.real());
    let sm1 = Float::with_val(prec, &sigma - 1u32);
    let decay = Float::with_val(prec, cutoff).pow(Float::with_val(prec, 1u32 - &sigma));
    let tail = chi.bound(prec) * decay / sm1;
    Ok(PartialLSeries { value: ctx.finish(&value), cutoff, tail_bound: ctx.finish_real(&tail) })
}
