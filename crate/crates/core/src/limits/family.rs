use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::qcore::{eval, q_factorials_at, q_integer, BigCombinatorics, PrecisionContext};
use crate::weights::{ArithmeticWeight, GaussianRational};

/// `alpha_r(s, q) = chi(r) / [r]_q^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaFamily {
    pub weight: ArithmeticWeight,
    pub s: GaussianRational,
}

impl AlphaFamily {
    /// Requires `Re s > 0`; the absolutely convergent paths check `Re s > 1`
    /// themselves.
    pub fn new(weight: ArithmeticWeight, s: GaussianRational) -> Result<Self> {
        if s.re <= 0 {
            return Err(Error::InvalidParameter(format!("Re(s) = {} must be positive", s.re)));
        }
        Ok(AlphaFamily { weight, s })
    }
}

/// `Some(k)` when `s` is the nonnegative integer `k`, which keeps the
/// symbolic paths exact.
pub fn integer_exponent(s: &GaussianRational) -> Option<u32> {
    if s.im != 0 || *s.re.denom() != 1 || s.re < 0 {
        return None;
    }
    s.re.numer().to_u32().filter(|&k| k < 4096)
}

pub(crate) fn s_complex(s: &GaussianRational, prec: u32) -> Complex {
    s.to_complex(prec)
}

pub(crate) fn require_convergent(s: &GaussianRational) -> Result<()> {
    if s.re <= 1 {
        return Err(Error::NotAbsolutelyConvergent(s.re.to_string()));
    }
    Ok(())
}

fn check_open_unit(q: &Rational) -> Result<()> {
    if *q <= 0 || *q >= 1 {
        return Err(Error::GridOutOfRange(q.to_string()));
    }
    Ok(())
}

fn scale(g: &GaussianRational, c: &Rational) -> GaussianRational {
    GaussianRational::new(Rational::from(&g.re * c), Rational::from(&g.im * c))
}

fn times_weight(z: Complex, chi: &GaussianRational, prec: u32) -> Complex {
    if chi.is_real() {
        z * eval::rational_to_float(&chi.re, prec)
    } else {
        z * chi.to_complex(prec)
    }
}

/// `chi(r) [r]_q^{-s}` for `0 < q <= 1`.
pub fn alpha_zeta(fam: &AlphaFamily, r: u64, q: &Rational, ctx: &PrecisionContext) -> Result<Complex> {
    if *q <= 0 || *q > 1 {
        return Err(Error::GridOutOfRange(q.to_string()));
    }
    let chi = fam.weight.evaluate(r)?;
    let qi = q_integer(r, q)?;
    if let Some(k) = integer_exponent(&fam.s) {
        let v = scale(&chi, &qi.pow(k).recip());
        return Ok(v.to_complex(ctx.precision_bits()));
    }
    let wp = ctx.working_bits();
    let p = eval::rational_inv_power(&qi, &s_complex(&fam.s, wp), wp);
    Ok(ctx.finish(&times_weight(p, &chi, wp)))
}

/// Exact `beta_n(s, q)` when `s` is a nonnegative integer.
pub fn beta_n_exact(fam: &AlphaFamily, n: usize, q: &Rational) -> Result<Option<GaussianRational>> {
    check_open_unit(q)?;
    let Some(k) = integer_exponent(&fam.s) else { return Ok(None) };
    let qf = q_factorials_at(q, 2 * n);
    let mut acc = GaussianRational::default();
    let mut qr = Rational::from(1);
    for r in 1..=n {
        qr *= q;
        let chi = fam.weight.evaluate(r as u64)?;
        if chi.is_zero() {
            continue;
        }
        let qi = q_integer(r as u64, q)?;
        let denom = qi.pow(k) * &qf[n - r] * &qf[n + r];
        acc = acc.add(&scale(&chi, &(Rational::from(&qr / &denom))));
    }
    Ok(Some(acc))
}

fn beta_n_working(fam: &AlphaFamily, n: usize, q: &Rational, ctx: &PrecisionContext) -> Result<Complex> {
    let wp = ctx.working_bits();
    if let Some(exact) = beta_n_exact(fam, n, q)? {
        return Ok(exact.to_complex(wp));
    }
    let qf = q_factorials_at(q, 2 * n);
    let s = s_complex(&fam.s, wp);
    let mut terms = Vec::with_capacity(n);
    let mut qr = Rational::from(1);
    for r in 1..=n {
        qr *= q;
        let chi = fam.weight.evaluate(r as u64)?;
        if chi.is_zero() {
            continue;
        }
        let coeff = Rational::from(&qr / &qf[n - r]) / &qf[n + r];
        let qi = q_integer(r as u64, q)?;
        let p = eval::rational_inv_power(&qi, &s, wp) * eval::rational_to_float(&coeff, wp);
        terms.push(times_weight(p, &chi, wp));
    }
    Ok(ctx.sum(&terms))
}

/// `beta_n(s,q) = sum_{r=1}^n q^r alpha_r(s,q) / ((q;q)_{n-r} (q;q)_{n+r})`.
pub fn beta_n(fam: &AlphaFamily, n: usize, q: &Rational, ctx: &PrecisionContext) -> Result<Complex> {
    if n == 0 {
        return Err(Error::InvalidParameter("beta_n needs n >= 1".into()));
    }
    Ok(ctx.finish(&beta_n_working(fam, n, q, ctx)?))
}

/// `(2n)! (1-q)^{2n} / 4^n`, exact.
fn t_scale(n: usize, q: &Rational) -> Rational {
    let f = BigCombinatorics::global().factorial(2 * n);
    let one_minus = Rational::from(1 - q);
    let mut k = Rational::from(f) * one_minus.pow(2 * n as u32);
    k >>= 2 * n as u32;
    k
}

/// `T_n = sqrt(n) (2n)! (1-q)^{2n} beta_n / 4^n`.
pub fn t_n(fam: &AlphaFamily, n: usize, q: &Rational, ctx: &PrecisionContext) -> Result<Complex> {
    if n == 0 {
        return Err(Error::InvalidParameter("T_n needs n >= 1".into()));
    }
    let wp = ctx.working_bits();
    let k = t_scale(n, q);
    let sqrt_n = Float::with_val(wp, n).sqrt();
    let v = match beta_n_exact(fam, n, q)? {
        Some(exact) => scale(&exact, &k).to_complex(wp) * sqrt_n,
        None => beta_n_working(fam, n, q, ctx)? * eval::rational_to_float(&k, wp) * sqrt_n,
    };
    Ok(ctx.finish(&v))
}

/// `L_n = sum_{r=1}^n chi(r) / ((n-r)! (n+r)! r^s)`, exact when `s` is an integer.
pub fn inner_limit_exact_value(chi: &ArithmeticWeight, s: &GaussianRational, n: usize) -> Result<Option<GaussianRational>> {
    let Some(k) = integer_exponent(s) else { return Ok(None) };
    let comb = BigCombinatorics::global();
    let mut acc = GaussianRational::default();
    for r in 1..=n {
        let c = chi.evaluate(r as u64)?;
        if c.is_zero() {
            continue;
        }
        let denom = comb.factorial(n - r) * comb.factorial(n + r) * Integer::from(r).pow(k);
        acc = acc.add(&scale(&c, &Rational::from((Integer::from(1), denom))));
    }
    Ok(Some(acc))
}

pub(crate) fn inner_limit_working(chi: &ArithmeticWeight, s: &GaussianRational, n: usize, ctx: &PrecisionContext) -> Result<Complex> {
    let wp = ctx.working_bits();
    let comb = BigCombinatorics::global();
    let sc = s_complex(s, wp);
    let mut terms = Vec::with_capacity(n);
    for r in 1..=n {
        let c = chi.evaluate(r as u64)?;
        if c.is_zero() {
            continue;
        }
        let fact = Float::with_val(wp, comb.factorial(n - r) * comb.factorial(n + r)).recip();
        let p = eval::inv_power(r as u64, &sc, wp) * fact;
        terms.push(times_weight(p, &c, wp));
    }
    Ok(ctx.sum(&terms))
}

/// `L_n^chi(s)`, the `q -> 1` limit of `(1-q)^{2n} beta_n(s, q)`.
pub fn inner_limit_exact(chi: &ArithmeticWeight, s: &GaussianRational, n: usize, ctx: &PrecisionContext) -> Result<Complex> {
    if n == 0 {
        return Err(Error::InvalidParameter("L_n needs n >= 1".into()));
    }
    match inner_limit_exact_value(chi, s, n)? {
        Some(v) => Ok(v.to_complex(ctx.precision_bits())),
        None => Ok(ctx.finish(&inner_limit_working(chi, s, n, ctx)?)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InnerLimitRow {
    pub q: Rational,
    /// `(1-q)^{2n} beta_n(s, q)`
    pub scaled: Complex,
    pub deviation: Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InnerLimitTable {
    pub n: usize,
    pub exact: Complex,
    pub rows: Vec<InnerLimitRow>,
}

impl InnerLimitTable {
    /// Whether deviations strictly decrease over the last `k` grid points.
    pub fn tail_decreasing(&self, k: usize) -> bool {
        let start = self.rows.len().saturating_sub(k);
        self.rows[start..].windows(2).all(|w| w[1].deviation < w[0].deviation)
    }
}

/// Compares `(1-q)^{2n} beta_n` along a grid with the exact inner limit.
/// Exact in rationals for integer `s`; otherwise at working precision.
pub fn inner_limit_numeric(fam: &AlphaFamily, n: usize, q_grid: &[Rational], ctx: &PrecisionContext) -> Result<InnerLimitTable> {
    if q_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let prec = ctx.precision_bits();
    let wp = ctx.working_bits();
    let exact_l = inner_limit_exact_value(&fam.weight, &fam.s, n)?;
    let l_working = match &exact_l {
        Some(v) => v.to_complex(wp),
        None => inner_limit_working(&fam.weight, &fam.s, n, ctx)?,
    };
    let mut rows = Vec::with_capacity(q_grid.len());
    for q in q_grid {
        check_open_unit(q)?;
        let factor = Rational::from(1 - q).pow(2 * n as u32);
        let (scaled, deviation) = match (beta_n_exact(fam, n, q)?, &exact_l) {
            (Some(b), Some(l)) => {
                let v = scale(&b, &factor);
                let d = GaussianRational::new(Rational::from(&v.re - &l.re), Rational::from(&v.im - &l.im));
                let dev = eval::rational_to_float(&d.norm_squared(), wp).sqrt();
                (v.to_complex(prec), Float::with_val(prec, dev))
            }
            _ => {
                let v = beta_n_working(fam, n, q, ctx)? * eval::rational_to_float(&factor, wp);
                let dev = Complex::with_val(wp, &v - &l_working).abs().real().clone();
                (ctx.finish(&v), ctx.finish_real(&dev))
            }
        };
        rows.push(InnerLimitRow { q: q.clone(), scaled, deviation });
    }
    Ok(InnerLimitTable { n, exact: ctx.finish(&l_working), rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub q: Rational,
    /// `max_r |alpha_r(s,q)| r^sigma / C` over `r <= r_max`
    pub max_ratio: Float,
    pub argmax_r: u64,
}

/// Sampled check of `|alpha_r(s,q)| <= C r^{-sigma}`. Reported, never enforced.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundDiagnostic {
    pub sigma: Rational,
    pub constant: Rational,
    pub rows: Vec<BoundRow>,
    pub max_ratio: Float,
}

impl BoundDiagnostic {
    pub fn holds_on_sample(&self) -> bool {
        self.max_ratio <= 1
    }
}

pub fn hypothesis_bound_diagnostic(
    fam: &AlphaFamily,
    sigma: &Rational,
    constant: &Rational,
    r_max: u64,
    q_grid: &[Rational],
    ctx: &PrecisionContext,
) -> Result<BoundDiagnostic> {
    if *sigma <= 0 || *constant <= 0 {
        return Err(Error::InvalidParameter("sigma and C must be positive".into()));
    }
    if q_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let wp = ctx.working_bits();
    let sigma_f = eval::rational_to_float(sigma, wp);
    let c_f = eval::rational_to_float(constant, wp);
    let mut rows = Vec::with_capacity(q_grid.len());
    let mut overall = Float::new(wp);
    for q in q_grid {
        let mut best = Float::new(wp);
        let mut argmax = 1;
        for r in 1..=r_max {
            let a = alpha_zeta(fam, r, q, ctx)?;
            let mag = Float::with_val(wp, a.abs().real());
            let ratio = mag * Float::with_val(wp, r).pow(&sigma_f) / &c_f;
            if ratio > best {
                best = ratio;
                argmax = r;
            }
        }
        if best > overall {
            overall = best.clone();
        }
        rows.push(BoundRow { q: q.clone(), max_ratio: ctx.finish_real(&best), argmax_r: argmax });
    }
    Ok(BoundDiagnostic { sigma: sigma.clone(), constant: constant.clone(), rows, max_ratio: ctx.finish_real(&overall) })
}
