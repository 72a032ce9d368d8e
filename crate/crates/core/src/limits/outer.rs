use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rug::{Complex, Float};

use super::extrapolate::{extrapolate, running_estimates, AsymptoticModel, Extrapolation};
use super::family::{inner_limit_working, require_convergent, s_complex};
use crate::error::{Error, Result};
use crate::qcore::{central_binomial_row, eval, BigCombinatorics, PrecisionContext};
use crate::weights::{ArithmeticWeight, GaussianRational};

/// `sqrt(n) 2^{-2n}` applied to a working-precision sum.
fn window_scale(mut z: Complex, n: u64, wp: u32) -> Complex {
    z *= Float::with_val(wp, n).sqrt();
    z >> (2 * n as u32)
}

fn a_n_working(chi: &ArithmeticWeight, s: &GaussianRational, n: u64, ctx: &PrecisionContext) -> Result<Complex> {
    let wp = ctx.working_bits();
    let sc = s_complex(s, wp);
    let row = central_binomial_row(n);
    let terms: Vec<Complex> = (1..=n)
        .into_par_iter()
        .filter_map(|r| {
            let c = chi.evaluate(r).expect("r >= 1");
            if c.is_zero() {
                return None;
            }
            let p = eval::inv_power(r, &sc, wp) * Float::with_val(wp, &row[r as usize]);
            Some(if c.is_real() { p * eval::rational_to_float(&c.re, wp) } else { p * c.to_complex(wp) })
        })
        .collect();
    Ok(window_scale(ctx.sum(&terms), n, wp))
}

/// `a_n = (sqrt(n)/4^n) sum_{r=1}^n C(2n, n+r) chi(r) / r^s`, binomials exact.
pub fn a_n(chi: &ArithmeticWeight, s: &GaussianRational, n: u64, ctx: &PrecisionContext) -> Result<Complex> {
    require_convergent(s)?;
    if n == 0 {
        return Err(Error::InvalidParameter("a_n needs n >= 1".into()));
    }
    Ok(ctx.finish(&a_n_working(chi, s, n, ctx)?))
}

/// The same quantity through `sqrt(n) (2n)! L_n / 4^n`, with `L_n` summed
/// from reciprocal factorials. Independent rounding path for cross-checks.
pub fn a_n_via_inner_limit(chi: &ArithmeticWeight, s: &GaussianRational, n: u64, ctx: &PrecisionContext) -> Result<Complex> {
    require_convergent(s)?;
    if n == 0 {
        return Err(Error::InvalidParameter("a_n needs n >= 1".into()));
    }
    let wp = ctx.working_bits();
    let l = inner_limit_working(chi, s, n as usize, ctx)?;
    let fact = Float::with_val(wp, BigCombinatorics::global().factorial(2 * n as usize));
    Ok(ctx.finish(&window_scale(l * fact, n, wp)))
}

/// `sqrt(n) C(2n, n+r) / 4^n`, which tends to `1/sqrt(pi)` for fixed `r`.
pub fn binomial_window_ratio(n: u64, r: i64, ctx: &PrecisionContext) -> Float {
    let wp = ctx.working_bits();
    let c = BigCombinatorics::global().binomial(2 * n, n as i64 + r);
    let z = window_scale(Complex::with_val(wp, (Float::with_val(wp, c), 0)), n, wp);
    ctx.finish_real(z.real())
}

/// `n0, n0 f, n0 f^2, ...` (`count` points).
pub fn geometric_schedule(n0: u64, factor: u64, count: usize) -> Result<Vec<u64>> {
    if n0 == 0 || count == 0 || (factor < 2 && count > 1) {
        return Err(Error::InvalidSchedule);
    }
    let mut out = Vec::with_capacity(count);
    let mut n = n0;
    for k in 0..count {
        if k > 0 {
            n = n.checked_mul(factor).ok_or(Error::InvalidSchedule)?;
        }
        out.push(n);
    }
    Ok(out)
}

pub fn validate_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSchedule);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub n: u64,
    pub value: Complex,
    /// Change of the running extrapolation caused by this record
    /// (the first record carries `|a_{n0}|`).
    pub err_est: Float,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub weight: String,
    pub s: GaussianRational,
    pub precision_bits: u32,
    pub records: Vec<Record>,
    pub extrapolated: Complex,
    /// `|last extrapolation column - previous column|`
    pub err_est: Float,
    pub method: Extrapolation,
    pub target_hint: Option<Complex>,
}

impl ConvergenceReport {
    /// Zeroes wall-clock fields so that reports compare byte for byte.
    pub fn without_timings(mut self) -> Self {
        for r in &mut self.records {
            r.elapsed = Duration::ZERO;
        }
        self
    }

    /// The unscaled value `sqrt(pi) * extrapolated`.
    pub fn unscaled(&self) -> Complex {
        let wp = self.precision_bits + PrecisionContext::GUARD_BITS;
        let v = Complex::with_val(wp, &self.extrapolated) * sqrt_pi(wp);
        Complex::with_val(self.precision_bits, v)
    }
}

pub fn sqrt_pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi).sqrt()
}

pub(crate) fn model_for(chi: &ArithmeticWeight, s: &GaussianRational, prec: u32) -> AsymptoticModel {
    AsymptoticModel {
        shift: Complex::with_val(prec, s_complex(s, prec) - 1u32),
        has_shift_family: !chi.mean().is_zero(),
    }
}

struct Job<'a> {
    chi: &'a ArithmeticWeight,
    s: &'a GaussianRational,
    schedule: &'a [u64],
    accel: Extrapolation,
    ctx: &'a PrecisionContext,
}

impl Job<'_> {
    fn check(&self) -> Result<()> {
        require_convergent(self.s)?;
        validate_schedule(self.schedule)?;
        let needed = self.accel.points_needed();
        if self.schedule.len() < needed {
            return Err(Error::ScheduleTooShort { len: self.schedule.len(), needed });
        }
        Ok(())
    }

    fn point(&self, n: u64) -> Result<(Complex, Duration)> {
        let t = Instant::now();
        let v = a_n(self.chi, self.s, n, self.ctx)?;
        Ok((v, t.elapsed()))
    }

    fn assemble(&self, values: Vec<(Complex, Duration)>) -> Result<ConvergenceReport> {
        let prec = self.ctx.precision_bits();
        let wp = self.ctx.working_bits();
        let model = model_for(self.chi, self.s, wp);
        let ns = &self.schedule[..values.len()];
        let ys: Vec<Complex> = values.iter().map(|(v, _)| Complex::with_val(wp, v)).collect();
        let (extrapolated, err) = extrapolate(&self.accel, ns, &ys, &model, wp)?;
        let running = running_estimates(&self.accel, ns, &ys, &model, wp)?;
        let records = values
            .into_iter()
            .enumerate()
            .map(|(k, (value, elapsed))| {
                let err_est = if k == 0 {
                    Float::with_val(prec, value.abs_ref())
                } else {
                    Float::with_val(prec, Complex::with_val(wp, &running[k] - &running[k - 1]).abs().real())
                };
                Record { n: ns[k], value, err_est, elapsed }
            })
            .collect();
        Ok(ConvergenceReport {
            weight: self.chi.to_string(),
            s: self.s.clone(),
            precision_bits: prec,
            records,
            extrapolated: self.ctx.finish(&extrapolated),
            err_est: self.ctx.finish_real(&err),
            method: self.accel,
            target_hint: None,
        })
    }
}

/// Computes `a_n` over the schedule (points in parallel, each sum in its
/// fixed order) and extrapolates to `L(s, chi)/sqrt(pi)`.
pub fn outer_limit(
    chi: &ArithmeticWeight,
    s: &GaussianRational,
    schedule: &[u64],
    accel: &Extrapolation,
    ctx: &PrecisionContext,
) -> Result<ConvergenceReport> {
    let job = Job { chi, s, schedule, accel: *accel, ctx };
    job.check()?;
    let values = schedule.par_iter().map(|&n| job.point(n)).collect::<Result<Vec<_>>>()?;
    job.assemble(values)
}

/// One streamed row: the record with its running error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct StreamedRecord {
    pub record: Record,
    pub running_estimate: Complex,
}

/// Like [`outer_limit`] but point by point in schedule order, handing each
/// record to `observe` as soon as it exists. Returns `None` when `observe`
/// breaks off.
pub fn outer_limit_streaming(
    chi: &ArithmeticWeight,
    s: &GaussianRational,
    schedule: &[u64],
    accel: &Extrapolation,
    ctx: &PrecisionContext,
    mut observe: impl FnMut(&StreamedRecord) -> ControlFlow<()>,
) -> Result<Option<ConvergenceReport>> {
    let job = Job { chi, s, schedule, accel: *accel, ctx };
    job.check()?;
    let wp = ctx.working_bits();
    let model = model_for(chi, s, wp);
    let mut values = Vec::with_capacity(schedule.len());
    let mut previous: Option<Complex> = None;
    for (k, &n) in schedule.iter().enumerate() {
        let (value, elapsed) = job.point(n)?;
        values.push((value.clone(), elapsed));
        let ns = &schedule[..=k];
        let ys: Vec<Complex> = values.iter().map(|(v, _)| Complex::with_val(wp, v)).collect();
        let m = accel.clamped(k + 1);
        let (estimate, _) = extrapolate(&m, ns, &ys, &model, wp)?;
        let err_est = match &previous {
            None => Float::with_val(ctx.precision_bits(), value.abs_ref()),
            Some(p) => Float::with_val(ctx.precision_bits(), Complex::with_val(wp, &estimate - p).abs().real()),
        };
        previous = Some(estimate.clone());
        let row = StreamedRecord {
            record: Record { n, value, err_est, elapsed },
            running_estimate: ctx.finish(&estimate),
        };
        if observe(&row).is_break() {
            return Ok(None);
        }
    }
    job.assemble(values).map(Some)
}
