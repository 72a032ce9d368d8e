use rug::{Complex, Float, Rational};

use super::extrapolate::{polynomial_at_zero, Extrapolation};
use super::outer::{outer_limit, sqrt_pi, ConvergenceReport};
use crate::error::{Error, Result};
use crate::qcore::{eval, PrecisionContext};
use crate::weights::{ArithmeticWeight, GaussianRational};

/// Default extrapolation for the `s = 1 + delta` runs: the `h^delta` term
/// of the trivial weight is not a polynomial in `h`.
pub const REGULARIZATION_ACCEL: Extrapolation = Extrapolation::Asymptotic { terms: 6 };

pub fn default_delta_grid() -> Vec<Rational> {
    (1..=4).map(|k| Rational::from((1, 1u32 << k))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularizationReport {
    pub delta_grid: Vec<Rational>,
    /// Outer-limit estimates of `zeta(1 + delta)/sqrt(pi)`.
    pub raw: Vec<Complex>,
    /// `raw - 1/(sqrt(pi) delta)`
    pub subtracted: Vec<Complex>,
    pub extrapolated_gamma_over_sqrt_pi: Complex,
    /// `|full-degree fit - one degree lower|` in `delta`
    pub err_est: Float,
    pub runs: Vec<ConvergenceReport>,
}

impl RegularizationReport {
    pub fn gamma(&self) -> Complex {
        let prec = self.extrapolated_gamma_over_sqrt_pi.prec().0;
        let wp = prec + PrecisionContext::GUARD_BITS;
        Complex::with_val(prec, Complex::with_val(wp, &self.extrapolated_gamma_over_sqrt_pi) * sqrt_pi(wp))
    }
}

/// Runs the outer limit at `s = 1 + delta` for each `delta`, removes the
/// pole `1/(sqrt(pi) delta)` and extrapolates the remainder to `delta = 0`.
pub fn euler_mascheroni_regularized(
    delta_grid: &[Rational],
    schedule: &[u64],
    accel: &Extrapolation,
    ctx: &PrecisionContext,
) -> Result<RegularizationReport> {
    if delta_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if delta_grid.iter().any(|d| *d <= 0) || delta_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("delta grid must be positive and strictly decreasing".into()));
    }
    let wp = ctx.working_bits();
    let trivial = ArithmeticWeight::trivial();
    let root_pi = sqrt_pi(wp);
    let mut raw = Vec::new();
    let mut subtracted = Vec::new();
    let mut runs = Vec::new();
    for delta in delta_grid {
        let s = GaussianRational::new(Rational::from(1 + delta), 0);
        let run = outer_limit(&trivial, &s, schedule, accel, ctx)
            .map_err(|e| Error::Regularization { delta: delta.to_string(), source: Box::new(e) })?;
        let pole = Float::with_val(wp, &root_pi * eval::rational_to_float(delta, wp)).recip();
        let sub = Complex::with_val(wp, &run.extrapolated) - pole;
        raw.push(run.extrapolated.clone());
        subtracted.push(sub);
        runs.push(run);
    }
    let xs: Vec<Float> = delta_grid.iter().map(|d| eval::rational_to_float(d, wp)).collect();
    let (value, err) = polynomial_at_zero(&xs, &subtracted, wp)?;
    Ok(RegularizationReport {
        delta_grid: delta_grid.to_vec(),
        raw,
        subtracted: subtracted.iter().map(|z| ctx.finish(z)).collect(),
        extrapolated_gamma_over_sqrt_pi: ctx.finish(&value),
        err_est: ctx.finish_real(&err),
        runs,
    })
}
