//! Extrapolation of `a_n` to `n -> infinity` in the variable `h = n^{-1/2}`.

use std::fmt;
use std::str::FromStr;

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Extrapolation {
    /// Neville interpolation in `h` evaluated at `h = 0`.
    Polynomial { order: usize },
    /// Least-order fit with the exponents of the asymptotic expansion of
    /// `a_n`: `h^{s-1+2k}` (when the weight has nonzero mean) and `h^{2k}`,
    /// with `log h` companions where two exponents coincide.
    Asymptotic { terms: usize },
    /// Last approximant as is.
    None,
}

impl Default for Extrapolation {
    fn default() -> Self {
        Extrapolation::Polynomial { order: 6 }
    }
}

impl Extrapolation {
    pub fn points_needed(&self) -> usize {
        match *self {
            Extrapolation::Polynomial { order } => order + 1,
            Extrapolation::Asymptotic { terms } => terms + 1,
            Extrapolation::None => 1,
        }
    }

    /// The same method with its order reduced to fit `points` samples.
    pub fn clamped(&self, points: usize) -> Extrapolation {
        let top = points.saturating_sub(1);
        match *self {
            Extrapolation::Polynomial { order } => Extrapolation::Polynomial { order: order.min(top) },
            Extrapolation::Asymptotic { terms } => Extrapolation::Asymptotic { terms: terms.min(top) },
            Extrapolation::None => Extrapolation::None,
        }
    }

    fn with_order(&self, k: usize) -> Extrapolation {
        match *self {
            Extrapolation::Polynomial { .. } => Extrapolation::Polynomial { order: k },
            Extrapolation::Asymptotic { .. } => Extrapolation::Asymptotic { terms: k },
            Extrapolation::None => Extrapolation::None,
        }
    }

    fn order(&self) -> usize {
        self.points_needed() - 1
    }
}

impl fmt::Display for Extrapolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extrapolation::Polynomial { order } => write!(f, "polynomial-h:{order}"),
            Extrapolation::Asymptotic { terms } => write!(f, "asymptotic-h:{terms}"),
            Extrapolation::None => f.write_str("none"),
        }
    }
}

impl FromStr for Extrapolation {
    type Err = Error;

    /// `polynomial[:k]`, `asymptotic[:k]` or `none`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let k = |default: usize| -> Result<usize> {
            arg.map_or(Ok(default), |a| {
                a.parse().map_err(|_| Error::InvalidParameter(format!("bad extrapolation order `{a}`")))
            })
        };
        match name {
            "polynomial" | "polynomial-h" => Ok(Extrapolation::Polynomial { order: k(6)? }),
            "asymptotic" | "asymptotic-h" => Ok(Extrapolation::Asymptotic { terms: k(6)? }),
            "none" if arg.is_none() => Ok(Extrapolation::None),
            _ => Err(Error::InvalidParameter(format!("unknown extrapolation `{s}`"))),
        }
    }
}

/// What is known about the expansion of `a_n` in `h`.
#[derive(Clone, Debug)]
pub struct AsymptoticModel {
    /// `s - 1`, the exponent of the leading non-even family.
    pub shift: Complex,
    /// Whether the `h^{s-1+2k}` family is present (weight with nonzero mean).
    pub has_shift_family: bool,
}

/// `(exponent, log power)` pairs ordered by real part of the exponent.
fn basis(model: &AsymptoticModel, count: usize, prec: u32) -> Vec<(Complex, u32)> {
    let mut exps: Vec<Complex> = Vec::new();
    for k in 1..=count {
        exps.push(Complex::with_val(prec, (2 * k as u32, 0)));
    }
    if model.has_shift_family {
        for k in 0..count {
            exps.push(Complex::with_val(prec, &model.shift + 2 * k as u32));
        }
    }
    exps.sort_by(|a, b| a.real().partial_cmp(b.real()).unwrap().then(a.imag().partial_cmp(b.imag()).unwrap()));
    let mut out: Vec<(Complex, u32)> = Vec::new();
    for e in exps {
        let repeats = out.iter().filter(|(x, _)| *x == e).count() as u32;
        out.push((e, repeats));
        if out.len() == count {
            break;
        }
    }
    out
}

fn h_of(n: u64, prec: u32) -> Float {
    Float::with_val(prec, n).sqrt().recip()
}

/// Value at `h = 0` of the polynomial of degree `ys.len() - 1` through
/// `(h_i, y_i)`, plus the degree-one-lower estimate from the last points.
fn neville(hs: &[Float], ys: &[Complex], prec: u32) -> (Complex, Option<Complex>) {
    let m = ys.len() - 1;
    let mut p: Vec<Complex> = ys.iter().map(|y| Complex::with_val(prec, y)).collect();
    let mut previous = None;
    for k in 1..=m {
        if k == m {
            previous = Some(p[1].clone());
        }
        for i in 0..=m - k {
            let num = Complex::with_val(prec, &p[i + 1] * &hs[i]) - Complex::with_val(prec, &p[i] * &hs[i + k]);
            p[i] = num / Float::with_val(prec, &hs[i] - &hs[i + k]);
        }
    }
    if m == 0 {
        previous = None;
    }
    (p.swap_remove(0), previous)
}

fn solve(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>, prec: u32) -> Result<Vec<Complex>> {
    let m = b.len();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| {
                let x = Float::with_val(prec, a[i][col].abs_ref());
                let y = Float::with_val(prec, a[j][col].abs_ref());
                x.partial_cmp(&y).unwrap().then(j.cmp(&i))
            })
            .unwrap();
        if a[pivot][col].is_zero() {
            return Err(Error::SingularExtrapolation);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..m {
            let f = Complex::with_val(prec, &a[row][col] / &a[col][col]);
            for k in col..m {
                let d = Complex::with_val(prec, &f * &a[col][k]);
                a[row][k] -= d;
            }
            let d = Complex::with_val(prec, &f * &b[col]);
            b[row] -= d;
        }
    }
    let mut x = vec![Complex::new(prec); m];
    for row in (0..m).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..m {
            acc -= Complex::with_val(prec, &a[row][k] * &x[k]);
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

fn asymptotic_fit(ns: &[u64], ys: &[Complex], model: &AsymptoticModel, prec: u32) -> Result<Complex> {
    let terms = ys.len() - 1;
    let funcs = basis(model, terms, prec);
    let mut a = Vec::with_capacity(ys.len());
    for &n in ns {
        let log_h = Float::with_val(prec, n).ln() / -2i32;
        let mut row = vec![Complex::with_val(prec, (1, 0))];
        for (e, logs) in &funcs {
            let mut v = Complex::with_val(prec, e * &log_h).exp();
            for _ in 0..*logs {
                v *= &log_h;
            }
            row.push(v);
        }
        a.push(row);
    }
    Ok(solve(a, ys.to_vec(), prec)?.swap_remove(0))
}

/// Extrapolated value and `|last column - previous column|`, using the
/// trailing `method.points_needed()` samples.
pub fn extrapolate(
    method: &Extrapolation,
    ns: &[u64],
    ys: &[Complex],
    model: &AsymptoticModel,
    prec: u32,
) -> Result<(Complex, Float)> {
    let needed = method.points_needed();
    if ns.len() != ys.len() || ys.len() < needed {
        return Err(Error::ScheduleTooShort { len: ys.len(), needed });
    }
    let start = ys.len() - needed;
    let (ns, ys) = (&ns[start..], &ys[start..]);
    let (value, previous) = match method {
        Extrapolation::None => (ys[0].clone(), None),
        Extrapolation::Polynomial { .. } => {
            let hs: Vec<Float> = ns.iter().map(|&n| h_of(n, prec)).collect();
            neville(&hs, ys, prec)
        }
        Extrapolation::Asymptotic { terms } => {
            let v = asymptotic_fit(ns, ys, model, prec)?;
            let prev = if *terms > 0 { Some(asymptotic_fit(&ns[1..], &ys[1..], model, prec)?) } else { None };
            (v, prev)
        }
    };
    let err = match previous {
        Some(p) => Complex::with_val(prec, &value - &p).abs().real().clone(),
        None => Float::new(prec),
    };
    Ok((value, err))
}

/// Estimates after each sample: the extrapolation over the samples so far,
/// at the configured order or the largest the samples allow.
pub fn running_estimates(
    method: &Extrapolation,
    ns: &[u64],
    ys: &[Complex],
    model: &AsymptoticModel,
    prec: u32,
) -> Result<Vec<Complex>> {
    (1..=ys.len())
        .map(|k| {
            let m = method.with_order(method.order().min(k - 1));
            extrapolate(&m, &ns[..k], &ys[..k], model, prec).map(|(v, _)| v)
        })
        .collect()
}

/// Neville in `x` at `x = 0` over all points, with the error estimate
/// against the degree-one-lower fit through the trailing points.
pub fn polynomial_at_zero(xs: &[Float], ys: &[Complex], prec: u32) -> Result<(Complex, Float)> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::ScheduleTooShort { len: ys.len(), needed: 1 });
    }
    let (value, previous) = neville(xs, ys, prec);
    let err = match previous {
        Some(p) => Complex::with_val(prec, &value - &p).abs().real().clone(),
        None => Float::new(prec),
    };
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn model(shift: f64, present: bool) -> AsymptoticModel {
        AsymptoticModel { shift: Complex::with_val(P, (shift, 0)), has_shift_family: present }
    }

    fn sample(ns: &[u64], f: impl Fn(&Float) -> Float) -> Vec<Complex> {
        ns.iter().map(|&n| Complex::with_val(P, (f(&h_of(n, P)), 0))).collect()
    }

    #[test]
    fn polynomial_is_exact_on_polynomials() {
        let ns: Vec<u64> = (0..5).map(|k| 16 << k).collect();
        let ys = sample(&ns, |h| Float::with_val(P, 3) + Float::with_val(P, h * 2u32) - Float::with_val(P, h.square_ref()) * 5u32);
        let (v, err) = extrapolate(&Extrapolation::Polynomial { order: 4 }, &ns, &ys, &model(1.0, true), P).unwrap();
        let d = Complex::with_val(P, &v - 3).abs().real().clone();
        assert!(d < 1e-60, "{d}");
        assert!(err < 1e-60);
    }

    #[test]
    fn asymptotic_removes_fractional_power() {
        // y = 1 + h^{1/2} + h^2: a polynomial in h cannot remove h^{1/2}
        let ns: Vec<u64> = (0..5).map(|k| 64 << k).collect();
        let ys = sample(&ns, |h| Float::with_val(P, 1) + Float::with_val(P, h.sqrt_ref()) + Float::with_val(P, h.square_ref()));
        let (v, _) = extrapolate(&Extrapolation::Asymptotic { terms: 2 }, &ns, &ys, &model(0.5, true), P).unwrap();
        assert!(Complex::with_val(P, &v - 1).abs().real().clone() < 1e-50);
        let (p, _) = extrapolate(&Extrapolation::Polynomial { order: 4 }, &ns, &ys, &model(0.5, true), P).unwrap();
        assert!(Complex::with_val(P, &p - 1).abs().real().clone() > 1e-4);
    }

    #[test]
    fn colliding_exponents_get_log_terms() {
        let b = basis(&model(2.0, true), 4, P);
        let logs: Vec<u32> = b.iter().map(|(_, l)| *l).collect();
        assert_eq!(logs, vec![0, 1, 0, 1]);
        let b = basis(&model(1.0, false), 3, P);
        assert!(b.iter().all(|(e, l)| *l == 0 && e.real().is_integer()));
    }

    #[test]
    fn schedule_too_short() {
        let ns = [64, 128];
        let ys = sample(&ns, |h| h.clone());
        assert_eq!(
            extrapolate(&Extrapolation::Polynomial { order: 6 }, &ns, &ys, &model(1.0, true), P).unwrap_err(),
            Error::ScheduleTooShort { len: 2, needed: 7 }
        );
    }

    #[test]
    fn parse_and_display() {
        for m in [Extrapolation::Polynomial { order: 4 }, Extrapolation::Asymptotic { terms: 6 }, Extrapolation::None] {
            assert_eq!(m.to_string().parse::<Extrapolation>().unwrap(), m);
        }
        assert_eq!("polynomial".parse::<Extrapolation>().unwrap(), Extrapolation::default());
        assert!("cubic".parse::<Extrapolation>().is_err());
    }
}
