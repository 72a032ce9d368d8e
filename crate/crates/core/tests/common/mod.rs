//! High-precision reference values computed from textbook series, sharing
//! no code with the library.

#![allow(dead_code)]

use rug::ops::Pow;
use rug::{Float, Integer};

const GUARD: u32 = 32;

/// `arctan(1/x)` by its Taylor series.
fn arccot(x: u32, prec: u32) -> Float {
    let wp = prec + GUARD;
    let x2 = Float::with_val(wp, x) * x;
    let mut power = Float::with_val(wp, x).recip();
    let mut sum = power.clone();
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let mut k = 1u32;
    loop {
        power /= &x2;
        let term = Float::with_val(wp, &power / (2 * k + 1));
        if term < eps {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// Machin: `pi = 16 arctan(1/5) - 4 arctan(1/239)`.
pub fn pi(prec: u32) -> Float {
    let v = arccot(5, prec) * 16u32 - arccot(239, prec) * 4u32;
    Float::with_val(prec, v)
}

pub fn sqrt_pi(prec: u32) -> Float {
    Float::with_val(prec, pi(prec + GUARD).sqrt())
}

/// Alternating sum `sum_{k>=0} (-1)^k a_k` with the Cohen-Rodriguez
/// Villegas-Zagier weights; error about `5.83^{-terms}`.
pub fn alternating_sum(a: impl Fn(u32, u32) -> Float, terms: u32, prec: u32) -> Float {
    let wp = prec + GUARD;
    let n = terms;
    let d0 = Float::with_val(wp, Float::with_val(wp, 8).sqrt() + 3u32).pow(n);
    let d = Float::with_val(wp, &d0 + Float::with_val(wp, d0.recip_ref())) / 2u32;
    let mut b = Float::with_val(wp, -1);
    let mut c = Float::with_val(wp, -&d);
    let mut s = Float::new(wp);
    for k in 0..n {
        c = Float::with_val(wp, &b - &c);
        s += Float::with_val(wp, &c * a(k, wp));
        let (k, nn) = (i64::from(k), i64::from(n));
        b *= (k + nn) * (k - nn);
        b /= Float::with_val(wp, k) + 0.5;
        b /= k + 1;
    }
    Float::with_val(prec, s / d)
}

fn cvz_terms(prec: u32) -> u32 {
    prec * 2 / 5 + 10
}

/// Catalan `G = sum (-1)^k / (2k+1)^2`.
pub fn catalan(prec: u32) -> Float {
    alternating_sum(|k, wp| Float::with_val(wp, 2 * k + 1).square().recip(), cvz_terms(prec), prec)
}

/// Dirichlet `beta(4) = sum (-1)^k / (2k+1)^4`.
pub fn dirichlet_beta4(prec: u32) -> Float {
    alternating_sum(|k, wp| Float::with_val(wp, 2 * k + 1).pow(4u32).recip(), cvz_terms(prec), prec)
}

/// Apery: `zeta(3) = 5/2 sum_{k>=1} (-1)^{k+1} / (k^3 C(2k, k))`.
pub fn zeta3(prec: u32) -> Float {
    let wp = prec + GUARD;
    let mut sum = Float::new(wp);
    let mut central = Integer::from(1);
    for k in 1u32.. {
        // C(2k, k) = C(2k-2, k-1) * (2k)(2k-1) / k^2
        central = central * (2 * k) * (2 * k - 1) / (k * k);
        let den = Integer::from(k).pow(3) * &central;
        let term = Float::with_val(wp, &den).recip();
        if term.get_exp().unwrap_or(0) < -(wp as i32) {
            break;
        }
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Float::with_val(prec, sum * 5u32 / 2u32)
}

/// `gamma = H_N - ln N - 1/(2N) + sum_k B_{2k} / (2k N^{2k})`, truncated
/// after the `N^{-14}` term.
pub fn euler_gamma(prec: u32) -> Float {
    let wp = prec + GUARD;
    let n: u32 = 1 << 14;
    let mut h = Float::new(wp);
    for k in (1..=n).rev() {
        h += Float::with_val(wp, k).recip();
    }
    let nf = Float::with_val(wp, n);
    let mut g = h - Float::with_val(wp, nf.ln_ref()) - Float::with_val(wp, nf.recip_ref()) / 2u32;
    // B_{2k}/(2k) for k = 1..7
    let coeffs: [(i64, i64); 7] = [(1, 12), (-1, 120), (1, 252), (-1, 240), (1, 132), (-691, 32760), (1, 12)];
    let n2 = Float::with_val(wp, &nf * &nf);
    let mut pow = n2.clone();
    for (num, den) in coeffs {
        g += Float::with_val(wp, num) / den / &pow;
        pow *= &n2;
    }
    Float::with_val(prec, g)
}

/// Distance between `x` and `y` in units of the last place of `y` at `prec` bits.
pub fn ulps(x: &Float, y: &Float, prec: u32) -> Float {
    if y.is_zero() {
        return if x.is_zero() { Float::new(64) } else { Float::with_val(64, f64::INFINITY) };
    }
    let exp = y.get_exp().unwrap();
    let ulp = Float::with_val(64, Float::i_exp(1, exp - prec as i32));
    let d = Float::with_val(prec * 2 + 64, x - y).abs();
    Float::with_val(64, d / ulp)
}

pub fn rel_err(x: &Float, y: &Float) -> f64 {
    Float::with_val(128, Float::with_val(512, x - y) / y).abs().to_f64()
}
