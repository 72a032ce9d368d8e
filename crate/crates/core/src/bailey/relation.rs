use rug::Rational;

use super::algebra::QAlgebra;
use super::sequence::Sequence;
use crate::error::{Error, Result};
use crate::qcore::QMonomial;

/// `[(b;q)_0, (b;q)_1, ..., (b;q)_len]`.
pub(crate) fn pochhammer_table<A: QAlgebra>(alg: &A, b: &QMonomial, len: usize) -> Result<Vec<A::Elem>> {
    let one = alg.one();
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = one.clone();
    out.push(acc.clone());
    for m in 0..len {
        let factor = alg.sub(&one, &alg.monomial(&b.mul(&QMonomial::q_power(m as i64)))?);
        acc = alg.mul(&acc, &factor);
        out.push(acc.clone());
    }
    Ok(out)
}

fn invert<A: QAlgebra>(alg: &A, x: &A::Elem, what: impl FnOnce() -> String) -> Result<A::Elem> {
    alg.inv(x).map_err(|e| match e {
        Error::DegenerateDenominator(_) => Error::DegenerateDenominator(what()),
        other => other,
    })
}

/// The two Pochhammer tables every relation needs: `(q;q)_m` and `(aq;q)_m`.
pub(crate) struct Denominators<A: QAlgebra> {
    pub qq: Vec<A::Elem>,
    pub aq: Vec<A::Elem>,
}

impl<A: QAlgebra> Denominators<A> {
    pub fn new(alg: &A, a: &QMonomial, n: usize) -> Result<Self> {
        let qq = pochhammer_table(alg, &QMonomial::q_power(1), n)?;
        let aq = pochhammer_table(alg, &a.mul(&QMonomial::q_power(1)), 2 * n)?;
        Ok(Denominators { qq, aq })
    }

    /// `1 / ((q;q)_{n-r} (aq;q)_{n+r})`
    pub fn kernel(&self, alg: &A, a: &QMonomial, n: usize, r: usize) -> Result<A::Elem> {
        let d = alg.mul(&self.qq[n - r], &self.aq[n + r]);
        invert(alg, &d, || format!("(q;q)_{}(aq;q)_{} with a = {a}", n - r, n + r))
    }
}

/// `beta_n = sum_{r=0}^n alpha_r / ((q;q)_{n-r} (aq;q)_{n+r})`.
pub fn beta_from_alpha<A: QAlgebra>(
    alg: &A,
    alpha: &Sequence<A>,
    a: &QMonomial,
    n: usize,
) -> Result<A::Elem> {
    let den = Denominators::new(alg, a, n)?;
    let mut acc = alg.zero();
    for r in 0..=n {
        let term = alpha.term(alg, r)?;
        if alg.is_zero(&term) {
            continue;
        }
        acc = alg.add(&acc, &alg.mul(&term, &den.kernel(alg, a, n, r)?));
    }
    Ok(acc)
}

/// Bailey-Zeta relation: `beta_n(s) = sum_{r=0}^n q^r alpha_r(s) / ((q;q)_{n-r} (aq;q)_{n+r})`.
pub fn zeta_beta<A: QAlgebra>(
    alg: &A,
    alpha_s: &Sequence<A>,
    a: &QMonomial,
    n: usize,
) -> Result<A::Elem> {
    let den = Denominators::new(alg, a, n)?;
    let mut acc = alg.zero();
    for r in 0..=n {
        let term = alpha_s.term(alg, r)?;
        if alg.is_zero(&term) {
            continue;
        }
        let weighted = alg.mul(&alg.q_power(r as i64)?, &term);
        acc = alg.add(&acc, &alg.mul(&weighted, &den.kernel(alg, a, n, r)?));
    }
    Ok(acc)
}

/// Inverse relation
/// `alpha_n = (1 - a q^{2n}) sum_{j=0}^n (aq;q)_{n+j-1} (-1)^{n-j} q^{C(n-j,2)} beta_j / (q;q)_{n-j}`.
///
/// At `n = 0` the product `(1 - a)(aq;q)_{-1}` is `(1-a)/(1-a) = 1`, so
/// `alpha_0 = beta_0` for every `a`, including `a = 1`.
pub fn alpha_from_beta<A: QAlgebra>(
    alg: &A,
    beta: &Sequence<A>,
    a: &QMonomial,
    n: usize,
) -> Result<A::Elem> {
    if n == 0 {
        return beta.term(alg, 0);
    }
    let den = Denominators::new(alg, a, n)?;
    let mut acc = alg.zero();
    for j in 0..=n {
        let b = beta.term(alg, j)?;
        if alg.is_zero(&b) {
            continue;
        }
        let m = n - j;
        let sign = if m.is_multiple_of(2) { 1 } else { -1 };
        let q_binom = (m * m.saturating_sub(1) / 2) as i64;
        let coeff = alg.mul(
            &alg.scalar(&Rational::from(sign)),
            &alg.mul(&den.aq[n + j - 1], &alg.q_power(q_binom)?),
        );
        let inv = invert(alg, &den.qq[m], || format!("(q;q)_{m}"))?;
        acc = alg.add(&acc, &alg.mul(&alg.mul(&coeff, &b), &inv));
    }
    let prefactor = alg.sub(&alg.one(), &alg.monomial(&a.mul(&QMonomial::q_power(2 * n as i64)))?);
    Ok(alg.mul(&prefactor, &acc))
}

/// Builds the `beta` sequence induced by `alpha` through the Bailey relation.
pub fn induced_beta<A: QAlgebra + 'static>(alpha: &Sequence<A>, a: &QMonomial) -> Sequence<A> {
    let alpha = alpha.clone();
    let a = a.clone();
    Sequence::new(format!("beta[{}]", alpha.name()), move |alg: &A, n| beta_from_alpha(alg, &alpha, &a, n))
}

/// Builds the `alpha` sequence recovered from `beta` through the inverse relation.
pub fn induced_alpha<A: QAlgebra + 'static>(beta: &Sequence<A>, a: &QMonomial) -> Sequence<A> {
    let beta = beta.clone();
    let a = a.clone();
    Sequence::new(format!("alpha[{}]", beta.name()), move |alg: &A, n| alpha_from_beta(alg, &beta, &a, n))
}
