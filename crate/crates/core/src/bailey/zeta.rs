use super::algebra::QAlgebra;
use super::relation::zeta_beta;
use super::sequence::Sequence;
use super::BaileyPair;
use crate::error::{Error, Result};
use crate::qcore::QMonomial;
use crate::weights::{ArithmeticWeight, GaussianRational};

/// Pair `(alpha_n(s), beta_n(s))` tied by the deformed relation
/// `beta_n(s) = sum_r q^r alpha_r(s) / ((q;q)_{n-r} (aq;q)_{n+r})`.
#[derive(Clone, Debug)]
pub struct BaileyZetaPair<A: QAlgebra> {
    pub name: String,
    pub alpha: Sequence<A>,
    pub beta: Sequence<A>,
    pub a: QMonomial,
    pub s: GaussianRational,
}

impl<A: QAlgebra + 'static> BaileyZetaPair<A> {
    /// Pair whose `beta` is induced from `alpha` by the deformed relation.
    pub fn from_alpha(name: impl Into<String>, alpha: Sequence<A>, a: QMonomial, s: GaussianRational) -> Self {
        let induced_from = alpha.clone();
        let a_for_beta = a.clone();
        let beta = Sequence::new(format!("zeta-beta[{}]", alpha.name()), move |alg: &A, n| {
            zeta_beta(alg, &induced_from, &a_for_beta, n)
        });
        BaileyZetaPair { name: name.into(), alpha, beta, a, s }
    }

    /// `alpha_0 = 0`, `alpha_r(s, q) = chi(r) / [r]_q^s` for an integer `s >= 0`,
    /// which keeps every term exact. The weight must be real-valued.
    pub fn q_zeta(weight: &ArithmeticWeight, s: u32, a: QMonomial) -> Result<Self> {
        if !weight.is_real() {
            return Err(Error::InvalidWeight(
                "exact Bailey-Zeta pairs need a real-valued weight".into(),
            ));
        }
        let w = weight.clone();
        let alpha = Sequence::new(format!("{}/[r]_q^{s}", weight.name()), move |alg: &A, r| {
            if r == 0 {
                return Ok(alg.zero());
            }
            let chi = w.evaluate(r as u64)?;
            if chi.is_zero() {
                return Ok(alg.zero());
            }
            let qint = alg.q_integer(r as u64)?;
            let mut denom = alg.one();
            for _ in 0..s {
                denom = alg.mul(&denom, &qint);
            }
            alg.div(&alg.scalar(&chi.re), &denom)
        });
        Ok(Self::from_alpha(
            format!("q-zeta[{}, s={s}]", weight.name()),
            alpha,
            a,
            GaussianRational::from_integer(i64::from(s)),
        ))
    }
}

/// `alpha_bar_n = q^n alpha_n(s)`, `beta_bar_n = beta_n(s)`.
pub fn zeta_to_classical<A: QAlgebra + 'static>(zp: &BaileyZetaPair<A>) -> BaileyPair<A> {
    let alpha_s = zp.alpha.clone();
    let alpha = Sequence::new(format!("q^n*{}", zp.alpha.name()), move |alg: &A, n| {
        Ok(alg.mul(&alg.q_power(n as i64)?, &alpha_s.term(alg, n)?))
    });
    BaileyPair {
        name: format!("classical[{}]", zp.name),
        alpha,
        beta: zp.beta.clone(),
        a: zp.a.clone(),
    }
}

/// Inverse of [`zeta_to_classical`]: `alpha_n(s) = q^{-n} alpha_bar_n`.
/// With a formal `q` this needs `q^n | alpha_bar_n`.
pub fn classical_to_zeta<A: QAlgebra + 'static>(pair: &BaileyPair<A>, s: GaussianRational) -> BaileyZetaPair<A> {
    let alpha_bar = pair.alpha.clone();
    let alpha = Sequence::new(format!("q^-n*{}", pair.alpha.name()), move |alg: &A, n| {
        alg.divide_by_q_power(n, &|raised: &A| alpha_bar.term(raised, n))
    });
    BaileyZetaPair {
        name: format!("zeta[{}]", pair.name),
        alpha,
        beta: pair.beta.clone(),
        a: pair.a.clone(),
        s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bailey::algebra::{AtRational, FormalSeries};
    use crate::bailey::relation::beta_from_alpha;
    use crate::bailey::verify::{verify_pair, verify_zeta_pair, Outcome};
    use rug::Rational;

    #[test]
    fn roundtrip_through_classical() {
        let alg = AtRational::new(Rational::from((1, 2))).unwrap();
        let zp = BaileyZetaPair::<AtRational>::q_zeta(&ArithmeticWeight::trivial(), 2, QMonomial::one()).unwrap();
        let back = classical_to_zeta(&zeta_to_classical(&zp), zp.s.clone());
        for n in 0..=6 {
            assert_eq!(back.alpha.term(&alg, n).unwrap(), zp.alpha.term(&alg, n).unwrap());
            assert_eq!(back.beta.term(&alg, n).unwrap(), zp.beta.term(&alg, n).unwrap());
        }
    }

    #[test]
    fn formal_roundtrip_keeps_every_coefficient() {
        let alg = FormalSeries::new(15);
        let zp = BaileyZetaPair::<FormalSeries>::q_zeta(&ArithmeticWeight::mod4(), 3, QMonomial::one()).unwrap();
        let back = classical_to_zeta(&zeta_to_classical(&zp), zp.s.clone());
        for n in 0..=5 {
            assert_eq!(back.alpha.term(&alg, n).unwrap(), zp.alpha.term(&alg, n).unwrap());
        }
    }

    #[test]
    fn unit_zeta_pair_maps_to_unit_pair() {
        let alg = FormalSeries::new(10);
        let unit = Sequence::<FormalSeries>::unit();
        let zp = BaileyZetaPair::from_alpha("unit", unit, QMonomial::one(), GaussianRational::from_integer(0));
        let classical = zeta_to_classical(&zp);
        assert_eq!(classical.alpha.term(&alg, 0).unwrap(), alg.one());
        assert!(classical.alpha.term(&alg, 3).unwrap().is_zero());
    }

    #[test]
    fn dual_path_beta_at_rational_point() {
        // s = 2, q = 1/2, n = 3: beta through the deformed relation and through
        // the classical relation on q^n alpha_n.
        let alg = AtRational::new(Rational::from((1, 2))).unwrap();
        let zp = BaileyZetaPair::<AtRational>::q_zeta(&ArithmeticWeight::trivial(), 2, QMonomial::one()).unwrap();
        let classical = zeta_to_classical(&zp);
        let via_zeta = zp.beta.term(&alg, 3).unwrap();
        let via_classical = beta_from_alpha(&alg, &classical.alpha, &zp.a, 3).unwrap();
        assert_eq!(via_zeta, via_classical);
        assert!(via_zeta > 0);
    }

    #[test]
    fn verification_verdicts_agree() {
        let alg = FormalSeries::new(16);
        let zp = BaileyZetaPair::<FormalSeries>::q_zeta(&ArithmeticWeight::alternating(), 2, QMonomial::one()).unwrap();
        assert_eq!(verify_zeta_pair(&alg, &zp, 5).unwrap().outcome, Outcome::Verified);
        assert_eq!(verify_pair(&alg, &zeta_to_classical(&zp), 5).unwrap().outcome, Outcome::Verified);
    }

    #[test]
    fn complex_weight_rejected() {
        let w = ArithmeticWeight::periodic(vec![
            GaussianRational::new(Rational::from(0), Rational::from(1)),
            GaussianRational::from_integer(1),
        ])
        .unwrap();
        assert!(BaileyZetaPair::<FormalSeries>::q_zeta(&w, 2, QMonomial::one()).is_err());
    }
}
