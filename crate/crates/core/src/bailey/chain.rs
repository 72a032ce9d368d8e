use super::algebra::QAlgebra;
use super::relation::pochhammer_table;
use super::sequence::Sequence;
use super::BaileyPair;
use crate::error::{Error, Result};
use crate::qcore::QMonomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainParameters {
    rho1: QMonomial,
    rho2: QMonomial,
}

impl ChainParameters {
    pub fn new(rho1: QMonomial, rho2: QMonomial) -> Result<Self> {
        if rho1.is_zero() || rho2.is_zero() {
            return Err(Error::ZeroChainParameter);
        }
        Ok(ChainParameters { rho1, rho2 })
    }

    pub fn rho1(&self) -> &QMonomial {
        &self.rho1
    }

    pub fn rho2(&self) -> &QMonomial {
        &self.rho2
    }
}

/// `(b;q)_n` vanishes for some `n` exactly when `b = q^{-j}`, `j >= 0`.
fn check_denominator_parameter(b: &QMonomial, label: &str) -> Result<()> {
    if b.coeff == 1 && b.power <= 0 {
        return Err(Error::DegenerateDenominator(format!(
            "({label};q)_n vanishes for n > {} since {label} = {b}",
            -b.power
        )));
    }
    Ok(())
}

/// One step of the Bailey chain:
///
/// ```text
/// alpha'_n = (rho1)_n (rho2)_n (aq/(rho1 rho2))^n alpha_n / ((aq/rho1)_n (aq/rho2)_n)
/// beta'_n  = sum_j (rho1)_j (rho2)_j (aq/(rho1 rho2))_{n-j} (aq/(rho1 rho2))^j beta_j
///                  / ((q)_{n-j} (aq/rho1)_n (aq/rho2)_n)
/// ```
///
/// All Pochhammer symbols are in base `q`. The new pair is lazy; its terms
/// are produced from the old pair's terms on demand.
pub fn chain_step<A: QAlgebra + 'static>(
    pair: &BaileyPair<A>,
    params: &ChainParameters,
) -> Result<BaileyPair<A>> {
    let a = pair.a.clone();
    let aq = a.mul(&QMonomial::q_power(1));
    let m1 = aq.div(&params.rho1)?;
    let m2 = aq.div(&params.rho2)?;
    let m12 = m1.div(&params.rho2)?;
    check_denominator_parameter(&m1, "aq/rho1")?;
    check_denominator_parameter(&m2, "aq/rho2")?;

    let shared = ChainFactors { rho1: params.rho1.clone(), rho2: params.rho2.clone(), m1, m2, m12 };

    let alpha_factors = shared.clone();
    let old_alpha = pair.alpha.clone();
    let alpha = Sequence::new(format!("chain({})", pair.alpha.name()), move |alg: &A, n| {
        let f = &alpha_factors;
        let num = alg.mul(
            &alg.mul(&alg.pochhammer(&f.rho1, n)?, &alg.pochhammer(&f.rho2, n)?),
            &alg.monomial(&f.m12.pow(n as u32))?,
        );
        let den = alg.mul(&alg.pochhammer(&f.m1, n)?, &alg.pochhammer(&f.m2, n)?);
        let ratio = alg.div(&num, &den)?;
        Ok(alg.mul(&ratio, &old_alpha.term(alg, n)?))
    });

    let beta_factors = shared;
    let old_beta = pair.beta.clone();
    let beta = Sequence::new(format!("chain({})", pair.beta.name()), move |alg: &A, n| {
        let f = &beta_factors;
        let r1 = pochhammer_table(alg, &f.rho1, n)?;
        let r2 = pochhammer_table(alg, &f.rho2, n)?;
        let p12 = pochhammer_table(alg, &f.m12, n)?;
        let qq = pochhammer_table(alg, &QMonomial::q_power(1), n)?;
        let outer = alg.inv(&alg.mul(&alg.pochhammer(&f.m1, n)?, &alg.pochhammer(&f.m2, n)?))?;
        let mut acc = alg.zero();
        for j in 0..=n {
            let b = old_beta.term(alg, j)?;
            if alg.is_zero(&b) {
                continue;
            }
            let num = alg.mul(
                &alg.mul(&alg.mul(&r1[j], &r2[j]), &p12[n - j]),
                &alg.monomial(&f.m12.pow(j as u32))?,
            );
            let term = alg.div(&alg.mul(&num, &b), &qq[n - j])?;
            acc = alg.add(&acc, &term);
        }
        Ok(alg.mul(&acc, &outer))
    });

    Ok(BaileyPair {
        name: format!("chain[{}; rho1={}, rho2={}]", pair.name, params.rho1, params.rho2),
        alpha,
        beta,
        a,
    })
}

#[derive(Clone)]
struct ChainFactors {
    rho1: QMonomial,
    rho2: QMonomial,
    m1: QMonomial,
    m2: QMonomial,
    m12: QMonomial,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bailey::algebra::FormalSeries;
    use crate::bailey::verify::{verify_pair, Outcome};
    use rug::Rational;

    #[test]
    fn zero_parameter_rejected() {
        assert_eq!(
            ChainParameters::new(QMonomial::constant(0), QMonomial::one()),
            Err(Error::ZeroChainParameter)
        );
    }

    #[test]
    fn degenerate_rho_rejected() {
        // rho1 = q makes aq/rho1 = 1 when a = 1.
        let pair = BaileyPair::<FormalSeries>::unit(QMonomial::one());
        let params = ChainParameters::new(QMonomial::q_power(1), QMonomial::constant(-1)).unwrap();
        assert!(matches!(chain_step(&pair, &params), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn step_at_n_zero_keeps_leading_terms() {
        let alg = FormalSeries::new(10);
        let pair = BaileyPair::<FormalSeries>::unit(QMonomial::one());
        let params = ChainParameters::new(QMonomial::constant(-1), QMonomial::constant(-1)).unwrap();
        let next = chain_step(&pair, &params).unwrap();
        assert_eq!(next.alpha.term(&alg, 0).unwrap(), pair.alpha.term(&alg, 0).unwrap());
        assert_eq!(next.beta.term(&alg, 0).unwrap(), pair.beta.term(&alg, 0).unwrap());
    }

    #[test]
    fn unit_pair_chain_verifies() {
        let alg = FormalSeries::new(30);
        let pair = BaileyPair::<FormalSeries>::unit(QMonomial::one());
        let params = ChainParameters::new(QMonomial::constant(-1), QMonomial::constant(-1)).unwrap();
        let once = chain_step(&pair, &params).unwrap();
        assert_eq!(verify_pair(&alg, &once, 4).unwrap().outcome, Outcome::Verified);
        let twice = chain_step(&once, &params).unwrap();
        assert_eq!(verify_pair(&alg, &twice, 3).unwrap().outcome, Outcome::Verified);
    }

    #[test]
    fn rational_rho_chain_verifies_for_a_equal_q() {
        let alg = FormalSeries::new(20);
        let pair = BaileyPair::<FormalSeries>::unit(QMonomial::q_power(1));
        let params = ChainParameters::new(
            QMonomial::constant(Rational::from((1, 2))),
            QMonomial::new(3, 1),
        )
        .unwrap();
        let next = chain_step(&pair, &params).unwrap();
        assert_eq!(verify_pair(&alg, &next, 4).unwrap().outcome, Outcome::Verified);
    }
}
