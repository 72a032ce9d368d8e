//! Bailey pairs, the inverse relation, the Bailey chain, the Bailey-Zeta
//! deformation, and an exact verifier for all of them.
//!
//! Everything is generic over a [`QAlgebra`]: the same pair can be checked
//! with `q` formal (truncated power series) or with `q` fixed to a rational.

pub mod algebra;
pub mod chain;
pub mod definition;
mod expr;
pub mod relation;
pub mod sequence;
pub mod verify;
pub mod zeta;

use rug::Rational;

pub use algebra::{AtRational, Comparison, FormalSeries, QAlgebra};
pub use chain::{chain_step, ChainParameters};
pub use definition::{parse_monomial, PairDefinition, PairKind, ParseError};
pub use relation::{alpha_from_beta, beta_from_alpha, induced_alpha, induced_beta, zeta_beta};
pub use sequence::Sequence;
pub use verify::{verify_inversion, verify_pair, verify_zeta_pair, Outcome, RelationKind, VerificationReport};
pub use zeta::{classical_to_zeta, zeta_to_classical, BaileyZetaPair};

use crate::error::Result;
use crate::qcore::QMonomial;

/// Sequences `(alpha_n, beta_n)` claimed to form a Bailey pair relative to `a`.
#[derive(Clone, Debug)]
pub struct BaileyPair<A: QAlgebra> {
    pub name: String,
    pub alpha: Sequence<A>,
    pub beta: Sequence<A>,
    pub a: QMonomial,
}

impl<A: QAlgebra + 'static> BaileyPair<A> {
    pub fn new(name: impl Into<String>, alpha: Sequence<A>, beta: Sequence<A>, a: QMonomial) -> Self {
        BaileyPair { name: name.into(), alpha, beta, a }
    }

    /// Pair whose `beta` is induced from `alpha`.
    pub fn from_alpha(name: impl Into<String>, alpha: Sequence<A>, a: QMonomial) -> Self {
        let beta = induced_beta(&alpha, &a);
        BaileyPair { name: name.into(), alpha, beta, a }
    }

    /// `alpha = (1, 0, 0, ...)`, `beta_n = 1 / ((q;q)_n (aq;q)_n)`.
    pub fn unit(a: QMonomial) -> Self {
        let aq = a.mul(&QMonomial::q_power(1));
        let beta = Sequence::new("1/((q;q)_n (aq;q)_n)", move |alg: &A, n| {
            let den = alg.mul(&alg.pochhammer(&QMonomial::q_power(1), n)?, &alg.pochhammer(&aq, n)?);
            alg.inv(&den)
        });
        BaileyPair { name: "unit".into(), alpha: Sequence::unit(), beta, a }
    }

    /// The Andrews-Askey-Roy sequences
    /// `alpha_n = q^{n^2+n} sum_{j=-n}^{n} (-1)^j q^{-j^2}`,
    /// `beta_n = (-q)^n / (q^2;q^2)_n`, paired with a caller-chosen `a`.
    /// Whether they form a Bailey pair for that `a` is for the verifier to say.
    pub fn andrews_askey_roy(a: QMonomial) -> Self {
        let alpha = Sequence::new("q^(n^2+n) sum (-1)^j q^(-j^2)", |alg: &A, n| {
            let n = n as i64;
            let mut acc = alg.zero();
            for j in -n..=n {
                let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
                let m = QMonomial::new(sign, n * n + n - j * j);
                acc = alg.add(&acc, &alg.monomial(&m)?);
            }
            Ok(acc)
        });
        let beta = Sequence::new("(-q)^n/(q^2;q^2)_n", |alg: &A, n| {
            let one = alg.one();
            let mut den = one.clone();
            for j in 1..=n as i64 {
                den = alg.mul(&den, &alg.sub(&one, &alg.q_power(2 * j)?));
            }
            let num = alg.monomial(&QMonomial::new(-1, 1).pow(n as u32))?;
            alg.div(&num, &den)
        });
        BaileyPair { name: "andrews-askey-roy".into(), alpha, beta, a }
    }
}

/// Verification of one pair family under each candidate `a`.
#[derive(Clone, Debug)]
pub struct CandidateSearch {
    pub reports: Vec<(QMonomial, VerificationReport)>,
}

impl CandidateSearch {
    /// First candidate that verifies, if any.
    pub fn validated(&self) -> Option<&QMonomial> {
        self.reports.iter().find(|(_, r)| r.is_verified()).map(|(a, _)| a)
    }
}

/// Runs [`verify_pair`] on `make(a)` for every candidate `a`, in order.
pub fn search_a_parameter<A, F>(alg: &A, candidates: &[QMonomial], depth: usize, make: F) -> Result<CandidateSearch>
where
    A: QAlgebra + 'static,
    F: Fn(QMonomial) -> BaileyPair<A>,
{
    let mut reports = Vec::with_capacity(candidates.len());
    for a in candidates {
        let pair = make(a.clone());
        reports.push((a.clone(), verify_pair(alg, &pair, depth)?));
    }
    Ok(CandidateSearch { reports })
}

/// Default candidates tried for a pair that does not state its parameter.
pub fn default_a_candidates() -> Vec<QMonomial> {
    vec![QMonomial::constant(Rational::from(1)), QMonomial::q_power(1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aar_alpha_leading_terms() {
        let alg = FormalSeries::new(10);
        let pair = BaileyPair::<FormalSeries>::andrews_askey_roy(QMonomial::one());
        // alpha_1 = q^2 (1 - 2 q^{-1}) = -2q + q^2
        assert_eq!(pair.alpha.term(&alg, 1).unwrap(), crate::qcore::QSeries::from_i64s(&[0, -2, 1], 10));
        assert_eq!(pair.alpha.term(&alg, 0).unwrap(), alg.one());
    }

    #[test]
    fn aar_candidates_both_fail_at_first_index() {
        // Neither a = 1 nor a = q turns the printed sequences into a Bailey
        // pair in base q; both break at n = 1 already in the constant term.
        let alg = FormalSeries::new(40);
        let search = search_a_parameter(&alg, &default_a_candidates(), 5, BaileyPair::andrews_askey_roy).unwrap();
        assert_eq!(search.validated(), None);
        for (_, rep) in &search.reports {
            assert_eq!(rep.outcome, Outcome::Mismatch { n: 1, power: Some(0) });
        }
    }

    #[test]
    fn aar_alpha_with_induced_beta_is_a_pair_and_inverts() {
        let alg = FormalSeries::new(30);
        let aar = BaileyPair::<FormalSeries>::andrews_askey_roy(QMonomial::one());
        let induced = BaileyPair::from_alpha("aar-induced", aar.alpha.clone(), QMonomial::one());
        assert!(verify_pair(&alg, &induced, 5).unwrap().is_verified());
        let rep = verify_inversion(&alg, "aar", &induced.alpha, &induced.beta, &induced.a, 5).unwrap();
        assert!(rep.is_verified());
    }

    #[test]
    fn aar_beta_inverts_to_series_that_is_not_aar_alpha() {
        let alg = FormalSeries::new(20);
        let aar = BaileyPair::<FormalSeries>::andrews_askey_roy(QMonomial::one());
        let alpha2 = alpha_from_beta(&alg, &aar.beta, &aar.a, 2).unwrap();
        // Inverting the printed beta at a = 1 yields a valid alpha_2 for that
        // beta, which then differs from the printed alpha_2.
        let check = BaileyPair::new(
            "aar-beta",
            induced_alpha(&aar.beta, &aar.a),
            aar.beta.clone(),
            aar.a.clone(),
        );
        assert!(verify_pair(&alg, &check, 4).unwrap().is_verified());
        assert_ne!(alpha2, aar.alpha.term(&alg, 2).unwrap());
    }
}
