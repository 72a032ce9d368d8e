use rayon::prelude::*;
use serde::Serialize;

use super::algebra::{Comparison, QAlgebra};
use super::relation::{alpha_from_beta, beta_from_alpha, zeta_beta};
use super::sequence::Sequence;
use super::zeta::BaileyZetaPair;
use super::BaileyPair;
use crate::error::{Error, Result};
use crate::qcore::QMonomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    /// First failing index, and the first differing power of `q` when `q` is formal.
    Mismatch { n: usize, power: Option<usize> },
    Inconclusive { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// `beta` recomputed from `alpha` through the Bailey relation.
    Classical,
    /// `beta` recomputed from `alpha` through the deformed (zeta) relation.
    Zeta,
    /// `alpha` recomputed from `beta` through the inverse relation.
    Inversion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RowStatus {
    Equal,
    /// Both sides vanish at this truncation order.
    Vacuous,
    Differ { power: Option<usize>, given: String, recomputed: String },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub n: usize,
    #[serde(flatten)]
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pair: String,
    pub a_param: String,
    pub relation: RelationKind,
    pub algebra: String,
    pub depth: usize,
    pub rows: Vec<RowCheck>,
    pub outcome: Outcome,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.outcome == Outcome::Verified
    }
}

fn check_rows<A, F, G>(alg: &A, depth: usize, given: F, recompute: G) -> Result<Vec<RowCheck>>
where
    A: QAlgebra,
    F: Fn(usize) -> Result<A::Elem> + Sync,
    G: Fn(usize) -> Result<A::Elem> + Sync,
{
    (0..=depth)
        .into_par_iter()
        .map(|n| {
            let pair = given(n).and_then(|g| recompute(n).map(|r| (g, r)));
            let status = match pair {
                Ok((g, r)) => match alg.compare(&g, &r) {
                    Comparison::Equal { vacuous: false } => RowStatus::Equal,
                    Comparison::Equal { vacuous: true } => RowStatus::Vacuous,
                    Comparison::Differ { power } => RowStatus::Differ {
                        power,
                        given: g.to_string(),
                        recomputed: r.to_string(),
                    },
                },
                Err(Error::InsufficientOrder(reason)) => RowStatus::Inconclusive { reason },
                Err(e) => return Err(e),
            };
            Ok(RowCheck { n, status })
        })
        .collect()
}

fn summarize(rows: &[RowCheck]) -> Outcome {
    if let Some(row) = rows.iter().find(|r| matches!(r.status, RowStatus::Differ { .. })) {
        let RowStatus::Differ { power, .. } = row.status else { unreachable!() };
        return Outcome::Mismatch { n: row.n, power };
    }
    if let Some(row) = rows.iter().find(|r| matches!(r.status, RowStatus::Inconclusive { .. })) {
        let RowStatus::Inconclusive { reason } = &row.status else { unreachable!() };
        return Outcome::Inconclusive { reason: format!("n = {}: {reason}", row.n) };
    }
    if rows.iter().all(|r| r.status == RowStatus::Vacuous) {
        return Outcome::Inconclusive {
            reason: "every compared term vanishes at this truncation order".into(),
        };
    }
    Outcome::Verified
}

fn report<A: QAlgebra>(
    alg: &A,
    name: &str,
    a: &QMonomial,
    relation: RelationKind,
    depth: usize,
    rows: Vec<RowCheck>,
) -> VerificationReport {
    VerificationReport {
        pair: name.to_string(),
        a_param: a.to_string(),
        relation,
        algebra: alg.describe(),
        depth,
        outcome: summarize(&rows),
        rows,
    }
}

/// Recomputes `beta_n` from `alpha` for every `n <= depth` and compares it
/// with the pair's own `beta_n`.
pub fn verify_pair<A: QAlgebra>(alg: &A, pair: &BaileyPair<A>, depth: usize) -> Result<VerificationReport> {
    let rows = check_rows(
        alg,
        depth,
        |n| pair.beta.term(alg, n),
        |n| beta_from_alpha(alg, &pair.alpha, &pair.a, n),
    )?;
    Ok(report(alg, &pair.name, &pair.a, RelationKind::Classical, depth, rows))
}

/// Same check through the deformed relation with its extra `q^r`.
pub fn verify_zeta_pair<A: QAlgebra>(
    alg: &A,
    zp: &BaileyZetaPair<A>,
    depth: usize,
) -> Result<VerificationReport> {
    let rows = check_rows(
        alg,
        depth,
        |n| zp.beta.term(alg, n),
        |n| zeta_beta(alg, &zp.alpha, &zp.a, n),
    )?;
    Ok(report(alg, &zp.name, &zp.a, RelationKind::Zeta, depth, rows))
}

/// Recovers `alpha_n` from `beta` by the inverse relation and compares.
pub fn verify_inversion<A: QAlgebra>(
    alg: &A,
    name: &str,
    alpha: &Sequence<A>,
    beta: &Sequence<A>,
    a: &QMonomial,
    depth: usize,
) -> Result<VerificationReport> {
    let rows = check_rows(alg, depth, |n| alpha.term(alg, n), |n| alpha_from_beta(alg, beta, a, n))?;
    Ok(report(alg, name, a, RelationKind::Inversion, depth, rows))
}
