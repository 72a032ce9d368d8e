//! Declarative pair definitions (TOML).
//!
//! ```toml
//! name = "unit"
//! a_param = "1"               # or a list of candidates: ["1", "q"]
//! alpha = "delta(n)"
//! beta = "1/(poch(q, q, n)*poch(a*q, q, n))"   # optional
//! depth = 8
//! order = 30
//! kind = "classical"          # or "zeta", which also takes an integer `s`
//! ```
//!
//! Expressions use the grammar in the `expr` module. Without `beta`, the
//! pair's `beta` is induced from `alpha` and the inverse relation is checked.

use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use super::algebra::FormalSeries;
use super::expr::{self, Env, ExprError, Node, SeriesEvalError};
use super::relation::induced_beta;
use super::sequence::Sequence;
use super::verify::{verify_inversion, verify_pair, verify_zeta_pair, VerificationReport};
use super::zeta::BaileyZetaPair;
use super::{BaileyPair, CandidateSearch};
use crate::error::{Error, Result};
use crate::qcore::QMonomial;
use crate::weights::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let offset = offset.min(src.len());
        let before = &src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { line, column, message: message.into() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairKind {
    #[default]
    Classical,
    Zeta,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    name: String,
    a_param: Spanned<toml::Value>,
    alpha: Spanned<String>,
    beta: Option<Spanned<String>>,
    depth: usize,
    order: usize,
    #[serde(default)]
    kind: PairKind,
    s: Option<i64>,
}

#[derive(Clone, Debug)]
struct Source {
    text: String,
    node: Node,
}

#[derive(Clone, Debug)]
pub struct PairDefinition {
    pub name: String,
    pub a_candidates: Vec<QMonomial>,
    pub depth: usize,
    pub order: usize,
    pub kind: PairKind,
    pub s: Option<i64>,
    alpha: Source,
    beta: Option<Source>,
}

/// Byte offset of the first character inside a TOML string literal.
fn string_body_start(src: &str, span: &Range<usize>) -> usize {
    let lit = &src[span.start..span.end];
    if lit.starts_with("\"\"\"") || lit.starts_with("'''") {
        let mut start = span.start + 3;
        // a newline right after the opening delimiter is trimmed
        if src[start..].starts_with('\n') {
            start += 1;
        } else if src[start..].starts_with("\r\n") {
            start += 2;
        }
        start
    } else {
        span.start + 1
    }
}

fn parse_expr(src: &str, field: &Spanned<String>) -> std::result::Result<Source, ParseError> {
    let text = field.get_ref().clone();
    let base = string_body_start(src, &field.span());
    let node = expr::parse(&text).map_err(|e| ParseError::at(src, base + e.offset, e.message))?;
    Ok(Source { text, node })
}

fn parse_candidates(src: &str, value: &Spanned<toml::Value>) -> std::result::Result<Vec<QMonomial>, ParseError> {
    let span = value.span();
    let one = |text: &str, base: usize| -> std::result::Result<QMonomial, ParseError> {
        let node = expr::parse(text).map_err(|e| ParseError::at(src, base + e.offset, e.message.clone()))?;
        let a = expr::eval_monomial(&node, &Env::new(QMonomial::one(), None))
            .map_err(|e| ParseError::at(src, base + e.offset, e.message))?;
        if a.is_zero() {
            return Err(ParseError::at(src, base, "a_param must be nonzero"));
        }
        Ok(a)
    };
    match value.get_ref() {
        toml::Value::String(s) => Ok(vec![one(s, string_body_start(src, &span))?]),
        toml::Value::Integer(i) => Ok(vec![one(&i.to_string(), span.start)?]),
        toml::Value::Array(items) if !items.is_empty() => items
            .iter()
            .map(|item| match item {
                toml::Value::String(s) => one(s, span.start),
                toml::Value::Integer(i) => one(&i.to_string(), span.start),
                _ => Err(ParseError::at(src, span.start, "a_param entries must be strings")),
            })
            .collect(),
        _ => Err(ParseError::at(src, span.start, "a_param must be a string or a nonempty list of strings")),
    }
}

impl PairDefinition {
    pub fn parse(src: &str) -> std::result::Result<Self, ParseError> {
        let raw: Raw = toml::from_str(src).map_err(|e| {
            let offset = e.span().map_or(0, |r| r.start);
            ParseError::at(src, offset, e.message().to_string())
        })?;
        let alpha = parse_expr(src, &raw.alpha)?;
        let beta = raw.beta.as_ref().map(|b| parse_expr(src, b)).transpose()?;
        let a_candidates = parse_candidates(src, &raw.a_param)?;
        if raw.kind == PairKind::Zeta && raw.s.is_none() {
            return Err(ParseError::at(src, 0, "kind = \"zeta\" needs an integer `s`"));
        }
        let def = PairDefinition {
            name: raw.name,
            a_candidates,
            depth: raw.depth,
            order: raw.order,
            kind: raw.kind,
            s: raw.s,
            alpha,
            beta,
        };
        // Evaluate once at n = 0 so that type errors surface with a position.
        let env = def.env(&def.a_candidates[0]).with_index(0);
        let check = |field: &Spanned<String>, source: &Source| -> std::result::Result<(), ParseError> {
            match expr::eval_series(&source.node, &env, 0) {
                Err(SeriesEvalError::Expr(e)) => {
                    Err(ParseError::at(src, string_body_start(src, &field.span()) + e.offset, e.message))
                }
                _ => Ok(()),
            }
        };
        check(&raw.alpha, &def.alpha)?;
        if let (Some(field), Some(source)) = (&raw.beta, &def.beta) {
            check(field, source)?;
        }
        Ok(def)
    }

    pub fn load(path: &Path) -> std::result::Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError {
            line: 0,
            column: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn alpha_text(&self) -> &str {
        &self.alpha.text
    }

    pub fn beta_text(&self) -> Option<&str> {
        self.beta.as_ref().map(|b| b.text.as_str())
    }

    fn env(&self, a: &QMonomial) -> Env {
        Env::new(a.clone(), self.s)
    }

    fn sequence(&self, source: &Source, a: &QMonomial) -> Sequence<FormalSeries> {
        let node = source.node.clone();
        let env = self.env(a);
        Sequence::new(source.text.clone(), move |alg: &FormalSeries, n| {
            expr::eval_series(&node, &env.with_index(n), alg.order).map_err(|e| match e {
                SeriesEvalError::Lib(e) => e,
                SeriesEvalError::Expr(ExprError { offset, message }) => {
                    Error::InvalidParameter(format!("n = {n}, offset {offset}: {message}"))
                }
            })
        })
    }

    pub fn alpha_sequence(&self, a: &QMonomial) -> Sequence<FormalSeries> {
        self.sequence(&self.alpha, a)
    }

    /// The stated `beta`, or the one induced from `alpha` when omitted.
    pub fn beta_sequence(&self, a: &QMonomial) -> Sequence<FormalSeries> {
        match &self.beta {
            Some(b) => self.sequence(b, a),
            None => induced_beta(&self.alpha_sequence(a), a),
        }
    }

    /// The definition as a classical pair; zeta definitions go through
    /// `alpha_n -> q^n alpha_n`.
    pub fn pair(&self, a: &QMonomial) -> BaileyPair<FormalSeries> {
        let alpha = self.alpha_sequence(a);
        match self.kind {
            PairKind::Classical => BaileyPair::new(self.name.clone(), alpha, self.beta_sequence(a), a.clone()),
            PairKind::Zeta => {
                let s = GaussianRational::from_integer(self.s.unwrap_or(0));
                let zp = match &self.beta {
                    Some(b) => BaileyZetaPair { name: self.name.clone(), alpha, beta: self.sequence(b, a), a: a.clone(), s },
                    None => BaileyZetaPair::from_alpha(self.name.clone(), alpha, a.clone(), s),
                };
                super::zeta_to_classical(&zp)
            }
        }
    }

    fn verify_one(&self, alg: &FormalSeries, a: &QMonomial, depth: usize) -> Result<VerificationReport> {
        let alpha = self.alpha_sequence(a);
        let s = self.s.unwrap_or(0);
        match (&self.beta, self.kind) {
            (Some(_), PairKind::Classical) => {
                let pair = BaileyPair::new(self.name.clone(), alpha, self.beta_sequence(a), a.clone());
                verify_pair(alg, &pair, depth)
            }
            (Some(_), PairKind::Zeta) => {
                let zp = BaileyZetaPair {
                    name: self.name.clone(),
                    alpha,
                    beta: self.beta_sequence(a),
                    a: a.clone(),
                    s: GaussianRational::from_integer(s),
                };
                verify_zeta_pair(alg, &zp, depth)
            }
            (None, PairKind::Classical) => {
                let beta = self.beta_sequence(a);
                verify_inversion(alg, &self.name, &alpha, &beta, a, depth)
            }
            (None, PairKind::Zeta) => {
                // induced through the deformed relation, then checked on the
                // classical side of the equivalence
                let zp = BaileyZetaPair::from_alpha(self.name.clone(), alpha, a.clone(), GaussianRational::from_integer(s));
                let classical = super::zeta_to_classical(&zp);
                verify_inversion(alg, &self.name, &classical.alpha, &classical.beta, a, depth)
            }
        }
    }

    /// Verifies the definition under every `a` candidate, in file order.
    pub fn verify(&self, depth: Option<usize>, order: Option<usize>) -> Result<CandidateSearch> {
        let alg = FormalSeries::new(order.unwrap_or(self.order));
        let depth = depth.unwrap_or(self.depth);
        let mut reports = Vec::with_capacity(self.a_candidates.len());
        for a in &self.a_candidates {
            reports.push((a.clone(), self.verify_one(&alg, a, depth)?));
        }
        Ok(CandidateSearch { reports })
    }
}

/// Parses a standalone monomial such as `-1`, `q^2` or `1/2*q`.
pub fn parse_monomial(text: &str) -> std::result::Result<QMonomial, ParseError> {
    let node = expr::parse(text).map_err(|e| ParseError::at(text, e.offset, e.message))?;
    expr::eval_monomial(&node, &Env::new(QMonomial::one(), None)).map_err(|e| ParseError::at(text, e.offset, e.message))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bailey::verify::Outcome;

    const UNIT: &str = include_str!("../../fixtures/unit.toml");
    const DEFECT: &str = include_str!("../../fixtures/unit_defect.toml");
    const AAR: &str = include_str!("../../fixtures/aar.toml");

    #[test]
    fn unit_fixture_verifies() {
        let def = PairDefinition::parse(UNIT).unwrap();
        let search = def.verify(None, None).unwrap();
        assert_eq!(search.validated(), Some(&QMonomial::one()));
    }

    #[test]
    fn defect_fixture_is_located() {
        let def = PairDefinition::parse(DEFECT).unwrap();
        let search = def.verify(None, None).unwrap();
        assert_eq!(search.reports[0].1.outcome, Outcome::Mismatch { n: 3, power: Some(5) });
    }

    #[test]
    fn aar_fixture_round_trips_the_builtin_pair() {
        let def = PairDefinition::parse(AAR).unwrap();
        let alg = FormalSeries::new(def.order);
        let builtin = BaileyPair::<FormalSeries>::andrews_askey_roy(QMonomial::one());
        let a = QMonomial::one();
        for n in 0..=def.depth {
            assert_eq!(def.alpha_sequence(&a).term(&alg, n).unwrap(), builtin.alpha.term(&alg, n).unwrap());
            assert_eq!(def.beta_sequence(&a).term(&alg, n).unwrap(), builtin.beta.term(&alg, n).unwrap());
        }
        assert_eq!(def.a_candidates, vec![QMonomial::one(), QMonomial::q_power(1)]);
    }

    #[test]
    fn omitted_beta_is_induced() {
        let src = "name = \"x\"\na_param = \"q\"\nalpha = \"q^(n^2)\"\ndepth = 4\norder = 20\n";
        let def = PairDefinition::parse(src).unwrap();
        assert!(def.verify(None, None).unwrap().validated().is_some());
    }

    #[test]
    fn zeta_kind_uses_deformed_relation() {
        let src = r#"
name = "q-zeta"
kind = "zeta"
s = 2
a_param = "1"
alpha = "(1 - delta(n)) / qint(n + delta(n))^s"
depth = 4
order = 12
"#;
        let def = PairDefinition::parse(src).unwrap();
        assert!(def.verify(None, None).unwrap().validated().is_some());
    }

    #[test]
    fn errors_report_line_and_column() {
        let src = "name = \"x\"\na_param = \"1\"\nalpha = \"q + * 2\"\ndepth = 1\norder = 3\n";
        let e = PairDefinition::parse(src).unwrap_err();
        assert_eq!((e.line, e.column), (3, 14));

        let e = PairDefinition::parse("name = \"x\"\ndepth = \n").unwrap_err();
        assert_eq!(e.line, 2);

        let src = "name = \"x\"\na_param = \"1\"\nalpha = \"m + 1\"\ndepth = 1\norder = 3\n";
        let e = PairDefinition::parse(src).unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));
        assert!(e.message.contains("unknown variable"));
    }

    #[test]
    fn unknown_keys_rejected() {
        let src = "name = \"x\"\na_param = \"1\"\nalpha = \"1\"\ndepth = 1\norder = 3\nbogus = 1\n";
        assert!(PairDefinition::parse(src).is_err());
    }
}
