//! Expression language for pair-definition files.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := INT | IDENT | '(' expr ')'
//!         | sum(var, lo, hi, body) | poch(x, base, len) | qint(r)
//!         | delta(k) | binom(m, k)
//! ```
//!
//! Identifiers: `q` (the formal variable), `n` (sequence index), `a` (the
//! pair parameter), `s` (integer zeta exponent, when declared) and any
//! variable bound by `sum`. `poch(x, q^k, m)` is `(x; q^k)_m`, `qint(r)` is
//! `1 + q + ... + q^{r-1}` and `delta(k)` is 1 when `k = 0`, else 0.
//!
//! Values are integers, rationals, or Laurent series in `q` that carry the
//! exponent below which their coefficients are known exactly. Negative
//! powers may appear in intermediate results (as in `q^{-j^2}`); the final
//! value must be a power series known through the requested order.

use std::collections::{BTreeMap, HashMap};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::Error;
use crate::qcore::{QMonomial, QSeries};

const MAX_SUM_TERMS: i64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl ExprError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ExprError { offset, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(Integer),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let value = Integer::from_str_radix(&src[start..i], 10).expect("digits");
            out.push((Token::Int(value), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Token::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Token::Sym(c), i));
            i += 1;
        } else {
            return Err(ExprError::new(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    kind: Kind,
    offset: usize,
}

#[derive(Clone, Debug)]
enum Kind {
    Int(Integer),
    Var(String),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Sum { var: String, lo: Box<Node>, hi: Box<Node>, body: Box<Node> },
    Poch(Box<Node>, Box<Node>, Box<Node>),
    QInt(Box<Node>),
    Delta(Box<Node>),
    Binom(Box<Node>, Box<Node>),
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ExprError::new(self.offset(), format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let offset = self.offset();
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Node { kind: Kind::Bin(op, Box::new(lhs), Box::new(rhs)), offset };
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let offset = self.offset();
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Node { kind: Kind::Bin(op, Box::new(lhs), Box::new(rhs)), offset };
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        let offset = self.offset();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Node { kind: Kind::Neg(Box::new(inner)), offset });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        let offset = self.offset();
        if self.eat('^') {
            let exponent = self.unary()?;
            return Ok(Node { kind: Kind::Bin('^', Box::new(base), Box::new(exponent)), offset });
        }
        Ok(base)
    }

    fn args(&mut self, count: usize, name: &str) -> Result<Vec<Node>, ExprError> {
        self.expect('(')?;
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            if k > 0
                && !self.eat(',') {
                    return Err(ExprError::new(self.offset(), format!("`{name}` takes {count} arguments")));
                }
            out.push(self.expr()?);
        }
        if !self.eat(')') {
            return Err(ExprError::new(self.offset(), format!("`{name}` takes {count} arguments")));
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        let offset = self.offset();
        let Some((token, _)) = self.tokens.get(self.pos).cloned() else {
            return Err(ExprError::new(offset, "unexpected end of expression"));
        };
        self.pos += 1;
        let kind = match token {
            Token::Int(v) => Kind::Int(v),
            Token::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                return Ok(inner);
            }
            Token::Sym(c) => return Err(ExprError::new(offset, format!("unexpected `{c}`"))),
            Token::Ident(name) => match name.as_str() {
                "sum" => {
                    self.expect('(')?;
                    let var_offset = self.offset();
                    let var = match self.tokens.get(self.pos) {
                        Some((Token::Ident(v), _)) if !is_reserved(v) => v.clone(),
                        _ => return Err(ExprError::new(var_offset, "expected a summation variable")),
                    };
                    self.pos += 1;
                    self.expect(',')?;
                    let lo = self.expr()?;
                    self.expect(',')?;
                    let hi = self.expr()?;
                    self.expect(',')?;
                    let body = self.expr()?;
                    self.expect(')')?;
                    Kind::Sum { var, lo: Box::new(lo), hi: Box::new(hi), body: Box::new(body) }
                }
                "poch" => {
                    let mut a = self.args(3, "poch")?.into_iter();
                    let (x, base, len) = (a.next().unwrap(), a.next().unwrap(), a.next().unwrap());
                    Kind::Poch(Box::new(x), Box::new(base), Box::new(len))
                }
                "qint" => Kind::QInt(Box::new(self.args(1, "qint")?.remove(0))),
                "delta" => Kind::Delta(Box::new(self.args(1, "delta")?.remove(0))),
                "binom" => {
                    let mut a = self.args(2, "binom")?.into_iter();
                    Kind::Binom(Box::new(a.next().unwrap()), Box::new(a.next().unwrap()))
                }
                _ => Kind::Var(name),
            },
        };
        Ok(Node { kind, offset })
    }
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "q" | "n" | "a" | "s" | "sum" | "poch" | "qint" | "delta" | "binom")
}

pub(crate) fn parse(src: &str) -> Result<Node, ExprError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, end: src.len() };
    let node = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(ExprError::new(p.offset(), "unexpected trailing input"));
    }
    Ok(node)
}

/// Laurent series in `q` whose coefficients are exact below `known_to`
/// (`None`: exact everywhere).
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Laurent {
    terms: BTreeMap<i64, Rational>,
    known_to: Option<i64>,
}

fn min_bound(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Laurent {
    fn monomial(c: Rational, power: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(power, c);
        }
        Laurent { terms, known_to: None }
    }

    fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.known_to.is_none()
    }

    fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Lowest power that could be nonzero.
    fn low(&self) -> i64 {
        self.valuation().or(self.known_to).expect("nonzero or inexact")
    }

    fn normalize(mut self) -> Self {
        if let Some(k) = self.known_to {
            self.terms.retain(|&p, _| p < k);
        }
        self.terms.retain(|_, c| *c != 0);
        self
    }

    fn add(&self, other: &Laurent) -> Laurent {
        let mut terms = self.terms.clone();
        for (p, c) in &other.terms {
            *terms.entry(*p).or_default() += c;
        }
        Laurent { terms, known_to: min_bound(self.known_to, other.known_to) }.normalize()
    }

    fn neg(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(p, c)| (*p, Rational::from(-c))).collect(),
            known_to: self.known_to,
        }
    }

    fn mul(&self, other: &Laurent, cap: i64) -> Laurent {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Laurent::constant(Rational::new());
        }
        // monomials stay exact so that they can serve as Pochhammer bases
        if let (Some(x), Some(y)) = (self.as_monomial(), other.as_monomial()) {
            return Laurent::monomial(Rational::from(&x.coeff * &y.coeff), x.power + y.power);
        }
        let mut known = min_bound(
            self.known_to.map(|k| k + other.low()),
            other.known_to.map(|k| k + self.low()),
        );
        if self.terms.len() * other.terms.len() > 0 {
            let top = self.terms.keys().next_back().unwrap() + other.terms.keys().next_back().unwrap();
            if top >= cap {
                known = min_bound(known, Some(cap));
            }
        }
        let mut terms: BTreeMap<i64, Rational> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let p = i + j;
                if known.is_none_or(|k| p < k) {
                    *terms.entry(p).or_default() += Rational::from(a * b);
                }
            }
        }
        Laurent { terms, known_to: known }.normalize()
    }

    fn inv(&self, cap: i64) -> Result<Laurent, String> {
        let Some(v) = self.valuation() else {
            return Err(if self.known_to.is_some() {
                "divisor vanishes to the known order".into()
            } else {
                "division by zero".into()
            });
        };
        let lead = self.terms[&v].clone();
        if self.terms.len() == 1 && self.known_to.is_none() {
            return Ok(Laurent::monomial(lead.recip(), -v));
        }
        let available = self.known_to.map(|k| k - v);
        let wanted = (cap + v).max(1);
        let rel = available.map_or(wanted, |a| a.min(wanted)) as usize;
        let inv_lead = Rational::from(lead.recip_ref());
        let unit: Vec<Rational> =
            (0..rel).map(|k| self.terms.get(&(v + k as i64)).cloned().unwrap_or_default() * &inv_lead).collect();
        let mut w = vec![Rational::new(); rel];
        w[0] = Rational::from(1);
        for k in 1..rel {
            let mut acc = Rational::new();
            for j in 1..=k {
                if unit[j] != 0 {
                    acc += Rational::from(&unit[j] * &w[k - j]);
                }
            }
            w[k] = -acc;
        }
        let terms = w
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k as i64 - v, c * &inv_lead))
            .collect();
        Ok(Laurent { terms, known_to: Some(rel as i64 - v) }.normalize())
    }

    fn pow(&self, e: i64, cap: i64) -> Result<Laurent, String> {
        let base = if e < 0 { self.inv(cap)? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Laurent::constant(Rational::from(1));
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq, cap);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq, cap);
            }
        }
        Ok(acc)
    }

    fn as_monomial(&self) -> Option<QMonomial> {
        if self.known_to.is_some() || self.terms.len() != 1 {
            return None;
        }
        let (p, c) = self.terms.iter().next().unwrap();
        Some(QMonomial::new(c.clone(), *p))
    }

    fn into_series(self, order: usize) -> Result<QSeries, Error> {
        if let Some((&p, _)) = self.terms.iter().next() {
            if p < 0 {
                return Err(Error::NegativePower(p));
            }
        }
        if let Some(k) = self.known_to {
            if k <= order as i64 {
                return Err(Error::InsufficientOrder(format!(
                    "expression only known below q^{k}, need q^{order}"
                )));
            }
        }
        let mut s = QSeries::zero(order);
        for (p, c) in self.terms {
            if p as usize <= order {
                s.set_coeff(p as usize, c);
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Int(Integer),
    Rat(Rational),
    Ser(Laurent),
}

impl Value {
    fn into_laurent(self) -> Laurent {
        match self {
            Value::Int(i) => Laurent::constant(Rational::from(i)),
            Value::Rat(r) => Laurent::constant(r),
            Value::Ser(s) => s,
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        match self {
            Value::Int(i) => Some(Rational::from(i)),
            Value::Rat(r) => Some(r.clone()),
            Value::Ser(_) => None,
        }
    }

    fn as_integer(&self) -> Option<Integer> {
        match self {
            Value::Int(i) => Some(i.clone()),
            Value::Rat(r) if *r.denom() == 1 => Some(r.numer().clone()),
            Value::Ser(s) => s.as_monomial().filter(|m| m.power == 0 && *m.coeff.denom() == 1).map(|m| m.coeff.numer().clone()),
            _ => None,
        }
    }
}

/// Bindings an expression is evaluated under.
#[derive(Clone, Debug)]
pub(crate) struct Env {
    pub a: QMonomial,
    pub s: Option<i64>,
    vars: HashMap<String, i64>,
}

impl Env {
    pub fn new(a: QMonomial, s: Option<i64>) -> Self {
        Env { a, s, vars: HashMap::new() }
    }

    pub fn with_index(&self, n: usize) -> Self {
        let mut e = self.clone();
        e.vars.insert("n".into(), n as i64);
        e
    }
}

enum EvalError {
    At(ExprError),
    Lib(Error),
}

impl From<ExprError> for EvalError {
    fn from(e: ExprError) -> Self {
        EvalError::At(e)
    }
}

struct Evaluator {
    cap: i64,
}

fn small_int(v: &Value, offset: usize, what: &str) -> Result<i64, EvalError> {
    v.as_integer()
        .and_then(|i| i.to_i64())
        .ok_or_else(|| EvalError::At(ExprError::new(offset, format!("{what} must be an integer"))))
}

impl Evaluator {
    fn eval(&self, node: &Node, env: &Env) -> Result<Value, EvalError> {
        let at = |m: String| EvalError::At(ExprError::new(node.offset, m));
        Ok(match &node.kind {
            Kind::Int(v) => Value::Int(v.clone()),
            Kind::Var(name) => match name.as_str() {
                "q" => Value::Ser(Laurent::monomial(Rational::from(1), 1)),
                "a" => Value::Ser(Laurent::monomial(env.a.coeff.clone(), env.a.power)),
                "s" => match env.s {
                    Some(s) => Value::Int(Integer::from(s)),
                    None => return Err(at("`s` is not defined for this pair".into())),
                },
                other => match env.vars.get(other) {
                    Some(v) => Value::Int(Integer::from(*v)),
                    None => return Err(at(format!("unknown variable `{other}`"))),
                },
            },
            Kind::Neg(inner) => match self.eval(inner, env)? {
                Value::Int(i) => Value::Int(-i),
                Value::Rat(r) => Value::Rat(-r),
                Value::Ser(s) => Value::Ser(s.neg()),
            },
            Kind::Bin(op, lhs, rhs) => {
                let l = self.eval(lhs, env)?;
                let r = self.eval(rhs, env)?;
                self.binary(*op, l, r, node.offset, rhs.offset)?
            }
            Kind::Sum { var, lo, hi, body } => {
                let lo = small_int(&self.eval(lo, env)?, node.offset, "summation bound")?;
                let hi = small_int(&self.eval(hi, env)?, node.offset, "summation bound")?;
                if hi - lo > MAX_SUM_TERMS {
                    return Err(at(format!("sum over more than {MAX_SUM_TERMS} terms")));
                }
                let mut acc = Value::Int(Integer::new());
                let mut inner = env.clone();
                for k in lo..=hi {
                    inner.vars.insert(var.clone(), k);
                    let term = self.eval(body, &inner)?;
                    acc = self.binary('+', acc, term, node.offset, node.offset)?;
                }
                acc
            }
            Kind::Poch(x, base, len) => {
                let x = self.eval(x, env)?.into_laurent();
                let base_value = self.eval(base, env)?.into_laurent();
                let step = match base_value.as_monomial() {
                    Some(m) if m.coeff == 1 && m.power >= 1 => m.power,
                    _ => return Err(EvalError::At(ExprError::new(base.offset, "base must be q^k with k >= 1"))),
                };
                let m = small_int(&self.eval(len, env)?, len.offset, "Pochhammer length")?;
                if m < 0 {
                    return Err(EvalError::At(ExprError::new(len.offset, "Pochhammer length must be >= 0")));
                }
                let one = Laurent::constant(Rational::from(1));
                let mut acc = one.clone();
                for j in 0..m {
                    let shifted = x.mul(&Laurent::monomial(Rational::from(1), step * j), self.cap);
                    acc = acc.mul(&one.add(&shifted.neg()), self.cap);
                }
                Value::Ser(acc)
            }
            Kind::QInt(r) => {
                let r = small_int(&self.eval(r, env)?, node.offset, "q-integer argument")?;
                if r < 1 {
                    return Err(EvalError::Lib(Error::ZeroQInteger));
                }
                let mut acc = Laurent::constant(Rational::new());
                for j in 0..r {
                    acc = acc.add(&Laurent::monomial(Rational::from(1), j));
                }
                Value::Ser(acc)
            }
            Kind::Delta(k) => {
                let k = small_int(&self.eval(k, env)?, node.offset, "delta argument")?;
                Value::Int(Integer::from((k == 0) as i64))
            }
            Kind::Binom(m, k) => {
                let m = small_int(&self.eval(m, env)?, node.offset, "binomial argument")?;
                let k = small_int(&self.eval(k, env)?, node.offset, "binomial argument")?;
                if m < 0 {
                    return Err(at("binomial top argument must be >= 0".into()));
                }
                Value::Int(crate::qcore::big_binomial(m as u64, k))
            }
        })
    }

    fn binary(&self, op: char, l: Value, r: Value, offset: usize, rhs_offset: usize) -> Result<Value, EvalError> {
        let at = |m: &str| EvalError::At(ExprError::new(offset, m));
        if op == '^' {
            let e = small_int(&r, rhs_offset, "exponent")?;
            return match l {
                Value::Int(b) if e >= 0 => Ok(Value::Int(b.pow(e as u32))),
                Value::Int(_) | Value::Rat(_) => {
                    let b = l.as_rational().unwrap();
                    if e < 0 && b == 0 {
                        return Err(at("zero raised to a negative power"));
                    }
                    let p = Rational::from((&b).pow(e.unsigned_abs() as u32));
                    Ok(Value::Rat(if e < 0 { p.recip() } else { p }))
                }
                Value::Ser(s) => s.pow(e, self.cap).map(Value::Ser).map_err(|m| at(&m)),
            };
        }
        match (&l, &r) {
            (Value::Int(a), Value::Int(b)) if op != '/' => {
                return Ok(Value::Int(match op {
                    '+' => Integer::from(a + b),
                    '-' => Integer::from(a - b),
                    _ => Integer::from(a * b),
                }))
            }
            _ => {}
        }
        if let (Some(a), Some(b)) = (l.as_rational(), r.as_rational()) {
            return Ok(Value::Rat(match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                _ => {
                    if b == 0 {
                        return Err(at("division by zero"));
                    }
                    a / b
                }
            }));
        }
        let (a, b) = (l.into_laurent(), r.into_laurent());
        Ok(Value::Ser(match op {
            '+' => a.add(&b),
            '-' => a.add(&b.neg()),
            '*' => a.mul(&b, self.cap),
            _ => a.mul(&b.inv(self.cap).map_err(|m| at(&m))?, self.cap),
        }))
    }
}

pub(crate) enum SeriesEvalError {
    Expr(ExprError),
    Lib(Error),
}

/// Evaluates `node` to a power series modulo `q^{order+1}`, widening the
/// internal working order when negative powers eat into it.
pub(crate) fn eval_series(node: &Node, env: &Env, order: usize) -> Result<QSeries, SeriesEvalError> {
    let mut last = None;
    for slack in [0i64, 16, 64, 256] {
        let ev = Evaluator { cap: order as i64 + 1 + slack };
        let value = match ev.eval(node, env) {
            Ok(v) => v,
            Err(EvalError::At(e)) => return Err(SeriesEvalError::Expr(e)),
            Err(EvalError::Lib(e)) => return Err(SeriesEvalError::Lib(e)),
        };
        match value.into_laurent().into_series(order) {
            Ok(s) => return Ok(s),
            Err(e @ Error::InsufficientOrder(_)) => last = Some(e),
            Err(e) => return Err(SeriesEvalError::Lib(e)),
        }
    }
    Err(SeriesEvalError::Lib(last.expect("at least one attempt")))
}

/// Evaluates a parameter expression that must reduce to `c q^k`.
pub(crate) fn eval_monomial(node: &Node, env: &Env) -> Result<QMonomial, ExprError> {
    let ev = Evaluator { cap: i64::MAX / 4 };
    let value = match ev.eval(node, env) {
        Ok(v) => v,
        Err(EvalError::At(e)) => return Err(e),
        Err(EvalError::Lib(e)) => return Err(ExprError::new(node.offset, e.to_string())),
    };
    let laurent = value.into_laurent();
    if laurent.is_exact_zero() {
        return Ok(QMonomial::constant(0));
    }
    laurent
        .as_monomial()
        .ok_or_else(|| ExprError::new(node.offset, "parameter must be a single monomial c*q^k"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(src: &str, n: usize, order: usize) -> QSeries {
        let node = parse(src).unwrap();
        match eval_series(&node, &Env::new(QMonomial::one(), Some(2)).with_index(n), order) {
            Ok(s) => s,
            Err(SeriesEvalError::Expr(e)) => panic!("{e:?}"),
            Err(SeriesEvalError::Lib(e)) => panic!("{e}"),
        }
    }

    #[test]
    fn polynomial_arithmetic() {
        assert_eq!(series("(1 - q)*(1 - q^2)", 0, 3), QSeries::from_i64s(&[1, -1, -1, 1], 3));
        assert_eq!(series("poch(q, q, 2)", 0, 3), QSeries::from_i64s(&[1, -1, -1, 1], 3));
        assert_eq!(series("qint(3)", 0, 5), QSeries::from_i64s(&[1, 1, 1], 5));
        assert_eq!(series("1/(1-q)", 0, 4), QSeries::from_i64s(&[1, 1, 1, 1, 1], 4));
    }

    #[test]
    fn negative_intermediate_powers() {
        // q^{n^2+n} sum (-1)^j q^{-j^2} at n = 1 is -2q + q^2.
        let s = series("q^(n^2+n) * sum(j, -n, n, (-1)^j * q^(-j^2))", 1, 6);
        assert_eq!(s, QSeries::from_i64s(&[0, -2, 1], 6));
    }

    #[test]
    fn division_followed_by_negative_shift_widens_order() {
        // q^{-3} * q^3/(1-q) must still be known through q^5.
        let s = series("q^(-3) * (q^3/(1-q))", 0, 5);
        assert_eq!(s, QSeries::from_i64s(&[1; 6], 5));
    }

    #[test]
    fn integer_helpers() {
        assert_eq!(series("delta(n - 3) * q^5", 3, 6), QSeries::monomial(Rational::from(1), 5, 6));
        assert!(series("delta(n - 3) * q^5", 2, 6).is_zero());
        assert_eq!(series("binom(n, 2)", 4, 0), QSeries::constant(Rational::from(6), 0));
        assert_eq!(series("s", 0, 0), QSeries::constant(Rational::from(2), 0));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(parse("1 + ").unwrap_err().offset, 4);
        assert_eq!(parse("q $ 2").unwrap_err().offset, 2);
        assert_eq!(parse("poch(q, q)").unwrap_err().offset, 9);
    }

    #[test]
    fn monomial_parameters() {
        let env = Env::new(QMonomial::one(), None);
        assert_eq!(eval_monomial(&parse("-q").unwrap(), &env).unwrap(), QMonomial::new(-1, 1));
        assert_eq!(eval_monomial(&parse("1/2*q^3").unwrap(), &env).unwrap(), QMonomial::new(Rational::from((1, 2)), 3));
        assert!(eval_monomial(&parse("1+q").unwrap(), &env).is_err());
    }

    #[test]
    fn negative_final_power_is_rejected() {
        let node = parse("q^(-1)").unwrap();
        let r = eval_series(&node, &Env::new(QMonomial::one(), None).with_index(0), 3);
        assert!(matches!(r, Err(SeriesEvalError::Lib(Error::NegativePower(-1)))));
    }
}
