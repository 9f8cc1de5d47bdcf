//! Text front end.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*' unary) | ('/' integer))*
//! unary  := '-' unary | atom
//! atom   := integer ['/' integer] | 'sig' | '(' expr ')' | NAME ['[' [idx (',' idx)*] ']']
//! idx    := ['-'] IDENT
//! ```
//!
//! `-` before an index marks it covariant. `R` is Riemann, Ricci or the
//! scalar curvature depending on its rank; `C`/`W` is Weyl, `g` the metric,
//! `epsilon` the totally antisymmetric tensor. A label repeated twice is a
//! contraction; scalar expressions may not have free labels.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Factor, Index, TensorKind, TensorMonomial, TensorPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown tensor `{name}` at {pos}")]
    UnknownTensor { pos: usize, name: String },
    #[error("tensor `{name}` cannot take {rank} indices (at {pos})")]
    RankMismatch { pos: usize, name: String, rank: usize },
    #[error("index `{0}` appears only once")]
    FreeIndex(String),
    #[error("index `{0}` appears more than twice")]
    RepeatedIndex(String),
}

/// Parses a scalar expression into an expanded polynomial.
pub fn parse_expression(text: &str) -> Result<TensorPolynomial, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    for m in poly.monomials() {
        check_scalar(&m)?;
    }
    Ok(poly)
}

fn check_scalar(m: &TensorMonomial) -> Result<(), ParseError> {
    let mut counts: Vec<(&str, usize)> = m.label_counts().into_iter().collect();
    counts.sort();
    for (label, n) in counts {
        match n {
            1 => return Err(ParseError::FreeIndex(label.to_string())),
            2 => {}
            _ => return Err(ParseError::RepeatedIndex(label.to_string())),
        }
    }
    Ok(())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<TensorPolynomial, ParseError> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut sum = TensorPolynomial::zero();
        loop {
            let t = self.term()?;
            sum.add(&if negate { t.scale(&-BigRational::one()) } else { t });
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(sum);
            }
        }
    }

    fn term(&mut self) -> Result<TensorPolynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = acc.mul(&rhs);
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(self.error("division by zero"));
                }
                acc = acc.scale(&BigRational::new(BigInt::one(), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<TensorPolynomial, ParseError> {
        if self.eat(b'-') {
            Ok(self.unary()?.scale(&-BigRational::one()))
        } else {
            self.atom()
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            return Err(self.error("expected identifier"));
        }
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn atom(&mut self) -> Result<TensorPolynomial, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                // `p/q` binds as a literal; `/` after a product is handled in `term`.
                let save = self.pos;
                if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    return Ok(TensorPolynomial::constant(BigRational::new(num, den)));
                }
                self.pos = save;
                Ok(TensorPolynomial::constant(BigRational::from_integer(num)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident()?;
                if name == "sig" {
                    let mut m = TensorMonomial::constant(BigRational::one());
                    m.sigma = true;
                    return Ok(TensorPolynomial::from_monomial(m));
                }
                let indices = if self.eat(b'[') { self.index_list()? } else { Vec::new() };
                let kind = resolve(&name, indices.len(), start)?;
                Ok(TensorPolynomial::from_monomial(TensorMonomial::new(
                    BigRational::one(),
                    vec![Factor { kind, indices }],
                )))
            }
            _ => Err(self.error("expected a number, tensor or `(`")),
        }
    }

    fn index_list(&mut self) -> Result<Vec<Index>, ParseError> {
        let mut out = Vec::new();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            let up = !self.eat(b'-');
            let label = self.ident()?;
            out.push(Index { label, up });
            if self.eat(b']') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }
}

fn resolve(name: &str, rank: usize, pos: usize) -> Result<TensorKind, ParseError> {
    let kind = match (name, rank) {
        ("R" | "Riemann", 4) => TensorKind::Riemann,
        ("R" | "Ricci", 2) => TensorKind::Ricci,
        ("R" | "RicciScalar", 0) => TensorKind::RicciScalar,
        ("C" | "W" | "Weyl", 4) => TensorKind::Weyl,
        ("g" | "metric", 2) => TensorKind::Metric,
        ("epsilon", 4) => TensorKind::Epsilon,
        ("R" | "Riemann" | "Ricci" | "RicciScalar" | "C" | "W" | "Weyl" | "g" | "metric" | "epsilon", _) => {
            return Err(ParseError::RankMismatch {
                pos,
                name: name.to_string(),
                rank,
            })
        }
        _ => {
            return Err(ParseError::UnknownTensor {
                pos,
                name: name.to_string(),
            })
        }
    };
    Ok(kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_riemann_trace() {
        let p = parse_expression("R[a,b,-a,-b]").unwrap();
        assert_eq!(p.len(), 1);
        let m = p.monomials().next().unwrap();
        assert_eq!(m.factors[0].kind, TensorKind::Riemann);
        assert_eq!(
            m.factors[0].indices,
            vec![Index::up("a"), Index::up("b"), Index::down("a"), Index::down("b")]
        );
        assert!(m.coeff.is_one());
    }

    #[test]
    fn parses_dual_monomial() {
        let p = parse_expression("epsilon[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,-e,-f]").unwrap();
        let m = p.monomials().next().unwrap();
        assert_eq!(m.count(TensorKind::Epsilon), 1);
        assert_eq!(m.count(TensorKind::Riemann), 2);
    }

    #[test]
    fn rank_selects_tensor() {
        let p = parse_expression("2*R[]*R[] + R[a,-a] + R").unwrap();
        assert_eq!(p.len(), 3);
        let kinds: Vec<Vec<TensorKind>> = p
            .monomials()
            .map(|m| m.factors.iter().map(|f| f.kind).collect())
            .collect();
        assert!(kinds.contains(&vec![TensorKind::RicciScalar, TensorKind::RicciScalar]));
        assert!(kinds.contains(&vec![TensorKind::Ricci]));
    }

    #[test]
    fn rational_coefficients_and_groups() {
        let p = parse_expression("1/8*(R[a,b,-a,-b])*(R[a,b,-a,-b]) - (R)/3").unwrap();
        assert_eq!(p.len(), 2);
        let m = p.monomials().find(|m| m.factors.len() == 2).unwrap();
        assert_eq!(m.coeff, BigRational::new(1.into(), 8.into()));
        assert_eq!(m.label_counts().len(), 4);
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(parse_expression("R[a,b]"), Err(ParseError::FreeIndex(_))));
        assert!(matches!(
            parse_expression("R[a,a,-a,b]*R[-b,c,-c,d]"),
            Err(ParseError::RepeatedIndex(_)) | Err(ParseError::FreeIndex(_))
        ));
        assert!(matches!(
            parse_expression("R[a,b,c]"),
            Err(ParseError::RankMismatch { .. })
        ));
        assert!(matches!(
            parse_expression("T[a,-a]"),
            Err(ParseError::UnknownTensor { .. })
        ));
        assert!(matches!(parse_expression("R[a,-a"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expression("R[a,-a] +"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn sigma_symbol() {
        let p = parse_expression("sig*R").unwrap();
        assert!(p.monomials().next().unwrap().sigma);
    }
}
