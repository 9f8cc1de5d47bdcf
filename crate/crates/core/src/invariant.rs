//! Invariant symbols `I[n,r]`, `D[n,r]` and exact polynomials in them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::InvarError;

/// `I`: product of Riemann tensors; `D`: the same with one ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantKind {
    I,
    D,
}

impl InvariantKind {
    pub fn letter(self) -> char {
        match self {
            InvariantKind::I => 'I',
            InvariantKind::D => 'D',
        }
    }
}

impl FromStr for InvariantKind {
    type Err = InvarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "i" => Ok(InvariantKind::I),
            "D" | "d" => Ok(InvariantKind::D),
            _ => Err(InvarError::UnknownId(s.to_string())),
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Ordered by degree, then kind (`I` before `D`), then rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantId {
    pub degree: u16,
    pub kind: InvariantKind,
    pub rank: u32,
}

impl InvariantId {
    pub fn new(kind: InvariantKind, degree: u16, rank: u32) -> Self {
        Self { degree, kind, rank }
    }

    pub fn i(degree: u16, rank: u32) -> Self {
        Self::new(InvariantKind::I, degree, rank)
    }

    pub fn d(degree: u16, rank: u32) -> Self {
        Self::new(InvariantKind::D, degree, rank)
    }
}

impl fmt::Display for InvariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind, self.degree, self.rank)
    }
}

impl FromStr for InvariantId {
    type Err = InvarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvarError::UnknownId(s.to_string());
        let s = s.trim();
        let (head, rest) = s.split_at(s.find('[').ok_or_else(bad)?);
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (n, r) = inner.split_once(',').ok_or_else(bad)?;
        let degree: u16 = n.trim().parse().map_err(|_| bad())?;
        let rank: u32 = r.trim().parse().map_err(|_| bad())?;
        if degree == 0 || rank == 0 {
            return Err(bad());
        }
        Ok(Self::new(head.parse()?, degree, rank))
    }
}

/// A product of invariants times an optional `σ`. The empty product is the
/// constant monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct InvariantMonomial {
    ids: Vec<InvariantId>,
    pub sigma: bool,
}

impl InvariantMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn sigma() -> Self {
        Self {
            ids: Vec::new(),
            sigma: true,
        }
    }

    pub fn from_ids(mut ids: Vec<InvariantId>, sigma: bool) -> Self {
        ids.sort_unstable();
        Self { ids, sigma }
    }

    pub fn single(id: InvariantId) -> Self {
        Self {
            ids: vec![id],
            sigma: false,
        }
    }

    /// Constituents in ascending order.
    pub fn ids(&self) -> &[InvariantId] {
        &self.ids
    }

    pub fn is_constant(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn as_single(&self) -> Option<InvariantId> {
        match self.ids.as_slice() {
            [id] if !self.sigma => Some(*id),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.ids.iter().map(|i| i.degree as u32).sum()
    }

    pub fn max_degree(&self) -> u16 {
        self.ids.last().map_or(0, |i| i.degree)
    }

    pub fn dual_count(&self) -> usize {
        self.ids.iter().filter(|i| i.kind == InvariantKind::D).count()
    }

    /// `D` if an odd number of dual factors is present.
    pub fn kind(&self) -> InvariantKind {
        if self.dual_count() % 2 == 1 {
            InvariantKind::D
        } else {
            InvariantKind::I
        }
    }

    /// Whether the `σ` exponent matches the number of ε pairs. Every relation
    /// is homogeneous in this grading, and the database stores only grade 0.
    pub fn is_grade_zero(&self) -> bool {
        self.sigma == ((self.dual_count() / 2) % 2 == 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut ids = self.ids.clone();
        ids.extend_from_slice(&other.ids);
        Self::from_ids(ids, self.sigma ^ other.sigma)
    }

    pub fn with_sigma(mut self, sigma: bool) -> Self {
        self.sigma = sigma;
        self
    }

    /// `self / other` if `other`'s ids form a sub-multiset of `self`'s.
    pub fn divide(&self, other: &Self) -> Option<Self> {
        let mut rest = Vec::with_capacity(self.ids.len());
        let mut j = 0;
        for &id in &self.ids {
            if j < other.ids.len() && other.ids[j] == id {
                j += 1;
            } else {
                rest.push(id);
            }
        }
        (j == other.ids.len()).then_some(Self {
            ids: rest,
            sigma: self.sigma ^ other.sigma,
        })
    }
}

/// Elimination order: maximum constituent degree, total degree, ids
/// compared from the largest down, then `σ`. Greater monomials are
/// eliminated first.
impl Ord for InvariantMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.max_degree()
            .cmp(&other.max_degree())
            .then(self.total_degree().cmp(&other.total_degree()))
            .then_with(|| self.ids.iter().rev().cmp(other.ids.iter().rev()))
            .then(self.sigma.cmp(&other.sigma))
    }
}

impl PartialOrd for InvariantMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for InvariantMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.sigma {
            parts.push("sig".into());
        }
        parts.extend(self.ids.iter().map(|i| i.to_string()));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InvariantPolynomial {
    terms: BTreeMap<InvariantMonomial, BigRational>,
}

impl InvariantPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(InvariantMonomial::one(), c)
    }

    pub fn term(m: InvariantMonomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: InvariantMonomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn id(id: InvariantId) -> Self {
        Self::monomial(InvariantMonomial::single(id))
    }

    pub fn add_term(&mut self, m: InvariantMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &BigRational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-BigRational::one());
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// Multiplies every monomial by `m`.
    pub fn mul_monomial(&self, m: &InvariantMonomial) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            out.add_term(a.mul(m), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending elimination order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&InvariantMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &InvariantMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Greatest monomial under the elimination order.
    pub fn leading(&self) -> Option<(&InvariantMonomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Splits into the grade-0 part and the cofactor of `σ` in the grade-1
    /// part: `self = p0 + σ·p1`.
    pub fn split_grade(&self) -> (Self, Self) {
        let mut p0 = Self::zero();
        let mut p1 = Self::zero();
        for (m, c) in &self.terms {
            if m.is_grade_zero() {
                p0.add_term(m.clone(), c.clone());
            } else {
                p1.add_term(m.clone().with_sigma(!m.sigma), c.clone());
            }
        }
        (p0, p1)
    }

    /// Multiplies by `σ`.
    pub fn times_sigma(&self) -> Self {
        self.mul_monomial(&InvariantMonomial::sigma())
    }

    /// Specializes `σ` to ±1, leaving a σ-free polynomial.
    pub fn with_sigma_value(&self, sigma: i8) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let c = if m.sigma && sigma < 0 { -c.clone() } else { c.clone() };
            out.add_term(m.clone().with_sigma(false), c);
        }
        out
    }

    /// All invariant ids occurring.
    pub fn ids(&self) -> Vec<InvariantId> {
        let mut v: Vec<InvariantId> = self.terms.keys().flat_map(|m| m.ids().iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, m: &InvariantMonomial, c: &BigRational) -> fmt::Result {
    let c = c.abs();
    if m.is_constant() && !m.sigma {
        return write!(f, "{c}");
    }
    if !c.is_one() {
        write!(f, "{c}*")?;
    }
    write!(f, "{m}")
}

/// Greatest term first.
impl fmt::Display for InvariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_term(f, m, c)?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

/// Parses sums of products such as `2*I[3,1] - 1/2*sig*I[1,1]*D[2,2]`.
impl FromStr for InvariantPolynomial {
    type Err = InvarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| InvarError::Format {
            line: 0,
            msg: format!("{msg}: `{s}`"),
        };
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Self::zero();
        if text == "0" {
            return Ok(out);
        }
        // Split at top-level signs (never inside brackets).
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0;
        let mut current = String::new();
        let mut negative = false;
        for (k, ch) in text.chars().enumerate() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ => {}
            }
            if depth == 0 && (ch == '+' || ch == '-') {
                if k == 0 {
                    negative = ch == '-';
                    continue;
                }
                if current.is_empty() {
                    return Err(bad("dangling sign"));
                }
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(bad("empty term"));
        }
        terms.push((negative, current));
        for (negative, term) in terms {
            let mut coeff = BigRational::one();
            let mut mono = InvariantMonomial::one();
            for factor in term.split('*') {
                if factor == "sig" {
                    mono.sigma ^= true;
                } else if factor.contains('[') {
                    let id: InvariantId = factor.parse()?;
                    mono = mono.mul(&InvariantMonomial::single(id));
                } else {
                    coeff *= parse_rational(factor).ok_or_else(|| bad("bad coefficient"))?;
                }
            }
            out.add_term(mono, if negative { -coeff } else { coeff });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> InvariantMonomial {
        let p: InvariantPolynomial = text.parse().unwrap();
        p.leading().unwrap().0.clone()
    }

    #[test]
    fn elimination_order_prefers_products() {
        assert!(m("I[4,1]") > m("I[1,1]*I[3,2]"));
        assert!(m("I[1,1]*I[3,2]") > m("D[2,2]*D[2,2]"));
        assert!(m("I[2,2]*I[2,1]") > m("I[2,1]*I[2,1]"));
        assert!(m("I[3,9]") > m("I[3,2]"));
        assert!(m("D[3,1]") > m("I[3,9]"));
    }

    #[test]
    fn text_round_trip() {
        let text = "I[3,5] - 6*I[3,2] + 1/2*sig*D[2,2]*D[2,2] - 17/18*I[1,1]*I[1,1]*I[1,1] + 3";
        let p: InvariantPolynomial = text.parse().unwrap();
        assert_eq!(p.len(), 5);
        let again: InvariantPolynomial = p.to_string().parse().unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn grading() {
        assert!(m("I[2,1]").is_grade_zero());
        assert!(m("sig*D[2,2]*D[2,2]").is_grade_zero());
        assert!(!m("D[2,2]*D[2,2]").is_grade_zero());
        assert!(m("D[2,2]").is_grade_zero());
        let p: InvariantPolynomial = "I[2,1] + D[2,2]*D[2,2]".parse().unwrap();
        let (p0, p1) = p.split_grade();
        assert_eq!(p0.to_string(), "I[2,1]");
        assert_eq!(p1.to_string(), "sig*D[2,2]*D[2,2]");
    }

    #[test]
    fn division() {
        let a = m("I[1,1]*I[1,1]*I[2,1]");
        let b = m("I[1,1]*I[2,1]");
        assert_eq!(a.divide(&b).unwrap(), m("I[1,1]"));
        assert!(b.divide(&a).is_none());
    }
}
