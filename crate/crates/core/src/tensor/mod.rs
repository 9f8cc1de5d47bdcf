//! Scalar tensor expressions: factors with abstract indices, monomials,
//! polynomials, metric context and the text front end.

mod canon;
mod convert;
mod parse;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::permgroup::slot_groups;
use crate::permgroup::SignedPermutation;

pub use canon::{Canonicalizer, Configuration};
pub(crate) use convert::permutations;
pub use convert::{
    contract_metric, expand_epsilon_pairs, ricci_to_riemann, riemann_to_ricci, riemann_to_weyl, weyl_to_riemann,
};
pub use parse::{parse_expression, ParseError};

/// Built-in tensors, listed in canonical factor order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TensorKind {
    Epsilon,
    Riemann,
    Weyl,
    Ricci,
    RicciScalar,
    Metric,
}

impl TensorKind {
    pub const ALL: [TensorKind; 6] = [
        TensorKind::Epsilon,
        TensorKind::Riemann,
        TensorKind::Weyl,
        TensorKind::Ricci,
        TensorKind::RicciScalar,
        TensorKind::Metric,
    ];

    pub fn rank(self) -> usize {
        match self {
            TensorKind::Epsilon | TensorKind::Riemann | TensorKind::Weyl => 4,
            TensorKind::Ricci | TensorKind::Metric => 2,
            TensorKind::RicciScalar => 0,
        }
    }

    /// Name used when rendering expressions.
    pub fn symbol(self) -> &'static str {
        match self {
            TensorKind::Epsilon => "epsilon",
            TensorKind::Riemann | TensorKind::Ricci | TensorKind::RicciScalar => "R",
            TensorKind::Weyl => "C",
            TensorKind::Metric => "g",
        }
    }

    /// Generators of the single-term slot symmetries.
    pub fn slot_generators(self) -> Vec<SignedPermutation> {
        match self {
            TensorKind::Riemann | TensorKind::Weyl => slot_groups::riemann_generators(),
            TensorKind::Epsilon => slot_groups::epsilon_generators(4),
            TensorKind::Ricci | TensorKind::Metric => slot_groups::symmetric_pair_generators(),
            TensorKind::RicciScalar => Vec::new(),
        }
    }
}

/// Dimension and signature used by contractions and conversions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricContext {
    pub dimension: u32,
    /// Sign of the metric determinant.
    pub sigma: i8,
}

impl Default for MetricContext {
    fn default() -> Self {
        Self {
            dimension: 4,
            sigma: -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub label: String,
    pub up: bool,
}

impl Index {
    pub fn up(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            up: true,
        }
    }

    pub fn down(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            up: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub kind: TensorKind,
    pub indices: Vec<Index>,
}

impl Factor {
    pub fn new(kind: TensorKind, indices: Vec<Index>) -> Self {
        debug_assert_eq!(kind.rank(), indices.len());
        Self { kind, indices }
    }
}

/// `coeff · σ^sigma · Π factors`. The sign `σ` of the metric determinant is
/// kept symbolic; `σ² = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorMonomial {
    pub coeff: BigRational,
    pub sigma: bool,
    pub factors: Vec<Factor>,
}

impl TensorMonomial {
    pub fn new(coeff: BigRational, factors: Vec<Factor>) -> Self {
        Self {
            coeff,
            sigma: false,
            factors,
        }
    }

    pub fn constant(coeff: BigRational) -> Self {
        Self::new(coeff, Vec::new())
    }

    /// Occurrence count of every index label.
    pub fn label_counts(&self) -> HashMap<&str, usize> {
        let mut counts = HashMap::new();
        for f in &self.factors {
            for i in &f.indices {
                *counts.entry(i.label.as_str()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Labels occurring exactly once, in slot order.
    pub fn free_indices(&self) -> Vec<Index> {
        let counts = self.label_counts();
        self.factors
            .iter()
            .flat_map(|f| f.indices.iter())
            .filter(|i| counts[i.label.as_str()] == 1)
            .cloned()
            .collect()
    }

    /// Number of curvature factors (Riemann, Weyl, Ricci, scalar).
    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| {
                matches!(
                    f.kind,
                    TensorKind::Riemann | TensorKind::Weyl | TensorKind::Ricci | TensorKind::RicciScalar
                )
            })
            .count()
    }

    pub fn count(&self, kind: TensorKind) -> usize {
        self.factors.iter().filter(|f| f.kind == kind).count()
    }

    /// Renames labels that occur twice in `self` so that none collides with
    /// `avoid`. Free labels are left untouched.
    fn rename_dummies_apart(&mut self, avoid: &HashSet<String>) {
        let counts: HashMap<String, usize> = self
            .label_counts()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let mut used: HashSet<String> = avoid.clone();
        used.extend(counts.keys().cloned());
        let mut map: HashMap<String, String> = HashMap::new();
        let mut next = 0usize;
        for (label, &n) in &counts {
            if n == 2 && avoid.contains(label) {
                let fresh = loop {
                    next += 1;
                    let cand = format!("{label}_{next}");
                    if !used.contains(&cand) {
                        break cand;
                    }
                };
                used.insert(fresh.clone());
                map.insert(label.clone(), fresh);
            }
        }
        if map.is_empty() {
            return;
        }
        for f in &mut self.factors {
            for i in &mut f.indices {
                if let Some(new) = map.get(&i.label) {
                    i.label = new.clone();
                }
            }
        }
    }

    /// Product with dummies of `other` renamed away from the labels of `self`.
    pub fn mul(&self, other: &TensorMonomial) -> TensorMonomial {
        let mut rhs = other.clone();
        let mine: HashSet<String> = self.label_counts().keys().map(|s| s.to_string()).collect();
        let own_dummies: HashSet<String> = self
            .label_counts()
            .into_iter()
            .filter(|&(_, n)| n == 2)
            .map(|(k, _)| k.to_string())
            .collect();
        rhs.rename_dummies_apart(&mine);
        let mut out = self.clone();
        // Dummies of `self` must not capture free labels of `other`.
        let theirs: HashSet<String> = rhs
            .label_counts()
            .into_iter()
            .filter(|&(k, n)| n == 1 && own_dummies.contains(k))
            .map(|(k, _)| k.to_string())
            .collect();
        if !theirs.is_empty() {
            let mut all: HashSet<String> = rhs.label_counts().keys().map(|s| s.to_string()).collect();
            all.extend(mine.iter().cloned());
            out.rename_dummies_apart(&all);
        }
        out.coeff *= &rhs.coeff;
        out.sigma ^= rhs.sigma;
        out.factors.extend(rhs.factors);
        out
    }

    /// Renames dummies to `a, b, ...` in order of first appearance, with the
    /// first occurrence contravariant. Monomials with free indices are left
    /// unchanged.
    pub fn normalize_labels(&mut self) {
        if !self.free_indices().is_empty() {
            return;
        }
        let mut map: HashMap<String, String> = HashMap::new();
        for f in &mut self.factors {
            for i in &mut f.indices {
                let next = map.len();
                let first = !map.contains_key(&i.label);
                i.label = map.entry(i.label.clone()).or_insert_with(|| dummy_label(next)).clone();
                i.up = first;
            }
        }
    }

    /// Stable-sorts factors into canonical kind order.
    pub fn sort_factors(&mut self) {
        self.factors.sort_by_key(|f| f.kind);
    }
}

/// Generated label for the `k`-th dummy pair: `a..z`, then `a1, b1, ...`.
pub fn dummy_label(k: usize) -> String {
    let letter = (b'a' + (k % 26) as u8) as char;
    if k < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", k / 26)
    }
}

/// A sum of monomials; structurally equal monomials are merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorPolynomial {
    terms: BTreeMap<(bool, Vec<Factor>), BigRational>,
}

impl TensorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: TensorMonomial) -> Self {
        let mut p = Self::zero();
        p.add_monomial(m);
        p
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_monomial(TensorMonomial::constant(c))
    }

    pub fn add_monomial(&mut self, m: TensorMonomial) {
        if m.coeff.is_zero() {
            return;
        }
        let key = (m.sigma, m.factors);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *entry += m.coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &TensorPolynomial) {
        for m in other.monomials() {
            self.add_monomial(m);
        }
    }

    pub fn scale(&self, c: &BigRational) -> TensorPolynomial {
        let mut out = Self::zero();
        for m in self.monomials() {
            out.add_monomial(TensorMonomial {
                coeff: m.coeff * c,
                ..m
            });
        }
        out
    }

    pub fn mul(&self, other: &TensorPolynomial) -> TensorPolynomial {
        let mut out = Self::zero();
        for a in self.monomials() {
            for b in other.monomials() {
                out.add_monomial(a.mul(&b));
            }
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

    pub fn monomials(&self) -> impl Iterator<Item = TensorMonomial> + '_ {
        self.terms.iter().map(|((sigma, factors), c)| TensorMonomial {
            coeff: c.clone(),
            sigma: *sigma,
            factors: factors.clone(),
        })
    }

    /// Applies `f` to every monomial and sums the results.
    pub fn flat_map<E>(
        &self,
        mut f: impl FnMut(TensorMonomial) -> Result<TensorPolynomial, E>,
    ) -> Result<TensorPolynomial, E> {
        let mut out = Self::zero();
        for m in self.monomials() {
            out.add(&f(m)?);
        }
        Ok(out)
    }
}

impl FromIterator<TensorMonomial> for TensorPolynomial {
    fn from_iter<T: IntoIterator<Item = TensorMonomial>>(iter: T) -> Self {
        let mut p = Self::zero();
        for m in iter {
            p.add_monomial(m);
        }
        p
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == TensorKind::RicciScalar {
            return f.write_str("R");
        }
        write!(f, "{}[", self.kind.symbol())?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if !i.up {
                f.write_str("-")?;
            }
            f.write_str(&i.label)?;
        }
        f.write_str("]")
    }
}

/// Writes `coeff*sig*factors` with the sign left to the caller.
fn write_unsigned(f: &mut fmt::Formatter<'_>, m: &TensorMonomial) -> fmt::Result {
    let c = m.coeff.abs();
    let mut parts: Vec<String> = Vec::new();
    if !c.is_one() || (m.factors.is_empty() && !m.sigma) {
        parts.push(c.to_string());
    }
    if m.sigma {
        parts.push("sig".to_string());
    }
    parts.extend(m.factors.iter().map(|x| x.to_string()));
    f.write_str(&parts.join("*"))
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_negative() {
            f.write_str("-")?;
        }
        write_unsigned(f, self)
    }
}

impl fmt::Display for TensorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, m) in self.monomials().enumerate() {
            match (k, m.coeff.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_unsigned(f, &m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn product_renames_colliding_dummies() {
        let a = parse_expression("R[a,b,-a,-b]").unwrap();
        let p = a.mul(&a);
        let m = p.monomials().next().unwrap();
        assert_eq!(m.factors.len(), 2);
        assert!(m.label_counts().values().all(|&n| n == 2));
        assert_eq!(m.label_counts().len(), 4);
    }

    #[test]
    fn merging_cancels_terms() {
        let mut p = parse_expression("R[a,b,-a,-b]").unwrap();
        p.add(&p.scale(&q(-1)));
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn dummy_labels_are_distinct() {
        let labels: HashSet<String> = (0..200).map(dummy_label).collect();
        assert_eq!(labels.len(), 200);
    }
}
