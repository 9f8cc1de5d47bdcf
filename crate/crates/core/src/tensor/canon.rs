//! Index configurations of fully contracted monomials and their canonical
//! forms.
//!
//! A configuration lists the factor kinds in canonical order and, for every
//! slot, the name of the index it carries. Names come in pairs `(2k, 2k+1)`,
//! one pair per contraction. Variance is not recorded: every contraction is
//! an up/down pair after inserting metrics, so it carries no sign.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_rational::BigRational;
use num_traits::One;

use super::{dummy_label, Factor, Index, TensorKind, TensorMonomial, TensorPolynomial};
use crate::error::{InvarError, Result};
use crate::permgroup::slot_groups::{block_swap, shift};
use crate::permgroup::{dummy_pair_group, min_over_slot_group, PermGroup, SignedPermutation};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub kinds: Vec<TensorKind>,
    pub names: Vec<u16>,
}

const UNSET: u16 = u16::MAX;

/// Renames so that names appear in increasing pair order along the slots.
pub(crate) fn greedy_rename(names: &[u16]) -> Vec<u16> {
    let mut map = vec![UNSET; names.len()];
    let mut next = 0u16;
    names
        .iter()
        .map(|&x| {
            if map[x as usize] == UNSET {
                map[x as usize] = next;
                map[(x ^ 1) as usize] = next + 1;
                next += 2;
            }
            map[x as usize]
        })
        .collect()
}

impl Configuration {
    pub fn new(kinds: Vec<TensorKind>, names: Vec<u16>) -> Self {
        debug_assert_eq!(kinds.iter().map(|k| k.rank()).sum::<usize>(), names.len());
        Self { kinds, names }
    }

    /// Builds the configuration of a scalar monomial. Factors are stably
    /// sorted into kind order; labels become pair names in order of first
    /// appearance.
    pub fn from_monomial(m: &TensorMonomial) -> Result<Self> {
        let mut factors: Vec<&Factor> = m.factors.iter().collect();
        factors.sort_by_key(|f| f.kind);
        let mut names = Vec::new();
        let mut seen: HashMap<&str, (u16, bool)> = HashMap::new();
        let mut next = 0u16;
        for f in &factors {
            for i in &f.indices {
                match seen.get_mut(i.label.as_str()) {
                    Some((name, closed)) if !*closed => {
                        *closed = true;
                        names.push(*name + 1);
                    }
                    Some(_) => return Err(InvarError::FreeIndex(i.label.clone())),
                    None => {
                        seen.insert(&i.label, (next, false));
                        names.push(next);
                        next += 2;
                    }
                }
            }
        }
        if let Some((label, _)) = seen.iter().find(|(_, (_, closed))| !closed) {
            return Err(InvarError::FreeIndex(label.to_string()));
        }
        Ok(Self {
            kinds: factors.iter().map(|f| f.kind).collect(),
            names,
        })
    }

    /// Monomial with labels `a, b, ...`; the first slot of each pair is
    /// contravariant.
    pub fn to_monomial(&self, coeff: BigRational, sigma: bool) -> TensorMonomial {
        let renamed = greedy_rename(&self.names);
        let mut slot = 0;
        let factors = self
            .kinds
            .iter()
            .map(|&kind| {
                let indices = (0..kind.rank())
                    .map(|_| {
                        let name = renamed[slot];
                        slot += 1;
                        Index {
                            label: dummy_label(name as usize / 2),
                            up: name.is_multiple_of(2),
                        }
                    })
                    .collect();
                Factor { kind, indices }
            })
            .collect();
        TensorMonomial { coeff, sigma, factors }
    }

    pub fn slot_count(&self) -> usize {
        self.names.len()
    }

    pub fn pair_count(&self) -> usize {
        self.names.len() / 2
    }

    /// First slot of every factor.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.kinds.len());
        let mut acc = 0;
        for k in &self.kinds {
            out.push(acc);
            acc += k.rank();
        }
        out
    }

    /// Curvature factors (everything except ε and the metric).
    pub fn degree(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| !matches!(k, TensorKind::Epsilon | TensorKind::Metric))
            .count()
    }

    pub fn epsilon_count(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == TensorKind::Epsilon).count()
    }

    /// Slot position of every name.
    pub fn positions(&self) -> Vec<u16> {
        let mut pos = vec![0u16; self.names.len()];
        for (slot, &name) in self.names.iter().enumerate() {
            pos[name as usize] = slot as u16;
        }
        pos
    }

    /// The slot-to-name map as a permutation.
    pub fn to_permutation(&self) -> SignedPermutation {
        SignedPermutation::from_images_unchecked(self.names.clone(), false)
    }

    fn factor_of_slots(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.names.len());
        for (f, k) in self.kinds.iter().enumerate() {
            out.extend(std::iter::repeat_n(f, k.rank()));
        }
        out
    }

    /// Factor indices of each connected component of the contraction graph,
    /// in order of their first factor.
    pub fn component_factors(&self) -> Vec<Vec<usize>> {
        let n = self.kinds.len();
        let owner = self.factor_of_slots();
        let pos = self.positions();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for (slot, &name) in self.names.iter().enumerate() {
            let other = pos[(name ^ 1) as usize] as usize;
            let (a, b) = (find(&mut parent, owner[slot]), find(&mut parent, owner[other]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<usize, usize> = HashMap::new();
        for f in 0..n {
            let r = find(&mut parent, f);
            let g = *index.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(f);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.component_factors().len() <= 1
    }

    /// Sub-configuration made of the given factors, renamed greedily.
    pub fn restrict(&self, factors: &[usize]) -> Configuration {
        let offsets = self.offsets();
        let mut kinds = Vec::with_capacity(factors.len());
        let mut names = Vec::new();
        for &f in factors {
            kinds.push(self.kinds[f]);
            let o = offsets[f];
            names.extend_from_slice(&self.names[o..o + self.kinds[f].rank()]);
        }
        let mut sorted: Vec<u16> = names.clone();
        sorted.sort_unstable();
        // Compress the pair indices before the greedy pass.
        let mut pair_map: HashMap<u16, u16> = HashMap::new();
        for x in sorted {
            let len = pair_map.len() as u16;
            pair_map.entry(x / 2).or_insert(len);
        }
        let names: Vec<u16> = names.iter().map(|&x| 2 * pair_map[&(x / 2)] + (x & 1)).collect();
        Configuration {
            kinds,
            names: greedy_rename(&names),
        }
    }

    /// Connected components as standalone configurations.
    pub fn components(&self) -> Vec<Configuration> {
        self.component_factors().iter().map(|fs| self.restrict(fs)).collect()
    }

    /// Concatenates configurations (factor order as given).
    pub fn concat(parts: &[Configuration]) -> Configuration {
        let mut kinds = Vec::new();
        let mut names = Vec::new();
        for p in parts {
            let offset = names.len() as u16;
            kinds.extend_from_slice(&p.kinds);
            names.extend(p.names.iter().map(|&x| x + offset));
        }
        Configuration { kinds, names }
    }

    /// Reorders factors stably into kind order and renames greedily.
    fn sorted_by_kind(&self) -> Configuration {
        if self.kinds.windows(2).all(|w| w[0] <= w[1]) {
            return Configuration {
                kinds: self.kinds.clone(),
                names: greedy_rename(&self.names),
            };
        }
        let mut order: Vec<usize> = (0..self.kinds.len()).collect();
        order.sort_by_key(|&f| self.kinds[f]);
        let offsets = self.offsets();
        let mut kinds = Vec::new();
        let mut names = Vec::new();
        for f in order {
            kinds.push(self.kinds[f]);
            names.extend_from_slice(&self.names[offsets[f]..offsets[f] + self.kinds[f].rank()]);
        }
        Configuration {
            kinds,
            names: greedy_rename(&names),
        }
    }
}

/// Outcome of canonicalization. For vanishing configurations `config` still
/// holds the unsigned canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonForm {
    pub config: Configuration,
    pub negative: bool,
    pub zero: bool,
}

/// Canonicalizes configurations, caching one slot-symmetry group per list of
/// factor kinds. Cheap to share between threads.
#[derive(Default)]
pub struct Canonicalizer {
    groups: RwLock<HashMap<Vec<TensorKind>, Arc<PermGroup>>>,
}

impl Canonicalizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Slot symmetries of the factors plus exchanges of adjacent identical
    /// factors, with a stabilizer chain based on `0, 1, ..., n-1`.
    pub fn slot_group(&self, kinds: &[TensorKind]) -> Arc<PermGroup> {
        if let Some(g) = self.groups.read().unwrap().get(kinds) {
            return g.clone();
        }
        let n: usize = kinds.iter().map(|k| k.rank()).sum();
        let mut gens = Vec::new();
        let mut offset = 0u16;
        for (i, k) in kinds.iter().enumerate() {
            for g in k.slot_generators() {
                gens.push(shift(&g, offset, n));
            }
            let r = k.rank() as u16;
            if r > 0 && kinds.get(i + 1) == Some(k) {
                gens.push(block_swap(n, offset, offset + r, r));
            }
            offset += r;
        }
        let base: Vec<u16> = (0..n as u16).collect();
        let group = Arc::new(PermGroup::with_base(n, gens, &base).expect("consistent degree"));
        self.groups
            .write()
            .unwrap()
            .entry(kinds.to_vec())
            .or_insert(group)
            .clone()
    }

    /// The configuration as a double-coset problem `(g, S, D)`.
    pub fn coset_problem(&self, c: &Configuration) -> (SignedPermutation, Arc<PermGroup>, PermGroup) {
        (
            c.to_permutation(),
            self.slot_group(&c.kinds),
            dummy_pair_group(c.pair_count()),
        )
    }

    fn canonicalize_connected(&self, c: &Configuration) -> CanonForm {
        if c.names.is_empty() {
            return CanonForm {
                config: c.clone(),
                negative: false,
                zero: false,
            };
        }
        let group = self.slot_group(&c.kinds);
        let canon = min_over_slot_group(&c.to_permutation(), &group);
        CanonForm {
            config: Configuration {
                kinds: c.kinds.clone(),
                names: canon.names,
            },
            negative: canon.negative,
            zero: canon.zero,
        }
    }

    /// Canonical form: connected components are canonicalized separately,
    /// sorted, concatenated and brought back into kind order.
    pub fn canonicalize(&self, c: &Configuration) -> CanonForm {
        let comps = c.component_factors();
        if comps.len() <= 1 {
            return self.canonicalize_connected(c);
        }
        let mut parts: Vec<CanonForm> = comps
            .iter()
            .map(|fs| self.canonicalize_connected(&c.restrict(fs)))
            .collect();
        parts.sort_by(|a, b| a.config.cmp(&b.config));
        let negative = parts.iter().fold(false, |acc, p| acc ^ p.negative);
        let zero = parts.iter().any(|p| p.zero);
        let configs: Vec<Configuration> = parts.into_iter().map(|p| p.config).collect();
        CanonForm {
            config: Configuration::concat(&configs).sorted_by_kind(),
            negative,
            zero,
        }
    }

    /// Canonical monomial, or `None` if it vanishes by its permutation
    /// symmetries. Metric factors should be contracted beforehand.
    pub fn canonicalize_monomial(&self, m: &TensorMonomial) -> Result<Option<TensorMonomial>> {
        let c = Configuration::from_monomial(m)?;
        let f = self.canonicalize(&c);
        if f.zero {
            return Ok(None);
        }
        let coeff = if f.negative { -m.coeff.clone() } else { m.coeff.clone() };
        Ok(Some(f.config.to_monomial(coeff, m.sigma)))
    }
}

impl Canonicalizer {
    /// Canonicalizes every monomial and merges equal terms.
    pub fn canonicalize_polynomial(&self, p: &TensorPolynomial) -> Result<TensorPolynomial> {
        let mut out = TensorPolynomial::zero();
        for m in p.monomials() {
            if let Some(c) = self.canonicalize_monomial(&m)? {
                out.add_monomial(c);
            }
        }
        Ok(out)
    }
}

impl Configuration {
    /// Monomial with coefficient one.
    pub fn to_unit_monomial(&self) -> TensorMonomial {
        self.to_monomial(BigRational::one(), false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{brute_force_double_coset_rep, CosetRep};
    use crate::tensor::parse_expression;

    fn config(text: &str) -> Configuration {
        let p = parse_expression(text).unwrap();
        let m = p.monomials().next().unwrap();
        Configuration::from_monomial(&m).unwrap()
    }

    #[test]
    fn greedy_naming() {
        let c = config("R[a,b,-a,-b]");
        assert_eq!(c.names, vec![0, 2, 1, 3]);
        assert_eq!(greedy_rename(&[3, 0, 2, 1]), vec![0, 2, 1, 3]);
    }

    #[test]
    fn dummy_rename_and_reorder_invariance() {
        let can = Canonicalizer::new();
        let a = config("R[a,b,-a,c]*R[-b,d,-d,e]*R[-c,f,-e,-f]");
        let b = config("R[-y,u,-v,-u]*R[x,w,-x,y]*R[-w,z,-z,v]");
        let fa = can.canonicalize(&a);
        let fb = can.canonicalize(&b);
        assert_eq!(fa.config, fb.config);
        assert!(!fa.zero);
    }

    #[test]
    fn connected_form_is_the_double_coset_minimum() {
        let can = Canonicalizer::new();
        for text in [
            "R[a,b,-a,c]*R[-b,d,-d,-c]",
            "R[a,b,c,d]*R[-a,-b,-c,-d]",
            "R[a,b,c,d]*R[-a,-c,-b,-d]",
            "epsilon[a,b,c,d]*R[-a,-b,e,f]*R[-c,-d,-e,-f]",
        ] {
            let c = config(text);
            let f = can.canonicalize(&c);
            let (g, s, d) = can.coset_problem(&c);
            match brute_force_double_coset_rep(&g, &s, &d) {
                CosetRep::Zero => assert!(f.zero),
                CosetRep::Rep(r) => {
                    assert_eq!(r.images(), f.config.names.as_slice());
                    assert_eq!(r.is_negative(), f.negative);
                }
            }
        }
    }

    #[test]
    fn product_components_are_sorted() {
        let can = Canonicalizer::new();
        let a = can.canonicalize(&config("R[a,b,-a,-b]*R[c,d,e,f]*R[-c,-d,-e,-f]"));
        let b = can.canonicalize(&config("R[c,d,e,f]*R[-c,-d,-e,-f]*R[a,b,-a,-b]"));
        assert_eq!(a, b);
        let comps = a.config.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(Configuration::concat(&comps), a.config);
    }

    #[test]
    fn round_trip_through_monomial() {
        let can = Canonicalizer::new();
        let c = can.canonicalize(&config("R[a,b,-a,c]*R[-b,d,-d,-c]")).config;
        let m = c.to_unit_monomial();
        assert_eq!(Configuration::from_monomial(&m).unwrap(), c);
    }
}
