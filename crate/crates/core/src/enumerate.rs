//! Canonical transversals of Riemann monomials per degree.
//!
//! Three enumeration strategies are available:
//!
//! * `Exhaustive` visits every perfect matching of the slots (skipping
//!   contractions inside an antisymmetric slot pair) and canonicalizes it.
//! * `Grow` inserts one more Riemann factor, in every possible way, into every
//!   class of the previous degree, vanishing classes included. Any monomial
//!   arises this way from the monomial left after deleting one of its factors
//!   and reconnecting the dangling contractions, so the result is complete.
//! * `Random` builds monomials as products of random insertion walks from the
//!   empty network and stops once no new class has appeared for a saturation
//!   window.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{InvarError, Result};
use crate::invariant::{InvariantId, InvariantKind};
use crate::tensor::{Canonicalizer, Configuration, TensorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Grow,
    Random,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "grow" => Ok(Mode::Grow),
            "random" | "randomized" => Ok(Mode::Random),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub mode: Mode,
    pub seed: u64,
    /// Largest slot count accepted by exhaustive mode.
    pub slot_budget: usize,
    /// Random mode stops after `window_factor × |T|` samples without a new
    /// class (but never before `min_window`).
    pub window_factor: u64,
    pub min_window: u64,
    pub max_samples: u64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Exhaustive,
            seed: 1,
            slot_budget: 16,
            window_factor: 1000,
            min_window: 1000,
            max_samples: 50_000_000,
        }
    }
}

impl EnumerateOptions {
    pub fn with_mode(mode: Mode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalEntry {
    pub config: Configuration,
    pub product_reducible: bool,
}

/// Canonical representatives of the non-vanishing classes of one kind and
/// degree, sorted by their slot-to-name sequence; `r` is the 1-based
/// position.
#[derive(Clone, Debug)]
pub struct Transversal {
    pub kind: InvariantKind,
    pub degree: u16,
    pub entries: Vec<TransversalEntry>,
    /// Unsigned canonical forms of vanishing classes, when known.
    pub zero_classes: Vec<Configuration>,
    /// Number of monomials generated.
    pub samples: u64,
    index: HashMap<Vec<u16>, u32>,
}

pub fn kinds_for(kind: InvariantKind, degree: usize) -> Vec<TensorKind> {
    let mut kinds = Vec::with_capacity(degree + 1);
    if kind == InvariantKind::D {
        kinds.push(TensorKind::Epsilon);
    }
    kinds.extend(std::iter::repeat_n(TensorKind::Riemann, degree));
    kinds
}

impl Transversal {
    pub fn from_configs(
        kind: InvariantKind,
        degree: u16,
        configs: impl IntoIterator<Item = Configuration>,
        zero_classes: Vec<Configuration>,
        samples: u64,
    ) -> Self {
        let set: BTreeSet<Configuration> = configs.into_iter().collect();
        let entries: Vec<TransversalEntry> = set
            .into_iter()
            .map(|config| TransversalEntry {
                product_reducible: !config.is_connected(),
                config,
            })
            .collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(k, e)| (e.config.names.clone(), k as u32 + 1))
            .collect();
        Self {
            kind,
            degree,
            entries,
            zero_classes,
            samples,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry with 1-based rank `r`.
    pub fn get(&self, r: u32) -> Option<&TransversalEntry> {
        self.entries.get((r as usize).checked_sub(1)?)
    }

    /// Rank of a canonical configuration.
    pub fn rank_of(&self, c: &Configuration) -> Option<u32> {
        self.index.get(&c.names).copied()
    }

    pub fn id(&self, r: u32) -> InvariantId {
        InvariantId::new(self.kind, self.degree, r)
    }

    pub fn ids(&self) -> impl Iterator<Item = InvariantId> + '_ {
        (1..=self.entries.len() as u32).map(|r| self.id(r))
    }

    pub fn is_product_reducible(&self, r: u32) -> bool {
        self.get(r).is_some_and(|e| e.product_reducible)
    }

    pub fn irreducible_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.product_reducible).count()
    }

    /// `<Id> <cycles> <0|1>` per entry.
    pub fn lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, e)| {
                format!(
                    "{} {} {}",
                    self.id(k as u32 + 1),
                    e.config.to_permutation(),
                    e.product_reducible as u8
                )
            })
            .collect()
    }
}

/// Number of algebraically independent scalar invariants of the Riemann
/// tensor in dimension `d`: `(d+3)d(d-1)(d-2)/12`.
pub fn invariant_component_count(d: u32) -> Result<u64> {
    if d < 3 {
        return Err(InvarError::Dimension(d));
    }
    let d = d as u64;
    Ok((d + 3) * d * (d - 1) * (d - 2) / 12)
}

/// Independent components of the Riemann tensor: `d²(d²-1)/12`.
pub fn riemann_component_count(d: u32) -> u64 {
    let d2 = (d as u64) * (d as u64);
    d2 * (d2.saturating_sub(1)) / 12
}

/// Number of perfect matchings on `n` points.
pub fn pairing_count(n: usize) -> BigUint {
    (1..n)
        .step_by(2)
        .fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

pub fn enumerate_transversal(
    can: &Canonicalizer,
    kind: InvariantKind,
    degree: usize,
    opts: &EnumerateOptions,
) -> Result<Transversal> {
    match opts.mode {
        Mode::Exhaustive => exhaustive(can, kind, degree, opts.slot_budget, true),
        Mode::Grow => grow(can, kind, degree, opts.slot_budget),
        Mode::Random => random(can, kind, degree, opts),
    }
}

/// Slot pairs that would contract an antisymmetric pair of one factor.
fn forbidden_pairs(kinds: &[TensorKind]) -> Vec<Vec<bool>> {
    let n: usize = kinds.iter().map(|k| k.rank()).sum();
    let mut forbid = vec![vec![false; n]; n];
    let mut o = 0;
    for k in kinds {
        match k {
            TensorKind::Riemann | TensorKind::Weyl => {
                for (a, b) in [(0, 1), (2, 3)] {
                    forbid[o + a][o + b] = true;
                    forbid[o + b][o + a] = true;
                }
            }
            TensorKind::Epsilon => {
                for a in 0..4 {
                    for b in 0..4 {
                        forbid[o + a][o + b] = a != b;
                    }
                }
            }
            _ => {}
        }
        o += k.rank();
    }
    forbid
}

#[derive(Default)]
struct ClassSets {
    nonzero: BTreeSet<Configuration>,
    zero: BTreeSet<Configuration>,
    samples: u64,
}

impl ClassSets {
    fn insert(&mut self, can: &Canonicalizer, c: &Configuration) {
        self.samples += 1;
        let f = can.canonicalize(c);
        if f.zero {
            self.zero.insert(f.config);
        } else {
            self.nonzero.insert(f.config);
        }
    }

    fn merge(mut self, other: ClassSets) -> ClassSets {
        if self.nonzero.len() < other.nonzero.len() {
            return other.merge(self);
        }
        self.nonzero.extend(other.nonzero);
        self.zero.extend(other.zero);
        self.samples += other.samples;
        self
    }

    fn into_transversal(self, kind: InvariantKind, degree: usize) -> Transversal {
        Transversal::from_configs(
            kind,
            degree as u16,
            self.nonzero,
            self.zero.into_iter().collect(),
            self.samples,
        )
    }
}

/// With `prune`, matchings that contract an antisymmetric slot pair are
/// skipped, so the recorded vanishing classes are incomplete.
fn exhaustive(
    can: &Canonicalizer,
    kind: InvariantKind,
    degree: usize,
    budget: usize,
    prune: bool,
) -> Result<Transversal> {
    let kinds = kinds_for(kind, degree);
    let n: usize = kinds.iter().map(|k| k.rank()).sum();
    if n > budget {
        return Err(InvarError::Budget(format!(
            "{n} slots exceed the exhaustive budget of {budget} ({} matchings)",
            pairing_count(n)
        )));
    }
    let forbid = if prune {
        forbidden_pairs(&kinds)
    } else {
        vec![vec![false; n]; n]
    };
    const FREE: u16 = u16::MAX;

    fn first_free(names: &[u16]) -> Option<usize> {
        names.iter().position(|&x| x == FREE)
    }

    fn rec(
        names: &mut Vec<u16>,
        next: u16,
        forbid: &[Vec<bool>],
        kinds: &[TensorKind],
        can: &Canonicalizer,
        out: &mut ClassSets,
    ) {
        let Some(s) = first_free(names) else {
            out.insert(can, &Configuration::new(kinds.to_vec(), names.clone()));
            return;
        };
        names[s] = next;
        for t in s + 1..names.len() {
            if names[t] == FREE && !forbid[s][t] {
                names[t] = next + 1;
                rec(names, next + 2, forbid, kinds, can, out);
                names[t] = FREE;
            }
        }
        names[s] = FREE;
    }

    // Split the search over the partners of the first two slots.
    let mut prefixes: Vec<Vec<u16>> = Vec::new();
    if n == 0 {
        prefixes.push(Vec::new());
    } else {
        let mut names = vec![FREE; n];
        names[0] = 0;
        for t in 1..n {
            if forbid[0][t] {
                continue;
            }
            names[t] = 1;
            match first_free(&names) {
                None => prefixes.push(names.clone()),
                Some(s) => {
                    names[s] = 2;
                    for u in s + 1..n {
                        if names[u] == FREE && !forbid[s][u] {
                            names[u] = 3;
                            prefixes.push(names.clone());
                            names[u] = FREE;
                        }
                    }
                    names[s] = FREE;
                }
            }
            names[t] = FREE;
        }
    }
    let sets = prefixes
        .into_par_iter()
        .map(|mut names| {
            let mut out = ClassSets::default();
            let next = 2 * names.iter().filter(|&&x| x != FREE).count() as u16 / 2;
            rec(&mut names, next, &forbid, &kinds, can, &mut out);
            out
        })
        .reduce(ClassSets::default, ClassSets::merge);
    Ok(sets.into_transversal(kind, degree))
}

/// Slot partner array of a configuration.
fn partners(c: &Configuration) -> Vec<u16> {
    let pos = c.positions();
    c.names.iter().map(|&x| pos[(x ^ 1) as usize]).collect()
}

fn from_partners(kinds: Vec<TensorKind>, partner: &[u16]) -> Configuration {
    const FREE: u16 = u16::MAX;
    let mut names = vec![FREE; partner.len()];
    let mut next = 0;
    for s in 0..partner.len() {
        if names[s] == FREE {
            names[s] = next;
            names[partner[s] as usize] = next + 1;
            next += 2;
        }
    }
    Configuration::new(kinds, names)
}

/// Every way of attaching a new rank-4 factor, appended after the existing
/// slots, to the contraction network `partner`.
fn insertions(partner: &[u16]) -> Vec<Vec<u16>> {
    let m = partner.len() as u16;
    let fresh = [m, m + 1, m + 2, m + 3];
    let edges: Vec<(u16, u16)> = (0..m)
        .filter(|&u| u < partner[u as usize])
        .map(|u| (u, partner[u as usize]))
        .collect();
    let mut out = Vec::new();
    let link = |p: &mut Vec<u16>, a: u16, b: u16| {
        p[a as usize] = b;
        p[b as usize] = a;
    };
    let mut base = partner.to_vec();
    base.extend_from_slice(&[0; 4]);
    for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let mut p = base.clone();
        link(&mut p, fresh[a], fresh[b]);
        link(&mut p, fresh[c], fresh[d]);
        out.push(p);
    }
    for &(u, v) in &edges {
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
                let mut p = base.clone();
                link(&mut p, u, fresh[i]);
                link(&mut p, v, fresh[j]);
                link(&mut p, fresh[rest[0]], fresh[rest[1]]);
                out.push(p);
            }
        }
    }
    for (x, &(u1, v1)) in edges.iter().enumerate() {
        for &(u2, v2) in &edges[x + 1..] {
            for perm in crate::tensor::permutations(4) {
                let pi = perm.0;
                let mut p = base.clone();
                link(&mut p, u1, fresh[pi[0]]);
                link(&mut p, v1, fresh[pi[1]]);
                link(&mut p, u2, fresh[pi[2]]);
                link(&mut p, v2, fresh[pi[3]]);
                out.push(p);
            }
        }
    }
    out
}

fn grow(can: &Canonicalizer, kind: InvariantKind, degree: usize, budget: usize) -> Result<Transversal> {
    if degree <= 1 {
        return exhaustive(can, kind, degree, budget.max(8), false);
    }
    let lower = grow(can, kind, degree - 1, budget)?;
    let classes: Vec<&Configuration> = lower
        .entries
        .iter()
        .map(|e| &e.config)
        .chain(lower.zero_classes.iter())
        .collect();
    let kinds = kinds_for(kind, degree);
    let sets = classes
        .into_par_iter()
        .map(|c| {
            let mut out = ClassSets::default();
            for p in insertions(&partners(c)) {
                out.insert(can, &from_partners(kinds.clone(), &p));
            }
            out
        })
        .reduce(ClassSets::default, ClassSets::merge);
    Ok(sets.into_transversal(kind, degree))
}

/// Partner array of a random product of insertion walks: the degree is split
/// recursively at random so that products of large components are not rare.
fn random_partners(degree: usize, rng: &mut ChaCha8Rng) -> Vec<u16> {
    if degree >= 2 && rng.gen_bool(0.25) {
        let k = rng.gen_range(1..degree);
        let mut p = random_partners(k, rng);
        let shift = p.len() as u16;
        p.extend(random_partners(degree - k, rng).into_iter().map(|t| t + shift));
        return p;
    }
    let mut partner: Vec<u16> = Vec::new();
    for _ in 0..degree {
        let pairs = partner.len() / 2;
        let kind_of_insert = rng.gen_range(0..=pairs.min(2)) as u8;
        partner = insert_random(&partner, kind_of_insert, rng);
    }
    partner
}

/// One random monomial: a product of random insertion walks, followed for
/// duals by attaching ε to two random contractions.
fn random_sample(kind: InvariantKind, degree: usize, rng: &mut ChaCha8Rng) -> Configuration {
    let partner = random_partners(degree, rng);
    if kind == InvariantKind::D {
        // Attach ε through two distinct contractions, placing it first.
        let p = insert_random(&partner, 2, rng);
        let m = partner.len();
        let relabel = |s: u16| -> u16 {
            if (s as usize) >= m {
                s - m as u16
            } else {
                s + 4
            }
        };
        let mut q = vec![0u16; m + 4];
        for (s, &t) in p.iter().enumerate() {
            q[relabel(s as u16) as usize] = relabel(t);
        }
        return from_partners(kinds_for(kind, degree), &q);
    }
    from_partners(kinds_for(kind, degree), &partner)
}

/// Random insertion of a new 4-slot factor cutting `cut` contractions.
fn insert_random(partner: &[u16], cut: u8, rng: &mut ChaCha8Rng) -> Vec<u16> {
    let m = partner.len() as u16;
    let mut fresh = [m, m + 1, m + 2, m + 3];
    // A uniform shuffle of the new slots covers every attachment pattern.
    for i in (1..4).rev() {
        let j = rng.gen_range(0..=i);
        fresh.swap(i, j);
    }
    let mut p = partner.to_vec();
    p.extend_from_slice(&[0; 4]);
    let mut link = |a: u16, b: u16| {
        p[a as usize] = b;
        p[b as usize] = a;
    };
    let edges: Vec<(u16, u16)> = (0..m)
        .filter(|&u| u < partner[u as usize])
        .map(|u| (u, partner[u as usize]))
        .collect();
    match cut {
        0 => {
            link(fresh[0], fresh[1]);
            link(fresh[2], fresh[3]);
        }
        1 => {
            let (u, v) = edges[rng.gen_range(0..edges.len())];
            link(u, fresh[0]);
            link(v, fresh[1]);
            link(fresh[2], fresh[3]);
        }
        _ => {
            let a = rng.gen_range(0..edges.len());
            let (ua, va) = edges[a];
            let factor = |x: u16| x / 4;
            // Edges joining the same two factors as edge `a`, oriented alike.
            let parallel: Vec<(u16, u16)> = edges
                .iter()
                .enumerate()
                .filter(|&(e, _)| e != a)
                .filter_map(|(_, &(u, v))| {
                    if factor(u) == factor(ua) && factor(v) == factor(va) {
                        Some((u, v))
                    } else if factor(v) == factor(ua) && factor(u) == factor(va) {
                        Some((v, u))
                    } else {
                        None
                    }
                })
                .collect();
            if !parallel.is_empty() && rng.gen_bool(0.5) {
                // Pair insertion: both cut edges enter one antisymmetric pair
                // on each side of the new factor.
                let (u2, v2) = parallel[rng.gen_range(0..parallel.len())];
                let (x, y) = if rng.gen_bool(0.5) { (m, m + 2) } else { (m + 2, m) };
                link(ua, x);
                link(u2, x + 1);
                link(va, y);
                link(v2, y + 1);
                return p;
            }
            let mut b = rng.gen_range(0..edges.len() - 1);
            if b >= a {
                b += 1;
            }
            let (u1, v1) = edges[a];
            let (u2, v2) = edges[b];
            link(u1, fresh[0]);
            link(v1, fresh[1]);
            link(u2, fresh[2]);
            link(v2, fresh[3]);
        }
    }
    p
}

const BATCH: u64 = 512;

fn random(can: &Canonicalizer, kind: InvariantKind, degree: usize, opts: &EnumerateOptions) -> Result<Transversal> {
    if degree == 0 {
        return exhaustive(can, kind, 0, 0, true);
    }
    let mut found: BTreeSet<Configuration> = BTreeSet::new();
    let mut zero: BTreeSet<Configuration> = BTreeSet::new();
    let mut since_new = 0u64;
    let mut total = 0u64;
    loop {
        let results: Vec<_> = (total..total + BATCH)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(i);
                can.canonicalize(&random_sample(kind, degree, &mut rng))
            })
            .collect();
        for f in results {
            total += 1;
            let novel = if f.zero {
                zero.insert(f.config);
                false
            } else {
                found.insert(f.config)
            };
            since_new = if novel { 0 } else { since_new + 1 };
            let window = (opts.window_factor * found.len() as u64).max(opts.min_window);
            if since_new >= window {
                return Ok(Transversal::from_configs(
                    kind,
                    degree as u16,
                    found,
                    zero.into_iter().collect(),
                    total,
                ));
            }
        }
        if total >= opts.max_samples {
            return Err(InvarError::Saturation(total));
        }
    }
}
