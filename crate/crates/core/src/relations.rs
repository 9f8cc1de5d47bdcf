//! Relations among canonical invariants and their reduction to syzygies.
//!
//! * Level B: the cyclic identity `R_abcd + R_acdb + R_adbc = 0` applied to
//!   one factor of a connected invariant.
//! * Level C: in dimension 4 every antisymmetrization over five indices
//!   vanishes. Cutting five contractions of an invariant and reconnecting
//!   the upper ends to the lower ends through every permutation, weighted by
//!   its sign, gives a vanishing sum of 120 invariants.
//! * Level D: the product of two ε tensors is `σ` times the determinant of
//!   Kronecker deltas, which rewrites a product of two dual invariants as a
//!   non-dual polynomial.
//!
//! Every (kind, degree, level) table is the reduced row echelon form of all
//! relations among monomials of that degree in the level-B basis invariants:
//! the new relations of the level together with lower-degree relations
//! multiplied by basis invariants. Normal forms are therefore unique.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::database::SyzygyDatabase;
use crate::enumerate::{enumerate_transversal, EnumerateOptions, Mode, Transversal};
use crate::error::{InvarError, Result};
use crate::invariant::{InvariantId, InvariantKind, InvariantMonomial, InvariantPolynomial};
use crate::linalg::{Echelon, ModpEchelon, SparseRow};
use crate::tensor::{permutations, Canonicalizer, Configuration, TensorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelLevel {
    B,
    C,
    D,
}

impl RelLevel {
    pub const ALL: [RelLevel; 3] = [RelLevel::B, RelLevel::C, RelLevel::D];

    /// Simplification level at which these relations start to apply.
    pub fn simplification_level(self) -> u8 {
        match self {
            RelLevel::B => 2,
            RelLevel::C => 3,
            RelLevel::D => 4,
        }
    }

    pub fn from_simplification_level(level: u8) -> Option<RelLevel> {
        match level {
            2 => Some(RelLevel::B),
            3 => Some(RelLevel::C),
            4 => Some(RelLevel::D),
            _ => None,
        }
    }
}

impl fmt::Display for RelLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelLevel::B => "B",
            RelLevel::C => "C",
            RelLevel::D => "D",
        })
    }
}

impl FromStr for RelLevel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "B" => Ok(RelLevel::B),
            "C" => Ok(RelLevel::C),
            "D" => Ok(RelLevel::D),
            _ => Err(format!("unknown relation level `{s}`")),
        }
    }
}

/// `head = rhs`, with `head` greater than every monomial of `rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syzygy {
    pub level: RelLevel,
    pub head: InvariantMonomial,
    pub rhs: InvariantPolynomial,
    /// Oracle certification result, when checked.
    pub certified: Option<bool>,
}

impl Syzygy {
    /// `head − rhs`, which vanishes identically.
    pub fn relation(&self) -> InvariantPolynomial {
        InvariantPolynomial::monomial(self.head.clone()).sub(&self.rhs)
    }
}

impl fmt::Display for Syzygy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.head, self.rhs)
    }
}

/// Exact reduced echelon form of relations over a fixed set of monomial
/// columns ordered by the elimination order.
#[derive(Clone, Debug, Default)]
pub struct Table {
    columns: Vec<InvariantMonomial>,
    index: HashMap<InvariantMonomial, usize>,
    echelon: Echelon,
    screen: ModpEchelon,
}

impl Table {
    pub fn with_columns(columns: impl IntoIterator<Item = InvariantMonomial>) -> Self {
        let mut columns: Vec<InvariantMonomial> = columns.into_iter().collect();
        columns.sort();
        columns.dedup();
        let index = columns.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        Self {
            columns,
            index,
            echelon: Echelon::new(),
            screen: ModpEchelon::default(),
        }
    }

    /// Table spanned by the given relations, fully reduced.
    pub fn from_relations(relations: &[InvariantPolynomial]) -> Result<Self> {
        Self::from_relations_over(Vec::new(), relations)
    }

    /// As `from_relations`, with extra columns.
    pub fn from_relations_over(columns: Vec<InvariantMonomial>, relations: &[InvariantPolynomial]) -> Result<Self> {
        let mut t = Self::with_columns(
            columns
                .into_iter()
                .chain(relations.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone()))),
        );
        for p in relations {
            t.insert_exact(p)?;
        }
        t.finish()?;
        Ok(t)
    }

    pub fn columns(&self) -> &[InvariantMonomial] {
        &self.columns
    }

    pub fn row(&self, p: &InvariantPolynomial) -> Result<SparseRow> {
        let mut entries = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let k = self
                .index
                .get(m)
                .ok_or_else(|| InvarError::Inconsistent(format!("monomial {m} outside the table")))?;
            entries.push((*k, c.clone()));
        }
        Ok(SparseRow::from_entries(entries))
    }

    pub fn poly(&self, r: &SparseRow) -> InvariantPolynomial {
        let mut p = InvariantPolynomial::zero();
        for (k, c) in r.entries() {
            p.add_term(self.columns[*k].clone(), c.clone());
        }
        p
    }

    /// Adds a relation if the modular screen finds it independent.
    pub fn insert(&mut self, p: &InvariantPolynomial) -> Result<bool> {
        let r = self.row(p)?;
        if r.is_zero() || !self.screen.insert(&r) {
            return Ok(false);
        }
        Ok(self.echelon.insert(r))
    }

    /// Adds a relation without screening.
    pub fn insert_exact(&mut self, p: &InvariantPolynomial) -> Result<bool> {
        let r = self.row(p)?;
        self.screen.insert(&r);
        Ok(self.echelon.insert(r))
    }

    pub fn finish(&mut self) -> Result<()> {
        self.echelon.reduce();
        if let Some(c) = self.echelon.pivot_columns().find(|&c| self.columns[c].is_constant()) {
            return Err(InvarError::Inconsistent(format!(
                "relations force the constant {} to vanish",
                self.columns[c]
            )));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn is_head(&self, m: &InvariantMonomial) -> bool {
        self.index.get(m).is_some_and(|&k| self.echelon.pivot_row(k).is_some())
    }

    pub fn heads(&self) -> impl Iterator<Item = &InvariantMonomial> {
        self.echelon.pivot_columns().map(|c| &self.columns[c])
    }

    /// Columns that are not heads.
    pub fn basis(&self) -> Vec<InvariantMonomial> {
        (0..self.columns.len())
            .filter(|&k| self.echelon.pivot_row(k).is_none())
            .map(|k| self.columns[k].clone())
            .collect()
    }

    /// Relation rows as polynomials.
    pub fn relations(&self) -> Vec<InvariantPolynomial> {
        self.echelon.rows().map(|(_, r)| self.poly(r)).collect()
    }

    pub fn syzygies(&self, level: RelLevel) -> Vec<Syzygy> {
        self.echelon
            .rows()
            .map(|(c, r)| {
                let head = self.columns[c].clone();
                let mut rhs = self.poly(r);
                rhs.add_term(head.clone(), -BigRational::one());
                Syzygy {
                    level,
                    head,
                    rhs: rhs.scale(&-BigRational::one()),
                    certified: None,
                }
            })
            .collect()
    }

    /// Reduces modulo the table; monomials outside the columns pass through.
    pub fn normal_form(&self, p: &InvariantPolynomial) -> InvariantPolynomial {
        let mut known = Vec::new();
        let mut out = InvariantPolynomial::zero();
        for (m, c) in p.terms() {
            match self.index.get(m) {
                Some(&k) => known.push((k, c.clone())),
                None => out.add_term(m.clone(), c.clone()),
            }
        }
        let nf = self.echelon.normal_form(SparseRow::from_entries(known));
        out.add(&self.poly(&nf));
        out
    }
}

/// Basis and syzygies of a set of relations under the elimination order.
pub fn reduce(relations: &[InvariantPolynomial], level: RelLevel) -> Result<(Vec<InvariantMonomial>, Vec<Syzygy>)> {
    let t = Table::from_relations(relations)?;
    Ok((t.basis(), t.syzygies(level)))
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Resolves configurations to transversal ids.
pub struct Lookup<'a> {
    pub canon: &'a Canonicalizer,
    pub transversals: &'a BTreeMap<(u16, InvariantKind), Transversal>,
}

impl Lookup<'_> {
    /// Signed id of a configuration, or `None` if it vanishes by symmetry.
    pub fn classify(&self, c: &Configuration) -> Result<Option<(bool, InvariantId)>> {
        let kind = match c.epsilon_count() {
            0 => InvariantKind::I,
            1 => InvariantKind::D,
            _ => return Err(InvarError::Inconsistent("more than one ε factor".into())),
        };
        if c.kinds
            .iter()
            .any(|k| !matches!(k, TensorKind::Epsilon | TensorKind::Riemann))
        {
            return Err(InvarError::Inconsistent(
                "only Riemann and ε factors can be identified".into(),
            ));
        }
        let degree = c.degree() as u16;
        let f = self.canon.canonicalize(c);
        if f.zero {
            return Ok(None);
        }
        let t = self
            .transversals
            .get(&(degree, kind))
            .ok_or_else(|| InvarError::OutOfRange(format!("{kind}[{degree},*]")))?;
        let r = t.rank_of(&f.config).ok_or_else(|| {
            InvarError::Inconsistent(format!(
                "configuration {} missing from {kind}{degree}",
                f.config.to_permutation()
            ))
        })?;
        Ok(Some((f.negative, t.id(r))))
    }

    fn add(&self, p: &mut InvariantPolynomial, c: &Configuration, coeff: i64) -> Result<()> {
        if let Some((neg, id)) = self.classify(c)? {
            p.add_term(InvariantMonomial::single(id), q(if neg { -coeff } else { coeff }));
        }
        Ok(())
    }

    fn transversal(&self, kind: InvariantKind, n: u16) -> Result<&Transversal> {
        self.transversals
            .get(&(n, kind))
            .ok_or_else(|| InvarError::OutOfRange(format!("{kind}[{n},*]")))
    }
}

fn partners(c: &Configuration) -> Vec<u16> {
    let pos = c.positions();
    c.names.iter().map(|&x| pos[(x ^ 1) as usize]).collect()
}

fn from_partners(kinds: Vec<TensorKind>, partner: &[u16]) -> Configuration {
    let mut names = vec![u16::MAX; partner.len()];
    let mut next = 0;
    for s in 0..partner.len() {
        if names[s] == u16::MAX {
            names[s] = next;
            names[partner[s] as usize] = next + 1;
            next += 2;
        }
    }
    Configuration::new(kinds, names)
}

/// The cyclic identity on every Riemann factor of `c`.
pub fn cyclic_relations_of(lookup: &Lookup, c: &Configuration) -> Result<Vec<InvariantPolynomial>> {
    let mut out = Vec::new();
    for (f, o) in c.offsets().into_iter().enumerate() {
        if c.kinds[f] != TensorKind::Riemann {
            continue;
        }
        let n = [c.names[o], c.names[o + 1], c.names[o + 2], c.names[o + 3]];
        let mut p = InvariantPolynomial::zero();
        for perm in [[0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]] {
            let mut names = c.names.clone();
            for k in 0..4 {
                names[o + k] = n[perm[k]];
            }
            lookup.add(&mut p, &Configuration::new(c.kinds.clone(), names), 1)?;
        }
        if !p.is_zero() {
            out.push(p);
        }
    }
    Ok(out)
}

/// Cyclic relations of all connected invariants of one kind and degree.
pub fn cyclic_relations(lookup: &Lookup, kind: InvariantKind, n: u16) -> Result<Vec<InvariantPolynomial>> {
    let t = lookup.transversal(kind, n)?;
    let per_entry: Vec<Vec<InvariantPolynomial>> = t
        .entries
        .par_iter()
        .filter(|e| !e.product_reducible)
        .map(|e| cyclic_relations_of(lookup, &e.config))
        .collect::<Result<_>>()?;
    Ok(per_entry.into_iter().flatten().collect())
}

/// A choice of five contractions of a configuration, each with one end
/// marked as upper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antisymmetrizer {
    /// Contraction indices (pair `k` joins names `2k` and `2k+1`).
    pub pairs: [u16; 5],
    /// Bit `i` set: the upper end of pair `i` is the slot named `2k+1`.
    pub orientation: u8,
}

fn s5() -> &'static [(Vec<usize>, bool)] {
    static S5: std::sync::OnceLock<Vec<(Vec<usize>, bool)>> = std::sync::OnceLock::new();
    S5.get_or_init(|| permutations(5))
}

/// The vanishing antisymmetrization over five contractions.
pub fn dimdep_relation(lookup: &Lookup, c: &Configuration, a: &Antisymmetrizer) -> Result<InvariantPolynomial> {
    let pos = c.positions();
    let base = partners(c);
    let mut up = [0u16; 5];
    let mut down = [0u16; 5];
    for i in 0..5 {
        let k = a.pairs[i];
        let (x, y) = (pos[2 * k as usize], pos[2 * k as usize + 1]);
        if a.orientation >> i & 1 == 1 {
            up[i] = y;
            down[i] = x;
        } else {
            up[i] = x;
            down[i] = y;
        }
    }
    let mut p = InvariantPolynomial::zero();
    let mut partner = base;
    for (perm, odd) in s5() {
        for i in 0..5 {
            let (u, d) = (up[i], down[perm[i]]);
            partner[u as usize] = d;
            partner[d as usize] = u;
        }
        lookup.add(
            &mut p,
            &from_partners(c.kinds.clone(), &partner),
            if *odd { -1 } else { 1 },
        )?;
    }
    Ok(p)
}

/// Every antisymmetrizer of a configuration with `pairs` contractions; the
/// orientation of the first chosen pair is fixed since a global flip gives
/// the same relation.
pub fn all_antisymmetrizers(pairs: usize) -> Vec<Antisymmetrizer> {
    let mut out = Vec::new();
    let mut pick = [0u16; 5];
    fn rec(start: usize, depth: usize, pairs: usize, pick: &mut [u16; 5], out: &mut Vec<Antisymmetrizer>) {
        if depth == 5 {
            for o in 0..16u8 {
                out.push(Antisymmetrizer {
                    pairs: *pick,
                    orientation: o << 1,
                });
            }
            return;
        }
        for k in start..pairs {
            pick[depth] = k as u16;
            rec(k + 1, depth + 1, pairs, pick, out);
        }
    }
    rec(0, 0, pairs, &mut pick, &mut out);
    out
}

fn random_antisymmetrizer(pairs: usize, rng: &mut ChaCha8Rng) -> Antisymmetrizer {
    let mut chosen: Vec<u16> = (0..pairs as u16).collect();
    for i in 0..5 {
        let j = rng.gen_range(i..pairs);
        chosen.swap(i, j);
    }
    let mut picked = [chosen[0], chosen[1], chosen[2], chosen[3], chosen[4]];
    picked.sort_unstable();
    Antisymmetrizer {
        pairs: picked,
        orientation: rng.gen_range(0..16u8) << 1,
    }
}

/// Dimensionally dependent relations of every invariant of one kind and
/// degree, over every choice of five contractions. Only sensible at small
/// degree; the database build samples instead.
pub fn dimdep_relations(
    lookup: &Lookup,
    kind: InvariantKind,
    n: u16,
    dimension: u32,
) -> Result<Vec<InvariantPolynomial>> {
    if dimension != 4 {
        return Err(InvarError::Dimension(dimension));
    }
    let t = lookup.transversal(kind, n)?;
    let mut out = Vec::new();
    for e in &t.entries {
        let choices = all_antisymmetrizers(e.config.pair_count());
        let rels: Vec<InvariantPolynomial> = choices
            .par_iter()
            .map(|a| dimdep_relation(lookup, &e.config, a))
            .collect::<Result<_>>()?;
        out.extend(rels.into_iter().filter(|p| !p.is_zero()));
    }
    Ok(out)
}

/// Expands the ε pair of `D_a · D_b`: the relation
/// `σ·D_a·D_b − Σ_π sgn(π)·(reconnected invariant) = 0`.
pub fn signature_relation(lookup: &Lookup, a: InvariantId, b: InvariantId) -> Result<InvariantPolynomial> {
    let ca = &lookup
        .transversal(InvariantKind::D, a.degree)?
        .get(a.rank)
        .ok_or_else(|| InvarError::UnknownId(a.to_string()))?
        .config;
    let cb = &lookup
        .transversal(InvariantKind::D, b.degree)?
        .get(b.rank)
        .ok_or_else(|| InvarError::UnknownId(b.to_string()))?
        .config;
    debug_assert_eq!(ca.kinds[0], TensorKind::Epsilon);
    let (pa, pb) = (partners(ca), partners(cb));
    let (la, lb) = (pa.len() - 4, pb.len() - 4);
    // Riemann slots of a first, then those of b.
    let mut base = vec![0u16; la + lb];
    for s in 4..pa.len() {
        if pa[s] >= 4 {
            base[s - 4] = pa[s] - 4;
        }
    }
    for s in 4..pb.len() {
        if pb[s] >= 4 {
            base[la + s - 4] = (la + pb[s] as usize - 4) as u16;
        }
    }
    let x: Vec<u16> = (0..4).map(|i| pa[i] - 4).collect();
    let y: Vec<u16> = (0..4).map(|i| (la + pb[i] as usize - 4) as u16).collect();
    if x.iter().any(|&s| s as usize >= la) || y.iter().any(|&s| (s as usize) < la) {
        return Err(InvarError::Inconsistent("ε contracted with itself".into()));
    }
    let kinds = vec![TensorKind::Riemann; (la + lb) / 4];
    let mut p = InvariantPolynomial::zero();
    let mut partner = base;
    for (perm, odd) in permutations(4) {
        for i in 0..4 {
            partner[x[i] as usize] = y[perm[i]];
            partner[y[perm[i]] as usize] = x[i];
        }
        lookup.add(
            &mut p,
            &from_partners(kinds.clone(), &partner),
            if odd { 1 } else { -1 },
        )?;
    }
    p.add_term(InvariantMonomial::from_ids(vec![a, b], true), BigRational::one());
    Ok(p)
}

/// Signature relations for every pair of connected duals of degrees `n1`
/// and `n2`.
pub fn signature_relations(lookup: &Lookup, n1: u16, n2: u16) -> Result<Vec<InvariantPolynomial>> {
    let (n1, n2) = (n1.min(n2), n1.max(n2));
    let ta = lookup.transversal(InvariantKind::D, n1)?;
    let tb = lookup.transversal(InvariantKind::D, n2)?;
    let a_ids: Vec<InvariantId> = ta.ids().filter(|&i| !ta.is_product_reducible(i.rank)).collect();
    let b_ids: Vec<InvariantId> = tb.ids().filter(|&i| !tb.is_product_reducible(i.rank)).collect();
    let pairs: Vec<(InvariantId, InvariantId)> = a_ids
        .iter()
        .flat_map(|&a| b_ids.iter().filter(move |&&b| n1 != n2 || a <= b).map(move |&b| (a, b)))
        .collect();
    pairs
        .par_iter()
        .map(|&(a, b)| signature_relation(lookup, a, b))
        .collect()
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub max_degree_i: u16,
    pub max_degree_d: u16,
    pub max_level: RelLevel,
    /// Enumeration strategy for transversals.
    pub mode: Mode,
    pub seed: u64,
    /// Use every antisymmetrizer when there are at most this many.
    pub exhaustive_limit: usize,
    /// Stop sampling after this many consecutive uninformative relations...
    pub window: usize,
    /// ...once at least this multiple of the column count was generated.
    pub oversample: usize,
    pub certify_trials: usize,
    pub progress: Option<fn(&str)>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            max_degree_i: 5,
            max_degree_d: 4,
            max_level: RelLevel::D,
            mode: Mode::Grow,
            seed: 1,
            exhaustive_limit: 20_000,
            window: 100,
            oversample: 3,
            certify_trials: 3,
            progress: None,
        }
    }
}

const SAMPLE_BATCH: u64 = 64;

/// Monomials of total degree `n` and the given kind in the atoms, each in
/// its grade-0 form.
fn monomials(atoms: &BTreeMap<u16, Vec<InvariantId>>, n: u16, kind: InvariantKind) -> Vec<InvariantMonomial> {
    let flat: Vec<InvariantId> = atoms.values().flatten().copied().collect();
    let mut out = Vec::new();
    fn rec(
        flat: &[InvariantId],
        start: usize,
        left: u16,
        acc: &mut Vec<InvariantId>,
        kind: InvariantKind,
        out: &mut Vec<InvariantMonomial>,
    ) {
        if left == 0 {
            let m = InvariantMonomial::from_ids(acc.clone(), false);
            if m.kind() == kind {
                let sigma = !m.is_grade_zero();
                out.push(m.with_sigma(sigma));
            }
            return;
        }
        for k in start..flat.len() {
            if flat[k].degree <= left {
                acc.push(flat[k]);
                rec(flat, k, left - flat[k].degree, acc, kind, out);
                acc.pop();
            }
        }
    }
    rec(&flat, 0, n, &mut Vec::new(), kind, &mut out);
    out
}

/// Rewrites a homogeneous relation into grade 0.
fn grade_zero(p: &InvariantPolynomial) -> Result<InvariantPolynomial> {
    let (p0, p1) = p.split_grade();
    match (p0.is_zero(), p1.is_zero()) {
        (_, true) => Ok(p0),
        (true, false) => Ok(p1),
        _ => Err(InvarError::Inconsistent(format!("relation mixes grades: {p}"))),
    }
}

impl SyzygyDatabase {
    /// Builds transversals and syzygy tables up to the requested degrees.
    pub fn build(opts: &BuildOptions) -> Result<SyzygyDatabase> {
        let mut db = SyzygyDatabase::empty(opts.max_degree_i, opts.max_degree_d, opts.max_level);
        let say = |s: &str| {
            if let Some(f) = opts.progress {
                f(s)
            }
        };
        let top = opts.max_degree_i.max(opts.max_degree_d);
        for n in 1..=top {
            let kinds: Vec<InvariantKind> = [InvariantKind::I, InvariantKind::D]
                .into_iter()
                .filter(|&k| n <= db.max_degree(k))
                .collect();
            for &kind in &kinds {
                let mut eo = EnumerateOptions::with_mode(opts.mode);
                eo.seed = opts.seed;
                let t = enumerate_transversal(&db.canon, kind, n as usize, &eo)?;
                say(&format!(
                    "{kind}{n}: {} invariants ({} connected)",
                    t.len(),
                    t.irreducible_count()
                ));
                db.insert_transversal(t)?;
            }
            for &kind in &kinds {
                let t = db.build_b_table(kind, n)?;
                say(&format!("{kind}{n} level B: {} connected basis invariants", t));
            }
            if opts.max_level >= RelLevel::C {
                for &kind in &kinds {
                    let count = db.build_c_table(kind, n, opts)?;
                    say(&format!("{kind}{n} level C: {count} connected basis invariants"));
                }
            }
            if opts.max_level >= RelLevel::D {
                for &kind in &kinds {
                    let count = db.build_d_table(kind, n)?;
                    say(&format!("{kind}{n} level D: {count} connected basis invariants"));
                }
            }
        }
        db.collect_syzygies();
        if opts.certify_trials > 0 {
            db.certify(opts.certify_trials, opts.seed)?;
        }
        Ok(db)
    }

    fn build_b_table(&mut self, kind: InvariantKind, n: u16) -> Result<usize> {
        let lookup = self.lookup();
        let t = lookup.transversal(kind, n)?;
        let connected: Vec<InvariantMonomial> = t
            .ids()
            .filter(|i| !t.is_product_reducible(i.rank))
            .map(InvariantMonomial::single)
            .collect();
        let mut table = Table::with_columns(connected);
        for p in cyclic_relations(&lookup, kind, n)? {
            table.insert(&p)?;
        }
        table.finish()?;
        self.set_b_table(kind, n, table);
        Ok(self.atoms(kind, n).len())
    }

    /// All grade-0 monomials of one kind and degree in level-B basis
    /// invariants.
    pub(crate) fn sector_columns(&self, kind: InvariantKind, n: u16) -> Vec<InvariantMonomial> {
        let mut atoms: BTreeMap<u16, Vec<InvariantId>> = BTreeMap::new();
        for k in 1..=n {
            for kd in [InvariantKind::I, InvariantKind::D] {
                atoms.entry(k).or_default().extend(self.atoms(kd, k));
            }
        }
        monomials(&atoms, n, kind)
    }

    /// Columns and lower-degree multiples shared by the C and D tables.
    fn seeded_table(&self, kind: InvariantKind, n: u16, level: RelLevel) -> Result<Table> {
        let mut table = Table::with_columns(self.sector_columns(kind, n));
        for k in 1..n {
            for lower_kind in [InvariantKind::I, InvariantKind::D] {
                let Some(lower) = self.table(lower_kind, k, level) else {
                    continue;
                };
                let rows = lower.relations();
                let mult_kind = if lower_kind == kind {
                    InvariantKind::I
                } else {
                    InvariantKind::D
                };
                for a in self.atoms(mult_kind, n - k) {
                    let am = InvariantMonomial::single(a);
                    for r in &rows {
                        table.insert(&grade_zero(&r.mul_monomial(&am))?)?;
                    }
                }
            }
        }
        Ok(table)
    }

    fn connected_basis_count(&self, table: &Table, kind: InvariantKind, n: u16) -> usize {
        self.atoms(kind, n)
            .into_iter()
            .filter(|&a| !table.is_head(&InvariantMonomial::single(a)))
            .count()
    }

    fn build_c_table(&mut self, kind: InvariantKind, n: u16, opts: &BuildOptions) -> Result<usize> {
        let mut table = self.seeded_table(kind, n, RelLevel::C)?;
        let lookup = self.lookup();
        let t = lookup.transversal(kind, n)?;
        let pairs = 2 * n as usize + if kind == InvariantKind::D { 2 } else { 0 };
        if pairs >= 5 {
            let choices = all_antisymmetrizers(pairs);
            let total = choices.len() * t.len();
            let expand =
                |p: InvariantPolynomial| -> Result<InvariantPolynomial> { grade_zero(&self.expand_atoms(&p)?) };
            if total <= opts.exhaustive_limit {
                for e in &t.entries {
                    let rels: Vec<InvariantPolynomial> = choices
                        .par_iter()
                        .map(|a| dimdep_relation(&lookup, &e.config, a).and_then(expand))
                        .collect::<Result<_>>()?;
                    for p in rels {
                        table.insert(&p)?;
                    }
                }
            } else {
                let target = opts.oversample * table.columns().len();
                let (mut generated, mut streak, mut next) = (0usize, 0usize, 0u64);
                while generated < target || streak < opts.window {
                    let rels: Vec<InvariantPolynomial> = (next..next + SAMPLE_BATCH)
                        .into_par_iter()
                        .map(|i| {
                            let mut rng =
                                ChaCha8Rng::seed_from_u64(opts.seed ^ ((n as u64) << 32) ^ ((kind as u64) << 48));
                            rng.set_stream(i);
                            let e = &t.entries[rng.gen_range(0..t.len())];
                            let a = random_antisymmetrizer(pairs, &mut rng);
                            dimdep_relation(&lookup, &e.config, &a).and_then(expand)
                        })
                        .collect::<Result<_>>()?;
                    next += SAMPLE_BATCH;
                    for p in rels {
                        if p.is_zero() {
                            continue;
                        }
                        generated += 1;
                        if table.insert(&p)? {
                            streak = 0;
                        } else {
                            streak += 1;
                        }
                        if generated >= target && streak >= opts.window {
                            break;
                        }
                    }
                }
            }
        }
        table.finish()?;
        let count = self.connected_basis_count(&table, kind, n);
        self.set_table(kind, n, RelLevel::C, table);
        Ok(count)
    }

    fn build_d_table(&mut self, kind: InvariantKind, n: u16) -> Result<usize> {
        let mut table = self.seeded_table(kind, n, RelLevel::D)?;
        if let Some(c) = self.table(kind, n, RelLevel::C) {
            for r in c.relations() {
                table.insert_exact(&r)?;
            }
        }
        if kind == InvariantKind::I {
            let lookup = self.lookup();
            for n1 in 1..=n / 2 {
                let n2 = n - n1;
                if n2 > self.max_degree(InvariantKind::D) {
                    continue;
                }
                for p in signature_relations(&lookup, n1, n2)? {
                    table.insert(&grade_zero(&self.expand_atoms(&p)?)?)?;
                }
            }
        }
        table.finish()?;
        let count = self.connected_basis_count(&table, kind, n);
        self.set_table(kind, n, RelLevel::D, table);
        Ok(count)
    }
}
