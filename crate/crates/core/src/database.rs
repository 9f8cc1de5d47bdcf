//! The syzygy database: transversals, reduction tables and normal forms,
//! with a line-oriented text format.
//!
//! ```text
//! invar-db 1
//! dimension 4
//! epsilon-convention eps_0123=+sqrt|g|
//! degrees I 5 D 4
//! level D
//! SECTION I 2
//! TRANSVERSAL 1 (1,3)(2,4)(5,7)(6,8) 1
//! SYZ B I[2,4] = I[2,3] ; certified
//! ```

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::enumerate::{kinds_for, Transversal};
use crate::error::{InvarError, Result};
use crate::invariant::{InvariantId, InvariantKind, InvariantMonomial, InvariantPolynomial};
use crate::oracle::ComponentOracle;
use crate::permgroup::SignedPermutation;
use crate::relations::{Lookup, RelLevel, Syzygy, Table};
use crate::tensor::{Canonicalizer, Configuration, MetricContext};

pub const FORMAT_VERSION: u32 = 1;
const EPSILON_CONVENTION: &str = "eps_0123=+sqrt|g|";

pub struct SyzygyDatabase {
    pub dimension: u32,
    max_degree_i: u16,
    max_degree_d: u16,
    level: Option<RelLevel>,
    pub(crate) canon: Canonicalizer,
    transversals: BTreeMap<(u16, InvariantKind), Transversal>,
    /// Product of component ids for every product-reducible entry.
    components: HashMap<InvariantId, InvariantMonomial>,
    b_tables: HashMap<(InvariantKind, u16), Table>,
    /// Level-B normal form of every connected id.
    b_normal: HashMap<InvariantId, InvariantPolynomial>,
    tables: HashMap<(InvariantKind, u16, RelLevel), Table>,
    syzygies: BTreeMap<(u16, InvariantKind), Vec<Syzygy>>,
}

impl SyzygyDatabase {
    /// Database without transversals; `level` is the highest relation level
    /// that will be built.
    pub fn empty(max_degree_i: u16, max_degree_d: u16, level: RelLevel) -> Self {
        Self {
            dimension: 4,
            max_degree_i,
            max_degree_d,
            level: Some(level),
            canon: Canonicalizer::new(),
            transversals: BTreeMap::new(),
            components: HashMap::new(),
            b_tables: HashMap::new(),
            b_normal: HashMap::new(),
            tables: HashMap::new(),
            syzygies: BTreeMap::new(),
        }
    }

    pub fn canonicalizer(&self) -> &Canonicalizer {
        &self.canon
    }

    pub fn max_degree(&self, kind: InvariantKind) -> u16 {
        match kind {
            InvariantKind::I => self.max_degree_i,
            InvariantKind::D => self.max_degree_d,
        }
    }

    /// Highest simplification level the database supports (1 to 4).
    pub fn max_simplification_level(&self) -> u8 {
        self.level.map_or(1, |l| l.simplification_level())
    }

    pub fn transversal(&self, kind: InvariantKind, degree: u16) -> Option<&Transversal> {
        self.transversals.get(&(degree, kind))
    }

    pub fn transversals(&self) -> impl Iterator<Item = &Transversal> {
        self.transversals.values()
    }

    pub fn lookup(&self) -> Lookup<'_> {
        Lookup {
            canon: &self.canon,
            transversals: &self.transversals,
        }
    }

    pub fn configuration(&self, id: InvariantId) -> Result<&Configuration> {
        self.transversal(id.kind, id.degree)
            .and_then(|t| t.get(id.rank))
            .map(|e| &e.config)
            .ok_or_else(|| InvarError::UnknownId(id.to_string()))
    }

    pub fn contains(&self, id: InvariantId) -> bool {
        self.configuration(id).is_ok()
    }

    pub fn is_product_reducible(&self, id: InvariantId) -> Result<bool> {
        self.configuration(id)?;
        Ok(self.components.contains_key(&id))
    }

    /// Signed id of a Riemann/ε configuration; `None` when it vanishes.
    pub fn identify(&self, c: &Configuration) -> Result<Option<(bool, InvariantId)>> {
        self.lookup().classify(c)
    }

    pub(crate) fn insert_transversal(&mut self, t: Transversal) -> Result<()> {
        let (kind, degree) = (t.kind, t.degree);
        let mut comps = Vec::new();
        for (k, e) in t.entries.iter().enumerate() {
            if !e.product_reducible {
                continue;
            }
            let mut ids = Vec::new();
            for part in e.config.components() {
                match self.identify(&part)? {
                    Some((false, id)) => ids.push(id),
                    _ => {
                        return Err(InvarError::Inconsistent(format!(
                            "component of {kind}[{degree},{}] is not a positive lower invariant",
                            k + 1
                        )))
                    }
                }
            }
            comps.push((t.id(k as u32 + 1), InvariantMonomial::from_ids(ids, false)));
        }
        self.components.extend(comps);
        self.transversals.insert((degree, kind), t);
        Ok(())
    }

    pub(crate) fn set_b_table(&mut self, kind: InvariantKind, n: u16, table: Table) {
        for m in table.columns() {
            if let Some(id) = m.as_single() {
                self.b_normal
                    .insert(id, table.normal_form(&InvariantPolynomial::id(id)));
            }
        }
        self.b_tables.insert((kind, n), table);
    }

    pub(crate) fn set_table(&mut self, kind: InvariantKind, n: u16, level: RelLevel, table: Table) {
        self.tables.insert((kind, n, level), table);
    }

    pub(crate) fn table(&self, kind: InvariantKind, n: u16, level: RelLevel) -> Option<&Table> {
        match level {
            RelLevel::B => self.b_tables.get(&(kind, n)),
            _ => self.tables.get(&(kind, n, level)),
        }
    }

    /// Connected invariants of one kind and degree that survive level B.
    pub fn atoms(&self, kind: InvariantKind, n: u16) -> Vec<InvariantId> {
        self.b_tables
            .get(&(kind, n))
            .map(|t| t.basis().into_iter().filter_map(|m| m.as_single()).collect())
            .unwrap_or_default()
    }

    /// Connected invariants of one kind and degree that are not heads of any
    /// relation up to the given level (column A to D of the counting tables).
    pub fn independent_count(&self, kind: InvariantKind, n: u16, level: u8) -> Option<usize> {
        let t = self.transversal(kind, n)?;
        let connected = t.ids().filter(|i| !t.is_product_reducible(i.rank));
        if level <= 1 {
            return Some(connected.count());
        }
        let atoms = self.atoms(kind, n);
        if level == 2 {
            return Some(atoms.len());
        }
        let table = self.table(kind, n, RelLevel::from_simplification_level(level.min(4))?)?;
        Some(
            atoms
                .into_iter()
                .filter(|&a| !table.is_head(&InvariantMonomial::single(a)))
                .count(),
        )
    }

    /// Basis monomials of degree `n` at a level (3 or 4).
    pub fn basis_monomials(&self, kind: InvariantKind, n: u16, level: u8) -> Option<Vec<InvariantMonomial>> {
        let l = RelLevel::from_simplification_level(level)?;
        Some(self.table(kind, n, l)?.basis())
    }

    /// Replaces product-reducible ids by their components and connected ids
    /// by their level-B normal forms.
    pub(crate) fn expand_atoms(&self, p: &InvariantPolynomial) -> Result<InvariantPolynomial> {
        self.expand(p, true)
    }

    fn expand(&self, p: &InvariantPolynomial, cyclic: bool) -> Result<InvariantPolynomial> {
        let mut out = InvariantPolynomial::zero();
        for (m, c) in p.terms() {
            let mut acc = InvariantPolynomial::term(InvariantMonomial::one().with_sigma(m.sigma), c.clone());
            for &id in m.ids() {
                self.configuration(id)?;
                let factor = match self.components.get(&id) {
                    Some(parts) => {
                        let mut f = InvariantPolynomial::monomial(InvariantMonomial::one());
                        for &part in parts.ids() {
                            f = f.mul(&self.atom_form(part, cyclic));
                        }
                        f
                    }
                    None => self.atom_form(id, cyclic),
                };
                acc = acc.mul(&factor);
            }
            out.add(&acc);
        }
        Ok(out)
    }

    fn atom_form(&self, id: InvariantId, cyclic: bool) -> InvariantPolynomial {
        if cyclic {
            if let Some(nf) = self.b_normal.get(&id) {
                return nf.clone();
            }
        }
        InvariantPolynomial::id(id)
    }

    /// Normal form at a simplification level (1 to 4), with warnings for
    /// parts beyond the tables.
    pub fn normal_form(&self, p: &InvariantPolynomial, level: u8) -> Result<(InvariantPolynomial, Vec<String>)> {
        if !(1..=4).contains(&level) || level > self.max_simplification_level() {
            return Err(InvarError::Level(level));
        }
        let mut warnings = Vec::new();
        let expanded = self.expand(p, level >= 2)?;
        if level <= 2 {
            return Ok((expanded, warnings));
        }
        let rel = RelLevel::from_simplification_level(level).unwrap();
        let (p0, p1) = expanded.split_grade();
        let mut out = InvariantPolynomial::zero();
        for (part, sigma) in [(p0, false), (p1, true)] {
            let mut groups: BTreeMap<(u32, InvariantKind), InvariantPolynomial> = BTreeMap::new();
            for (m, c) in part.terms() {
                groups
                    .entry((m.total_degree(), m.kind()))
                    .or_default()
                    .add_term(m.clone(), c.clone());
            }
            for ((n, kind), g) in groups {
                let reduced = match self.table(kind, n as u16, rel) {
                    Some(t) => t.normal_form(&g),
                    None => {
                        if n > 0 {
                            warnings.push(format!(
                                "degree-{n} {} terms are beyond the database; left at level 2",
                                if kind == InvariantKind::I { "non-dual" } else { "dual" }
                            ));
                        }
                        g
                    }
                };
                out.add(&if sigma { reduced.times_sigma() } else { reduced });
            }
        }
        Ok((out, warnings))
    }

    pub(crate) fn collect_syzygies(&mut self) {
        let mut all: BTreeMap<(u16, InvariantKind), Vec<Syzygy>> = BTreeMap::new();
        for ((kind, n), t) in &self.b_tables {
            all.entry((*n, *kind)).or_default().extend(t.syzygies(RelLevel::B));
        }
        let mut keys: Vec<_> = self.tables.keys().copied().collect();
        keys.sort();
        for (kind, n, level) in keys {
            let t = &self.tables[&(kind, n, level)];
            let mut s = t.syzygies(level);
            if level == RelLevel::D {
                if let Some(c) = self.tables.get(&(kind, n, RelLevel::C)) {
                    s.retain(|z| !c.is_head(&z.head));
                }
            }
            all.entry((n, kind)).or_default().extend(s);
        }
        for v in all.values_mut() {
            v.sort_by(|a, b| a.level.cmp(&b.level).then_with(|| a.head.cmp(&b.head)));
        }
        self.syzygies = all;
    }

    pub fn syzygies(&self) -> impl Iterator<Item = &Syzygy> {
        self.syzygies.values().flatten()
    }

    pub fn syzygy_count(&self) -> usize {
        self.syzygies.values().map(Vec::len).sum()
    }

    /// Evaluates an invariant polynomial on one set of oracle components.
    pub fn evaluate(
        &self,
        p: &InvariantPolynomial,
        oracle: &ComponentOracle,
        cache: &mut HashMap<InvariantId, BigRational>,
    ) -> Result<BigRational> {
        let sigma = oracle.context().sigma;
        let mut total = BigRational::zero();
        for (m, c) in p.terms() {
            let mut v = c.clone();
            if m.sigma && sigma < 0 {
                v = -v;
            }
            for &id in m.ids() {
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(id) {
                    let value = oracle.evaluate_configuration(self.configuration(id)?)?;
                    e.insert(value);
                }
                v *= &cache[&id];
            }
            total += v;
        }
        Ok(total)
    }

    /// Checks every stored syzygy on `trials` random curvature tensors for
    /// both signs of the metric determinant, recording the outcome.
    pub fn certify(&mut self, trials: usize, seed: u64) -> Result<CertifyReport> {
        self.certify_signs(trials, seed, &[-1, 1])
    }

    /// As [`certify`](Self::certify), restricted to the given signs.
    pub fn certify_signs(&mut self, trials: usize, seed: u64, sigmas: &[i8]) -> Result<CertifyReport> {
        let mut oracles = Vec::new();
        for t in 0..trials {
            for &sigma in sigmas {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64);
                oracles.push(ComponentOracle::random(
                    MetricContext { dimension: 4, sigma },
                    9,
                    &mut rng,
                )?);
            }
        }
        // Evaluate all ids up front, one oracle at a time.
        let ids: Vec<InvariantId> = {
            let mut v: Vec<InvariantId> = self.syzygies().flat_map(|s| s.relation().ids()).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let caches: Vec<HashMap<InvariantId, BigRational>> = oracles
            .iter()
            .map(|o| {
                ids.par_iter()
                    .map(|&id| Ok((id, o.evaluate_configuration(self.configuration(id)?)?)))
                    .collect::<Result<HashMap<_, _>>>()
            })
            .collect::<Result<_>>()?;
        let mut report = CertifyReport::default();
        let mut flags: Vec<(usize, bool)> = Vec::new();
        for (k, s) in self.syzygies().enumerate() {
            let rel = s.relation();
            let mut ok = true;
            for (o, cache) in oracles.iter().zip(&caches) {
                if !evaluate_with(&rel, o.context().sigma, cache)?.is_zero() {
                    ok = false;
                    break;
                }
            }
            if !ok {
                report.failures.push(format!("{} {}", s.level, s));
            }
            flags.push((k, ok));
        }
        report.checked = flags.len();
        report.samples = oracles.len();
        let mut it = flags.into_iter();
        for v in self.syzygies.values_mut() {
            for s in v.iter_mut() {
                s.certified = Some(it.next().unwrap().1);
            }
        }
        Ok(report)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("invar-db {FORMAT_VERSION}\n"));
        out.push_str(&format!("dimension {}\n", self.dimension));
        out.push_str(&format!("epsilon-convention {EPSILON_CONVENTION}\n"));
        out.push_str(&format!("degrees I {} D {}\n", self.max_degree_i, self.max_degree_d));
        out.push_str(&format!(
            "level {}\n",
            self.level.map_or("A".to_string(), |l| l.to_string())
        ));
        let mut keys: Vec<(u16, InvariantKind)> = self.transversals.keys().copied().collect();
        keys.sort();
        for key in keys {
            let t = &self.transversals[&key];
            out.push_str(&format!("SECTION {} {}\n", key.1, key.0));
            for (k, e) in t.entries.iter().enumerate() {
                out.push_str(&format!(
                    "TRANSVERSAL {} {} {}\n",
                    k + 1,
                    e.config.to_permutation(),
                    e.product_reducible as u8
                ));
            }
            for s in self.syzygies.get(&key).into_iter().flatten() {
                let flag = match s.certified {
                    Some(true) => " ; certified",
                    Some(false) => " ; failed",
                    None => "",
                };
                out.push_str(&format!("SYZ {} {} = {}{}\n", s.level, s.head, s.rhs, flag));
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| InvarError::Format { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut header = |key: &str| -> Result<(usize, Vec<String>)> {
            let (k, l) = lines.next().ok_or_else(|| err(0, format!("missing `{key}` header")))?;
            let words: Vec<String> = l.split_whitespace().map(String::from).collect();
            if words.first().map(String::as_str) != Some(key) {
                return Err(err(k, format!("expected `{key}`")));
            }
            Ok((k, words[1..].to_vec()))
        };
        let (k, v) = header("invar-db")?;
        if v != [FORMAT_VERSION.to_string()] {
            return Err(err(k, "unsupported format version".into()));
        }
        let (k, v) = header("dimension")?;
        if v != ["4"] {
            return Err(err(k, "only dimension 4 is supported".into()));
        }
        let (k, v) = header("epsilon-convention")?;
        if v != [EPSILON_CONVENTION] {
            return Err(err(k, "unknown ε convention".into()));
        }
        let (k, v) = header("degrees")?;
        let (max_i, max_d) = match v.as_slice() {
            [i, a, d, b] if i == "I" && d == "D" => (
                a.parse::<u16>().map_err(|e| err(k, e.to_string()))?,
                b.parse::<u16>().map_err(|e| err(k, e.to_string()))?,
            ),
            _ => return Err(err(k, "malformed degrees line".into())),
        };
        let (k, v) = header("level")?;
        let level = match v.as_slice() {
            [l] if l == "A" => None,
            [l] => Some(l.parse::<RelLevel>().map_err(|e| err(k, e))?),
            _ => return Err(err(k, "malformed level line".into())),
        };
        let mut db = SyzygyDatabase::empty(max_i, max_d, RelLevel::B);
        db.level = level;

        // Gather sections first, then rebuild in degree order.
        struct Section {
            kind: InvariantKind,
            degree: u16,
            entries: Vec<Configuration>,
            syzygies: Vec<Syzygy>,
        }
        let mut sections: Vec<Section> = Vec::new();
        for (k, line) in lines {
            let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
            match tag {
                "SECTION" => {
                    let w: Vec<&str> = rest.split_whitespace().collect();
                    let [kind, degree] = w.as_slice() else {
                        return Err(err(k, "malformed section".into()));
                    };
                    sections.push(Section {
                        kind: kind.parse().map_err(|_| err(k, "bad kind".into()))?,
                        degree: degree.parse().map_err(|_| err(k, "bad degree".into()))?,
                        entries: Vec::new(),
                        syzygies: Vec::new(),
                    });
                }
                "TRANSVERSAL" => {
                    let s = sections
                        .last_mut()
                        .ok_or_else(|| err(k, "entry outside a section".into()))?;
                    let w: Vec<&str> = rest.split_whitespace().collect();
                    let [r, cycles, _flag] = w.as_slice() else {
                        return Err(err(k, "malformed transversal line".into()));
                    };
                    if r.parse::<usize>().ok() != Some(s.entries.len() + 1) {
                        return Err(err(k, "ranks must be consecutive".into()));
                    }
                    let kinds = kinds_for(s.kind, s.degree as usize);
                    let slots: usize = kinds.iter().map(|k| k.rank()).sum();
                    let p = SignedPermutation::parse_cycles(cycles, slots).map_err(|e| err(k, e.to_string()))?;
                    s.entries.push(Configuration::new(kinds, p.images().to_vec()));
                }
                "SYZ" => {
                    let s = sections
                        .last_mut()
                        .ok_or_else(|| err(k, "syzygy outside a section".into()))?;
                    let (body, flag) = match rest.split_once(';') {
                        Some((b, f)) => (b, Some(f.trim())),
                        None => (rest, None),
                    };
                    let (level, body) = body
                        .trim()
                        .split_once(' ')
                        .ok_or_else(|| err(k, "missing level".into()))?;
                    let level: RelLevel = level.parse().map_err(|e| err(k, e))?;
                    let (head, rhs) = body.split_once('=').ok_or_else(|| err(k, "missing `=`".into()))?;
                    let head: InvariantPolynomial = head.parse().map_err(|e: InvarError| err(k, e.to_string()))?;
                    let head = match head.terms().next() {
                        Some((m, c)) if head.len() == 1 && c.is_one() => m.clone(),
                        _ => return Err(err(k, "head must be a single monomial".into())),
                    };
                    let rhs: InvariantPolynomial = rhs.parse().map_err(|e: InvarError| err(k, e.to_string()))?;
                    let certified = match flag {
                        None => None,
                        Some("certified") => Some(true),
                        Some("failed") => Some(false),
                        Some(f) => return Err(err(k, format!("unknown flag `{f}`"))),
                    };
                    s.syzygies.push(Syzygy {
                        level,
                        head,
                        rhs,
                        certified,
                    });
                }
                _ => return Err(err(k, format!("unknown record `{tag}`"))),
            }
        }
        sections.sort_by_key(|s| (s.degree, s.kind));
        for s in &sections {
            let t = Transversal::from_configs(s.kind, s.degree, s.entries.iter().cloned(), Vec::new(), 0);
            if t.len() != s.entries.len() {
                return Err(err(0, format!("duplicate entries in {}{}", s.kind, s.degree)));
            }
            for (e, c) in t.entries.iter().zip(&s.entries) {
                let f = db.canon.canonicalize(c);
                if &e.config != c || f.zero || f.negative || &f.config != c {
                    return Err(err(
                        0,
                        format!("non-canonical entry {} in {}{}", c.to_permutation(), s.kind, s.degree),
                    ));
                }
            }
            db.insert_transversal(t)?;
        }
        for s in &sections {
            let rels = |level: RelLevel| -> Vec<InvariantPolynomial> {
                s.syzygies
                    .iter()
                    .filter(|z| z.level == level)
                    .map(Syzygy::relation)
                    .collect()
            };
            let t = db.transversal(s.kind, s.degree).unwrap();
            let connected: Vec<InvariantMonomial> = t
                .ids()
                .filter(|i| !t.is_product_reducible(i.rank))
                .map(InvariantMonomial::single)
                .collect();
            let mut b = Table::with_columns(connected);
            for r in rels(RelLevel::B) {
                b.insert_exact(&r)?;
            }
            b.finish()?;
            db.set_b_table(s.kind, s.degree, b);
        }
        for s in &sections {
            let c_rels: Vec<InvariantPolynomial> = s
                .syzygies
                .iter()
                .filter(|z| z.level == RelLevel::C)
                .map(Syzygy::relation)
                .collect();
            let mut d_rels = c_rels.clone();
            d_rels.extend(
                s.syzygies
                    .iter()
                    .filter(|z| z.level == RelLevel::D)
                    .map(Syzygy::relation),
            );
            if level >= Some(RelLevel::C) {
                let cols = db.sector_columns(s.kind, s.degree);
                db.set_table(
                    s.kind,
                    s.degree,
                    RelLevel::C,
                    Table::from_relations_over(cols, &c_rels)?,
                );
            }
            if level >= Some(RelLevel::D) {
                let cols = db.sector_columns(s.kind, s.degree);
                db.set_table(
                    s.kind,
                    s.degree,
                    RelLevel::D,
                    Table::from_relations_over(cols, &d_rels)?,
                );
            }
            db.syzygies.insert((s.degree, s.kind), s.syzygies.clone());
        }
        Ok(db)
    }
}

/// Evaluates with precomputed id values.
pub fn evaluate_with(
    p: &InvariantPolynomial,
    sigma: i8,
    values: &HashMap<InvariantId, BigRational>,
) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (m, c) in p.terms() {
        let mut v = if m.sigma && sigma < 0 { -c.clone() } else { c.clone() };
        for id in m.ids() {
            v *= values.get(id).ok_or_else(|| InvarError::UnknownId(id.to_string()))?;
        }
        total += v;
    }
    Ok(total)
}

#[derive(Clone, Debug, Default)]
pub struct CertifyReport {
    pub checked: usize,
    /// Random curvature tensors each relation was evaluated on.
    pub samples: usize,
    pub failures: Vec<String>,
}

impl CertifyReport {
    pub fn all_certified(&self) -> bool {
        self.failures.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::BuildOptions;

    fn small() -> SyzygyDatabase {
        SyzygyDatabase::build(&BuildOptions {
            max_degree_i: 3,
            max_degree_d: 2,
            ..BuildOptions::default()
        })
        .unwrap()
    }

    #[test]
    fn small_build_counts_and_round_trip() {
        let db = small();
        let counts = |kind, level| -> Vec<usize> {
            (1..=db.max_degree(kind))
                .map(|n| db.independent_count(kind, n, level).unwrap())
                .collect()
        };
        assert_eq!(counts(InvariantKind::I, 1), vec![1, 3, 9]);
        assert_eq!(counts(InvariantKind::I, 2), vec![1, 2, 5]);
        assert_eq!(counts(InvariantKind::I, 3), vec![1, 2, 3]);
        assert_eq!(counts(InvariantKind::I, 4), vec![1, 2, 3]);
        assert_eq!(counts(InvariantKind::D, 2), vec![0, 1]);
        assert!(db.syzygies().all(|s| s.certified == Some(true)));
        let text = db.to_text();
        let again = SyzygyDatabase::from_text(&text).unwrap();
        assert_eq!(again.to_text(), text);
        assert_eq!(again.independent_count(InvariantKind::I, 3, 4), Some(3));
    }

    #[test]
    fn empty_build_is_valid() {
        let db = SyzygyDatabase::build(&BuildOptions {
            max_degree_i: 0,
            max_degree_d: 0,
            ..BuildOptions::default()
        })
        .unwrap();
        let again = SyzygyDatabase::from_text(&db.to_text()).unwrap();
        assert_eq!(again.to_text(), db.to_text());
        assert_eq!(again.syzygy_count(), 0);
    }
}
