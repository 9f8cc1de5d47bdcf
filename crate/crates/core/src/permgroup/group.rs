use num_bigint::BigUint;
use num_traits::One;

use super::{PermError, SignedPermutation};

/// One level of the stabilizer chain: the base point, the strong generators
/// fixing all earlier base points, and a transversal of the basic orbit.
#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub point: u16,
    pub gens: Vec<SignedPermutation>,
    pub orbit: Vec<u16>,
    /// Indexed by point; `Some(u)` with `u(point) = p` for every orbit point `p`.
    pub transversal: Vec<Option<SignedPermutation>>,
}

impl Level {
    fn new(point: u16, gens: Vec<SignedPermutation>, n: usize) -> Self {
        let mut level = Self {
            point,
            gens,
            orbit: Vec::new(),
            transversal: Vec::new(),
        };
        level.rebuild_orbit(n);
        level
    }

    fn rebuild_orbit(&mut self, n: usize) {
        let mut transversal: Vec<Option<SignedPermutation>> = vec![None; n];
        transversal[self.point as usize] = Some(SignedPermutation::identity(n));
        let mut orbit = vec![self.point];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in &self.gens {
                let y = g.apply(x);
                if transversal[y as usize].is_none() {
                    let ux = transversal[x as usize].as_ref().unwrap();
                    transversal[y as usize] = Some(g.compose_unchecked(ux));
                    orbit.push(y);
                }
            }
        }
        self.orbit = orbit;
        self.transversal = transversal;
    }
}

/// A group of signed permutations stored as a base and strong generating set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<SignedPermutation>,
    pub(crate) levels: Vec<Level>,
    sign_degenerate: bool,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self::schreier_sims(degree, Vec::new()).expect("empty generator list")
    }

    /// Full symmetric group on `degree` points, all signs positive.
    pub fn symmetric(degree: usize) -> Self {
        let gens = (1..degree as u16)
            .map(|i| SignedPermutation::transposition(degree, i - 1, i, false))
            .collect();
        Self::schreier_sims(degree, gens).expect("consistent degree")
    }

    /// Schreier–Sims with a base chosen from the generators.
    pub fn schreier_sims(degree: usize, generators: Vec<SignedPermutation>) -> Result<Self, PermError> {
        Self::with_base(degree, generators, &[])
    }

    /// Schreier–Sims where the base starts with `base_prefix` (in that order)
    /// and is extended only if some generator fixes every prefix point.
    pub fn with_base(
        degree: usize,
        generators: Vec<SignedPermutation>,
        base_prefix: &[u16],
    ) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        if base_prefix.iter().any(|&b| b as usize >= degree) {
            return Err(PermError::PointOutOfRange);
        }
        let mut sign_degenerate = false;
        let mut strong: Vec<SignedPermutation> = Vec::new();
        for g in &generators {
            if g.is_unsigned_identity() {
                sign_degenerate |= g.is_negative();
            } else if !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<u16> = base_prefix.to_vec();
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(first_moved(g));
            }
        }
        let mut levels: Vec<Level> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let gens = strong
                    .iter()
                    .filter(|g| base[..i].iter().all(|&x| g.apply(x) == x))
                    .cloned()
                    .collect();
                Level::new(b, gens, degree)
            })
            .collect();

        let mut i = levels.len() as isize - 1;
        'outer: while i >= 0 {
            let iu = i as usize;
            let orbit = levels[iu].orbit.clone();
            let gens = levels[iu].gens.clone();
            for &p in &orbit {
                for g in &gens {
                    let up = levels[iu].transversal[p as usize].as_ref().unwrap();
                    let gp = g.apply(p);
                    let ugp = levels[iu].transversal[gp as usize].as_ref().unwrap();
                    let h = ugp.inverse().compose_unchecked(&g.compose_unchecked(up));
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, j) = sift_from(&levels, h, iu + 1);
                    if j < levels.len() || !residue.is_unsigned_identity() {
                        if j == levels.len() {
                            let point = first_moved(&residue);
                            levels.push(Level::new(point, Vec::new(), degree));
                        }
                        for level in &mut levels[iu + 1..=j] {
                            level.gens.push(residue.clone());
                            level.rebuild_orbit(degree);
                        }
                        i = j as isize;
                        continue 'outer;
                    } else if residue.is_negative() {
                        sign_degenerate = true;
                    }
                }
            }
            i -= 1;
        }

        Ok(Self {
            degree,
            generators,
            levels,
            sign_degenerate,
        })
    }

    /// The same group with a stabilizer chain whose base begins with `prefix`.
    pub fn rebased(&self, prefix: &[u16]) -> Self {
        let mut gens = self.strong_generators();
        if self.sign_degenerate {
            gens.push(SignedPermutation::identity(self.degree).negated());
        }
        let mut g = Self::with_base(self.degree, gens, prefix).expect("same degree");
        g.generators = self.generators.clone();
        g
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[SignedPermutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<u16> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Union of the per-level generators, without duplicates.
    pub fn strong_generators(&self) -> Vec<SignedPermutation> {
        let mut out: Vec<SignedPermutation> = Vec::new();
        for level in &self.levels {
            for g in &level.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Generators of the `k`-th stabilizer in the chain.
    pub fn stabilizer_generators(&self, k: usize) -> &[SignedPermutation] {
        &self.levels[k].gens
    }

    pub fn basic_orbit(&self, k: usize) -> &[u16] {
        &self.levels[k].orbit
    }

    /// Some product of generators is the identity bijection with sign −1;
    /// a tensor with this symmetry group vanishes identically.
    pub fn is_sign_degenerate(&self) -> bool {
        self.sign_degenerate
    }

    /// Number of distinct bijections, i.e. the product of basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Membership by sifting, honouring signs.
    pub fn contains(&self, g: &SignedPermutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, j) = sift_from(&self.levels, g.clone(), 0);
        j == self.levels.len() && residue.is_unsigned_identity() && (!residue.is_negative() || self.sign_degenerate)
    }

    /// All elements, each bijection once with its sign (the positive one for
    /// sign-degenerate groups). Intended for small groups.
    pub fn elements(&self) -> Vec<SignedPermutation> {
        let mut acc = vec![SignedPermutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * level.orbit.len());
            for &p in &level.orbit {
                let u = level.transversal[p as usize].as_ref().unwrap();
                for a in &acc {
                    next.push(u.compose_unchecked(a));
                }
            }
            acc = next;
        }
        acc
    }
}

fn first_moved(g: &SignedPermutation) -> u16 {
    (0..g.degree() as u16)
        .find(|&x| g.apply(x) != x)
        .expect("non-identity permutation")
}

fn sift_from(levels: &[Level], mut h: SignedPermutation, start: usize) -> (SignedPermutation, usize) {
    for (k, level) in levels.iter().enumerate().skip(start) {
        let p = h.apply(level.point);
        match &level.transversal[p as usize] {
            Some(u) => h = u.inverse().compose_unchecked(&h),
            None => return (h, k),
        }
    }
    (h, levels.len())
}
