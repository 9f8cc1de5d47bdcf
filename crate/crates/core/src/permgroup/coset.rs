use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{PermError, PermGroup, SignedPermutation};

/// Result of canonicalizing an index configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetRep {
    /// The least element of the double coset, carrying the accumulated sign.
    Rep(SignedPermutation),
    /// The coset contains both `h` and `-h`: the monomial vanishes.
    Zero,
}

impl CosetRep {
    pub fn is_zero(&self) -> bool {
        matches!(self, CosetRep::Zero)
    }
}

/// Largest `|S|·|D|` accepted by the exhaustive search.
const BRUTE_FORCE_LIMIT: u64 = 20_000_000;

/// Dummy relabelling group on `2m` names paired as `(0,1), (2,3), ...`:
/// swapping the two names of a pair and exchanging whole pairs, all with
/// sign +1.
pub fn dummy_pair_group(pairs: usize) -> PermGroup {
    let n = 2 * pairs;
    let mut gens = Vec::new();
    for k in 0..pairs as u16 {
        gens.push(SignedPermutation::transposition(n, 2 * k, 2 * k + 1, false));
        if (k as usize) + 1 < pairs {
            gens.push(super::slot_groups::block_swap(n, 2 * k, 2 * k + 2, 2));
        }
    }
    PermGroup::schreier_sims(n, gens).expect("consistent degree")
}

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

fn is_dummy_pair_group(d: &PermGroup) -> bool {
    let n = d.degree();
    if n % 2 == 1 || d.is_sign_degenerate() {
        return false;
    }
    let preserves_pairs = d
        .strong_generators()
        .iter()
        .all(|g| !g.is_negative() && (0..n as u16).step_by(2).all(|x| g.apply(x) ^ 1 == g.apply(x + 1)));
    let m = n / 2;
    preserves_pairs && d.order() == (BigUint::from(1u32) << m) * factorial(m)
}

/// Canonical representative of the double coset `D·g·S`, where `g` maps slot
/// positions to index names, `S` permutes slots and `D` permutes names.
///
/// The representative is the least element under lexicographic order of the
/// image sequence. When `D` is the full dummy-pair group the search is a
/// breadth-first backtrack over a stabilizer chain of `S` with base
/// `0, 1, ..., n-1`; any other `D` falls back to exhaustive enumeration.
pub fn canonical_double_coset_rep(g: &SignedPermutation, s: &PermGroup, d: &PermGroup) -> Result<CosetRep, PermError> {
    let n = g.degree();
    for other in [s.degree(), d.degree()] {
        if other != n {
            return Err(PermError::DegreeMismatch { left: n, right: other });
        }
    }
    if is_dummy_pair_group(d) {
        let base: Vec<u16> = (0..n as u16).collect();
        let canon = if s.base() == base {
            min_over_slot_group(g, s)
        } else {
            min_over_slot_group(g, &s.rebased(&base))
        };
        return Ok(canon.into_rep());
    }
    let size = s.order() * d.order();
    match size.to_u64() {
        Some(k) if k <= BRUTE_FORCE_LIMIT => Ok(brute_force_double_coset_rep(g, s, d)),
        _ => Err(PermError::TooLarge(size.to_string())),
    }
}

/// Exhaustive minimum over all `d·g·s`.
pub fn brute_force_double_coset_rep(g: &SignedPermutation, s: &PermGroup, d: &PermGroup) -> CosetRep {
    if s.is_sign_degenerate() || d.is_sign_degenerate() {
        return CosetRep::Zero;
    }
    let d_elems = d.elements();
    let mut best: Option<SignedPermutation> = None;
    let mut zero = false;
    for se in s.elements() {
        let gs = g.compose_unchecked(&se);
        for de in &d_elems {
            let c = de.compose_unchecked(&gs);
            match &best {
                Some(b) if b.images() < c.images() => {}
                Some(b) if b.images() == c.images() => zero |= b.is_negative() != c.is_negative(),
                _ => {
                    zero = false;
                    best = Some(c);
                }
            }
        }
    }
    match best {
        Some(_) if zero => CosetRep::Zero,
        Some(b) => CosetRep::Rep(b),
        None => unreachable!("groups contain the identity"),
    }
}

/// Outcome of the slot-group search: the unsigned minimum is always reported,
/// even when the configuration vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SlotCanon {
    pub names: Vec<u16>,
    pub negative: bool,
    pub zero: bool,
}

impl SlotCanon {
    pub fn into_rep(self) -> CosetRep {
        if self.zero {
            CosetRep::Zero
        } else {
            CosetRep::Rep(SignedPermutation::from_images_unchecked(self.names, self.negative))
        }
    }
}

const NONE: u16 = u16::MAX;

struct Branch {
    t: SignedPermutation,
    /// Original name -> canonical name.
    assigned: Vec<u16>,
    pairs_open: u16,
}

/// Minimizes `d·g·s` over the slot group `s` (whose chain must have base
/// `0..n`) and the dummy-pair group `d`, which reduces to greedy renaming.
///
/// Position `i` of the result holds the name of original slot `t(i)`. A slot
/// whose partner already appeared gets the partner's canonical name plus one;
/// otherwise it opens the next pair. Every branch achieving the minimal label
/// survives, so the leaves are exactly the minimizing elements of `S` and a
/// sign clash among them means the configuration is zero.
pub(crate) fn min_over_slot_group(g: &SignedPermutation, s: &PermGroup) -> SlotCanon {
    let n = g.degree();
    debug_assert!(s.levels.len() == n && s.levels.iter().enumerate().all(|(i, l)| l.point as usize == i));
    let mut branches = vec![Branch {
        t: SignedPermutation::identity(n),
        assigned: vec![NONE; n],
        pairs_open: 0,
    }];
    let mut names = Vec::with_capacity(n);
    let mut picks: Vec<(usize, u16)> = Vec::new();
    for level in &s.levels[..n] {
        let mut best = NONE;
        picks.clear();
        for (bi, b) in branches.iter().enumerate() {
            for &p in &level.orbit {
                let nm = g.apply(b.t.apply(p));
                let partner = b.assigned[(nm ^ 1) as usize];
                let label = if partner != NONE { partner ^ 1 } else { 2 * b.pairs_open };
                if label < best {
                    best = label;
                    picks.clear();
                }
                if label == best {
                    picks.push((bi, p));
                }
            }
        }
        let trivial = level.orbit.len() == 1;
        let mut next = Vec::with_capacity(picks.len());
        for &(bi, p) in &picks {
            let b = &branches[bi];
            let nm = g.apply(b.t.apply(p));
            let t = if trivial {
                b.t.clone()
            } else {
                b.t.compose_unchecked(level.transversal[p as usize].as_ref().unwrap())
            };
            let mut assigned = b.assigned.clone();
            assigned[nm as usize] = best;
            let pairs_open = if best == 2 * b.pairs_open {
                b.pairs_open + 1
            } else {
                b.pairs_open
            };
            next.push(Branch {
                t,
                assigned,
                pairs_open,
            });
        }
        branches = next;
        names.push(best);
    }
    let negative = g.is_negative() ^ branches[0].t.is_negative();
    let zero = s.is_sign_degenerate()
        || branches
            .iter()
            .any(|b| (g.is_negative() ^ b.t.is_negative()) != negative);
    SlotCanon { names, negative, zero }
}
