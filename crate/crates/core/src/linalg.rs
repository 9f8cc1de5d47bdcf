//! Sparse exact row reduction over the rationals, with a modular screen used
//! to discard dependent rows cheaply.
//!
//! Columns are ordered so that the largest column index is the leading one:
//! each pivot row is solved for its largest column.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse row, sorted by column, without explicit zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseRow {
    entries: Vec<(usize, BigRational)>,
}

impl SparseRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(map: BTreeMap<usize, BigRational>) -> Self {
        Self {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, BigRational)>) -> Self {
        let mut map: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (c, v) in entries {
            *map.entry(c).or_insert_with(BigRational::zero) += v;
        }
        Self::from_map(map)
    }

    pub fn entries(&self) -> &[(usize, BigRational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &BigRational)> {
        self.entries.last().map(|(c, v)| (*c, v))
    }

    pub fn get(&self, col: usize) -> Option<&BigRational> {
        self.entries
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&mut self, f: &BigRational) {
        for (_, v) in &mut self.entries {
            *v *= f;
        }
    }

    /// `self += f · other`.
    pub fn axpy(&mut self, f: &BigRational, other: &SparseRow) {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut j = 0;
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        while let Some((c, v)) = a.peek() {
            if j < other.entries.len() && other.entries[j].0 < *c {
                out.push((other.entries[j].0, f * &other.entries[j].1));
                j += 1;
            } else if j < other.entries.len() && other.entries[j].0 == *c {
                let s = v + f * &other.entries[j].1;
                if !s.is_zero() {
                    out.push((*c, s));
                }
                j += 1;
                a.next();
            } else {
                out.push(a.next().unwrap());
            }
        }
        for (c, v) in &other.entries[j..] {
            out.push((*c, f * v));
        }
        self.entries = out;
    }

    /// Clears denominators and common factors, making the leading entry
    /// positive. Keeps the row's null space unchanged.
    pub fn primitive(&self) -> SparseRow {
        if self.entries.is_empty() {
            return self.clone();
        }
        let lcm = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self
            .entries
            .iter()
            .map(|(_, v)| (v * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        SparseRow {
            entries: self
                .entries
                .iter()
                .zip(ints)
                .map(|((c, _), x)| (*c, BigRational::from_integer(&sign * x / &g)))
                .collect(),
        }
    }
}

/// Inverse modulo the prime `p`.
fn mod_inverse(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Modulus used by the screen: the Mersenne prime `2^61 − 1`.
pub const SCREEN_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((x % &m) + &m) % &m;
    r.to_u64().unwrap()
}

/// Image of a rational modulo `p`, or `None` when the denominator vanishes.
pub fn rational_mod(x: &BigRational, p: u64) -> Option<u64> {
    let d = bigint_mod(x.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(bigint_mod(x.numer(), p), mod_inverse(d, p), p))
}

/// Incremental echelon form modulo a prime.
#[derive(Clone, Debug)]
pub struct ModpEchelon {
    p: u64,
    pivots: BTreeMap<usize, Vec<(usize, u64)>>,
}

impl Default for ModpEchelon {
    fn default() -> Self {
        Self::new(SCREEN_PRIME)
    }
}

impl ModpEchelon {
    pub fn new(p: u64) -> Self {
        Self {
            p,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether it raised the rank. A row whose image is
    /// undefined is reported as independent.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let mut dense: BTreeMap<usize, u64> = BTreeMap::new();
        for (c, v) in row.entries() {
            match rational_mod(v, self.p) {
                Some(0) => {}
                Some(x) => {
                    dense.insert(*c, x);
                }
                None => return true,
            }
        }
        self.insert_mod(dense)
    }

    fn insert_mod(&mut self, mut dense: BTreeMap<usize, u64>) -> bool {
        let p = self.p;
        while let Some((&c, &v)) = dense.iter().next_back() {
            match self.pivots.get(&c) {
                Some(prow) => {
                    for &(pc, pv) in prow {
                        let e = dense.entry(pc).or_insert(0);
                        *e = (*e + p - mul_mod(v, pv, p)) % p;
                        if *e == 0 {
                            dense.remove(&pc);
                        }
                    }
                }
                None => {
                    let inv = mod_inverse(v, p);
                    let row = dense.into_iter().map(|(k, x)| (k, mul_mod(x, inv, p))).collect();
                    self.pivots.insert(c, row);
                    return true;
                }
            }
        }
        false
    }
}

/// Incremental exact echelon form; pivot rows are normalized to a leading
/// coefficient of one.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
    reduced: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.pivots.get(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> {
        self.pivots.iter().map(|(c, r)| (*c, r))
    }

    /// Reduces leading terms against the pivots until the leading column is
    /// not a pivot.
    fn reduce_head(&self, mut row: SparseRow) -> SparseRow {
        while let Some((c, v)) = row.leading() {
            match self.pivots.get(&c) {
                Some(prow) => {
                    let f = -v.clone();
                    row.axpy(&f, prow);
                }
                None => break,
            }
        }
        row
    }

    /// Adds a row; returns whether it raised the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce_head(row);
        let Some((c, v)) = row.leading() else {
            return false;
        };
        let inv = v.recip();
        row.scale(&inv);
        self.pivots.insert(c, row);
        self.reduced = false;
        true
    }

    /// Back-substitutes so that no pivot row mentions another pivot column.
    pub fn reduce(&mut self) {
        if self.reduced {
            return;
        }
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for &c in &cols {
            let mut row = self.pivots.remove(&c).unwrap();
            loop {
                let hit = row
                    .entries()
                    .iter()
                    .rev()
                    .find(|(k, _)| *k != c && self.pivots.contains_key(k))
                    .map(|(k, v)| (*k, v.clone()));
                match hit {
                    Some((k, v)) => row.axpy(&-v, &self.pivots[&k]),
                    None => break,
                }
            }
            self.pivots.insert(c, row);
        }
        self.reduced = true;
    }

    /// Normal form of a row: no pivot column survives.
    pub fn normal_form(&self, row: SparseRow) -> SparseRow {
        let mut row = row;
        loop {
            let hit = row
                .entries()
                .iter()
                .rev()
                .find(|(k, _)| self.pivots.contains_key(k))
                .map(|(k, v)| (*k, v.clone()));
            match hit {
                Some((k, v)) => row.axpy(&-v, &self.pivots[&k]),
                None => return row,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn row(v: &[(usize, i64)]) -> SparseRow {
        SparseRow::from_entries(v.iter().map(|&(c, x)| (c, q(x))))
    }

    #[test]
    fn echelon_rank_and_normal_form() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 2), (2, 3)])));
        assert!(e.insert(row(&[(0, 2), (1, 1)])));
        assert!(!e.insert(row(&[(0, 5), (1, 4), (2, 3)])));
        e.reduce();
        assert_eq!(e.rank(), 2);
        for (c, r) in e.rows() {
            assert_eq!(r.leading().unwrap().0, c);
            assert!(r.entries().iter().all(|(k, _)| *k == c || e.pivot_row(*k).is_none()));
        }
        let nf = e.normal_form(row(&[(2, 1), (1, 1)]));
        assert!(nf.entries().iter().all(|(k, _)| *k == 0));
    }

    #[test]
    fn modular_screen_agrees_with_exact_rank() {
        let rows = [
            row(&[(0, 3), (4, 1)]),
            row(&[(1, 7), (4, -2)]),
            row(&[(0, 6), (1, 7)]),
            row(&[(2, 1), (3, 1)]),
        ];
        let mut e = Echelon::new();
        let mut m = ModpEchelon::default();
        for r in &rows {
            assert_eq!(e.insert(r.clone()), m.insert(r));
        }
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn huge_coefficients_stay_exact() {
        // A unimodular-style system whose reduction produces integers of about
        // nine hundred digits.
        let big = BigInt::from(10).pow(300) + BigInt::from(7);
        let n = 4;
        let mut e = Echelon::new();
        let mut rows = Vec::new();
        for i in 0..n {
            let entries: Vec<(usize, BigRational)> = (0..n)
                .map(|j| {
                    let x = if i == j {
                        big.pow(3) + BigInt::from(1)
                    } else {
                        BigInt::from((i * n + j) as i64 + 1) * &big
                    };
                    (j, BigRational::from_integer(x))
                })
                .collect();
            rows.push(SparseRow::from_entries(entries));
        }
        for r in &rows {
            assert!(e.insert(r.clone()));
        }
        e.reduce();
        for c in 0..n {
            assert_eq!(e.pivot_row(c).unwrap().entries(), &[(c, q(1))]);
        }
        let mut combo = rows[0].clone();
        combo.axpy(&BigRational::from_integer(big.pow(2)), &rows[1]);
        assert!(e.normal_form(combo).is_zero());
        let mut dependent = Echelon::new();
        for r in &rows[..3] {
            dependent.insert(r.clone());
        }
        let mut combo = rows[0].clone();
        combo.axpy(&BigRational::new(big.pow(3), big.clone() + BigInt::from(1)), &rows[2]);
        assert!(!dependent.insert(combo));
    }

    #[test]
    fn primitive_rows() {
        let r = SparseRow::from_entries([
            (0, BigRational::new(1.into(), 2.into())),
            (3, BigRational::new((-3).into(), 4.into())),
        ]);
        assert_eq!(r.primitive(), row(&[(0, -2), (3, 3)]));
    }
}
