use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::PermError;

/// A bijection on `0..n` together with an overall sign.
///
/// Points are stored 0-based; the textual forms (`Display`, `FromStr`) use the
/// 1-based disjoint-cycle notation, e.g. `-(1,2)(5,7,6)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedPermutation {
    images: Vec<u16>,
    negative: bool,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u16).collect(),
            negative: false,
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u16>, negative: bool) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection);
            }
            seen[x] = true;
        }
        Ok(Self { images, negative })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u16>, negative: bool) -> Self {
        debug_assert!(Self::from_images(images.clone(), negative).is_ok());
        Self { images, negative }
    }

    /// Product of disjoint or overlapping cycles given with 0-based points.
    pub fn from_cycles(n: usize, cycles: &[&[u16]], negative: bool) -> Result<Self, PermError> {
        let mut p = Self::identity(n);
        for cycle in cycles {
            if cycle.iter().any(|&x| x as usize >= n) {
                return Err(PermError::PointOutOfRange);
            }
            let mut c = Self::identity(n);
            for (i, &x) in cycle.iter().enumerate() {
                c.images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
            if !c.is_bijection() {
                return Err(PermError::NotBijection);
            }
            p = p.compose(&c)?;
        }
        p.negative = negative;
        Ok(p)
    }

    /// Transposition of two 0-based points.
    pub fn transposition(n: usize, a: u16, b: u16, negative: bool) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a as usize, b as usize);
        p.negative = negative;
        p
    }

    fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images
            .iter()
            .all(|&x| !std::mem::replace(&mut seen[x as usize], true))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u16) -> u16 {
        self.images[x as usize]
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            images: self.images.clone(),
            negative: !self.negative,
        }
    }

    pub fn with_sign(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }

    /// True when the underlying bijection is the identity, ignoring the sign.
    pub fn is_unsigned_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn is_identity(&self) -> bool {
        !self.negative && self.is_unsigned_identity()
    }

    /// `self ∘ other`: apply `other` first, then `self`. Signs multiply.
    pub fn compose(&self, other: &Self) -> Result<Self, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
            negative: self.negative ^ other.negative,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Self {
            images: inv,
            negative: self.negative,
        }
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u16];
            seen[start] = true;
            let mut x = self.images[start] as usize;
            while x != start {
                seen[x] = true;
                cycle.push(x as u16);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Parses the 1-based cycle notation for a permutation on `n` points.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self, PermError> {
        let text = text.trim();
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, text.strip_prefix('+').unwrap_or(text).trim()),
        };
        let mut cycles: Vec<Vec<u16>> = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let close = inner.find(')').ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let content = inner[..close].trim();
            if !content.is_empty() {
                let mut cycle = Vec::new();
                for tok in content.split(',') {
                    let v: u16 = tok.trim().parse().map_err(|_| PermError::Syntax(text.to_string()))?;
                    if v == 0 || v as usize > n {
                        return Err(PermError::PointOutOfRange);
                    }
                    cycle.push(v - 1);
                }
                cycles.push(cycle);
            }
            rest = inner[close + 1..].trim_start();
        }
        let refs: Vec<&[u16]> = cycles.iter().map(|c| c.as_slice()).collect();
        Self::from_cycles(n, &refs, negative)
    }
}

/// Lexicographic on the image sequence, then `+` before `-`.
impl Ord for SignedPermutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images.cmp(&other.images).then(self.negative.cmp(&other.negative))
    }
}

impl PartialOrd for SignedPermutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Parses cycle notation; the degree is the largest point mentioned. Use
/// [`SignedPermutation::parse_cycles`] when the degree is known.
impl FromStr for SignedPermutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Self::parse_cycles(s, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> SignedPermutation {
        SignedPermutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let q = p("-(1,3,2)(4,5)", 5);
        let e = SignedPermutation::identity(5);
        assert_eq!(e.compose(&q).unwrap(), q);
        assert_eq!(q.compose(&e).unwrap(), q);
    }

    #[test]
    fn inverse_gives_positive_identity() {
        let q = p("-(1,3,2)(4,5)", 5);
        let r = q.compose(&q.inverse()).unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn negative_involution_squares_to_identity() {
        let t = p("-(1,2)", 2);
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn composition_is_right_to_left() {
        // (1,2) after (2,3): 3 -> 2 -> 1
        let a = p("(1,2)", 3);
        let b = p("(2,3)", 3);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.apply(2), 0);
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let a = SignedPermutation::identity(3);
        let b = SignedPermutation::identity(4);
        assert!(matches!(
            a.compose(&b),
            Err(PermError::DegreeMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn cycle_text_round_trip() {
        let q = p("-(1,2)(5,7,6)", 8);
        assert_eq!(q.to_string(), "-(1,2)(5,7,6)");
        assert_eq!(p(&q.to_string(), 8), q);
        assert_eq!(SignedPermutation::identity(3).to_string(), "()");
        assert_eq!(p("()", 3), SignedPermutation::identity(3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SignedPermutation::from_images(vec![0, 0, 1], false).is_err());
        assert!(SignedPermutation::parse_cycles("(1,9)", 4).is_err());
        assert!(SignedPermutation::parse_cycles("(1,2", 4).is_err());
    }

    #[test]
    fn order_is_lexicographic_then_sign() {
        let a = SignedPermutation::identity(3);
        let b = a.negated();
        let c = p("(2,3)", 3);
        assert!(a < b);
        assert!(b < c);
    }
}
