//! Generators for the slot symmetries of the built-in tensors.

use super::SignedPermutation;

/// `R_{bacd} = -R_{abcd}`, `R_{abdc} = -R_{abcd}`, `R_{cdab} = R_{abcd}`.
pub fn riemann_generators() -> Vec<SignedPermutation> {
    vec![
        SignedPermutation::transposition(4, 0, 1, true),
        SignedPermutation::transposition(4, 2, 3, true),
        SignedPermutation::from_cycles(4, &[&[0, 2], &[1, 3]], false).unwrap(),
    ]
}

/// Totally antisymmetric tensor of the given rank.
pub fn epsilon_generators(rank: usize) -> Vec<SignedPermutation> {
    (1..rank as u16)
        .map(|i| SignedPermutation::transposition(rank, i - 1, i, true))
        .collect()
}

/// Symmetric rank-2 tensor (metric, Ricci).
pub fn symmetric_pair_generators() -> Vec<SignedPermutation> {
    vec![SignedPermutation::transposition(2, 0, 1, false)]
}

/// Embeds a permutation on `g.degree()` points into `n` points at `offset`.
pub fn shift(g: &SignedPermutation, offset: u16, n: usize) -> SignedPermutation {
    let mut images: Vec<u16> = (0..n as u16).collect();
    for (i, &x) in g.images().iter().enumerate() {
        images[offset as usize + i] = offset + x;
    }
    SignedPermutation::from_images_unchecked(images, g.is_negative())
}

/// Exchanges the slot ranges `a..a+len` and `b..b+len` (sign +1).
pub fn block_swap(n: usize, a: u16, b: u16, len: u16) -> SignedPermutation {
    let mut images: Vec<u16> = (0..n as u16).collect();
    for k in 0..len {
        images[(a + k) as usize] = b + k;
        images[(b + k) as usize] = a + k;
    }
    SignedPermutation::from_images_unchecked(images, false)
}
