use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1, .., n}`. Stored zero-based; constructed and printed
/// one-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Perm::from_one_based(&v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.one_based()
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// `images[i]` is the image of `i + 1`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::structural(format!("{images:?} is not a permutation")));
            }
            zero.push(x - 1);
        }
        Ok(Perm { images: zero })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x)
        });
        Perm { images }
    }

    /// The transposition of the one-based points `a` and `b` in `Σ_n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a - 1, b - 1);
        Perm { images }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    /// Zero-based image of a zero-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.arity(), other.arity(), "composing permutations of different arity");
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    /// The left action on lists: the entry at position `i` moves to
    /// position `self(i)`, so `(σ·x)_i = x_{σ⁻¹(i)}`.
    pub fn permute<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(xs.len(), self.arity());
        let mut out: Vec<Option<T>> = vec![None; xs.len()];
        for (i, x) in xs.iter().enumerate() {
            out[self.images[i]] = Some(x.clone());
        }
        out.into_iter().map(|x| x.expect("bijection")).collect()
    }

    /// All of `Σ_n` in lexicographic order of image lists; the identity is
    /// first.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("successor");
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    /// Position of this permutation in [`Perm::all`].
    pub fn lex_rank(&self) -> usize {
        let n = self.images.len();
        let mut rank = 0;
        let mut fact = (1..n).product::<usize>().max(1);
        let mut remaining: Vec<usize> = (0..n).collect();
        for (pos, &x) in self.images.iter().enumerate() {
            let idx = remaining.iter().position(|&r| r == x).expect("valid permutation");
            rank += idx * fact;
            remaining.remove(idx);
            if pos + 1 < n {
                fact /= n - 1 - pos;
            }
        }
        rank
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "]")
    }
}

/// `σ⟨j₁,…,j_k⟩`: the permutation of `Σ jᵢ` points that moves the i-th
/// contiguous block (of size `jᵢ`) to block position `σ(i)`, preserving the
/// order inside each block.
pub fn block_perm(sigma: &Perm, sizes: &[usize]) -> Result<Perm> {
    let k = sigma.arity();
    if sizes.len() != k {
        return Err(Error::structural(format!(
            "block permutation of arity {k} given {} block sizes",
            sizes.len()
        )));
    }
    // starting offset of each block position after permuting
    let inv = sigma.inverse();
    let mut target_start = vec![0; k];
    let mut offset = 0;
    for pos in 0..k {
        let block = inv.apply(pos);
        target_start[block] = offset;
        offset += sizes[block];
    }
    let mut images = Vec::with_capacity(offset);
    for (block, &size) in sizes.iter().enumerate() {
        images.extend((0..size).map(|t| target_start[block] + t));
    }
    Ok(Perm { images })
}

/// `τ₁ ⊕ … ⊕ τ_k`, acting blockwise.
pub fn block_sum(perms: &[Perm]) -> Perm {
    let mut images = Vec::new();
    let mut offset = 0;
    for p in perms {
        images.extend(p.images.iter().map(|x| x + offset));
        offset += p.arity();
    }
    Perm { images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(xs: &[usize]) -> Perm {
        Perm::from_one_based(xs).unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_one_based(&[1, 1]).is_err());
        assert!(Perm::from_one_based(&[0, 1]).is_err());
        assert!(Perm::from_one_based(&[3, 1]).is_err());
    }

    #[test]
    fn lex_order_and_rank_agree() {
        for n in 0..=5 {
            let all = Perm::all(n);
            assert_eq!(all.len(), (1..=n).product::<usize>());
            assert!(all[0].is_identity());
            for (i, q) in all.iter().enumerate() {
                assert_eq!(q.lex_rank(), i);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn permute_moves_entries_to_images() {
        let s = p(&[2, 3, 1]);
        assert_eq!(s.permute(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
        let t = p(&[3, 1, 2]);
        let xs = ['a', 'b', 'c'];
        assert_eq!(s.compose(&t).permute(&xs), s.permute(&t.permute(&xs)));
    }

    #[test]
    fn block_perm_identity() {
        let b = block_perm(&Perm::identity(3), &[2, 0, 1]).unwrap();
        assert!(b.is_identity());
    }

    #[test]
    fn block_perm_unit_blocks_is_sigma() {
        assert_eq!(block_perm(&p(&[2, 1]), &[1, 1]).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn block_perm_moves_first_block_after_second() {
        // blocks [1,2] and [3]; swapping them sends 1→2, 2→3, 3→1
        assert_eq!(block_perm(&p(&[2, 1]), &[2, 1]).unwrap(), p(&[2, 3, 1]));
    }

    #[test]
    fn block_perm_size_mismatch() {
        assert!(block_perm(&p(&[2, 1]), &[1]).is_err());
    }

    #[test]
    fn block_sum_examples() {
        assert_eq!(block_sum(&[]), Perm::identity(0));
        assert_eq!(block_sum(&[Perm::identity(2), Perm::identity(3)]), Perm::identity(5));
        assert_eq!(block_sum(&[p(&[2, 1]), p(&[2, 1])]), p(&[2, 1, 4, 3]));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(Perm::from_zero_based)
    }

    proptest! {
        #[test]
        fn block_perm_is_homomorphism(
            (s, t, sizes) in (1usize..5).prop_flat_map(|k| (arb_perm(k), arb_perm(k), prop::collection::vec(0usize..3, k..=k)))
        ) {
            let lhs = block_perm(&s.compose(&t), &sizes).unwrap();
            // sizes seen by s are the sizes after t has moved the blocks
            let moved = t.permute(&sizes);
            let rhs = block_perm(&s, &moved).unwrap().compose(&block_perm(&t, &sizes).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn block_sum_commutes_past_block_perm(
            (s, taus) in (1usize..4).prop_flat_map(|k| (
                arb_perm(k),
                prop::collection::vec((0usize..4).prop_flat_map(arb_perm), k..=k),
            ))
        ) {
            // (τ_{σ⁻¹(1)} ⊕ …) ∘ σ⟨j⟩ = σ⟨j⟩ ∘ (τ₁ ⊕ …)
            let sizes: Vec<usize> = taus.iter().map(Perm::arity).collect();
            let b = block_perm(&s, &sizes).unwrap();
            let moved = s.permute(&taus);
            prop_assert_eq!(block_sum(&moved).compose(&b), b.compose(&block_sum(&taus)));
        }

        #[test]
        fn inverse_cancels(q in (0usize..6).prop_flat_map(arb_perm)) {
            prop_assert!(q.compose(&q.inverse()).is_identity());
            prop_assert!(q.inverse().compose(&q).is_identity());
        }
    }
}
