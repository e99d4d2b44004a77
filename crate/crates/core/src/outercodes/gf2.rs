//! Bit-packed GF(2) linear algebra.

use super::matrix::Matrix;

pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// A bit vector packed little-endian into u64 words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(bits: usize) -> Self {
        BitVector {
            words: vec![0; words_for(bits)],
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Index of the highest set bit.
    #[inline]
    pub fn leading_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Incrementally grown GF(2) basis keyed by leading bit.
#[derive(Clone, Debug)]
pub struct Gf2Basis {
    dim: usize,
    basis: Vec<Option<BitVector>>,
    rank: usize,
}

impl Gf2Basis {
    pub fn new(dim: usize) -> Self {
        Gf2Basis {
            dim,
            basis: vec![None; dim],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.dim
    }

    pub fn clear(&mut self) {
        self.basis.iter_mut().for_each(|b| *b = None);
        self.rank = 0;
    }

    /// Add a vector; returns whether it increased the rank.
    pub fn insert(&mut self, mut v: BitVector) -> bool {
        while let Some(p) = v.leading_bit() {
            match &self.basis[p] {
                Some(b) => v.xor_assign(b),
                None => {
                    self.basis[p] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    /// Whether v lies in the span, without modifying the basis.
    pub fn contains(&self, v: &BitVector) -> bool {
        let mut v = v.clone();
        while let Some(p) = v.leading_bit() {
            match &self.basis[p] {
                Some(b) => v.xor_assign(b),
                None => return false,
            }
        }
        true
    }
}

/// Rank of a binary matrix given as bit-packed rows.
pub fn rank_gf2(rows: &[BitVector], cols: usize) -> usize {
    let mut b = Gf2Basis::new(cols);
    for r in rows {
        b.insert(r.clone());
        if b.is_full() {
            break;
        }
    }
    b.rank()
}

/// Pack the columns of a binary matrix: entry i of the result is column i.
pub fn pack_columns(m: &Matrix) -> Vec<BitVector> {
    assert_eq!(m.field().q(), 2, "bit packing needs a binary matrix");
    (0..m.cols())
        .map(|c| {
            let mut v = BitVector::zeros(m.rows());
            for r in 0..m.rows() {
                if !m.get(r, c).is_zero() {
                    v.flip(r);
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{FieldElement, FieldSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn packed_rank_matches_dense() {
        let f = FieldSpec::of_order(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(r, c) in &[(3, 5), (70, 64), (40, 130), (130, 90)] {
            for _ in 0..10 {
                let mut m = Matrix::zeros(&f, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, FieldElement(rng.gen_range(0..2)));
                    }
                }
                let rows = pack_columns(&m.transpose());
                assert_eq!(rank_gf2(&rows, c), m.rank());
            }
        }
    }

    #[test]
    fn leading_bit_across_words() {
        let mut v = BitVector::zeros(130);
        assert_eq!(v.leading_bit(), None);
        v.flip(3);
        v.flip(129);
        assert_eq!(v.leading_bit(), Some(129));
        v.flip(129);
        assert_eq!(v.leading_bit(), Some(3));
    }
}
