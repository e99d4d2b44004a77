//! Joint compositions and joint weights of codeword pairs.
//!
//! A joint composition κ is a q×q count matrix: κ[s][t] is the number of
//! positions where the first vector holds the element of composition index s
//! and the second the element of index t. Its blocks are κ₀₀, κ₁ (row 0
//! without the corner), κ₂ (column 0 without the corner) and the
//! (q−1)×(q−1) block κ₃.

use std::fmt;

use rug::Integer;

use super::combinatorics::{composition_count, compositions_iter};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldSpec};

/// Guard on the number of enumerated keys for composition-type spaces.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

pub(crate) fn guard_count(what: impl FnOnce() -> String, count: &Integer) -> Result<u64> {
    match count.to_u64() {
        Some(c) if c <= ENUMERATION_LIMIT => Ok(c),
        _ => Err(Error::too_large(what(), count, ENUMERATION_LIMIT)),
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JointComposition {
    q: usize,
    cells: Vec<u32>,
}

impl JointComposition {
    pub fn zeros(q: usize) -> Self {
        JointComposition {
            q,
            cells: vec![0; q * q],
        }
    }

    pub fn from_cells(q: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != q * q {
            return Err(Error::invalid(
                "joint composition",
                format!("expected {} cells, got {}", q * q, cells.len()),
            ));
        }
        Ok(JointComposition { q, cells })
    }

    /// Joint composition of two equal-length vectors.
    pub fn of_pair(field: &FieldSpec, r1: &[FieldElement], r2: &[FieldElement]) -> Self {
        assert_eq!(r1.len(), r2.len());
        let q = field.q() as usize;
        let mut k = JointComposition::zeros(q);
        for (&a, &b) in r1.iter().zip(r2) {
            k.cells[field.index_of_element(a) * q + field.index_of_element(b)] += 1;
        }
        k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize) -> u32 {
        self.cells[s * self.q + t]
    }

    pub fn set(&mut self, s: usize, t: usize, v: u32) {
        self.cells[s * self.q + t] = v;
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().map(|&c| c as u64).sum()
    }

    /// Row sums (composition of the first vector) and column sums
    /// (composition of the second).
    pub fn gamma_projections(&self) -> (Vec<u32>, Vec<u32>) {
        let q = self.q;
        let mut g1 = vec![0; q];
        let mut g2 = vec![0; q];
        for s in 0..q {
            for t in 0..q {
                g1[s] += self.get(s, t);
                g2[t] += self.get(s, t);
            }
        }
        (g1, g2)
    }

    pub fn tau(&self) -> JointWeight {
        let q = self.q;
        let mut tau = [self.get(0, 0), 0, 0, 0];
        for t in 1..q {
            tau[1] += self.get(0, t);
        }
        for s in 1..q {
            tau[2] += self.get(s, 0);
            for t in 1..q {
                tau[3] += self.get(s, t);
            }
        }
        JointWeight(tau)
    }

    /// Zero-one support pattern of the (q−1)×(q−1) block κ₃.
    pub fn kappa3_pattern(&self) -> Vec<bool> {
        let n = self.q - 1;
        let mut m = vec![false; n * n];
        for s in 0..n {
            for t in 0..n {
                m[s * n + t] = self.get(s + 1, t + 1) > 0;
            }
        }
        m
    }
}

impl fmt::Display for JointComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// (τ₀, τ₁, τ₂, τ₃): positions with (r₁, r₂) zero/zero, zero/nonzero,
/// nonzero/zero and nonzero/nonzero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JointWeight(pub [u32; 4]);

impl JointWeight {
    pub fn of_pair(r1: &[FieldElement], r2: &[FieldElement]) -> Self {
        let mut tau = [0u32; 4];
        for (&a, &b) in r1.iter().zip(r2) {
            tau[((!a.is_zero() as usize) << 1) | (!b.is_zero() as usize)] += 1;
        }
        JointWeight(tau)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

pub fn gamma_projections(kappa: &JointComposition) -> (Vec<u32>, Vec<u32>) {
    kappa.gamma_projections()
}

pub fn tau_of_kappa(kappa: &JointComposition) -> JointWeight {
    kappa.tau()
}

/// Whether the n×n zero-one matrix (row-major) is a circulant permutation
/// pattern: all ones on the wrapped diagonal j = (i + s) mod n for one shift
/// s. With `allow_incomplete`, any nonzero subset of such a diagonal counts.
pub fn is_circulant_permutation_pattern(m: &[bool], n: usize, allow_incomplete: bool) -> bool {
    assert_eq!(m.len(), n * n, "pattern must be {n}×{n}");
    if n == 0 || !m.iter().any(|&b| b) {
        return false;
    }
    (0..n).any(|s| {
        (0..n).all(|i| {
            (0..n).all(|j| {
                let on_diag = j == (i + s) % n;
                if allow_incomplete {
                    on_diag || !m[i * n + j]
                } else {
                    on_diag == m[i * n + j]
                }
            })
        })
    })
}

/// Membership in 𝒦_{q,h}: κ is the joint composition of a pair of nonzero,
/// linearly independent vectors.
pub fn in_k_qh(kappa: &JointComposition) -> bool {
    let JointWeight([_, t1, t2, t3]) = kappa.tau();
    let nonzero = (t1 > 0) as u32 + (t2 > 0) as u32 + (t3 > 0) as u32;
    if nonzero >= 2 {
        return true;
    }
    if t1 == 0 && t2 == 0 && t3 > 0 {
        return !is_circulant_permutation_pattern(&kappa.kappa3_pattern(), kappa.q() - 1, true);
    }
    false
}

/// Membership in 𝒯_{2,h}: at least two of τ₁, τ₂, τ₃ positive.
pub fn in_t_2h(tau: &JointWeight) -> bool {
    tau.0[1..].iter().filter(|&&t| t > 0).count() >= 2
}

/// All q×q nonnegative matrices with entries summing to j.
pub fn joint_compositions_iter(j: u32, q: usize) -> Result<impl Iterator<Item = JointComposition>> {
    let count = composition_count(j as u64, (q * q) as u64);
    guard_count(|| format!("joint-composition space (j = {j}, q = {q})"), &count)?;
    Ok(compositions_iter(j, q * q).map(move |cells| JointComposition { q, cells }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa(q: usize, entries: &[((usize, usize), u32)]) -> JointComposition {
        let mut k = JointComposition::zeros(q);
        for &((s, t), v) in entries {
            k.set(s, t, v);
        }
        k
    }

    #[test]
    fn projections_and_tau() {
        let k = kappa(2, &[((0, 0), 3), ((0, 1), 1), ((1, 0), 1)]);
        assert_eq!(k.tau(), JointWeight([3, 1, 1, 0]));
        assert_eq!(k.gamma_projections(), (vec![4, 1], vec![4, 1]));
        let z = kappa(4, &[((0, 0), 6)]);
        assert_eq!(z.gamma_projections(), (vec![6, 0, 0, 0], vec![6, 0, 0, 0]));
    }

    #[test]
    fn membership_examples() {
        assert!(in_k_qh(&kappa(2, &[((0, 1), 1), ((1, 0), 1)])));
        assert!(!in_k_qh(&kappa(2, &[((1, 1), 3)])));
        let id = kappa(4, &[((1, 1), 1), ((2, 2), 1), ((3, 3), 1)]);
        assert!(!in_k_qh(&id));
        // shift by one: second vector is α times the first
        assert!(!in_k_qh(&kappa(4, &[((1, 2), 2), ((3, 1), 1)])));
        // two different ratios on the support
        assert!(in_k_qh(&kappa(4, &[((1, 1), 1), ((1, 2), 1)])));
        assert!(!in_k_qh(&kappa(4, &[((0, 2), 2)])));
        assert!(in_t_2h(&JointWeight([0, 1, 1, 0])));
        assert!(!in_t_2h(&JointWeight([1, 0, 0, 1])));
    }

    #[test]
    fn circulant_patterns() {
        let id = [true, false, false, false, true, false, false, false, true];
        assert!(is_circulant_permutation_pattern(&id, 3, false));
        let partial = [true, false, false, false, false, false, false, false, true];
        assert!(!is_circulant_permutation_pattern(&partial, 3, false));
        assert!(is_circulant_permutation_pattern(&partial, 3, true));
        let anti = [false, false, true, false, true, false, true, false, false];
        assert!(!is_circulant_permutation_pattern(&anti, 3, true));
    }

    #[test]
    fn joint_composition_counts() {
        assert_eq!(joint_compositions_iter(0, 2).unwrap().count(), 1);
        assert_eq!(joint_compositions_iter(1, 2).unwrap().count(), 4);
        assert_eq!(joint_compositions_iter(2, 2).unwrap().count(), 10);
        assert!(joint_compositions_iter(200, 16).is_err());
    }
}
