//! Outer codes: explicit linear codes, Hamming codes, random ensembles, and
//! the linear algebra they need.

mod exhaustive;
pub mod gf2;
mod io;
mod matrix;

use rand::Rng;
use rug::Integer;

use crate::enumerators::binomial;
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldSpec};

pub use exhaustive::{
    biweight, biweight_full, biweight_via_dual, exhaustive_bicomposition,
    exhaustive_bivariate_composition, exhaustive_bivariate_weight, exhaustive_biweight,
    exhaustive_composition, exhaustive_enumerators, exhaustive_weight, EnumeratorKind,
    EnumeratorValue, bivariate_weight_enumerator, weight_enumerator, PAIR_LIMIT_LOG2, SINGLE_LIMIT_LOG2,
};
pub use io::{parse_matrix, read_matrix, write_matrix};
pub use matrix::{GfqBasis, Matrix};

/// A linear [h, k] code given by a full-row-rank generator matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    pub fn from_generator(generator: Matrix) -> Result<Self> {
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(Error::invalid(
                "generator matrix",
                format!("rank {rank} is less than its {} rows", generator.rows()),
            ));
        }
        if generator.rows() == 0 {
            return Err(Error::invalid("generator matrix", "the code has dimension 0"));
        }
        Ok(LinearCode { generator })
    }

    /// The code {v : H vᵀ = 0}.
    pub fn from_parity_check(h: &Matrix) -> Result<Self> {
        Self::from_generator(h.nullspace())
    }

    pub fn field(&self) -> &FieldSpec {
        self.generator.field()
    }

    pub fn h(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// A full-rank parity-check matrix, (h−k)×h.
    pub fn parity_check(&self) -> Matrix {
        self.generator.nullspace()
    }

    pub fn dual(&self) -> Result<LinearCode> {
        LinearCode::from_generator(self.parity_check())
    }

    pub fn encode(&self, u: &[FieldElement]) -> Vec<FieldElement> {
        self.generator.vec_mul(u)
    }

    /// Number of codewords q^k, if it fits in u64.
    pub fn size(&self) -> Option<u64> {
        (self.field().q() as u64).checked_pow(self.k() as u32)
    }

    /// All q^k codewords, messages in base-q counting order (the zero word
    /// first). Guarded at 2^`max_log2` codewords.
    pub fn codebook(&self, max_log2: u32) -> Result<Vec<Vec<FieldElement>>> {
        let q = self.field().q() as u64;
        let size = self
            .size()
            .filter(|&s| s <= 1u64 << max_log2)
            .ok_or_else(|| Error::too_large("codebook", format!("{q}^{}", self.k()), format!("2^{max_log2}")))?;
        let mut out = Vec::with_capacity(size as usize);
        let mut u = vec![FieldElement::ZERO; self.k()];
        for _ in 0..size {
            out.push(self.encode(&u));
            for x in u.iter_mut() {
                x.0 += 1;
                if x.0 as u64 == q {
                    x.0 = 0;
                } else {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// Outer code source: an explicit code or a random ensemble.
#[derive(Clone, Debug)]
pub enum OuterEnsembleSpec {
    UniformParityCheck { h: usize, k: usize },
    RegularLdpc { dv: usize, dc: usize, h: usize },
    Explicit(LinearCode),
}

impl OuterEnsembleSpec {
    pub fn h(&self) -> usize {
        match self {
            OuterEnsembleSpec::UniformParityCheck { h, .. } | OuterEnsembleSpec::RegularLdpc { h, .. } => *h,
            OuterEnsembleSpec::Explicit(c) => c.h(),
        }
    }

    /// Nominal dimension.
    pub fn k(&self) -> usize {
        match self {
            OuterEnsembleSpec::UniformParityCheck { k, .. } => *k,
            OuterEnsembleSpec::RegularLdpc { dv, dc, h } => h - h * dv / dc,
            OuterEnsembleSpec::Explicit(c) => c.k(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OuterEnsembleSpec::UniformParityCheck { h, k } => {
                if k == 0 || k > h {
                    return Err(Error::invalid("uniform parity-check", format!("need 0 < k ≤ h, got h = {h}, k = {k}")));
                }
            }
            OuterEnsembleSpec::RegularLdpc { dv, dc, h } => check_ldpc(dv, dc, h)?,
            OuterEnsembleSpec::Explicit(_) => {}
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, field: &FieldSpec, rng: &mut R) -> Result<LinearCode> {
        match *self {
            OuterEnsembleSpec::UniformParityCheck { h, k } => sample_uniform_pc(h, k, field, rng),
            OuterEnsembleSpec::RegularLdpc { dv, dc, h } => sample_regular_ldpc(dv, dc, h, field, rng),
            OuterEnsembleSpec::Explicit(ref c) => Ok(c.clone()),
        }
    }
}

/// Binary Hamming code of length 2^t − 1. Column j of the parity-check
/// matrix is the binary expansion of j + 1, most significant bit in row 0.
pub fn hamming_parity_check(t: usize) -> Result<Matrix> {
    if !(2..=12).contains(&t) {
        return Err(Error::invalid("Hamming parameter t", format!("{t} is outside 2..=12")));
    }
    let f = FieldSpec::of_order(2)?;
    let h = (1usize << t) - 1;
    let mut m = Matrix::zeros(&f, t, h);
    for j in 0..h {
        let pattern = j + 1;
        for r in 0..t {
            if pattern >> (t - 1 - r) & 1 == 1 {
                m.set(r, j, FieldElement::ONE);
            }
        }
    }
    Ok(m)
}

pub fn hamming_generator(t: usize) -> Result<LinearCode> {
    LinearCode::from_parity_check(&hamming_parity_check(t)?)
}

/// Weight enumerator of the length-h Hamming code from
/// (i+1)A_{i+1} + A_i + (h−i+1)A_{i−1} = C(h,i), A_0 = 1, A_1 = 0.
pub fn hamming_weight_enum_recursive(h: usize) -> Result<crate::enumerators::WeightEnumerator> {
    if h < 3 || !(h + 1).is_power_of_two() {
        return Err(Error::invalid("Hamming length", format!("{h} is not 2^t − 1 with t ≥ 2")));
    }
    let mut a: Vec<Integer> = vec![Integer::new(); h + 1];
    a[0] = Integer::from(1);
    for i in 1..h {
        let rhs = binomial(h as u64, i as u64) - &a[i] - Integer::from(&a[i - 1] * (h - i + 1) as u64);
        let (quot, rem) = rhs.div_rem(Integer::from(i + 1));
        debug_assert_eq!(rem, 0);
        a[i + 1] = quot;
    }
    crate::enumerators::WeightEnumerator::new(a.into_iter().map(rug::Rational::from).collect())
}

fn random_element<R: Rng + ?Sized>(field: &FieldSpec, rng: &mut R) -> FieldElement {
    FieldElement(rng.gen_range(0..field.q()) as u16)
}

fn random_nonzero<R: Rng + ?Sized>(field: &FieldSpec, rng: &mut R) -> FieldElement {
    FieldElement(rng.gen_range(1..field.q()) as u16)
}

/// Code defined by an i.i.d. uniform (h−k)×h parity-check matrix. Its
/// dimension k_C may exceed k when the matrix is rank deficient.
pub fn sample_uniform_pc<R: Rng + ?Sized>(h: usize, k: usize, field: &FieldSpec, rng: &mut R) -> Result<LinearCode> {
    if k == 0 || k > h {
        return Err(Error::invalid("uniform parity-check", format!("need 0 < k ≤ h, got h = {h}, k = {k}")));
    }
    let mut pc = Matrix::zeros(field, h - k, h);
    for r in 0..h - k {
        for c in 0..h {
            pc.set(r, c, random_element(field, rng));
        }
    }
    LinearCode::from_parity_check(&pc)
}

fn check_ldpc(dv: usize, dc: usize, h: usize) -> Result<()> {
    if dv == 0 || dc == 0 || h == 0 || (h * dv) % dc != 0 || dv >= dc {
        return Err(Error::invalid(
            "LDPC parameters",
            format!("need 0 < dv < dc and dc | h·dv, got dv = {dv}, dc = {dc}, h = {h}"),
        ));
    }
    Ok(())
}

/// Socket assignment of the regular LDPC ensemble: entry s gives the check
/// node receiving variable socket s (variable s / dv).
pub fn sample_ldpc_sockets<R: Rng + ?Sized>(dv: usize, dc: usize, h: usize, rng: &mut R) -> Result<Vec<usize>> {
    check_ldpc(dv, dc, h)?;
    let n = h * dv;
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    Ok(perm.into_iter().map(|s| s / dc).collect())
}

/// Regular (dv, dc) LDPC code: a uniformly random socket permutation with
/// uniform nonzero edge labels; parallel edges add their labels.
pub fn sample_regular_ldpc<R: Rng + ?Sized>(dv: usize, dc: usize, h: usize, field: &FieldSpec, rng: &mut R) -> Result<LinearCode> {
    let checks = sample_ldpc_sockets(dv, dc, h, rng)?;
    let mut pc = Matrix::zeros(field, h * dv / dc, h);
    for (s, &c) in checks.iter().enumerate() {
        let v = s / dv;
        let label = random_nonzero(field, rng);
        pc.set(c, v, field.add(pc.get(c, v), label));
    }
    LinearCode::from_parity_check(&pc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hamming_small_codes() {
        let c = hamming_generator(3).unwrap();
        assert_eq!((c.h(), c.k()), (7, 4));
        let w = exhaustive_weight(&c).unwrap();
        assert_eq!(w, crate::enumerators::WeightEnumerator::from_integers([1, 0, 0, 7, 7, 0, 0, 1]).unwrap());
        let rep = hamming_generator(2).unwrap();
        assert_eq!(rep.codebook(16).unwrap()[1], vec![FieldElement::ONE; 3]);
        let big = hamming_generator(6).unwrap();
        assert_eq!((big.h(), big.k()), (63, 57));
        assert!(hamming_generator(1).is_err());
    }

    #[test]
    fn hamming_recursion() {
        let a = hamming_weight_enum_recursive(7).unwrap();
        assert_eq!(a, crate::enumerators::WeightEnumerator::from_integers([1, 0, 0, 7, 7, 0, 0, 1]).unwrap());
        let a = hamming_weight_enum_recursive(63).unwrap();
        assert_eq!(a.total(), Integer::from(1) << 57);
        assert_eq!(*a.get(1), 0);
        assert_eq!(*a.get(2), 0);
        assert!(hamming_weight_enum_recursive(8).is_err());
    }

    #[test]
    fn hamming_dual_weight() {
        let d = hamming_generator(3).unwrap().dual().unwrap();
        let w = exhaustive_weight(&d).unwrap();
        assert_eq!(w, crate::enumerators::WeightEnumerator::from_integers([1, 0, 0, 0, 7, 0, 0, 0]).unwrap());
    }

    #[test]
    fn sampled_codes_are_deterministic_and_orthogonal() {
        for q in [2, 4] {
            let f = FieldSpec::of_order(q).unwrap();
            let a = sample_uniform_pc(10, 5, &f, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
            let b = sample_uniform_pc(10, 5, &f, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
            assert_eq!(a, b);
            assert!(a.k() >= 5);
            assert!(a.generator().mul(&a.parity_check().transpose()).unwrap().is_zero());
            let l = sample_regular_ldpc(3, 6, 12, &f, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
            assert!(l.k() >= 6);
            assert!(l.generator().mul(&l.parity_check().transpose()).unwrap().is_zero());
        }
    }

    #[test]
    fn ldpc_socket_accounting() {
        let checks = sample_ldpc_sockets(3, 6, 12, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(checks.len(), 36);
        let mut per_check = [0; 6];
        for &c in &checks {
            per_check[c] += 1;
        }
        assert!(per_check.iter().all(|&n| n == 6));
    }
}
