//! Dense matrices over GF(q), stored row-major.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldSpec};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.field.q())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::invalid("matrix", format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if x.0 as u32 >= field.q() {
                    return Err(Error::invalid("matrix", format!("entry {x} is not an element of GF({})", field.q())));
                }
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn from_values(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let rows: Vec<Vec<FieldElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.element(v)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Self::from_rows(field, &rows)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: FieldElement) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [FieldElement] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::invalid(
                "matrix product",
                format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self.get(r, i);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(i, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows);
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(a, x));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form, pivoting on the first nonzero entry of each
    /// column. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv_nonzero(self.get(r, c));
            for x in self.row_mut(r) {
                *x = f.mul(*x, inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis (as rows) of the right kernel {x : M xᵀ = 0}.
    pub fn nullspace(&self) -> Matrix {
        let f = &self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, FieldElement::ONE);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(m.get(r, fc)));
            }
        }
        basis
    }

    /// Some x with M xᵀ = b, or None if the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![FieldElement::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// Incrementally grown row-echelon basis over GF(q).
#[derive(Clone, Debug)]
pub struct GfqBasis {
    field: FieldSpec,
    dim: usize,
    // basis[p] has its first nonzero entry, equal to 1, at position p
    basis: Vec<Option<Vec<FieldElement>>>,
    rank: usize,
}

impl GfqBasis {
    pub fn new(field: &FieldSpec, dim: usize) -> Self {
        GfqBasis {
            field: field.clone(),
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

    /// Add a vector; returns whether it increased the rank.
    pub fn insert(&mut self, mut v: Vec<FieldElement>) -> bool {
        let f = &self.field;
        for p in 0..self.dim {
            let c = v[p];
            if c.is_zero() {
                continue;
            }
            match &self.basis[p] {
                Some(b) => {
                    for j in p..self.dim {
                        v[j] = f.sub(v[j], f.mul(c, b[j]));
                    }
                }
                None => {
                    let inv = f.inv_nonzero(c);
                    for x in v[p..].iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                    self.basis[p] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(field: &FieldSpec, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let mut m = Matrix::zeros(field, r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, FieldElement(rng.gen_range(0..field.q()) as u16));
            }
        }
        m
    }

    #[test]
    fn identity_and_zero() {
        let f = FieldSpec::of_order(4).unwrap();
        assert_eq!(Matrix::identity(&f, 5).rank(), 5);
        let z = Matrix::zeros(&f, 3, 4);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.nullspace().rows(), 4);
    }

    #[test]
    fn rank_nullity_and_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2, 3, 4, 5, 8] {
            let f = FieldSpec::of_order(q).unwrap();
            for _ in 0..20 {
                let m = random(&f, 4, 6, &mut rng);
                let n = m.nullspace();
                assert_eq!(m.rank() + n.rows(), 6);
                assert!(m.mul(&n.transpose()).unwrap().is_zero());
                assert_eq!(n.rank(), n.rows());
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = FieldSpec::of_order(4).unwrap();
        for _ in 0..20 {
            let m = random(&f, 4, 6, &mut rng);
            let x: Vec<FieldElement> = (0..6).map(|_| FieldElement(rng.gen_range(0..4))).collect();
            let b = m.transpose().vec_mul(&x);
            let y = m.solve(&b).unwrap();
            assert_eq!(m.transpose().vec_mul(&y), b);
        }
        let z = Matrix::zeros(&f, 2, 2);
        assert!(z.solve(&[FieldElement::ONE, FieldElement::ZERO]).is_none());
    }

    #[test]
    fn incremental_basis_matches_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2, 3, 4] {
            let f = FieldSpec::of_order(q).unwrap();
            for _ in 0..50 {
                let m = random(&f, 5, 4, &mut rng);
                let mut b = GfqBasis::new(&f, 4);
                for r in 0..5 {
                    b.insert(m.row(r).to_vec());
                }
                assert_eq!(b.rank(), m.rank());
            }
        }
    }
}
