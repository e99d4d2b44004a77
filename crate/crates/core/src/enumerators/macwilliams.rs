use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::combinatorics::krawtchouk_unchecked;
use super::joint::JointWeight;
use super::{BivariateWeightEnumerator, WeightEnumerator};
use crate::error::{Error, Result};

fn krawtchouk_matrix(n: usize, q: u32) -> Vec<Vec<Integer>> {
    (0..=n)
        .map(|a| (0..=n).map(|l| krawtchouk_unchecked(a as u64, l as u64, n as u64, q as u64)).collect())
        .collect()
}

/// Bivariate enumerator of the dual of an (hA+hB, k) code over GF(q).
///
/// Substituting into the bivariate identity, the coefficient of x^a z^b is
/// q^{−k} Σ_{l,t} A_{l,t} K_a(l; hA, q) K_b(t; hB, q).
pub fn macwilliams_bivariate(a: &BivariateWeightEnumerator, k: usize, q: u32) -> Result<BivariateWeightEnumerator> {
    let (ha, hb) = (a.ha(), a.hb());
    for l in 0..=ha {
        for t in 0..=hb {
            let c = a.get(l, t);
            if *c < 0 || *c.denom() != 1 {
                return Err(Error::invalid(
                    "MacWilliams input",
                    format!("A[{l},{t}] = {c} is not a nonnegative integer"),
                ));
            }
        }
    }
    let ka = krawtchouk_matrix(ha, q);
    let kb = krawtchouk_matrix(hb, q);
    let scale = Integer::from(q).pow(k as u32);
    let mut out = BivariateWeightEnumerator::zeros(ha, hb);
    // inner[l][b] = Σ_t A_{l,t} K_b(t)
    let inner: Vec<Vec<Integer>> = (0..=ha)
        .map(|l| {
            (0..=hb)
                .map(|b| (0..=hb).map(|t| Integer::from(a.get(l, t).numer() * &kb[b][t])).sum())
                .collect()
        })
        .collect();
    for x in 0..=ha {
        for y in 0..=hb {
            let s: Integer = (0..=ha).map(|l| Integer::from(&inner[l][y] * &ka[x][l])).sum();
            let v = Rational::from((s, scale.clone()));
            if v < 0 || *v.denom() != 1 {
                return Err(Error::Numerical(format!(
                    "MacWilliams transform produced {v} at ({x},{y}); the input is not the enumerator of a dimension-{k} code"
                )));
            }
            *out.get_mut(x, y) = v;
        }
    }
    Ok(out)
}

pub fn macwilliams_univariate(a: &WeightEnumerator, k: usize, q: u32) -> Result<WeightEnumerator> {
    let mut bi = BivariateWeightEnumerator::zeros(a.h(), 0);
    for (l, c) in a.counts.iter().enumerate() {
        *bi.get_mut(l, 0) = c.clone();
    }
    Ok(macwilliams_bivariate(&bi, k, q)?.marginal())
}

/// Dense homogeneous polynomial in x00, x01, x10, x11 indexed by the
/// exponents of the last three variables.
struct Poly4 {
    stride: usize,
    degree: usize,
    coef: Vec<Integer>,
}

impl Poly4 {
    fn one(max_degree: usize) -> Self {
        let stride = max_degree + 1;
        let mut coef = vec![Integer::new(); stride * stride * stride];
        coef[0] = Integer::from(1);
        Poly4 { stride, degree: 0, coef }
    }

    #[inline]
    fn idx(&self, e1: usize, e2: usize, e3: usize) -> usize {
        (e1 * self.stride + e2) * self.stride + e3
    }

    /// Multiply in place by Σ_c sign[c]·x_c.
    fn mul_linear(&mut self, sign: [i32; 4], scratch: &mut Vec<Integer>) {
        let d = self.degree;
        scratch.iter_mut().for_each(|x| *x = Integer::new());
        scratch.resize(self.coef.len(), Integer::new());
        for e1 in 0..=d {
            for e2 in 0..=d - e1 {
                for e3 in 0..=d - e1 - e2 {
                    let c = &self.coef[self.idx(e1, e2, e3)];
                    if *c == 0 {
                        continue;
                    }
                    let targets = [
                        self.idx(e1, e2, e3),
                        self.idx(e1 + 1, e2, e3),
                        self.idx(e1, e2 + 1, e3),
                        self.idx(e1, e2, e3 + 1),
                    ];
                    for (t, s) in targets.into_iter().zip(sign) {
                        if s > 0 {
                            scratch[t] += c;
                        } else {
                            scratch[t] -= c;
                        }
                    }
                }
            }
        }
        std::mem::swap(&mut self.coef, scratch);
        self.degree += 1;
    }
}

/// Full (unrestricted) biweight enumerator of the dual of a binary [h, k]
/// code, from the full biweight enumerator of the code itself.
///
/// Both maps count all ordered codeword pairs, zero and repeated words
/// included. The transform is the joint-weight MacWilliams identity
/// J_{C⊥}(x) = |C|^{−2} J_C(x̂), x̂_{ab} = Σ_{cd} (−1)^{ac+bd} x_{cd}, where
/// x_{ab} marks a position with (r₁ ≠ 0, r₂ ≠ 0) = (a, b).
pub fn joint_weight_macwilliams_binary(
    full: &BTreeMap<JointWeight, Integer>,
    h: usize,
    k: usize,
) -> Result<BTreeMap<JointWeight, Integer>> {
    let mut signs = [[0i32; 4]; 4];
    for (ab, row) in signs.iter_mut().enumerate() {
        for (cd, s) in row.iter_mut().enumerate() {
            let dot = (ab >> 1) * (cd >> 1) + (ab & 1) * (cd & 1);
            *s = if dot % 2 == 0 { 1 } else { -1 };
        }
    }
    let mut total = Poly4::one(h);
    total.coef[0] = Integer::new();
    let mut scratch = Vec::new();
    for (tau, count) in full {
        if tau.total() != h as u64 {
            return Err(Error::invalid("biweight enumerator", format!("key {tau:?} does not sum to {h}")));
        }
        let mut p = Poly4::one(h);
        for (ab, &e) in tau.0.iter().enumerate() {
            for _ in 0..e {
                p.mul_linear(signs[ab], &mut scratch);
            }
        }
        for (t, c) in total.coef.iter_mut().zip(&p.coef) {
            if *c != 0 {
                *t += Integer::from(c * count);
            }
        }
    }
    let norm = Integer::from(1) << (2 * k) as u32;
    let mut out = BTreeMap::new();
    for e1 in 0..=h {
        for e2 in 0..=h - e1 {
            for e3 in 0..=h - e1 - e2 {
                let c = &total.coef[total.idx(e1, e2, e3)];
                if *c == 0 {
                    continue;
                }
                let (quot, rem) = c.clone().div_rem(norm.clone());
                if rem != 0 || quot < 0 {
                    return Err(Error::Numerical(format!(
                        "joint-weight transform is not a nonnegative integer at ({e1},{e2},{e3}); input is not a dimension-{k} code"
                    )));
                }
                out.insert(JointWeight([(h - e1 - e2 - e3) as u32, e1 as u32, e2 as u32, e3 as u32]), quot);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_dual_is_simplex() {
        let a = WeightEnumerator::from_integers([1, 0, 0, 7, 7, 0, 0, 1]).unwrap();
        let b = macwilliams_univariate(&a, 4, 2).unwrap();
        assert_eq!(b, WeightEnumerator::from_integers([1, 0, 0, 0, 7, 0, 0, 0]).unwrap());
        assert_eq!(macwilliams_univariate(&b, 3, 2).unwrap(), a);
    }

    #[test]
    fn repetition_is_self_dual() {
        let a = WeightEnumerator::from_integers([1, 0, 1]).unwrap();
        assert_eq!(macwilliams_univariate(&a, 1, 2).unwrap(), a);
    }

    #[test]
    fn rejects_non_code_input() {
        let a = WeightEnumerator::from_integers([1, 2, 0]).unwrap();
        assert!(macwilliams_univariate(&a, 1, 2).is_err());
    }

    #[test]
    fn repetition_joint_weight_transform() {
        // (2,1) repetition code {00, 11}; its dual is itself
        let mut full = BTreeMap::new();
        full.insert(JointWeight([2, 0, 0, 0]), Integer::from(1));
        full.insert(JointWeight([0, 2, 0, 0]), Integer::from(1));
        full.insert(JointWeight([0, 0, 2, 0]), Integer::from(1));
        full.insert(JointWeight([0, 0, 0, 2]), Integer::from(1));
        assert_eq!(joint_weight_macwilliams_binary(&full, 2, 1).unwrap(), full);
    }
}
