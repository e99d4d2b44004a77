//! Probabilities that one LT column is orthogonal to a fixed vector (π) or to
//! a fixed pair of vectors. All values are exact rationals.
//!
//! For 0/1 columns over a field of characteristic 2 the additive characters
//! χ_c(x) = (−1)^{popcount(c & x)} reduce everything to binary Krawtchouk
//! ratios: a column of degree j on h positions satisfies
//! E[χ(Σ_{i∈S} v_i)] = K_j(b; h, 2)/C(h, j), where b counts positions with
//! χ(v_i) = −1. Odd characteristic goes through a dynamic program over partial
//! sums instead. Both are checked against literal enumeration in the tests.

use std::collections::BTreeMap;

use rug::{Integer, Rational};

use super::degree::{BivariateDegreeDistribution, DegreeDistribution};
use super::precision::check_probability;
use crate::enumerators::{
    binomial, compositions_iter, guard_count, joint_compositions_iter, JointComposition, JointWeight,
    KrawtchoukRatios,
};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldSpec};

fn weighted_ratio_sum(omega: &DegreeDistribution, table: &KrawtchoukRatios, x: u64) -> Rational {
    let mut acc = Rational::new();
    for (d, (_, p)) in omega.entries().iter().enumerate() {
        acc += Rational::from(p * table.ratio(d, x));
    }
    acc
}

/// π_l for all l ∈ 0..=h, q-ary LT coefficients.
pub fn pi_table(omega: &DegreeDistribution, h: usize, q: u32) -> Result<Vec<Rational>> {
    omega.check_fits(h)?;
    let table = KrawtchoukRatios::new(&omega.degrees(), h as u64, q as u64)?;
    let inv_q = Rational::from((1, q));
    let scale = Rational::from((q - 1, q));
    (0..=h as u64)
        .map(|l| {
            let p = Rational::from(&scale * &weighted_ratio_sum(omega, &table, l)) + &inv_q;
            check_probability("π_l", &p)?;
            Ok(p)
        })
        .collect()
}

pub fn pi_l(l: usize, omega: &DegreeDistribution, h: usize, q: u32) -> Result<Rational> {
    if l > h {
        return Err(Error::invalid("weight", format!("l = {l} exceeds h = {h}")));
    }
    Ok(pi_table(omega, h, q)?.swap_remove(l))
}

/// π_{l,t} for l ∈ 0..=hA, t ∈ 0..=hB, indexed [l][t].
pub fn pi_lt_table(omega: &BivariateDegreeDistribution, ha: usize, hb: usize, q: u32) -> Result<Vec<Vec<Rational>>> {
    omega.check_fits(ha, hb)?;
    let da = omega.degrees_a();
    let db = omega.degrees_b();
    let ta = KrawtchoukRatios::new(&da, ha as u64, q as u64)?;
    let tb = KrawtchoukRatios::new(&db, hb as u64, q as u64)?;
    let idx: Vec<(usize, usize, &Rational)> = omega
        .entries()
        .iter()
        .map(|(j, s, p)| {
            (
                da.binary_search(&(*j as u64)).unwrap(),
                db.binary_search(&(*s as u64)).unwrap(),
                p,
            )
        })
        .collect();
    let inv_q = Rational::from((1, q));
    let scale = Rational::from((q - 1, q));
    let mut out = Vec::with_capacity(ha + 1);
    for l in 0..=ha as u64 {
        let mut row = Vec::with_capacity(hb + 1);
        for t in 0..=hb as u64 {
            let mut acc = Rational::new();
            for &(a, b, p) in &idx {
                acc += Rational::from(ta.ratio(a, l) * tb.ratio(b, t)) * p;
            }
            let v = acc * &scale + &inv_q;
            check_probability("π_{l,t}", &v)?;
            row.push(v);
        }
        out.push(row);
    }
    Ok(out)
}

pub fn pi_lt(l: usize, t: usize, omega: &BivariateDegreeDistribution, ha: usize, hb: usize, q: u32) -> Result<Rational> {
    if l > ha || t > hb {
        return Err(Error::invalid("weight pair", format!("({l}, {t}) outside ({ha}, {hb})")));
    }
    Ok(pi_lt_table(omega, ha, hb, q)?.swap_remove(l).swap_remove(t))
}

/// Bit mask of which composition indices have χ_c = −1.
fn character_signs(field: &FieldSpec) -> Vec<Vec<bool>> {
    let q = field.q() as usize;
    (0..q)
        .map(|c| {
            (0..q)
                .map(|i| (c as u16 & field.element_of_index(i).value()).count_ones() % 2 == 1)
                .collect()
        })
        .collect()
}

fn check_composition(f: &[u32], q: usize, h: usize) -> Result<()> {
    if f.len() != q || f.iter().map(|&x| x as usize).sum::<usize>() != h {
        return Err(Error::invalid("composition", format!("{f:?} is not a composition of {h} into {q} parts")));
    }
    Ok(())
}

/// Precomputed 0/1-column kernels over one block of h positions.
///
/// In characteristic 2 this holds E(b) = Σ_j Ω_j K_j(b; h, 2)/C(h, j), after
/// which π_f = (1/q) Σ_c E(b_c(f)) is a handful of lookups.
pub struct ZeroOneKernel {
    field: FieldSpec,
    omega: DegreeDistribution,
    h: usize,
    signs: Vec<Vec<bool>>,
    expectation: Vec<Rational>,
}

impl ZeroOneKernel {
    pub fn new(omega: &DegreeDistribution, h: usize, field: &FieldSpec) -> Result<Self> {
        omega.check_fits(h)?;
        let (signs, expectation) = if field.characteristic() == 2 {
            let table = KrawtchoukRatios::new(&omega.degrees(), h as u64, 2)?;
            let e = (0..=h as u64).map(|b| weighted_ratio_sum(omega, &table, b)).collect();
            (character_signs(field), e)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(ZeroOneKernel {
            field: field.clone(),
            omega: omega.clone(),
            h,
            signs,
            expectation,
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// π_f: probability that a 0/1 column is orthogonal to a vector of
    /// composition f.
    pub fn pi_f(&self, f: &[u32]) -> Result<Rational> {
        let q = self.field.q() as usize;
        check_composition(f, q, self.h)?;
        let p = if self.field.characteristic() == 2 {
            let mut acc = Rational::new();
            for sign in &self.signs {
                let b: u32 = f.iter().zip(sign).filter(|(_, &s)| s).map(|(x, _)| x).sum();
                acc += &self.expectation[b as usize];
            }
            acc / q as u32
        } else {
            pi_f_dynamic(f, &self.omega, &self.field)?
        };
        check_probability("π_f", &p)?;
        Ok(p)
    }

    /// Probability that a 0/1 column is orthogonal to both vectors of a pair
    /// with joint composition κ.
    pub fn pair(&self, kappa: &JointComposition) -> Result<Rational> {
        let q = self.field.q() as usize;
        if kappa.q() != q || kappa.total() != self.h as u64 {
            return Err(Error::invalid("joint composition", format!("{kappa} does not match q = {q}, h = {}", self.h)));
        }
        let p = if self.field.characteristic() == 2 {
            let mut acc = Rational::new();
            for s1 in &self.signs {
                for s2 in &self.signs {
                    let mut b = 0usize;
                    for s in 0..q {
                        for t in 0..q {
                            if s1[s] != s2[t] {
                                b += kappa.get(s, t) as usize;
                            }
                        }
                    }
                    acc += &self.expectation[b];
                }
            }
            acc / (q * q) as u32
        } else {
            pair_probability_dynamic(kappa, &self.omega, &self.field)?
        };
        check_probability("pair probability", &p)?;
        Ok(p)
    }
}

/// Binary pair probability from the joint weight τ:
/// Σ_j Ω_j ¼[1 + r_j(τ₁+τ₃) + r_j(τ₂+τ₃) + r_j(τ₁+τ₂)], r_j(w) = K_j(w)/K_j(0).
pub fn pair_probability_binary(tau: &JointWeight, omega: &DegreeDistribution, h: usize) -> Result<Rational> {
    BinaryPairKernel::new(omega, h)?.pair(tau)
}

pub struct BinaryPairKernel {
    h: usize,
    expectation: Vec<Rational>,
}

impl BinaryPairKernel {
    pub fn new(omega: &DegreeDistribution, h: usize) -> Result<Self> {
        omega.check_fits(h)?;
        let table = KrawtchoukRatios::new(&omega.degrees(), h as u64, 2)?;
        let expectation = (0..=h as u64).map(|b| weighted_ratio_sum(omega, &table, b)).collect();
        Ok(BinaryPairKernel { h, expectation })
    }

    pub fn pair(&self, tau: &JointWeight) -> Result<Rational> {
        let [_, t1, t2, t3] = tau.0.map(|x| x as usize);
        if tau.total() != self.h as u64 {
            return Err(Error::invalid("joint weight", format!("{:?} does not sum to h = {}", tau.0, self.h)));
        }
        let e = &self.expectation;
        let p = (Rational::from(1) + &e[t1 + t3] + &e[t2 + t3] + &e[t1 + t2]) / 4u32;
        check_probability("pair probability", &p)?;
        Ok(p)
    }
}

/// Binary pair probability by the triplet sum over (i₁, i₂, i₃), with
/// i₁ + i₃ and i₂ + i₃ even and i₁ + i₂ + i₃ ≤ j.
pub fn pair_probability_binary_triplets(tau: &JointWeight, omega: &DegreeDistribution) -> Result<Rational> {
    let h = tau.total();
    omega.check_fits(h as usize)?;
    let [t0, t1, t2, t3] = tau.0.map(|x| x as u64);
    let mut total = Rational::new();
    for (j, p) in omega.entries() {
        let j = *j as u64;
        let mut count = Integer::new();
        for i1 in 0..=t1.min(j) {
            for i2 in 0..=t2.min(j - i1) {
                for i3 in 0..=t3.min(j - i1 - i2) {
                    if (i1 + i3) % 2 != 0 || (i2 + i3) % 2 != 0 {
                        continue;
                    }
                    let i0 = j - i1 - i2 - i3;
                    if i0 > t0 {
                        continue;
                    }
                    count += binomial(t0, i0) * binomial(t1, i1) * binomial(t2, i2) * binomial(t3, i3);
                }
            }
        }
        total += Rational::from((count, binomial(h, j))) * p;
    }
    Ok(total)
}

/// Counts Σ_{γ ≤ f, |γ| = j, Σ γ_i α_i = 0} Π C(f_i, γ_i) for every j ≤ d_max.
fn zero_sum_subset_counts(f: &[u32], d_max: usize, field: &FieldSpec) -> Vec<Integer> {
    sum_distribution(f, d_max, field).into_iter().map(|mut row| std::mem::take(&mut row[0])).collect()
}

/// π_f by the partial-sum dynamic program; valid in every characteristic.
pub fn pi_f_dynamic(f: &[u32], omega: &DegreeDistribution, field: &FieldSpec) -> Result<Rational> {
    let h: u32 = f.iter().sum();
    check_composition(f, field.q() as usize, h as usize)?;
    omega.check_fits(h as usize)?;
    let counts = zero_sum_subset_counts(f, omega.d_max() as usize, field);
    let mut total = Rational::new();
    for (j, p) in omega.entries() {
        total += Rational::from((counts[*j as usize].clone(), binomial(h as u64, *j as u64))) * p;
    }
    Ok(total)
}

/// π_f by literal enumeration of degree compositions γ ≤ f.
pub fn pi_f_enumerated(f: &[u32], omega: &DegreeDistribution, field: &FieldSpec) -> Result<Rational> {
    let q = field.q() as usize;
    let h: u32 = f.iter().sum();
    check_composition(f, q, h as usize)?;
    omega.check_fits(h as usize)?;
    let mut total = Rational::new();
    for (j, p) in omega.entries() {
        guard_count(
            || format!("degree compositions (j = {j}, q = {q})"),
            &crate::enumerators::composition_count(*j as u64, q as u64),
        )?;
        let mut count = Integer::new();
        for gamma in compositions_iter(*j, q) {
            if gamma.iter().zip(f).any(|(g, fi)| g > fi) {
                continue;
            }
            if !composition_sums_to_zero(&gamma, field) {
                continue;
            }
            let mut w = Integer::from(1);
            for (g, fi) in gamma.iter().zip(f) {
                w *= binomial(*fi as u64, *g as u64);
            }
            count += w;
        }
        total += Rational::from((count, binomial(h as u64, *j as u64))) * p;
    }
    Ok(total)
}

fn composition_sums_to_zero(gamma: &[u32], field: &FieldSpec) -> bool {
    let mut s = FieldElement::ZERO;
    for (i, &g) in gamma.iter().enumerate() {
        s = field.add(s, field.int_scale(g as u64, field.element_of_index(i)));
    }
    s.is_zero()
}

/// Pair probability by a dynamic program over both partial sums.
pub fn pair_probability_dynamic(kappa: &JointComposition, omega: &DegreeDistribution, field: &FieldSpec) -> Result<Rational> {
    let q = field.q() as usize;
    let h = kappa.total();
    omega.check_fits(h as usize)?;
    let d_max = omega.d_max() as usize;
    let mut dp: Vec<BTreeMap<(u16, u16), Integer>> = vec![BTreeMap::new(); d_max + 1];
    dp[0].insert((0, 0), Integer::from(1));
    for s in 0..q {
        for t in 0..q {
            let k = kappa.get(s, t) as usize;
            let (es, et) = (field.element_of_index(s), field.element_of_index(t));
            let mut next: Vec<BTreeMap<(u16, u16), Integer>> = vec![BTreeMap::new(); d_max + 1];
            for c in 0..=d_max {
                for (&(a, b), v) in &dp[c] {
                    for g in 0..=k.min(d_max - c) {
                        let na = field.add(FieldElement(a), field.int_scale(g as u64, es)).value();
                        let nb = field.add(FieldElement(b), field.int_scale(g as u64, et)).value();
                        *next[c + g].entry((na, nb)).or_default() += Integer::from(v * binomial(k as u64, g as u64));
                    }
                }
            }
            dp = next;
        }
    }
    let mut total = Rational::new();
    for (j, p) in omega.entries() {
        let count = dp[*j as usize].get(&(0, 0)).cloned().unwrap_or_default();
        total += Rational::from((count, binomial(h, *j as u64))) * p;
    }
    Ok(total)
}

/// Pair probability by literal enumeration over sub-compositions υ ≤ κ.
pub fn pair_probability_enumerated(kappa: &JointComposition, omega: &DegreeDistribution, field: &FieldSpec) -> Result<Rational> {
    let q = field.q() as usize;
    let h = kappa.total();
    omega.check_fits(h as usize)?;
    let mut total = Rational::new();
    for (j, p) in omega.entries() {
        let mut count = Integer::new();
        for upsilon in joint_compositions_iter(*j, q)? {
            if upsilon.cells().iter().zip(kappa.cells()).any(|(u, k)| u > k) {
                continue;
            }
            let (g1, g2) = upsilon.gamma_projections();
            if !composition_sums_to_zero(&g1, field) || !composition_sums_to_zero(&g2, field) {
                continue;
            }
            let mut w = Integer::from(1);
            for (u, k) in upsilon.cells().iter().zip(kappa.cells()) {
                w *= binomial(*k as u64, *u as u64);
            }
            count += w;
        }
        total += Rational::from((count, binomial(h, *j as u64))) * p;
    }
    Ok(total)
}

/// π_{fA,fB} for the multi-edge 0/1 construction.
pub struct MetZeroOneKernel {
    field: FieldSpec,
    omega: BivariateDegreeDistribution,
    ha: usize,
    hb: usize,
    signs: Vec<Vec<bool>>,
    da: Vec<u64>,
    db: Vec<u64>,
    ta: Option<KrawtchoukRatios>,
    tb: Option<KrawtchoukRatios>,
}

impl MetZeroOneKernel {
    pub fn new(omega: &BivariateDegreeDistribution, ha: usize, hb: usize, field: &FieldSpec) -> Result<Self> {
        omega.check_fits(ha, hb)?;
        let da = omega.degrees_a();
        let db = omega.degrees_b();
        let (signs, ta, tb) = if field.characteristic() == 2 {
            (
                character_signs(field),
                Some(KrawtchoukRatios::new(&da, ha as u64, 2)?),
                Some(KrawtchoukRatios::new(&db, hb as u64, 2)?),
            )
        } else {
            (Vec::new(), None, None)
        };
        Ok(MetZeroOneKernel {
            field: field.clone(),
            omega: omega.clone(),
            ha,
            hb,
            signs,
            da,
            db,
            ta,
            tb,
        })
    }

    pub fn pi(&self, fa: &[u32], fb: &[u32]) -> Result<Rational> {
        let q = self.field.q() as usize;
        check_composition(fa, q, self.ha)?;
        check_composition(fb, q, self.hb)?;
        let p = match (&self.ta, &self.tb) {
            (Some(ta), Some(tb)) => {
                let mut acc = Rational::new();
                for sign in &self.signs {
                    let count = |f: &[u32]| -> u64 { f.iter().zip(sign).filter(|(_, &s)| s).map(|(x, _)| *x as u64).sum() };
                    let (ba, bb) = (count(fa), count(fb));
                    for (j, s, p) in self.omega.entries() {
                        let a = self.da.binary_search(&(*j as u64)).unwrap();
                        let b = self.db.binary_search(&(*s as u64)).unwrap();
                        acc += Rational::from(ta.ratio(a, ba) * tb.ratio(b, bb)) * p;
                    }
                }
                acc / q as u32
            }
            _ => self.pi_dynamic(fa, fb)?,
        };
        check_probability("π_{fA,fB}", &p)?;
        Ok(p)
    }

    fn pi_dynamic(&self, fa: &[u32], fb: &[u32]) -> Result<Rational> {
        let q = self.field.q() as usize;
        let ca = sum_distribution(fa, self.omega.max_a() as usize, &self.field);
        let cb = sum_distribution(fb, self.omega.max_b() as usize, &self.field);
        let mut total = Rational::new();
        for (j, s, p) in self.omega.entries() {
            let mut count = Integer::new();
            for x in 0..q {
                let y = self.field.neg(FieldElement(x as u16)).value() as usize;
                count += Integer::from(&ca[*j as usize][x] * &cb[*s as usize][y]);
            }
            let den = binomial(self.ha as u64, *j as u64) * binomial(self.hb as u64, *s as u64);
            total += Rational::from((count, den)) * p;
        }
        Ok(total)
    }
}

/// Weighted counts of degree-c sub-selections of a composition by their sum.
fn sum_distribution(f: &[u32], d_max: usize, field: &FieldSpec) -> Vec<Vec<Integer>> {
    let q = field.q() as usize;
    let mut dp = vec![vec![Integer::new(); q]; d_max + 1];
    dp[0][0] = Integer::from(1);
    for (i, &fi) in f.iter().enumerate() {
        let e = field.element_of_index(i);
        let mut next = vec![vec![Integer::new(); q]; d_max + 1];
        for c in 0..=d_max {
            for s in 0..q {
                if dp[c][s] == 0 {
                    continue;
                }
                for g in 0..=(fi as usize).min(d_max - c) {
                    let t = field.add(FieldElement(s as u16), field.int_scale(g as u64, e)).value() as usize;
                    next[c + g][t] += Integer::from(&dp[c][s] * binomial(fi as u64, g as u64));
                }
            }
        }
        dp = next;
    }
    dp
}
