//! Expected enumerators of outer-code ensembles.
//!
//! `composition_from_weight` and its bivariate form assume the ensemble is
//! symmetric under relabelling of the nonzero field elements, so that a
//! weight-l codeword is equally likely to carry any nonzero pattern. This
//! holds for uniform parity-check and for the LDPC ensemble with uniform
//! nonzero labels; callers supplying other enumerators are responsible for
//! it.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::combinatorics::{binomial, composition_count, compositions_iter, multinomial_of};
use super::joint::{guard_count, in_k_qh, in_t_2h, JointComposition, JointWeight};
use super::{
    BicompositionEnumerator, BivariateCompositionEnumerator, BivariateWeightEnumerator,
    BiweightEnumerator, CompositionEnumerator, WeightEnumerator,
};
use crate::error::{Error, Result};

fn check_dims(h: usize, k: usize) -> Result<()> {
    if k == 0 || k > h {
        return Err(Error::invalid("code dimensions", format!("need 0 < k ≤ h, got h = {h}, k = {k}")));
    }
    Ok(())
}

fn inv_pow(base: u32, exp: u32) -> Rational {
    Rational::from((Integer::from(1), Integer::from(base).pow(exp)))
}

/// 𝖠_l = C(h,l)(q−1)^l q^{−(h−k)} for l ≥ 1, 𝖠_0 = 1.
pub fn uniform_pc_weight_enum(h: usize, k: usize, q: u32) -> Result<WeightEnumerator> {
    check_dims(h, k)?;
    let scale = inv_pow(q, (h - k) as u32);
    let mut counts = vec![Rational::from(1)];
    for l in 1..=h {
        let c = binomial(h as u64, l as u64) * Integer::from(q - 1).pow(l as u32);
        counts.push(Rational::from(c) * &scale);
    }
    Ok(WeightEnumerator { counts })
}

/// 𝖰_𝐟 = 𝖠_l · C(l; f_1,…,f_{q−1}) (q−1)^{−l} with l = h − f_0.
pub fn composition_from_weight(a: &WeightEnumerator, q: u32) -> Result<CompositionEnumerator> {
    let h = a.h();
    let qs = q as usize;
    guard_count(
        || format!("composition space (h = {h}, q = {q})"),
        &composition_count(h as u64, qs as u64),
    )?;
    let weights: Vec<Rational> = (0..=h)
        .map(|l| Rational::from(a.get(l)) * inv_pow(q - 1, l as u32))
        .collect();
    let mut entries = BTreeMap::new();
    for f in compositions_iter(h as u32, qs) {
        let l = h - f[0] as usize;
        if *a.get(l) == 0 {
            continue;
        }
        let count = Rational::from(multinomial_of(&f[1..])) * &weights[l];
        entries.insert(f, count);
    }
    Ok(CompositionEnumerator { q: qs, h, entries })
}

/// Bivariate analogue: 𝖰_{𝐟A,𝐟B} = 𝖠_{l,t} C(l; 𝐟A⁺) C(t; 𝐟B⁺) (q−1)^{−(l+t)},
/// with l and t the nonzero totals of 𝐟A and 𝐟B.
pub fn bivariate_composition_from_weight(
    a: &BivariateWeightEnumerator,
    q: u32,
) -> Result<BivariateCompositionEnumerator> {
    let (ha, hb) = (a.ha(), a.hb());
    let qs = q as usize;
    let size = composition_count(ha as u64, qs as u64) * composition_count(hb as u64, qs as u64);
    guard_count(|| format!("bivariate composition space (hA = {ha}, hB = {hb}, q = {q})"), &size)?;
    let comps_b: Vec<Vec<u32>> = compositions_iter(hb as u32, qs).collect();
    let mut entries = BTreeMap::new();
    for fa in compositions_iter(ha as u32, qs) {
        let l = ha - fa[0] as usize;
        let ma = multinomial_of(&fa[1..]);
        for fb in &comps_b {
            let t = hb - fb[0] as usize;
            if *a.get(l, t) == 0 {
                continue;
            }
            let c = Rational::from(a.get(l, t))
                * Rational::from(multinomial_of(&fb[1..]) * &ma)
                * inv_pow(q - 1, (l + t) as u32);
            entries.insert((fa.clone(), fb.clone()), c);
        }
    }
    Ok(BivariateCompositionEnumerator { q: qs, ha, hb, entries })
}

/// Largest total degree for which the LDPC enumerator is computed.
pub const LDPC_DEGREE_LIMIT: usize = 10_000;

/// Expected weight enumerator of the regular (dv, dc) LDPC ensemble with
/// uniform nonzero edge labels.
pub fn ldpc_weight_enum(dv: usize, dc: usize, h: usize, q: u32) -> Result<WeightEnumerator> {
    if dv == 0 || dc == 0 || (h * dv) % dc != 0 {
        return Err(Error::invalid(
            "LDPC parameters",
            format!("h·dv = {} must be a positive multiple of dc = {dc}", h * dv),
        ));
    }
    if h * dv > LDPC_DEGREE_LIMIT {
        return Err(Error::too_large("LDPC polynomial power", h * dv, LDPC_DEGREE_LIMIT));
    }
    let checks = h * dv / dc;
    // q·p(x) = (1+(q−1)x)^dc + (q−1)(1−x)^dc has integer coefficients
    let qm1 = Integer::from(q - 1);
    let base: Vec<Integer> = (0..=dc)
        .map(|i| {
            let b = binomial(dc as u64, i as u64);
            let first = Integer::from(&b * Integer::from((&qm1).pow(i as u32)));
            let second = if i % 2 == 0 { b * &qm1 } else { -(b * &qm1) };
            first + second
        })
        .collect();
    let mut poly = vec![Integer::from(1)];
    for _ in 0..checks {
        let mut next = vec![Integer::new(); poly.len() + dc];
        for (i, a) in poly.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in base.iter().enumerate() {
                if *b != 0 {
                    next[i + j] += Integer::from(a * b);
                }
            }
        }
        poly = next;
    }
    let q_pow = Integer::from(q).pow(checks as u32);
    let mut counts = Vec::with_capacity(h + 1);
    for l in 0..=h {
        let coeff = &poly[l * dv];
        let num = binomial(h as u64, l as u64) * coeff;
        let den = binomial((h * dv) as u64, (l * dv) as u64)
            * Integer::from((&qm1).pow((l * (dv - 1)) as u32))
            * &q_pow;
        counts.push(Rational::from((num, den)));
    }
    WeightEnumerator::new(counts)
}

/// Expected bicomposition enumerator of the uniform parity-check ensemble:
/// 𝖲_κ = C(h; κ) q^{−2(h−k)} on 𝒦_{q,h}.
pub fn uniform_pc_bicomposition(h: usize, k: usize, q: u32) -> Result<BicompositionEnumerator> {
    check_dims(h, k)?;
    let qs = q as usize;
    guard_count(
        || format!("joint-composition space (h = {h}, q = {q})"),
        &composition_count(h as u64, (qs * qs) as u64),
    )?;
    let scale = inv_pow(q, 2 * (h - k) as u32);
    let mut entries = BTreeMap::new();
    for cells in compositions_iter(h as u32, qs * qs) {
        let kappa = JointComposition::from_cells(qs, cells)?;
        if in_k_qh(&kappa) {
            let c = Rational::from(multinomial_of(kappa.cells())) * &scale;
            entries.insert(kappa, c);
        }
    }
    Ok(BicompositionEnumerator { q: qs, h, entries, excluded: Rational::new() })
}

/// Expected biweight enumerator of the binary uniform parity-check
/// ensemble: 𝖩_τ = C(h; τ) 4^{−(h−k)} on 𝒯_{2,h}.
pub fn uniform_pc_joint_weight_binary(h: usize, k: usize) -> Result<BiweightEnumerator> {
    check_dims(h, k)?;
    let scale = inv_pow(4, (h - k) as u32);
    let mut entries = BTreeMap::new();
    for t in compositions_iter(h as u32, 4) {
        let tau = JointWeight([t[0], t[1], t[2], t[3]]);
        if in_t_2h(&tau) {
            entries.insert(tau, Rational::from(multinomial_of(&t)) * &scale);
        }
    }
    Ok(BiweightEnumerator { h, entries, excluded: Rational::new() })
}

/// Split a univariate ensemble enumerator over two parts of lengths hA, hB:
/// 𝖠_{a,b} = C(hA,a) C(hB,b) / C(hA+hB, a+b) · 𝖠_{a+b}.
pub fn met_split_weight_enum(a: &WeightEnumerator, ha: usize, hb: usize) -> Result<BivariateWeightEnumerator> {
    if ha + hb != a.h() {
        return Err(Error::invalid(
            "multi-edge split",
            format!("hA + hB = {} differs from the length {}", ha + hb, a.h()),
        ));
    }
    let mut out = BivariateWeightEnumerator::zeros(ha, hb);
    for x in 0..=ha {
        for y in 0..=hb {
            let w = x + y;
            if *a.get(w) == 0 {
                continue;
            }
            let frac = Rational::from((
                binomial(ha as u64, x as u64) * binomial(hb as u64, y as u64),
                binomial((ha + hb) as u64, w as u64),
            ));
            *out.get_mut(x, y) = frac * a.get(w);
        }
    }
    Ok(out)
}
