//! Exact failure probabilities for tiny instances.

use std::collections::BTreeMap;

use itertools::Itertools;
use rug::ops::Pow;
use rug::{Integer, Rational};

use super::decode::FailureChecker;
use super::{ConstructionKind, Distribution, LTColumn, RaptorInstance};
use crate::enumerators::binomial;
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldSpec};
use crate::outercodes::GfqBasis;

/// Bound on (distinct column images)^m for the tuple oracle.
pub const TUPLE_LIMIT: u64 = 10_000_000;
/// Bound on q^k for the inclusion-exclusion oracle.
pub const INCLUSION_EXCLUSION_LIMIT: u64 = 16;

fn realization_count(instance: &RaptorInstance) -> Integer {
    let c = instance.construction();
    let q1 = if c.kind().is_zero_one() { 1 } else { c.field().q() - 1 };
    let h = instance.h() as u64;
    let mut total = Integer::new();
    match c.omega() {
        Distribution::Univariate(o) => {
            for (d, _) in o.entries() {
                total += binomial(h, *d as u64) * Integer::from(q1).pow(*d);
            }
        }
        Distribution::Bivariate(o) => {
            let (ha, hb) = c.kind().split().expect("multi-edge");
            for (j, s, _) in o.entries() {
                total += binomial(ha as u64, *j as u64) * binomial(hb as u64, *s as u64) * Integer::from(q1).pow(j + s);
            }
        }
    }
    total
}

fn supports(offset: usize, n: usize, d: usize) -> impl Iterator<Item = Vec<usize>> + Clone {
    (offset..offset + n).combinations(d)
}

/// Every column realization with its probability.
pub fn column_distribution(instance: &RaptorInstance) -> Result<Vec<(LTColumn, Rational)>> {
    let count = realization_count(instance);
    if count > TUPLE_LIMIT {
        return Err(Error::too_large("LT column realizations", count, TUPLE_LIMIT));
    }
    let c = instance.construction();
    let field = c.field();
    let coefs: Vec<FieldElement> =
        if c.kind().is_zero_one() { vec![FieldElement::ONE] } else { field.nonzero_elements().collect() };
    let h = instance.h();
    let mut out = Vec::new();
    let mut emit = |rows: Vec<usize>, p: &Rational| {
        let n = Integer::from(coefs.len()).pow(rows.len() as u32);
        let each = Rational::from(p / n);
        for cs in std::iter::repeat(coefs.iter()).take(rows.len()).multi_cartesian_product() {
            let entries = rows.iter().copied().zip(cs.into_iter().copied()).collect();
            out.push((LTColumn { entries }, each.clone()));
        }
        if rows.is_empty() {
            out.push((LTColumn::default(), p.clone()));
        }
    };
    match (c.kind(), c.omega()) {
        (_, Distribution::Univariate(o)) => {
            for (d, p) in o.entries() {
                let per = Rational::from(p / binomial(h as u64, *d as u64));
                for rows in supports(0, h, *d as usize) {
                    emit(rows, &per);
                }
            }
        }
        (ConstructionKind::MultiEdge { ha, hb } | ConstructionKind::MultiEdge01 { ha, hb }, Distribution::Bivariate(o)) => {
            for (j, s, p) in o.entries() {
                let per = Rational::from(p / (binomial(ha as u64, *j as u64) * binomial(hb as u64, *s as u64)));
                for a in supports(0, ha, *j as usize) {
                    for b in supports(ha, hb, *s as usize) {
                        emit(a.iter().chain(&b).copied().collect(), &per);
                    }
                }
            }
        }
        _ => unreachable!("construction validated at creation"),
    }
    Ok(out)
}

/// Distribution of G_o·col, merged over equal images.
fn image_distribution(instance: &RaptorInstance) -> Result<BTreeMap<Vec<u16>, Rational>> {
    let checker = FailureChecker::new(instance.outer());
    let mut images: BTreeMap<Vec<u16>, Rational> = BTreeMap::new();
    for (col, p) in column_distribution(instance)? {
        let key = checker.image(&col).iter().map(|x| x.value()).collect();
        *images.entry(key).or_default() += p;
    }
    Ok(images)
}

/// Exact P_F by summing over all m-tuples of distinct column images.
pub fn exact_pf_tuples(instance: &RaptorInstance, m: usize) -> Result<Rational> {
    let k = instance.k();
    let field = instance.outer().field();
    if m == 0 {
        return Ok(Rational::from(1));
    }
    let images: Vec<(Vec<FieldElement>, Rational)> = image_distribution(instance)?
        .into_iter()
        .map(|(v, p)| (v.into_iter().map(FieldElement).collect(), p))
        .collect();
    let tuples = Integer::from(images.len()).pow(m as u32);
    if tuples > TUPLE_LIMIT {
        return Err(Error::too_large("column-image tuples", tuples, TUPLE_LIMIT));
    }

    fn walk(images: &[(Vec<FieldElement>, Rational)], basis: &GfqBasis, left: usize, prob: &Rational, acc: &mut Rational) {
        if basis.is_full() {
            return;
        }
        if left == 0 {
            *acc += prob;
            return;
        }
        for (v, p) in images {
            let mut b = basis.clone();
            b.insert(v.clone());
            walk(images, &b, left - 1, &Rational::from(prob * p), acc);
        }
    }

    let mut acc = Rational::new();
    walk(&images, &GfqBasis::new(field, k), m, &Rational::from(1), &mut acc);
    Ok(acc)
}

/// Projective representatives of nonzero messages: first nonzero entry 1.
fn projective_messages(field: &FieldSpec, k: usize) -> Vec<Vec<FieldElement>> {
    let q = field.q() as usize;
    (1..q.pow(k as u32))
        .map(|mut n| {
            (0..k)
                .map(|_| {
                    let d = n % q;
                    n /= q;
                    FieldElement(d as u16)
                })
                .collect::<Vec<_>>()
        })
        .filter(|u| u.iter().find(|x| !x.is_zero()) == Some(&FieldElement::ONE))
        .collect()
}

/// Exact P_F = Pr{∃ u ≠ 0 orthogonal to every received image}, by
/// inclusion-exclusion over the projective classes of nonzero messages.
pub fn exact_pf_inclusion_exclusion(instance: &RaptorInstance, m: usize) -> Result<Rational> {
    let field = instance.outer().field();
    let k = instance.k();
    let size = Integer::from(field.q()).pow(k as u32);
    if size > INCLUSION_EXCLUSION_LIMIT {
        return Err(Error::too_large("inclusion-exclusion message space q^k", size, INCLUSION_EXCLUSION_LIMIT));
    }
    let classes = projective_messages(field, k);
    let n = classes.len();
    // by_mask[s] = probability that a column image is orthogonal to exactly the classes in s
    let mut by_mask = vec![Rational::new(); 1 << n];
    for (img, p) in image_distribution(instance)? {
        let mut mask = 0usize;
        for (c, u) in classes.iter().enumerate() {
            let dot = u
                .iter()
                .zip(&img)
                .fold(FieldElement::ZERO, |a, (x, y)| field.add(a, field.mul(*x, FieldElement(*y))));
            if dot.is_zero() {
                mask |= 1 << c;
            }
        }
        by_mask[mask] += p;
    }
    // superset sums: by_mask[s] becomes Pr{image orthogonal to all of s}
    for bit in 0..n {
        for s in 0..(1usize << n) {
            if s & (1 << bit) == 0 {
                let (lo, hi) = by_mask.split_at_mut(s | (1 << bit));
                lo[s] += &hi[0];
            }
        }
    }
    let mut total = Rational::new();
    for (s, p) in by_mask.iter().enumerate().skip(1) {
        let term = Rational::from(p.pow(m as i32));
        if s.count_ones() % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}
