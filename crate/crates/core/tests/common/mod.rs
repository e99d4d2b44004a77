//! Helpers shared by the property suites and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use raptor_bounds::bounds::{BivariateDegreeDistribution, DegreeDistribution};
use raptor_bounds::galois::{FieldElement, FieldSpec};
use raptor_bounds::outercodes::{LinearCode, Matrix, OuterEnsembleSpec};
use raptor_bounds::raptor::{Construction, ConstructionKind, Distribution, RaptorInstance};

/// Coefficient of z^j in (1 + (q−1)z)^(n−x) (1 − z)^x.
pub fn krawtchouk_by_polynomial(j: u64, x: u64, n: u64, q: u64) -> Integer {
    let mut poly = vec![Integer::from(1)];
    let mut times = |a: i64| {
        let mut next = vec![Integer::new(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] += Integer::from(c * a);
        }
        poly = next;
    };
    for _ in 0..n - x {
        times(q as i64 - 1);
    }
    for _ in 0..x {
        times(-1);
    }
    poly.get(j as usize).cloned().unwrap_or_default()
}

/// Σ over binary v of weight j of (−1)^{u·v}, u the first x positions.
pub fn krawtchouk_by_characters(j: u32, x: u32, n: u32) -> i64 {
    let u: u32 = (1u32 << x) - 1;
    (0u32..1 << n)
        .filter(|v| v.count_ones() == j)
        .map(|v| if (u & v).count_ones() % 2 == 0 { 1 } else { -1 })
        .sum()
}

pub fn linearly_independent(f: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> bool {
    let zero = |v: &[FieldElement]| v.iter().all(|x| x.is_zero());
    if zero(a) || zero(b) {
        return false;
    }
    !f.nonzero_elements().any(|s| a.iter().zip(b).all(|(x, y)| f.mul(s, *x) == *y))
}

pub fn normalized(weights: impl IntoIterator<Item = (u32, u32)>) -> DegreeDistribution {
    let merged: BTreeMap<u32, u32> = weights.into_iter().fold(BTreeMap::new(), |mut m, (d, w)| {
        *m.entry(d).or_default() += w;
        m
    });
    let total: u32 = merged.values().sum();
    DegreeDistribution::new(merged.into_iter().map(|(d, w)| (d, Rational::from((w, total))))).unwrap()
}

pub fn random_univariate(rng: &mut ChaCha8Rng, max: u32) -> DegreeDistribution {
    let n = rng.gen_range(1..5);
    normalized((0..n).map(|_| (rng.gen_range(1..=max), rng.gen_range(1..20))).collect::<Vec<_>>())
}

pub fn random_bivariate(rng: &mut ChaCha8Rng, ma: u32, mb: u32) -> BivariateDegreeDistribution {
    let mut terms: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    while terms.is_empty() || rng.gen_bool(0.6) {
        let key = (rng.gen_range(0..=ma), rng.gen_range(0..=mb));
        if key != (0, 0) {
            *terms.entry(key).or_default() += rng.gen_range(1..20);
        }
    }
    let total: u32 = terms.values().sum();
    BivariateDegreeDistribution::new(terms.into_iter().map(|((j, s), w)| (j, s, Rational::from((w, total)))), true)
        .unwrap()
}

/// A full-rank random [h, k] code.
pub fn random_code(rng: &mut ChaCha8Rng, q: u32, h: usize, k: usize) -> LinearCode {
    let f = FieldSpec::of_order(q).unwrap();
    loop {
        let rows: Vec<Vec<u32>> = (0..k).map(|_| (0..h).map(|_| rng.gen_range(0..q)).collect()).collect();
        if let Ok(code) = LinearCode::from_generator(Matrix::from_values(&f, &rows).unwrap()) {
            return code;
        }
    }
}

/// A small Raptor instance of one of the four constructions:
/// 0 gfq, 1 gfq01, 2 multi-edge, 3 multi-edge 0/1.
pub fn random_instance(rng: &mut ChaCha8Rng, kind: usize, q: u32) -> RaptorInstance {
    let field = FieldSpec::of_order(q).unwrap();
    let h = rng.gen_range(6..=14);
    let k = rng.gen_range(2..h);
    let outer = OuterEnsembleSpec::UniformParityCheck { h, k }.sample(&field, rng).unwrap();
    let ha = rng.gen_range(1..h);
    let hb = h - ha;
    let construction = match kind {
        0 => Construction::gfq(&field, random_univariate(rng, 5.min(h as u32))),
        1 => Construction::gfq01(&field, random_univariate(rng, 5.min(h as u32))),
        _ => {
            let kind = if kind == 2 {
                ConstructionKind::MultiEdge { ha, hb }
            } else {
                ConstructionKind::MultiEdge01 { ha, hb }
            };
            let omega = random_bivariate(rng, 4.min(ha as u32), 3.min(hb as u32));
            Construction::new(kind, &field, Distribution::Bivariate(omega)).unwrap()
        }
    };
    RaptorInstance::new(outer, construction).unwrap()
}
