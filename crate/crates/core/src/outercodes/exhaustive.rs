//! Enumerators by full codebook (or codebook-pair) iteration. These are the
//! ground truth that every closed-form enumerator is tested against.

use std::collections::BTreeMap;

use rug::{Integer, Rational};

use super::gf2::BitVector;
use super::LinearCode;
use crate::enumerators::{
    in_k_qh, in_t_2h, joint_weight_macwilliams_binary, macwilliams_bivariate, macwilliams_univariate, BicompositionEnumerator,
    BivariateCompositionEnumerator, BivariateWeightEnumerator, BiweightEnumerator,
    CompositionEnumerator, JointComposition, JointWeight, WeightEnumerator,
};
use crate::error::{Error, Result};
use crate::galois::FieldElement;

/// Single-codeword enumerators need q^k ≤ 2^16.
pub const SINGLE_LIMIT_LOG2: u32 = 16;
/// Pair enumerators need q^(2k) ≤ 2^24.
pub const PAIR_LIMIT_LOG2: u32 = 24;

fn composition_of(code: &LinearCode, v: &[FieldElement]) -> Vec<u32> {
    let mut f = vec![0u32; code.field().q() as usize];
    for &x in v {
        f[code.field().index_of_element(x)] += 1;
    }
    f
}

fn weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

pub fn exhaustive_weight(code: &LinearCode) -> Result<WeightEnumerator> {
    let mut counts = vec![0i64; code.h() + 1];
    for v in code.codebook(SINGLE_LIMIT_LOG2)? {
        counts[weight(&v)] += 1;
    }
    WeightEnumerator::from_integers(counts)
}

pub fn exhaustive_composition(code: &LinearCode) -> Result<CompositionEnumerator> {
    let mut entries: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for v in code.codebook(SINGLE_LIMIT_LOG2)? {
        *entries.entry(composition_of(code, &v)).or_default() += 1;
    }
    Ok(CompositionEnumerator {
        q: code.field().q() as usize,
        h: code.h(),
        entries,
    })
}

fn check_split(code: &LinearCode, ha: usize) -> Result<()> {
    if ha > code.h() {
        return Err(Error::invalid("split", format!("hA = {ha} exceeds the length {}", code.h())));
    }
    Ok(())
}

pub fn exhaustive_bivariate_weight(code: &LinearCode, ha: usize) -> Result<BivariateWeightEnumerator> {
    check_split(code, ha)?;
    let mut out = BivariateWeightEnumerator::zeros(ha, code.h() - ha);
    for v in code.codebook(SINGLE_LIMIT_LOG2)? {
        *out.get_mut(weight(&v[..ha]), weight(&v[ha..])) += 1;
    }
    Ok(out)
}

pub fn exhaustive_bivariate_composition(code: &LinearCode, ha: usize) -> Result<BivariateCompositionEnumerator> {
    check_split(code, ha)?;
    let mut entries: BTreeMap<(Vec<u32>, Vec<u32>), Rational> = BTreeMap::new();
    for v in code.codebook(SINGLE_LIMIT_LOG2)? {
        let key = (composition_of(code, &v[..ha]), composition_of(code, &v[ha..]));
        *entries.entry(key).or_default() += 1;
    }
    Ok(BivariateCompositionEnumerator {
        q: code.field().q() as usize,
        ha,
        hb: code.h() - ha,
        entries,
    })
}

fn pair_codebook(code: &LinearCode) -> Result<Vec<Vec<FieldElement>>> {
    let size = code.size().unwrap_or(u64::MAX);
    if size > 1 << (PAIR_LIMIT_LOG2 / 2) {
        return Err(Error::too_large(
            "codeword-pair enumeration",
            format!("{}^{}", code.field().q(), 2 * code.k()),
            format!("2^{PAIR_LIMIT_LOG2}"),
        ));
    }
    code.codebook(SINGLE_LIMIT_LOG2)
}

/// Joint-weight counts over all ordered pairs of binary codewords, zero and
/// repeated words included.
pub fn biweight_full(code: &LinearCode) -> Result<BTreeMap<JointWeight, Integer>> {
    if code.field().q() != 2 {
        return Err(Error::invalid("biweight enumerator", "defined for binary codes only"));
    }
    let h = code.h();
    let packed: Vec<BitVector> = pair_codebook(code)?
        .iter()
        .map(|v| {
            let mut b = BitVector::zeros(h);
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    b.flip(i);
                }
            }
            b
        })
        .collect();
    let weights: Vec<u32> = packed.iter().map(|b| b.words().iter().map(|w| w.count_ones()).sum()).collect();
    let mut counts: BTreeMap<JointWeight, u64> = BTreeMap::new();
    for (a, wa) in packed.iter().zip(&weights) {
        for (b, wb) in packed.iter().zip(&weights) {
            let both: u32 = a.words().iter().zip(b.words()).map(|(x, y)| (x & y).count_ones()).sum();
            let tau = JointWeight([h as u32 + both - wa - wb, wb - both, wa - both, both]);
            *counts.entry(tau).or_default() += 1;
        }
    }
    Ok(counts.into_iter().map(|(k, v)| (k, Integer::from(v))).collect())
}

fn restrict_biweight(h: usize, full: BTreeMap<JointWeight, Integer>) -> BiweightEnumerator {
    let mut entries = BTreeMap::new();
    let mut excluded = Rational::new();
    for (tau, c) in full {
        if in_t_2h(&tau) {
            entries.insert(tau, Rational::from(c));
        } else {
            excluded += c;
        }
    }
    BiweightEnumerator { h, entries, excluded }
}

/// Biweight enumerator on 𝒯_{2,h} by direct pair iteration.
pub fn exhaustive_biweight(code: &LinearCode) -> Result<BiweightEnumerator> {
    Ok(restrict_biweight(code.h(), biweight_full(code)?))
}

/// Biweight enumerator on 𝒯_{2,h} from the pairs of the dual code, through
/// the joint-weight MacWilliams identity. Feasible for high-rate codes.
pub fn biweight_via_dual(code: &LinearCode) -> Result<BiweightEnumerator> {
    let dual = code.dual()?;
    let full = joint_weight_macwilliams_binary(&biweight_full(&dual)?, code.h(), dual.k())?;
    Ok(restrict_biweight(code.h(), full))
}

/// Biweight enumerator by whichever of the two routes is feasible.
pub fn biweight(code: &LinearCode) -> Result<BiweightEnumerator> {
    if 2 * code.k() as u32 <= PAIR_LIMIT_LOG2 {
        exhaustive_biweight(code)
    } else {
        biweight_via_dual(code)
    }
}

fn single_feasible(code: &LinearCode) -> bool {
    code.size().is_some_and(|n| n <= 1 << SINGLE_LIMIT_LOG2)
}

/// Weight enumerator from the codebook, or from the dual codebook through
/// MacWilliams when only the dual is small enough.
pub fn weight_enumerator(code: &LinearCode) -> Result<WeightEnumerator> {
    if single_feasible(code) {
        return exhaustive_weight(code);
    }
    let dual = code.dual()?;
    if !single_feasible(&dual) {
        return exhaustive_weight(code);
    }
    macwilliams_univariate(&exhaustive_weight(&dual)?, dual.k(), code.field().q())
}

/// Bivariate counterpart of [`weight_enumerator`].
pub fn bivariate_weight_enumerator(code: &LinearCode, ha: usize) -> Result<BivariateWeightEnumerator> {
    if single_feasible(code) {
        return exhaustive_bivariate_weight(code, ha);
    }
    let dual = code.dual()?;
    if !single_feasible(&dual) {
        return exhaustive_bivariate_weight(code, ha);
    }
    macwilliams_bivariate(&exhaustive_bivariate_weight(&dual, ha)?, dual.k(), code.field().q())
}

/// Bicomposition enumerator on 𝒦_{q,h} by direct pair iteration.
pub fn exhaustive_bicomposition(code: &LinearCode) -> Result<BicompositionEnumerator> {
    let f = code.field();
    let book = pair_codebook(code)?;
    let mut counts: BTreeMap<JointComposition, u64> = BTreeMap::new();
    for a in &book {
        for b in &book {
            *counts.entry(JointComposition::of_pair(f, a, b)).or_default() += 1;
        }
    }
    let mut entries = BTreeMap::new();
    let mut excluded = Rational::new();
    for (kappa, c) in counts {
        if in_k_qh(&kappa) {
            entries.insert(kappa, Rational::from(c));
        } else {
            excluded += c;
        }
    }
    Ok(BicompositionEnumerator {
        q: f.q() as usize,
        h: code.h(),
        entries,
        excluded,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumeratorKind {
    Weight,
    Composition,
    BivariateWeight { ha: usize },
    BivariateComposition { ha: usize },
    Biweight,
    Bicomposition,
}

#[derive(Clone, Debug)]
pub enum EnumeratorValue {
    Weight(WeightEnumerator),
    Composition(CompositionEnumerator),
    BivariateWeight(BivariateWeightEnumerator),
    BivariateComposition(BivariateCompositionEnumerator),
    Biweight(BiweightEnumerator),
    Bicomposition(BicompositionEnumerator),
}

impl EnumeratorValue {
    pub fn to_csv(&self, q: u32) -> String {
        match self {
            EnumeratorValue::Weight(e) => e.to_csv(q),
            EnumeratorValue::Composition(e) => e.to_csv(),
            EnumeratorValue::BivariateWeight(e) => e.to_csv(q),
            EnumeratorValue::BivariateComposition(e) => e.to_csv(),
            EnumeratorValue::Biweight(e) => e.to_csv(),
            EnumeratorValue::Bicomposition(e) => e.to_csv(),
        }
    }
}

pub fn exhaustive_enumerators(code: &LinearCode, which: EnumeratorKind) -> Result<EnumeratorValue> {
    Ok(match which {
        EnumeratorKind::Weight => EnumeratorValue::Weight(weight_enumerator(code)?),
        EnumeratorKind::Composition => EnumeratorValue::Composition(exhaustive_composition(code)?),
        EnumeratorKind::BivariateWeight { ha } => EnumeratorValue::BivariateWeight(bivariate_weight_enumerator(code, ha)?),
        EnumeratorKind::BivariateComposition { ha } => {
            EnumeratorValue::BivariateComposition(exhaustive_bivariate_composition(code, ha)?)
        }
        EnumeratorKind::Biweight => EnumeratorValue::Biweight(biweight(code)?),
        EnumeratorKind::Bicomposition => EnumeratorValue::Bicomposition(exhaustive_bicomposition(code)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;
    use crate::outercodes::{hamming_generator, Matrix};

    #[test]
    fn repetition_biweight_is_empty() {
        let f = FieldSpec::of_order(2).unwrap();
        let rep = LinearCode::from_generator(Matrix::from_values(&f, &[vec![1, 1]]).unwrap()).unwrap();
        let b = exhaustive_biweight(&rep).unwrap();
        assert!(b.entries.is_empty());
        assert_eq!(b.excluded, 4);
    }

    #[test]
    fn dual_route_matches_direct_route() {
        for t in [3, 4] {
            let c = hamming_generator(t).unwrap();
            assert_eq!(biweight_via_dual(&c).unwrap(), exhaustive_biweight(&c).unwrap());
        }
    }

    #[test]
    fn dual_route_weight_enumerators() {
        let c = hamming_generator(4).unwrap();
        let direct = exhaustive_weight(&c).unwrap();
        let dual = c.dual().unwrap();
        let via = macwilliams_univariate(&exhaustive_weight(&dual).unwrap(), dual.k(), 2).unwrap();
        assert_eq!(direct, via);
        let big = hamming_generator(6).unwrap();
        let a = weight_enumerator(&big).unwrap();
        assert_eq!(a, crate::outercodes::hamming_weight_enum_recursive(63).unwrap());
        let b = bivariate_weight_enumerator(&big, 60).unwrap();
        assert_eq!(b.marginal(), a);
    }

    #[test]
    fn binary_bicomposition_matches_biweight() {
        let c = hamming_generator(3).unwrap();
        let s = exhaustive_bicomposition(&c).unwrap();
        let j = exhaustive_biweight(&c).unwrap();
        assert_eq!(s.entries.len(), j.entries.len());
        for (kappa, v) in &s.entries {
            assert_eq!(j.entries[&kappa.tau()], *v);
        }
        // 16² pairs minus 15·14 independent ones
        assert_eq!(s.excluded, 256 - 210);
    }
}
