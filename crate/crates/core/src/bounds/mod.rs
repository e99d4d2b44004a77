//! Union upper bounds and second-moment lower bounds on the ML decoding
//! failure probability of Raptor codes.
//!
//! Each bound is a sum over enumerator keys of count · π^m with m = k + δ.
//! Kernels are exact rationals; the sums are evaluated in 128-bit floats.

mod degree;
mod kernels;
mod precision;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::enumerators::{
    BicompositionEnumerator, BivariateCompositionEnumerator, BivariateWeightEnumerator, BiweightEnumerator,
    CompositionEnumerator, WeightEnumerator,
};
use crate::error::{Error, Result};
use crate::galois::FieldSpec;

pub use degree::{parse_decimal, parse_probability_table, BivariateDegreeDistribution, DegreeDistribution};
pub use kernels::{
    pair_probability_binary, pair_probability_binary_triplets, pair_probability_dynamic, pair_probability_enumerated,
    pi_f_dynamic, pi_f_enumerated, pi_l, pi_lt, pi_lt_table, pi_table, BinaryPairKernel, MetZeroOneKernel,
    ZeroOneKernel,
};
pub use precision::{to_float, PreparedSum, PRECISION};

fn exponent(k: usize, delta: i64) -> Result<u64> {
    let m = k as i64 + delta;
    if m < 1 {
        return Err(Error::invalid("delta", format!("k + δ = {m} must be positive")));
    }
    Ok(m as u64)
}

fn union_prefactor(q: u32) -> Rational {
    Rational::from((1, q - 1))
}

fn second_prefactor(q: u32) -> Rational {
    Rational::from((1, 2 * (q - 1) * (q - 1)))
}

pub fn prepare_ub_gfq(a: &WeightEnumerator, omega: &DegreeDistribution, q: u32) -> Result<PreparedSum> {
    let pi = pi_table(omega, a.h(), q)?;
    let terms = (1..=a.h()).map(|l| (a.get(l).clone(), pi[l].clone())).collect();
    PreparedSum::new(&union_prefactor(q), terms)
}

pub fn prepare_ub_met(a: &BivariateWeightEnumerator, omega: &BivariateDegreeDistribution, q: u32) -> Result<PreparedSum> {
    let pi = pi_lt_table(omega, a.ha(), a.hb(), q)?;
    let mut terms = Vec::new();
    for l in 0..=a.ha() {
        for t in 0..=a.hb() {
            if (l, t) != (0, 0) {
                terms.push((a.get(l, t).clone(), pi[l][t].clone()));
            }
        }
    }
    PreparedSum::new(&union_prefactor(q), terms)
}

fn check_field(q: usize, field: &FieldSpec) -> Result<()> {
    if q != field.q() as usize {
        return Err(Error::invalid("enumerator", format!("built for q = {q}, field is GF({})", field.q())));
    }
    Ok(())
}

pub fn prepare_ub_gfq01(
    qe: &CompositionEnumerator,
    omega: &DegreeDistribution,
    field: &FieldSpec,
) -> Result<PreparedSum> {
    check_field(qe.q, field)?;
    let kernel = ZeroOneKernel::new(omega, qe.h, field)?;
    let keys: Vec<(&Vec<u32>, &Rational)> = qe.entries.iter().filter(|(f, _)| f[0] as usize != qe.h).collect();
    let terms = keys
        .par_iter()
        .map(|(f, c)| Ok(((*c).clone(), kernel.pi_f(f)?)))
        .collect::<Result<Vec<_>>>()?;
    PreparedSum::new(&union_prefactor(field.q()), terms)
}

pub fn prepare_ub_met01(
    qe: &BivariateCompositionEnumerator,
    omega: &BivariateDegreeDistribution,
    field: &FieldSpec,
) -> Result<PreparedSum> {
    check_field(qe.q, field)?;
    let kernel = MetZeroOneKernel::new(omega, qe.ha, qe.hb, field)?;
    let keys: Vec<_> = qe
        .entries
        .iter()
        .filter(|((fa, fb), _)| !(fa[0] as usize == qe.ha && fb[0] as usize == qe.hb))
        .collect();
    let terms = keys
        .par_iter()
        .map(|((fa, fb), c)| Ok(((*c).clone(), kernel.pi(fa, fb)?)))
        .collect::<Result<Vec<_>>>()?;
    PreparedSum::new(&union_prefactor(field.q()), terms)
}

/// S₂ for binary codes from the biweight enumerator on 𝒯_{2,h}.
pub fn prepare_s2_binary(j: &BiweightEnumerator, omega: &DegreeDistribution) -> Result<PreparedSum> {
    let kernel = BinaryPairKernel::new(omega, j.h)?;
    let keys: Vec<_> = j.entries.iter().collect();
    let terms = keys
        .par_iter()
        .map(|(tau, c)| Ok(((*c).clone(), kernel.pair(tau)?)))
        .collect::<Result<Vec<_>>>()?;
    PreparedSum::new(&second_prefactor(2), terms)
}

/// S₂ for 0/1 columns over GF(q) from the bicomposition enumerator on 𝒦_{q,h}.
pub fn prepare_s2_gfq01(s: &BicompositionEnumerator, omega: &DegreeDistribution, field: &FieldSpec) -> Result<PreparedSum> {
    check_field(s.q, field)?;
    let kernel = ZeroOneKernel::new(omega, s.h, field)?;
    let keys: Vec<_> = s.entries.iter().collect();
    let terms = keys
        .par_iter()
        .map(|(kappa, c)| Ok(((*c).clone(), kernel.pair(kappa)?)))
        .collect::<Result<Vec<_>>>()?;
    PreparedSum::new(&second_prefactor(field.q()), terms)
}

pub fn ub_gfq(a: &WeightEnumerator, omega: &DegreeDistribution, k: usize, delta: i64, q: u32) -> Result<Float> {
    Ok(prepare_ub_gfq(a, omega, q)?.eval(exponent(k, delta)?))
}

pub fn ub_met(
    a: &BivariateWeightEnumerator,
    omega: &BivariateDegreeDistribution,
    k: usize,
    delta: i64,
    q: u32,
) -> Result<Float> {
    Ok(prepare_ub_met(a, omega, q)?.eval(exponent(k, delta)?))
}

pub fn ub_gfq01(
    qe: &CompositionEnumerator,
    omega: &DegreeDistribution,
    k: usize,
    delta: i64,
    field: &FieldSpec,
) -> Result<Float> {
    Ok(prepare_ub_gfq01(qe, omega, field)?.eval(exponent(k, delta)?))
}

pub fn ub_met01(
    qe: &BivariateCompositionEnumerator,
    omega: &BivariateDegreeDistribution,
    k: usize,
    delta: i64,
    field: &FieldSpec,
) -> Result<Float> {
    Ok(prepare_ub_met01(qe, omega, field)?.eval(exponent(k, delta)?))
}

pub fn s2_binary(j: &BiweightEnumerator, omega: &DegreeDistribution, k: usize, delta: i64) -> Result<Float> {
    Ok(prepare_s2_binary(j, omega)?.eval(exponent(k, delta)?))
}

pub fn s2_gfq01(
    s: &BicompositionEnumerator,
    omega: &DegreeDistribution,
    k: usize,
    delta: i64,
    field: &FieldSpec,
) -> Result<Float> {
    Ok(prepare_s2_gfq01(s, omega, field)?.eval(exponent(k, delta)?))
}

/// Dawson–Sankoff lower bound from S₁ and S₂; zero when S₁ = 0.
pub fn dawson_sankoff(s1: &Float, s2: &Float) -> Result<Float> {
    if s1.is_sign_negative() && !s1.is_zero() || s2.is_sign_negative() && !s2.is_zero() {
        return Err(Error::Numerical("Dawson-Sankoff inputs must be nonnegative".into()));
    }
    if s1.is_zero() {
        return Ok(Float::with_val(PRECISION, 0));
    }
    let ratio = Float::with_val(PRECISION, s2 * 2u32) / s1;
    let theta = Float::with_val(PRECISION, &ratio - ratio.clone().floor());
    let one_minus = Float::with_val(PRECISION, 1 - &theta);
    let two_minus = Float::with_val(PRECISION, 2 - &theta);
    let s1_sq = Float::with_val(PRECISION, s1 * s1);
    let two_s2 = Float::with_val(PRECISION, s2 * 2u32);
    let first = Float::with_val(PRECISION, &theta * &s1_sq) / (Float::with_val(PRECISION, &two_minus * s1) + &two_s2);
    let second = Float::with_val(PRECISION, &one_minus * &s1_sq) / (Float::with_val(PRECISION, &one_minus * s1) + &two_s2);
    Ok(first + second)
}

/// Second-order enumerator feeding the lower bounds.
#[derive(Clone, Debug)]
pub enum SecondOrder {
    Biweight(BiweightEnumerator),
    Bicomposition(BicompositionEnumerator),
}

#[derive(Clone, Debug)]
pub enum BoundInputs {
    /// q-ary LT coefficients over a single class of intermediate symbols.
    Gfq {
        enumerator: WeightEnumerator,
        omega: DegreeDistribution,
        second: Option<BiweightEnumerator>,
    },
    Met {
        enumerator: BivariateWeightEnumerator,
        omega: BivariateDegreeDistribution,
    },
    /// 0/1 LT coefficients over GF(q).
    Gfq01 {
        enumerator: CompositionEnumerator,
        omega: DegreeDistribution,
        second: Option<SecondOrder>,
    },
    Met01 {
        enumerator: BivariateCompositionEnumerator,
        omega: BivariateDegreeDistribution,
    },
}

#[derive(Clone, Debug)]
pub struct BoundResult {
    pub delta: i64,
    pub upper: Float,
    pub s2: Option<Float>,
    pub bonferroni_raw: Option<Float>,
    pub dawson_sankoff_raw: Option<Float>,
    /// Lower bounds after the running maximum over larger δ and clamping at 0.
    pub bonferroni: Option<Float>,
    pub dawson_sankoff: Option<Float>,
}

fn check_deltas(deltas: &[i64]) -> Result<()> {
    if deltas.is_empty() {
        return Err(Error::invalid("delta", "at least one value is required"));
    }
    if deltas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("delta", "values must be strictly increasing"));
    }
    Ok(())
}

/// Upper and lower bounds for every δ. The lower bounds are made
/// non-increasing in δ (P_F is), and the upper bound is checked to be so.
pub fn bound_suite(field: &FieldSpec, k: usize, inputs: &BoundInputs, deltas: &[i64]) -> Result<Vec<BoundResult>> {
    check_deltas(deltas)?;
    if k == 0 {
        return Err(Error::invalid("k", "must be positive"));
    }
    let q = field.q();
    let (first, second) = match inputs {
        BoundInputs::Gfq { enumerator, omega, second } => {
            if second.is_some() && q != 2 {
                return Err(Error::invalid("lower bound", "q-ary coefficients admit lower bounds only for q = 2"));
            }
            let s2 = second.as_ref().map(|j| prepare_s2_binary(j, omega)).transpose()?;
            (prepare_ub_gfq(enumerator, omega, q)?, s2)
        }
        BoundInputs::Met { enumerator, omega } => (prepare_ub_met(enumerator, omega, q)?, None),
        BoundInputs::Gfq01 { enumerator, omega, second } => {
            let s2 = match second {
                None => None,
                Some(SecondOrder::Biweight(j)) => {
                    if q != 2 {
                        return Err(Error::invalid("lower bound", "a biweight enumerator needs q = 2"));
                    }
                    Some(prepare_s2_binary(j, omega)?)
                }
                Some(SecondOrder::Bicomposition(s)) => Some(prepare_s2_gfq01(s, omega, field)?),
            };
            (prepare_ub_gfq01(enumerator, omega, field)?, s2)
        }
        BoundInputs::Met01 { enumerator, omega } => (prepare_ub_met01(enumerator, omega, field)?, None),
    };

    let mut results = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let m = exponent(k, delta)?;
        let upper = first.eval(m);
        let (s2, bonf, ds) = match &second {
            Some(sum) => {
                let s2 = sum.eval(m);
                let bonf = Float::with_val(PRECISION, &upper - &s2);
                let ds = dawson_sankoff(&upper, &s2)?;
                (Some(s2), Some(bonf), Some(ds))
            }
            None => (None, None, None),
        };
        results.push(BoundResult {
            delta,
            upper,
            s2,
            bonferroni: bonf.clone(),
            dawson_sankoff: ds.clone(),
            bonferroni_raw: bonf,
            dawson_sankoff_raw: ds,
        });
    }

    for w in results.windows(2) {
        let slack = Float::with_val(PRECISION, &w[0].upper * Float::with_val(PRECISION, 1e-30));
        if w[1].upper > Float::with_val(PRECISION, &w[0].upper + &slack) {
            return Err(Error::Numerical(format!("upper bound increased from δ = {} to δ = {}", w[0].delta, w[1].delta)));
        }
    }
    monotonize(&mut results, |r| &mut r.bonferroni);
    monotonize(&mut results, |r| &mut r.dawson_sankoff);
    Ok(results)
}

fn monotonize(results: &mut [BoundResult], field: impl Fn(&mut BoundResult) -> &mut Option<Float>) {
    let mut best = Float::with_val(PRECISION, 0);
    for r in results.iter_mut().rev() {
        if let Some(v) = field(r) {
            if *v > best {
                best = v.clone();
            }
            *v = best.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerators::composition_from_weight;
    use crate::outercodes::{exhaustive_biweight, exhaustive_weight, LinearCode, Matrix};

    fn f64_of(x: &Float) -> f64 {
        x.to_f64()
    }

    #[test]
    fn dawson_sankoff_examples() {
        let one = Float::with_val(PRECISION, 1);
        assert!((f64_of(&dawson_sankoff(&one, &one).unwrap()) - 1.0 / 3.0).abs() < 1e-15);
        let zero = Float::with_val(PRECISION, 0);
        assert!(dawson_sankoff(&zero, &one).unwrap().is_zero());
        assert_eq!(f64_of(&dawson_sankoff(&one, &zero).unwrap()), 1.0);
        let quarter = Float::with_val(PRECISION, 0.25);
        assert!((f64_of(&dawson_sankoff(&one, &quarter).unwrap()) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn single_check_code_is_exact() {
        // outer code {00, 11}: failure iff every column misses the pair's parity
        let field = FieldSpec::of_order(2).unwrap();
        let code = LinearCode::from_generator(Matrix::from_values(&field, &[vec![1, 1]]).unwrap()).unwrap();
        let omega = DegreeDistribution::from_ratios(&[(1, 1, 2), (2, 1, 2)]).unwrap();
        let a = exhaustive_weight(&code).unwrap();
        let inputs = BoundInputs::Gfq {
            enumerator: a,
            omega,
            second: Some(exhaustive_biweight(&code).unwrap()),
        };
        let res = bound_suite(&field, 1, &inputs, &[0, 1, 2, 5]).unwrap();
        for r in &res {
            let exact = 0.5f64.powi(1 + r.delta as i32);
            assert!((f64_of(&r.upper) - exact).abs() < 1e-15);
            assert!((f64_of(r.dawson_sankoff.as_ref().unwrap()) - exact).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_one_binary_matches_qary_binary() {
        let field = FieldSpec::of_order(2).unwrap();
        let a = crate::enumerators::uniform_pc_weight_enum(8, 4, 2).unwrap();
        let comp = composition_from_weight(&a, 2).unwrap();
        let omega = DegreeDistribution::from_ratios(&[(1, 1, 5), (2, 2, 5), (3, 2, 5)]).unwrap();
        for delta in [0, 3, 7] {
            let x = ub_gfq(&a, &omega, 4, delta, 2).unwrap();
            let y = ub_gfq01(&comp, &omega, 4, delta, &field).unwrap();
            let rel = Float::with_val(PRECISION, &x - &y).abs() / &x;
            assert!(rel < 1e-30);
        }
    }

    #[test]
    fn rejects_bad_deltas() {
        let field = FieldSpec::of_order(2).unwrap();
        let inputs = BoundInputs::Gfq {
            enumerator: WeightEnumerator::from_integers([1, 1]).unwrap(),
            omega: DegreeDistribution::from_ratios(&[(1, 1, 1)]).unwrap(),
            second: None,
        };
        assert!(bound_suite(&field, 1, &inputs, &[2, 1]).is_err());
        assert!(bound_suite(&field, 1, &inputs, &[-1]).is_err());
        assert!(bound_suite(&field, 1, &inputs, &[]).is_err());
    }
}
