//! Multiprecision accumulation of Σ c_i p_i^m.

use rayon::prelude::*;
use rug::{Assign, Float, Rational};

use crate::error::{Error, Result};

/// Working precision of every bound evaluation, in bits.
pub const PRECISION: u32 = 128;

pub fn to_float(r: &Rational) -> Float {
    Float::with_val(PRECISION, r)
}

/// Probabilities are computed exactly, so anything outside [0, 1] is a bug.
pub fn check_probability(what: &str, p: &Rational) -> Result<()> {
    if *p < 0 || *p > 1 {
        return Err(Error::Numerical(format!("{what} evaluated to {p}, outside [0, 1]")));
    }
    Ok(())
}

fn ln_of(r: &Rational) -> Float {
    to_float(r).ln()
}

/// A sum c₀ · Σ_i c_i p_i^m prepared for evaluation at many exponents m.
/// Terms are kept as (ln c_i, ln p_i) and combined with log-sum-exp in a fixed
/// order, so the result does not depend on the number of threads.
#[derive(Clone, Debug)]
pub struct PreparedSum {
    ln_prefactor: Float,
    terms: Vec<(Float, Float)>,
}

impl PreparedSum {
    pub fn new(prefactor: &Rational, terms: Vec<(Rational, Rational)>) -> Result<Self> {
        if *prefactor <= 0 {
            return Err(Error::Numerical("sum prefactor must be positive".into()));
        }
        for (c, p) in &terms {
            if *c < 0 {
                return Err(Error::Numerical(format!("negative enumerator coefficient {c}")));
            }
            check_probability("kernel probability", p)?;
        }
        let terms = terms
            .into_par_iter()
            .filter(|(c, p)| *c != 0 && *p != 0)
            .map(|(c, p)| (ln_of(&c), ln_of(&p)))
            .collect();
        Ok(PreparedSum {
            ln_prefactor: ln_of(prefactor),
            terms,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at exponent m; zero for an empty sum.
    pub fn eval(&self, m: u64) -> Float {
        if self.terms.is_empty() {
            return Float::with_val(PRECISION, 0);
        }
        let exps: Vec<Float> = self
            .terms
            .par_iter()
            .map(|(lc, lp)| Float::with_val(PRECISION, lp * m) + lc)
            .collect();
        let mut max = exps[0].clone();
        for x in &exps[1..] {
            if *x > max {
                max.assign(x);
            }
        }
        let parts: Vec<Float> = exps.par_iter().map(|x| Float::with_val(PRECISION, x - &max).exp()).collect();
        let mut sum = Float::with_val(PRECISION, 0);
        for p in &parts {
            sum += p;
        }
        (sum.ln() + &max + &self.ln_prefactor).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let terms = vec![
            (Rational::from(3), Rational::from((1, 2))),
            (Rational::from(5), Rational::from((1, 3))),
            (Rational::from(0), Rational::from((1, 5))),
        ];
        let s = PreparedSum::new(&Rational::from((1, 2)), terms).unwrap();
        assert_eq!(s.len(), 2);
        for m in 1..20u32 {
            let exact = Rational::from((1, 2))
                * (Rational::from(3) * Rational::from((1, 2u64.pow(m))) + Rational::from(5) * Rational::from((1, 3u64.pow(m))));
            let got = s.eval(m as u64);
            let rel = Float::with_val(PRECISION, &got - &to_float(&exact)).abs() / to_float(&exact);
            assert!(rel < 1e-30, "m = {m}: relative error {rel}");
        }
    }

    #[test]
    fn empty_is_zero() {
        let s = PreparedSum::new(&Rational::from(1), vec![]).unwrap();
        assert!(s.eval(3).is_zero());
        assert!(PreparedSum::new(&Rational::from(1), vec![(Rational::from(1), Rational::from(2))]).is_err());
    }
}
