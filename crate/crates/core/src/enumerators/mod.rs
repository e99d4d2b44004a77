//! Exact enumerators of outer codes and code ensembles.
//!
//! Counts are rationals so that ensemble expectations and actual codebook
//! counts share one representation.

mod combinatorics;
mod csv;
mod ensembles;
mod joint;
mod macwilliams;

use std::collections::BTreeMap;

use rug::Rational;

use crate::error::{Error, Result};

pub(crate) use joint::guard_count;

pub use combinatorics::{
    binomial, composition_count, compositions_iter, krawtchouk, multinomial, multinomial_of,
    Compositions, KrawtchoukRatios,
};
pub use csv::{parse_fraction, write_fraction};
pub use ensembles::{
    bivariate_composition_from_weight, composition_from_weight, ldpc_weight_enum,
    met_split_weight_enum, uniform_pc_bicomposition, uniform_pc_joint_weight_binary,
    uniform_pc_weight_enum,
};
pub use joint::{
    gamma_projections, in_k_qh, in_t_2h, is_circulant_permutation_pattern,
    joint_compositions_iter, tau_of_kappa, JointComposition, JointWeight, ENUMERATION_LIMIT,
};
pub use macwilliams::{joint_weight_macwilliams_binary, macwilliams_bivariate, macwilliams_univariate};

/// Weight enumerator A_0..A_h.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightEnumerator {
    pub counts: Vec<Rational>,
}

impl WeightEnumerator {
    pub fn new(counts: Vec<Rational>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid("weight enumerator", "needs at least A_0"));
        }
        if counts.iter().any(|c| *c < 0) {
            return Err(Error::invalid("weight enumerator", "negative count"));
        }
        Ok(WeightEnumerator { counts })
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(counts: I) -> Result<Self> {
        Self::new(counts.into_iter().map(Rational::from).collect())
    }

    pub fn h(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, l: usize) -> &Rational {
        &self.counts[l]
    }

    pub fn total(&self) -> Rational {
        self.counts.iter().sum()
    }
}

/// Bivariate weight enumerator A_{l,t}, l ∈ 0..=hA, t ∈ 0..=hB.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateWeightEnumerator {
    ha: usize,
    hb: usize,
    counts: Vec<Rational>,
}

impl BivariateWeightEnumerator {
    pub fn zeros(ha: usize, hb: usize) -> Self {
        BivariateWeightEnumerator {
            ha,
            hb,
            counts: vec![Rational::new(); (ha + 1) * (hb + 1)],
        }
    }

    pub fn ha(&self) -> usize {
        self.ha
    }

    pub fn hb(&self) -> usize {
        self.hb
    }

    pub fn get(&self, l: usize, t: usize) -> &Rational {
        &self.counts[l * (self.hb + 1) + t]
    }

    pub fn get_mut(&mut self, l: usize, t: usize) -> &mut Rational {
        &mut self.counts[l * (self.hb + 1) + t]
    }

    /// Univariate enumerator obtained by binning on l + t.
    pub fn marginal(&self) -> WeightEnumerator {
        let mut counts = vec![Rational::new(); self.ha + self.hb + 1];
        for l in 0..=self.ha {
            for t in 0..=self.hb {
                counts[l + t] += self.get(l, t);
            }
        }
        WeightEnumerator { counts }
    }

    pub fn total(&self) -> Rational {
        self.counts.iter().sum()
    }
}

/// Composition enumerator: composition (f_0, …, f_{q−1}) ↦ count.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionEnumerator {
    pub q: usize,
    pub h: usize,
    pub entries: BTreeMap<Vec<u32>, Rational>,
}

impl CompositionEnumerator {
    /// Re-bin onto total weight h − f_0.
    pub fn weight_marginal(&self) -> WeightEnumerator {
        let mut counts = vec![Rational::new(); self.h + 1];
        for (f, c) in &self.entries {
            counts[self.h - f[0] as usize] += c;
        }
        WeightEnumerator { counts }
    }
}

/// Bivariate composition enumerator: (f_A, f_B) ↦ count.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateCompositionEnumerator {
    pub q: usize,
    pub ha: usize,
    pub hb: usize,
    pub entries: BTreeMap<(Vec<u32>, Vec<u32>), Rational>,
}

impl BivariateCompositionEnumerator {
    pub fn weight_marginal(&self) -> BivariateWeightEnumerator {
        let mut out = BivariateWeightEnumerator::zeros(self.ha, self.hb);
        for ((fa, fb), c) in &self.entries {
            *out.get_mut(self.ha - fa[0] as usize, self.hb - fb[0] as usize) += c;
        }
        out
    }
}

/// Bicomposition enumerator restricted to 𝒦_{q,h}, with the count of
/// codeword pairs that fell outside it.
#[derive(Clone, Debug, PartialEq)]
pub struct BicompositionEnumerator {
    pub q: usize,
    pub h: usize,
    pub entries: BTreeMap<JointComposition, Rational>,
    pub excluded: Rational,
}

/// Biweight enumerator restricted to 𝒯_{2,h}, with the excluded pair count.
#[derive(Clone, Debug, PartialEq)]
pub struct BiweightEnumerator {
    pub h: usize,
    pub entries: BTreeMap<JointWeight, Rational>,
    pub excluded: Rational,
}
