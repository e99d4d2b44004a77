//! Raptor constructions: an outer linear code followed by an LT code whose
//! columns are drawn independently from a degree distribution.

mod decode;
mod oracle;

use rand::{Rng, RngCore};
use rug::{Integer, Rational};

use crate::bounds::{BivariateDegreeDistribution, DegreeDistribution};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldSpec};
use crate::outercodes::LinearCode;

pub use decode::{inactivation_decode, inactivation_solve, ml_failure, FailureChecker, InactivationReport};
pub use oracle::{column_distribution, exact_pf_inclusion_exclusion, exact_pf_tuples, INCLUSION_EXCLUSION_LIMIT, TUPLE_LIMIT};

/// Ω_A of R10 Raptor codes.
pub fn omega_r10() -> DegreeDistribution {
    DegreeDistribution::from_ratios(&[
        (1, 98, 10_000),
        (2, 4590, 10_000),
        (3, 2110, 10_000),
        (4, 1134, 10_000),
        (10, 1113, 10_000),
        (11, 799, 10_000),
        (40, 156, 10_000),
    ])
    .expect("R10 distribution sums to one")
}

/// Ω(x)·(z² + z³)/2.
pub fn omega_rq_bivariate(base: &DegreeDistribution) -> BivariateDegreeDistribution {
    let z = DegreeDistribution::from_ratios(&[(2, 1, 2), (3, 1, 2)]).expect("valid");
    BivariateDegreeDistribution::product(base, &z).expect("product of distributions")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionKind {
    Gfq,
    MultiEdge { ha: usize, hb: usize },
    Gfq01,
    MultiEdge01 { ha: usize, hb: usize },
}

impl ConstructionKind {
    pub fn is_zero_one(&self) -> bool {
        matches!(self, ConstructionKind::Gfq01 | ConstructionKind::MultiEdge01 { .. })
    }

    pub fn split(&self) -> Option<(usize, usize)> {
        match *self {
            ConstructionKind::MultiEdge { ha, hb } | ConstructionKind::MultiEdge01 { ha, hb } => Some((ha, hb)),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConstructionKind::Gfq => "gfq",
            ConstructionKind::MultiEdge { .. } => "met",
            ConstructionKind::Gfq01 => "gfq01",
            ConstructionKind::MultiEdge01 { .. } => "met01",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    Univariate(DegreeDistribution),
    Bivariate(BivariateDegreeDistribution),
}

#[derive(Clone, Debug)]
pub struct Construction {
    kind: ConstructionKind,
    field: FieldSpec,
    omega: Distribution,
}

impl Construction {
    pub fn new(kind: ConstructionKind, field: &FieldSpec, omega: Distribution) -> Result<Self> {
        match (&kind, &omega) {
            (ConstructionKind::Gfq | ConstructionKind::Gfq01, Distribution::Univariate(_)) => {}
            (ConstructionKind::MultiEdge { ha, hb } | ConstructionKind::MultiEdge01 { ha, hb }, Distribution::Bivariate(o)) => {
                o.check_fits(*ha, *hb)?;
            }
            _ => {
                return Err(Error::invalid(
                    "degree distribution",
                    format!("{} needs a {} distribution", kind.name(), if kind.split().is_some() { "bivariate" } else { "univariate" }),
                ))
            }
        }
        Ok(Construction {
            kind,
            field: field.clone(),
            omega,
        })
    }

    pub fn gfq(field: &FieldSpec, omega: DegreeDistribution) -> Self {
        Construction::new(ConstructionKind::Gfq, field, Distribution::Univariate(omega)).expect("valid")
    }

    pub fn gfq01(field: &FieldSpec, omega: DegreeDistribution) -> Self {
        Construction::new(ConstructionKind::Gfq01, field, Distribution::Univariate(omega)).expect("valid")
    }

    pub fn multi_edge(field: &FieldSpec, omega: BivariateDegreeDistribution, ha: usize, hb: usize) -> Result<Self> {
        Construction::new(ConstructionKind::MultiEdge { ha, hb }, field, Distribution::Bivariate(omega))
    }

    pub fn multi_edge01(field: &FieldSpec, omega: BivariateDegreeDistribution, ha: usize, hb: usize) -> Result<Self> {
        Construction::new(ConstructionKind::MultiEdge01 { ha, hb }, field, Distribution::Bivariate(omega))
    }

    pub fn kind(&self) -> ConstructionKind {
        self.kind
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn omega(&self) -> &Distribution {
        &self.omega
    }

    /// Check the construction against an outer code length.
    pub fn check_length(&self, h: usize) -> Result<()> {
        match (&self.kind, &self.omega) {
            (_, Distribution::Univariate(o)) => o.check_fits(h),
            (k, Distribution::Bivariate(_)) => {
                let (ha, hb) = k.split().expect("multi-edge");
                if ha + hb != h {
                    return Err(Error::invalid("split", format!("hA + hB = {} differs from the outer length {h}", ha + hb)));
                }
                Ok(())
            }
        }
    }
}

/// Sparse LT column: (intermediate-symbol index, nonzero coefficient).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LTColumn {
    pub entries: Vec<(usize, FieldElement)>,
}

impl LTColumn {
    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    /// Dense form of length h.
    pub fn dense(&self, h: usize) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; h];
        for &(i, c) in &self.entries {
            v[i] = c;
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct RaptorInstance {
    outer: LinearCode,
    construction: Construction,
}

impl RaptorInstance {
    pub fn new(outer: LinearCode, construction: Construction) -> Result<Self> {
        if outer.field() != construction.field() {
            return Err(Error::invalid("field", "outer code and LT code use different fields"));
        }
        construction.check_length(outer.h())?;
        Ok(RaptorInstance { outer, construction })
    }

    pub fn outer(&self) -> &LinearCode {
        &self.outer
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn k(&self) -> usize {
        self.outer.k()
    }

    pub fn h(&self) -> usize {
        self.outer.h()
    }

    pub fn sampler(&self) -> Result<ColumnSampler> {
        ColumnSampler::new(&self.construction, self.h())
    }
}

/// Cumulative thresholds floor(cum · 2⁶⁴); the last one is saturated.
fn thresholds<'a>(probs: impl Iterator<Item = &'a Rational>) -> Vec<u64> {
    let scale = Integer::from(1) << 64u32;
    let mut cum = Rational::new();
    let mut out: Vec<u64> = probs
        .map(|p| {
            cum += p;
            let t = Integer::from((Rational::from(&cum * &scale)).floor_ref());
            t.to_u64().unwrap_or(u64::MAX)
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = u64::MAX;
    }
    out
}

fn pick(thresholds: &[u64], u: u64) -> usize {
    thresholds.partition_point(|&t| t < u)
}

enum DegreeTable {
    Univariate { degrees: Vec<usize>, thresholds: Vec<u64> },
    Bivariate { degrees: Vec<(usize, usize)>, thresholds: Vec<u64> },
}

/// Draws LT columns for a construction and an outer length.
pub struct ColumnSampler {
    field: FieldSpec,
    zero_one: bool,
    h: usize,
    split: usize,
    table: DegreeTable,
}

impl ColumnSampler {
    pub fn new(construction: &Construction, h: usize) -> Result<Self> {
        construction.check_length(h)?;
        let table = match construction.omega() {
            Distribution::Univariate(o) => DegreeTable::Univariate {
                degrees: o.entries().iter().map(|(d, _)| *d as usize).collect(),
                thresholds: thresholds(o.entries().iter().map(|(_, p)| p)),
            },
            Distribution::Bivariate(o) => DegreeTable::Bivariate {
                degrees: o.entries().iter().map(|(j, s, _)| (*j as usize, *s as usize)).collect(),
                thresholds: thresholds(o.entries().iter().map(|(_, _, p)| p)),
            },
        };
        Ok(ColumnSampler {
            field: construction.field().clone(),
            zero_one: construction.kind().is_zero_one(),
            h,
            split: construction.kind().split().map(|s| s.0).unwrap_or(h),
            table,
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    fn coefficient<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        if self.zero_one {
            FieldElement::ONE
        } else {
            FieldElement(rng.gen_range(1..self.field.q()) as u16)
        }
    }

    /// Uniform d-subset of offset..offset+n by partial Fisher-Yates.
    fn subset<R: RngCore + ?Sized>(&self, rng: &mut R, offset: usize, n: usize, d: usize, scratch: &mut Vec<usize>, out: &mut LTColumn) {
        scratch.clear();
        scratch.extend(0..n);
        for i in 0..d {
            let j = rng.gen_range(i..n);
            scratch.swap(i, j);
            let c = self.coefficient(rng);
            out.entries.push((offset + scratch[i], c));
        }
    }

    /// Sample into `out`, reusing its allocation.
    pub fn sample_into<R: RngCore + ?Sized>(&self, rng: &mut R, out: &mut LTColumn, scratch: &mut Vec<usize>) {
        out.entries.clear();
        let u = rng.next_u64();
        match &self.table {
            DegreeTable::Univariate { degrees, thresholds } => {
                let d = degrees[pick(thresholds, u)];
                self.subset(rng, 0, self.h, d, scratch, out);
            }
            DegreeTable::Bivariate { degrees, thresholds } => {
                let (j, s) = degrees[pick(thresholds, u)];
                self.subset(rng, 0, self.split, j, scratch, out);
                self.subset(rng, self.split, self.h - self.split, s, scratch, out);
            }
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> LTColumn {
        let mut out = LTColumn::default();
        self.sample_into(rng, &mut out, &mut Vec::new());
        out
    }
}

/// One column for a construction over an outer code of length h.
pub fn sample_column<R: RngCore + ?Sized>(construction: &Construction, h: usize, rng: &mut R) -> Result<LTColumn> {
    Ok(ColumnSampler::new(construction, h)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn r10_distribution() {
        let o = omega_r10();
        assert_eq!(o.d_max(), 40);
        assert_eq!(o.entries().iter().map(|e| e.1.clone()).sum::<Rational>(), 1);
        let b = omega_rq_bivariate(&o);
        assert_eq!(b.entries().len(), 14);
        assert_eq!(b.entries().iter().map(|e| e.2.clone()).sum::<Rational>(), 1);
    }

    #[test]
    fn thresholds_break_ties_low() {
        let half = Rational::from((1, 2));
        let t = thresholds([half.clone(), half].iter());
        assert_eq!(t, vec![1u64 << 63, u64::MAX]);
        assert_eq!(pick(&t, 0), 0);
        assert_eq!(pick(&t, 1 << 63), 0);
        assert_eq!(pick(&t, (1 << 63) + 1), 1);
        assert_eq!(pick(&t, u64::MAX), 1);
    }

    #[test]
    fn degree_one_rows_are_uniform() {
        let f = FieldSpec::of_order(2).unwrap();
        let c = Construction::gfq(&f, DegreeDistribution::from_ratios(&[(1, 1, 1)]).unwrap());
        let s = ColumnSampler::new(&c, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            let col = s.sample(&mut rng);
            assert_eq!(col.degree(), 1);
            counts[col.entries[0].0] += 1;
        }
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 / 4.0).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn gf4_coefficients_are_uniform() {
        let f = FieldSpec::of_order(4).unwrap();
        let c = Construction::gfq(&f, DegreeDistribution::from_ratios(&[(2, 1, 1)]).unwrap());
        let s = ColumnSampler::new(&c, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut counts = [0usize; 4];
        let n = 50_000;
        for _ in 0..n {
            for (_, x) in s.sample(&mut rng).entries {
                counts[x.value() as usize] += 1;
            }
        }
        assert_eq!(counts[0], 0);
        let total = 2.0 * n as f64;
        let sigma = (total / 3.0 * (2.0 / 3.0)).sqrt();
        for c in &counts[1..] {
            assert!((*c as f64 - total / 3.0).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn multi_edge_structure() {
        let f = FieldSpec::of_order(2).unwrap();
        let o = BivariateDegreeDistribution::new([(2, 2, Rational::from(1))], false).unwrap();
        let c = Construction::multi_edge(&f, o, 3, 3).unwrap();
        let s = ColumnSampler::new(&c, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let col = s.sample(&mut rng);
            let a: Vec<usize> = col.entries.iter().map(|e| e.0).filter(|&i| i < 3).collect();
            let b: Vec<usize> = col.entries.iter().map(|e| e.0).filter(|&i| i >= 3).collect();
            assert_eq!((a.len(), b.len()), (2, 2));
            assert!(a[0] != a[1] && b[0] != b[1] && b.iter().all(|&i| i < 6));
        }
        assert!(ColumnSampler::new(&c, 7).is_err());
    }
}
