//! Monte Carlo estimation of the decoding failure rate.
//!
//! Every trial draws its columns from its own generator, seeded from the
//! master seed and the trial coordinates, so counts do not depend on how
//! trials are scheduled across threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::outercodes::OuterEnsembleSpec;
use crate::raptor::{ColumnSampler, Construction, FailureChecker, LTColumn, RaptorInstance};

/// Trials are evaluated in blocks of this size before the stop rule is
/// checked; the block size is fixed so the outcome is thread-independent.
const BLOCK: u64 = 2048;
const BOOTSTRAP_RESAMPLES: usize = 1000;
const CP_TOL: f64 = 1e-12;

const TAG_TRIAL: u64 = 0x7472_6961_6c00_0001;
const TAG_CODE: u64 = 0x636f_6465_0000_0002;
const TAG_BOOT: u64 = 0x626f_6f74_0000_0003;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed derived from a master seed and a list of coordinates.
pub fn mix(master: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(splitmix(master), |acc, &c| splitmix(acc ^ splitmix(c)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub target_failures: Option<u64>,
    pub max_trials: u64,
}

impl StopRule {
    pub fn new(target_failures: Option<u64>, max_trials: u64) -> Result<Self> {
        if max_trials == 0 {
            return Err(Error::invalid("max_trials", "must be at least 1"));
        }
        if target_failures == Some(0) {
            return Err(Error::invalid("target_failures", "must be at least 1"));
        }
        Ok(StopRule { target_failures, max_trials })
    }
}

#[derive(Clone, Debug)]
pub struct Campaign {
    pub deltas: Vec<i64>,
    pub stop: StopRule,
    pub master_seed: u64,
    pub level: f64,
}

#[derive(Clone, Debug)]
pub struct EnsembleCampaign {
    pub outer: OuterEnsembleSpec,
    pub construction: Construction,
    pub deltas: Vec<i64>,
    pub n_codes: usize,
    pub trials_per_code: u64,
    pub master_seed: u64,
    pub level: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub delta: i64,
    pub trials: u64,
    pub failures: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleReport {
    /// Mean failure rate over codes with a percentile-bootstrap interval.
    pub results: Vec<SimResult>,
    /// Dimension of each sampled code.
    pub code_dimensions: Vec<usize>,
    /// failures[code][delta index].
    pub failures: Vec<Vec<u64>>,
}

impl EnsembleReport {
    pub fn dimension_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &k in &self.code_dimensions {
            *h.entry(k).or_default() += 1;
        }
        h
    }
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid("level", format!("{level} is not in (0, 1)")));
    }
    Ok(())
}

fn check_deltas(deltas: &[i64]) -> Result<()> {
    if deltas.iter().any(|&d| d < 0) {
        return Err(Error::invalid("delta", "overheads must be nonnegative"));
    }
    Ok(())
}

/// Smallest p with beta_reg(a, b, p) ≥ target, by bisection.
fn beta_quantile(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > CP_TOL {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact binomial confidence interval.
pub fn clopper_pearson(failures: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    if trials == 0 || failures > trials {
        return Err(Error::invalid("counts", format!("{failures} failures in {trials} trials")));
    }
    let alpha = 1.0 - level;
    let (x, n) = (failures as f64, trials as f64);
    let low = if failures == 0 { 0.0 } else { beta_quantile(x, n - x + 1.0, alpha / 2.0) };
    let high = if failures == trials { 1.0 } else { beta_quantile(x + 1.0, n - x, 1.0 - alpha / 2.0) };
    Ok((low, high))
}

struct Scratch {
    columns: Vec<LTColumn>,
    indices: Vec<usize>,
}

impl Scratch {
    fn new() -> Self {
        Scratch {
            columns: Vec::new(),
            indices: Vec::new(),
        }
    }
}

fn trial(sampler: &ColumnSampler, checker: &FailureChecker, m: usize, seed: u64, s: &mut Scratch) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    s.columns.resize_with(m, LTColumn::default);
    for col in s.columns.iter_mut() {
        sampler.sample_into(&mut rng, col, &mut s.indices);
    }
    checker.fails(&s.columns[..m])
}

fn overhead(k: usize, delta: i64) -> Result<usize> {
    let m = k as i64 + delta;
    if m < 0 {
        return Err(Error::invalid("delta", format!("k + δ = {m} is negative")));
    }
    Ok(m as usize)
}

/// Failure-rate estimates for one Raptor code.
pub fn run_single(instance: &RaptorInstance, campaign: &Campaign) -> Result<Vec<SimResult>> {
    check_level(campaign.level)?;
    check_deltas(&campaign.deltas)?;
    let sampler = instance.sampler()?;
    let checker = FailureChecker::new(instance.outer());
    let mut out = Vec::with_capacity(campaign.deltas.len());
    for &delta in &campaign.deltas {
        let m = overhead(instance.k(), delta)?;
        let mut trials = 0u64;
        let mut failures = 0u64;
        'blocks: while trials < campaign.stop.max_trials {
            let end = (trials + BLOCK).min(campaign.stop.max_trials);
            let verdicts: Vec<bool> = (trials..end)
                .into_par_iter()
                .map_init(Scratch::new, |s, t| {
                    trial(&sampler, &checker, m, mix(campaign.master_seed, &[TAG_TRIAL, delta as u64, t]), s)
                })
                .collect();
            for v in verdicts {
                trials += 1;
                failures += v as u64;
                if campaign.stop.target_failures.is_some_and(|n| failures >= n) {
                    break 'blocks;
                }
            }
        }
        let (ci_low, ci_high) = clopper_pearson(failures, trials, campaign.level)?;
        out.push(SimResult {
            delta,
            trials,
            failures,
            p_hat: failures as f64 / trials as f64,
            ci_low,
            ci_high,
        });
    }
    Ok(out)
}

/// Average failure rate over sampled outer codes. Each code gets
/// `trials_per_code` attempts per δ with m = k + δ for the nominal k; a
/// trial fails when fewer than k_C independent combinations are received.
pub fn run_ensemble(campaign: &EnsembleCampaign) -> Result<EnsembleReport> {
    check_level(campaign.level)?;
    check_deltas(&campaign.deltas)?;
    campaign.outer.validate()?;
    if campaign.n_codes == 0 || campaign.trials_per_code == 0 {
        return Err(Error::invalid("ensemble", "n_codes and trials_per_code must be positive"));
    }
    campaign.construction.check_length(campaign.outer.h())?;
    let k = campaign.outer.k();
    let ms = campaign.deltas.iter().map(|&d| overhead(k, d)).collect::<Result<Vec<_>>>()?;
    let field = campaign.construction.field();
    let sampler = ColumnSampler::new(&campaign.construction, campaign.outer.h())?;

    let per_code: Vec<(usize, Vec<u64>)> = (0..campaign.n_codes as u64)
        .into_par_iter()
        .map(|c| {
            let code_seed = mix(campaign.master_seed, &[TAG_CODE, c]);
            let mut rng = ChaCha8Rng::seed_from_u64(code_seed);
            let code = campaign.outer.sample(field, &mut rng)?;
            let checker = FailureChecker::new(&code);
            let mut scratch = Scratch::new();
            let fails = campaign
                .deltas
                .iter()
                .zip(&ms)
                .map(|(&delta, &m)| {
                    (0..campaign.trials_per_code)
                        .filter(|&t| trial(&sampler, &checker, m, mix(code_seed, &[TAG_TRIAL, delta as u64, t]), &mut scratch))
                        .count() as u64
                })
                .collect();
            Ok((code.k(), fails))
        })
        .collect::<Result<_>>()?;

    let n = campaign.n_codes;
    let tpc = campaign.trials_per_code;
    let alpha = 1.0 - campaign.level;
    let mut results = Vec::with_capacity(ms.len());
    for (di, &delta) in campaign.deltas.iter().enumerate() {
        let rates: Vec<f64> = per_code.iter().map(|(_, f)| f[di] as f64 / tpc as f64).collect();
        let failures: u64 = per_code.iter().map(|(_, f)| f[di]).sum();
        // every code runs the same number of trials, so the mean of the
        // per-code rates is the pooled rate
        let mean = failures as f64 / (n as u64 * tpc) as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(mix(campaign.master_seed, &[TAG_BOOT, delta as u64]));
        let mut means: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
            .map(|_| (0..n).map(|_| rates[rng.gen_range(0..n)]).sum::<f64>() / n as f64)
            .collect();
        means.sort_by(f64::total_cmp);
        let at = |q: f64| means[((q * BOOTSTRAP_RESAMPLES as f64).floor() as usize).min(BOOTSTRAP_RESAMPLES - 1)];
        results.push(SimResult {
            delta,
            trials: n as u64 * tpc,
            failures,
            p_hat: mean,
            ci_low: at(alpha / 2.0).min(mean),
            ci_high: at(1.0 - alpha / 2.0).max(mean),
        });
    }
    Ok(EnsembleReport {
        results,
        code_dimensions: per_code.iter().map(|(k, _)| *k).collect(),
        failures: per_code.into_iter().map(|(_, f)| f).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopper_pearson_examples() {
        let (lo, hi) = clopper_pearson(0, 50, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.025f64.powf(1.0 / 50.0))).abs() < 1e-10);
        assert_eq!(clopper_pearson(7, 7, 0.95).unwrap().1, 1.0);
        let (lo, hi) = clopper_pearson(5, 100, 0.95).unwrap();
        assert!((lo - 0.0164).abs() < 1e-4 && (hi - 0.1128).abs() < 1e-4, "{lo} {hi}");
        assert!(clopper_pearson(3, 2, 0.95).is_err());
        assert!(clopper_pearson(1, 2, 1.0).is_err());
    }

    #[test]
    fn seeds_differ_by_coordinate() {
        assert_ne!(mix(1, &[0, 1]), mix(1, &[1, 0]));
        assert_ne!(mix(1, &[0]), mix(2, &[0]));
    }
}
