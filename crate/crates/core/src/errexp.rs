//! Error-exponent lower bounds for Raptor ensembles with linear random outer
//! codes, and the overhead threshold where the bound turns positive.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::bounds::{pi_l, DegreeDistribution};
use crate::error::{Error, Result};

const GRID_POINTS: usize = 2048;
const GOLDEN_TOL: f64 = 1e-9;
const BISECTION_TOL: f64 = 1e-8;
const EPSILON_MAX: f64 = 10.0;

fn binary_entropy(w: f64) -> f64 {
    if w <= 0.0 || w >= 1.0 {
        return 0.0;
    }
    -w * w.log2() - (1.0 - w) * (1.0 - w).log2()
}

/// Growth rate G(ω) of the expected weight enumerator, in bits per symbol.
#[derive(Clone)]
pub struct SpectralShape {
    rate: f64,
    q: u32,
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for SpectralShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralShape").field("rate", &self.rate).field("q", &self.q).finish()
    }
}

impl SpectralShape {
    /// G(ω) = H_b(ω) + ω·log₂(q−1) − (1−R)·log₂q.
    pub fn uniform_pc(rate: f64, q: u32) -> Result<Self> {
        check_rate(rate)?;
        if q < 2 {
            return Err(Error::invalid("q", "must be at least 2"));
        }
        let lq1 = ((q - 1) as f64).log2();
        let redundancy = (1.0 - rate) * (q as f64).log2();
        Ok(SpectralShape {
            rate,
            q,
            evaluator: Arc::new(move |w| binary_entropy(w) + w * lq1 - redundancy),
        })
    }

    pub fn custom(rate: f64, q: u32, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        check_rate(rate)?;
        Ok(SpectralShape {
            rate,
            q,
            evaluator: Arc::new(g),
        })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn eval(&self, w: f64) -> f64 {
        (self.evaluator)(w)
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid("rate", format!("{rate} is not in (0, 1]")));
    }
    Ok(())
}

/// Limit of π_{⌊ωh⌋} as h → ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoticKernel {
    /// 1/q + ((q−1)/q) Σ_j Ω_j (1 − qω/(q−1))^j
    PiLimit,
    /// ½ Σ_j Ω_j [1 − (1−2ω)^j]
    PaperVarrho,
}

impl AsymptoticKernel {
    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticKernel::PiLimit => "pi_limit",
            AsymptoticKernel::PaperVarrho => "paper_varrho",
        }
    }

    pub fn eval(&self, omega: &DegreeDistribution, q: u32, w: f64) -> f64 {
        let coeffs = omega.entries().iter().map(|(j, p)| (*j as i32, p.to_f64()));
        match self {
            AsymptoticKernel::PiLimit => {
                let qf = q as f64;
                let base = 1.0 - qf * w / (qf - 1.0);
                let s: f64 = coeffs.map(|(j, p)| p * base.powi(j)).sum();
                1.0 / qf + (qf - 1.0) / qf * s
            }
            AsymptoticKernel::PaperVarrho => {
                let base = 1.0 - 2.0 * w;
                0.5 * coeffs.map(|(j, p)| p * (1.0 - base.powi(j))).sum::<f64>()
            }
        }
    }
}

impl std::str::FromStr for AsymptoticKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi_limit" | "pi-limit" => Ok(AsymptoticKernel::PiLimit),
            "paper_varrho" | "paper-varrho" => Ok(AsymptoticKernel::PaperVarrho),
            _ => Err(Error::invalid("kernel", format!("unknown kernel {s:?} (pi_limit, paper_varrho)"))),
        }
    }
}

fn objective(eps: f64, omega: &DegreeDistribution, g: &SpectralShape, kernel: AsymptoticKernel, w: f64) -> f64 {
    let k = kernel.eval(omega, g.q(), w);
    if k <= 0.0 {
        return f64::NEG_INFINITY;
    }
    g.eval(w) / g.rate() + (1.0 + eps) * k.log2()
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let w = (a + b) / 2.0;
    (w, f(w))
}

/// E(ε) ≥ −sup_{ω∈(0,1]} [G(ω)/R + (1+ε)·log₂ kernel(ω)], in bits per symbol.
pub fn errexp_lower_bound(
    epsilon: f64,
    omega: &DegreeDistribution,
    g: &SpectralShape,
    kernel: AsymptoticKernel,
) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return Err(Error::invalid("epsilon", format!("{epsilon} must be nonnegative")));
    }
    let grid: Vec<(f64, f64)> = (1..=GRID_POINTS)
        .into_par_iter()
        .map(|i| {
            let w = i as f64 / GRID_POINTS as f64;
            (w, objective(epsilon, omega, g, kernel, w))
        })
        .collect();
    if let Some((w, _)) = grid.iter().find(|(_, v)| v.is_nan()) {
        return Err(Error::Numerical(format!("spectral shape undefined at ω = {w}")));
    }
    let (best_i, &(_, best)) = grid
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &(f64, f64))>, (i, p)| match acc {
            Some((_, q)) if q.1 >= p.1 => acc,
            _ => Some((i, p)),
        })
        .expect("grid is not empty");
    if best == f64::NEG_INFINITY {
        return Err(Error::Numerical("kernel vanishes on the whole search grid".into()));
    }
    let lo = if best_i == 0 { 1e-12 } else { grid[best_i - 1].0 };
    let hi = grid.get(best_i + 1).map(|p| p.0).unwrap_or(1.0);
    let (_, refined) = golden_max(|w| objective(epsilon, omega, g, kernel, w), lo, hi);
    Ok(-best.max(refined))
}

/// Smallest ε at which the error-exponent bound becomes positive.
pub fn ml_threshold_upper(omega: &DegreeDistribution, g: &SpectralShape, kernel: AsymptoticKernel) -> Result<f64> {
    let f = |e: f64| errexp_lower_bound(e, omega, g, kernel);
    let (mut lo, mut hi) = (0.0, EPSILON_MAX);
    if f(lo)? >= 0.0 || f(hi)? <= 0.0 {
        return Err(Error::Numerical(format!("no crossing of the error-exponent bound in [0, {EPSILON_MAX}]")));
    }
    while hi - lo > BISECTION_TOL {
        let mid = (lo + hi) / 2.0;
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) / 2.0)
}

/// Error exponent of linear random fountain codes over GF(q).
pub fn lrfc_errexp(epsilon: f64, q: u32) -> f64 {
    epsilon * (q as f64).log2()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelLimit {
    pub pi_l: f64,
    pub pi_limit: f64,
    pub paper_varrho: f64,
}

/// π_{⌊ωh⌋} at finite h next to both asymptotic kernels.
pub fn kernel_limit_check(omega: &DegreeDistribution, h: usize, q: u32, w: f64) -> Result<KernelLimit> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::invalid("omega", format!("{w} is not in (0, 1)")));
    }
    let l = (w * h as f64).floor() as usize;
    Ok(KernelLimit {
        pi_l: pi_l(l, omega, h, q)?.to_f64(),
        pi_limit: AsymptoticKernel::PiLimit.eval(omega, q, w),
        paper_varrho: AsymptoticKernel::PaperVarrho.eval(omega, q, w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg1() -> DegreeDistribution {
        DegreeDistribution::from_ratios(&[(1, 1, 1)]).unwrap()
    }

    #[test]
    fn kernels_at_special_points() {
        let o = deg1();
        let half = kernel_limit_check(&o, 100, 2, 0.5).unwrap();
        assert_eq!(half.pi_l, 0.5);
        assert_eq!(half.pi_limit, 0.5);
        assert_eq!(half.paper_varrho, 0.5);
        let quarter = kernel_limit_check(&o, 400, 2, 0.25).unwrap();
        assert!((quarter.pi_limit - 0.75).abs() < 1e-15);
        assert!((quarter.paper_varrho - 0.25).abs() < 1e-15);
        assert!((quarter.pi_l - 0.75).abs() < 1e-12);
        assert_eq!(AsymptoticKernel::PiLimit.eval(&o, 4, 0.0), 1.0);
        assert_eq!(AsymptoticKernel::PaperVarrho.eval(&o, 2, 0.0), 0.0);
    }

    #[test]
    fn lrfc_line() {
        assert_eq!(lrfc_errexp(0.1, 2), 0.1);
        assert_eq!(lrfc_errexp(0.1, 4), 0.2);
    }

    #[test]
    fn bound_is_monotone_in_epsilon() {
        let o = DegreeDistribution::from_ratios(&[(2, 1, 2), (3, 1, 2)]).unwrap();
        let g = SpectralShape::uniform_pc(0.9, 2).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..10 {
            let e = errexp_lower_bound(i as f64 * 0.05, &o, &g, AsymptoticKernel::PiLimit).unwrap();
            assert!(e >= prev);
            prev = e;
        }
    }

    #[test]
    fn undefined_shape_is_reported() {
        let g = SpectralShape::custom(0.5, 2, |w| if w > 0.5 { f64::NAN } else { 0.0 }).unwrap();
        assert!(errexp_lower_bound(0.1, &deg1(), &g, AsymptoticKernel::PiLimit).is_err());
    }
}
