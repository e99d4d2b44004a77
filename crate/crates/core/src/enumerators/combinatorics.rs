use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// K_j(x; n, q) = Σ_i (−1)^i C(x,i) C(n−x, j−i) (q−1)^(j−i).
pub fn krawtchouk(j: u64, x: u64, n: u64, q: u64) -> Result<Integer> {
    if j > n || x > n {
        return Err(Error::invalid(
            "krawtchouk arguments",
            format!("need j ≤ n and x ≤ n, got j = {j}, x = {x}, n = {n}"),
        ));
    }
    Ok(krawtchouk_unchecked(j, x, n, q))
}

pub(crate) fn krawtchouk_unchecked(j: u64, x: u64, n: u64, q: u64) -> Integer {
    let mut sum = Integer::new();
    let lo = j.saturating_sub(n - x);
    let hi = j.min(x);
    let qm1 = Integer::from(q - 1);
    for i in lo..=hi {
        let mut term = binomial(x, i) * binomial(n - x, j - i);
        term *= qm1.clone().pow((j - i) as u32);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Table of Krawtchouk ratios K_j(x; n, q)/K_j(0; n, q) for a fixed set of
/// degrees and all x in 0..=n.
pub struct KrawtchoukRatios {
    n: u64,
    degrees: Vec<u64>,
    // ratios[d][x] for degree index d
    ratios: Vec<Vec<Rational>>,
}

impl KrawtchoukRatios {
    pub fn new(degrees: &[u64], n: u64, q: u64) -> Result<Self> {
        let mut ratios = Vec::with_capacity(degrees.len());
        for &j in degrees {
            if j > n {
                return Err(Error::invalid(
                    "degree distribution",
                    format!("degree {j} exceeds the length {n}"),
                ));
            }
            let k0 = krawtchouk_unchecked(j, 0, n, q);
            let row = (0..=n)
                .map(|x| Rational::from((krawtchouk_unchecked(j, x, n, q), k0.clone())))
                .collect();
            ratios.push(row);
        }
        Ok(KrawtchoukRatios {
            n,
            degrees: degrees.to_vec(),
            ratios,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Ratio for the `d`-th degree of the table at argument x.
    pub fn ratio(&self, d: usize, x: u64) -> &Rational {
        &self.ratios[d][x as usize]
    }
}

pub fn multinomial(h: u64, parts: &[u32]) -> Result<Integer> {
    let total: u64 = parts.iter().map(|&p| p as u64).sum();
    if total != h {
        return Err(Error::invalid(
            "multinomial parts",
            format!("parts sum to {total}, expected {h}"),
        ));
    }
    Ok(multinomial_of(parts))
}

/// Multinomial coefficient (Σ parts; parts).
pub fn multinomial_of(parts: &[u32]) -> Integer {
    let mut acc = Integer::from(1);
    let mut running = 0u64;
    for &p in parts {
        running += p as u64;
        acc *= binomial(running, p as u64);
    }
    acc
}

/// Number of compositions of h into n nonnegative parts, C(h+n−1, n−1).
pub fn composition_count(h: u64, n: u64) -> Integer {
    if n == 0 {
        return Integer::from((h == 0) as u32);
    }
    binomial(h + n - 1, n - 1)
}

/// All compositions of h into `n_parts` nonnegative parts, in ascending
/// lexicographic order: (0,…,0,h) first and (h,0,…,0) last.
pub fn compositions_iter(h: u32, n_parts: usize) -> Compositions {
    let first = if n_parts == 0 {
        if h == 0 { Some(Vec::new()) } else { None }
    } else {
        let mut v = vec![0; n_parts];
        v[n_parts - 1] = h;
        Some(v)
    };
    Compositions { next: first }
}

pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let n = current.len();
        if n >= 2 {
            let mut succ = current.clone();
            // rightmost position i < n-1 with mass to its right
            let i = if succ[n - 1] > 0 {
                Some(n - 2)
            } else {
                (0..n - 1).rev().find(|&j| succ[j] > 0).and_then(|j| j.checked_sub(1))
            };
            if let Some(i) = i {
                let right: u32 = succ[i + 1..].iter().sum();
                succ[i] += 1;
                for x in succ[i + 1..].iter_mut() {
                    *x = 0;
                }
                succ[n - 1] = right - 1;
                self.next = Some(succ);
            }
        }
        Some(current)
    }
}
