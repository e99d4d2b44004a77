//! CSV export. The first line names the kind and dimensions
//! (`kind,q,h` or `kind,q,hA,hB`); each following line is one key followed
//! by its count as an exact fraction `num/den`.

use std::fmt::Write;

use rug::{Integer, Rational};

use super::{
    BicompositionEnumerator, BivariateCompositionEnumerator, BivariateWeightEnumerator,
    BiweightEnumerator, CompositionEnumerator, WeightEnumerator,
};
use crate::error::{Error, Result};

pub fn write_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den` or a bare integer.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact fraction: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = Integer::from_str_radix(n.trim(), 10).map_err(|_| bad())?;
    let d = Integer::from_str_radix(d.trim(), 10).map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::from((n, d)))
}

fn join(parts: impl IntoIterator<Item = impl ToString>) -> String {
    parts.into_iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

impl WeightEnumerator {
    pub fn to_csv(&self, q: u32) -> String {
        let mut out = format!("weight,{q},{}\n", self.h());
        for (l, c) in self.counts.iter().enumerate() {
            writeln!(out, "{l},{}", write_fraction(c)).unwrap();
        }
        out
    }
}

impl BivariateWeightEnumerator {
    pub fn to_csv(&self, q: u32) -> String {
        let mut out = format!("bivariate_weight,{q},{},{}\n", self.ha(), self.hb());
        for l in 0..=self.ha() {
            for t in 0..=self.hb() {
                writeln!(out, "{l},{t},{}", write_fraction(self.get(l, t))).unwrap();
            }
        }
        out
    }
}

impl CompositionEnumerator {
    pub fn to_csv(&self) -> String {
        let mut out = format!("composition,{},{}\n", self.q, self.h);
        for (f, c) in &self.entries {
            writeln!(out, "{},{}", join(f), write_fraction(c)).unwrap();
        }
        out
    }
}

impl BivariateCompositionEnumerator {
    pub fn to_csv(&self) -> String {
        let mut out = format!("bivariate_composition,{},{},{}\n", self.q, self.ha, self.hb);
        for ((fa, fb), c) in &self.entries {
            writeln!(out, "{},{},{}", join(fa), join(fb), write_fraction(c)).unwrap();
        }
        out
    }
}

impl BicompositionEnumerator {
    /// Keys are the q² cells of κ in row-major order.
    pub fn to_csv(&self) -> String {
        let mut out = format!("bicomposition,{},{}\n", self.q, self.h);
        for (k, c) in &self.entries {
            writeln!(out, "{},{}", join(k.cells()), write_fraction(c)).unwrap();
        }
        out
    }
}

impl BiweightEnumerator {
    pub fn to_csv(&self) -> String {
        let mut out = format!("biweight,2,{}\n", self.h);
        for (t, c) in &self.entries {
            writeln!(out, "{},{}", join(t.0), write_fraction(c)).unwrap();
        }
        out
    }
}
