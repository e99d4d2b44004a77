//! LT output-degree distributions with exact rational probabilities.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Ω(x) = Σ_d Ω_d x^d.
#[derive(Clone, PartialEq, Eq)]
pub struct DegreeDistribution {
    entries: Vec<(u32, Rational)>,
}

impl fmt::Debug for DegreeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.entries.iter().map(|(d, p)| format!("{p}·x^{d}")).collect();
        write!(f, "Ω({})", terms.join(" + "))
    }
}

impl DegreeDistribution {
    /// Entries with zero probability are dropped; the rest must have distinct
    /// degrees ≥ 1 and sum exactly to one.
    pub fn new(entries: impl IntoIterator<Item = (u32, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<u32, Rational> = BTreeMap::new();
        for (d, p) in entries {
            if d == 0 {
                return Err(Error::invalid("degree distribution", "degree 0 is not allowed"));
            }
            if p < 0 {
                return Err(Error::invalid("degree distribution", format!("negative probability at degree {d}")));
            }
            if map.insert(d, p).is_some() {
                return Err(Error::invalid("degree distribution", format!("degree {d} listed twice")));
            }
        }
        map.retain(|_, p| *p != 0);
        let total: Rational = map.values().sum();
        if total != 1 {
            return Err(Error::invalid("degree distribution", format!("probabilities sum to {total}, not 1")));
        }
        Ok(DegreeDistribution { entries: map.into_iter().collect() })
    }

    pub fn from_ratios(entries: &[(u32, i64, i64)]) -> Result<Self> {
        Self::new(entries.iter().map(|&(d, n, den)| (d, Rational::from((n, den)))))
    }

    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.entries.iter().map(|(d, _)| *d as u64).collect()
    }

    pub fn d_max(&self) -> u32 {
        self.entries.last().map(|(d, _)| *d).unwrap_or(0)
    }

    /// Degrees above `max_degree` have their mass moved to `max_degree`.
    pub fn truncated(&self, max_degree: u32) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::invalid("truncation degree", "must be at least 1"));
        }
        let mut map: BTreeMap<u32, Rational> = BTreeMap::new();
        for (d, p) in &self.entries {
            *map.entry((*d).min(max_degree)).or_default() += p;
        }
        Self::new(map)
    }

    pub fn check_fits(&self, h: usize) -> Result<()> {
        if self.d_max() as usize > h {
            return Err(Error::invalid(
                "degree distribution",
                format!("maximum degree {} exceeds the length {h}", self.d_max()),
            ));
        }
        Ok(())
    }

    /// Parse `degree probability` lines; see [`parse_probability_table`].
    pub fn parse(text: &str) -> Result<Self> {
        let rows = parse_probability_table(text, 1)?;
        Self::new(rows.into_iter().map(|(k, p)| (k[0], p)))
    }
}

/// Ω(x, z) = Σ Ω_{j,s} x^j z^s for the multi-edge constructions.
#[derive(Clone, PartialEq, Eq)]
pub struct BivariateDegreeDistribution {
    entries: Vec<(u32, u32, Rational)>,
}

impl fmt::Debug for BivariateDegreeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.entries.iter().map(|(j, s, p)| format!("{p}·x^{j}z^{s}")).collect();
        write!(f, "Ω({})", terms.join(" + "))
    }
}

impl BivariateDegreeDistribution {
    /// With `relaxed` false, (0,1) and (1,0) must carry no mass; (0,0) is
    /// never allowed.
    pub fn new(entries: impl IntoIterator<Item = (u32, u32, Rational)>, relaxed: bool) -> Result<Self> {
        let mut map: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (j, s, p) in entries {
            if p < 0 {
                return Err(Error::invalid("bivariate degree distribution", format!("negative probability at ({j},{s})")));
            }
            if p == 0 {
                continue;
            }
            if (j, s) == (0, 0) || (!relaxed && matches!((j, s), (0, 1) | (1, 0))) {
                return Err(Error::invalid("bivariate degree distribution", format!("degree pair ({j},{s}) is not allowed")));
            }
            if map.insert((j, s), p).is_some() {
                return Err(Error::invalid("bivariate degree distribution", format!("pair ({j},{s}) listed twice")));
            }
        }
        let total: Rational = map.values().sum();
        if total != 1 {
            return Err(Error::invalid("bivariate degree distribution", format!("probabilities sum to {total}, not 1")));
        }
        Ok(BivariateDegreeDistribution {
            entries: map.into_iter().map(|((j, s), p)| (j, s, p)).collect(),
        })
    }

    /// Ω(x)·Ψ(z) for two univariate distributions.
    pub fn product(a: &DegreeDistribution, b: &DegreeDistribution) -> Result<Self> {
        let mut out = Vec::new();
        for (j, pa) in a.entries() {
            for (s, pb) in b.entries() {
                out.push((*j, *s, Rational::from(pa * pb)));
            }
        }
        Self::new(out, false)
    }

    pub fn entries(&self) -> &[(u32, u32, Rational)] {
        &self.entries
    }

    pub fn max_a(&self) -> u32 {
        self.entries.iter().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn max_b(&self) -> u32 {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn degrees_a(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.entries.iter().map(|e| e.0 as u64).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn degrees_b(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.entries.iter().map(|e| e.1 as u64).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Fold mass above the part lengths onto the largest admissible degrees.
    pub fn truncated(&self, max_a: u32, max_b: u32) -> Result<Self> {
        let mut map: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (j, s, p) in &self.entries {
            *map.entry(((*j).min(max_a), (*s).min(max_b))).or_default() += p;
        }
        Self::new(map.into_iter().map(|((j, s), p)| (j, s, p)), true)
    }

    pub fn check_fits(&self, ha: usize, hb: usize) -> Result<()> {
        if self.max_a() as usize > ha || self.max_b() as usize > hb {
            return Err(Error::invalid(
                "bivariate degree distribution",
                format!("degrees up to ({}, {}) exceed the part lengths ({ha}, {hb})", self.max_a(), self.max_b()),
            ));
        }
        Ok(())
    }

    /// Parse `j s probability` lines.
    pub fn parse(text: &str, relaxed: bool) -> Result<Self> {
        let rows = parse_probability_table(text, 2)?;
        Self::new(rows.into_iter().map(|(k, p)| (k[0], k[1], p)), relaxed)
    }
}

/// Exact value of a decimal literal such as `0.0098`, `-1.5e-3` or `3`;
/// a fraction `n/d` is also accepted.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    if s.contains('/') {
        return crate::enumerators::parse_fraction(s).map_err(|_| bad());
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(Integer::from_str_radix(&digits, 10).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Integer::from(10);
    if scale >= 0 {
        value *= Integer::from((&ten).pow(scale as u32));
    } else {
        value /= Integer::from((&ten).pow((-scale) as u32));
    }
    Ok(if neg { -value } else { value })
}

/// Lines of `key… probability`, separated by whitespace or commas, with `#`
/// comments. Probabilities are exact;
/// a total within 10⁻⁹ of one is renormalized, anything else is rejected.
pub fn parse_probability_table(text: &str, key_len: usize) -> Result<Vec<(Vec<u32>, Rational)>> {
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        if fields.len() != key_len + 1 {
            return Err(Error::Parse(format!(
                "line {}: expected {} fields, found {}",
                n + 1,
                key_len + 1,
                fields.len()
            )));
        }
        let key = fields[..key_len]
            .iter()
            .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("line {}: bad degree {t:?}", n + 1))))
            .collect::<Result<Vec<u32>>>()?;
        rows.push((key, parse_decimal(fields[key_len])?));
    }
    if rows.is_empty() {
        return Err(Error::Parse("degree distribution file has no entries".into()));
    }
    let total: Rational = rows.iter().map(|(_, p)| p).sum();
    if total != 1 {
        let gap = Rational::from(&total - 1u32).abs();
        if gap > Rational::from((1, 1_000_000_000)) {
            return Err(Error::invalid("degree distribution", format!("probabilities sum to {}, not 1", total.to_f64())));
        }
        for (_, p) in rows.iter_mut() {
            *p /= &total;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal("0.0098").unwrap(), Rational::from((98, 10000)));
        assert_eq!(parse_decimal("3").unwrap(), 3);
        assert_eq!(parse_decimal("-1.5e-3").unwrap(), Rational::from((-15, 10000)));
        assert_eq!(parse_decimal(".5").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_decimal("1/3").unwrap(), Rational::from((1, 3)));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn parse_and_normalize() {
        let d = DegreeDistribution::parse("# half and half\n1 0.5\n2 0.5\n").unwrap();
        assert_eq!(d.entries().len(), 2);
        let near = DegreeDistribution::parse("1 0.3333333333\n2 0.6666666667\n").unwrap();
        assert_eq!(near.entries().iter().map(|e| e.1.clone()).sum::<Rational>(), 1);
        assert!(DegreeDistribution::parse("1 0.5\n2 0.4\n").is_err());
        assert!(DegreeDistribution::parse("0 1\n").is_err());
    }

    #[test]
    fn truncation_folds_mass() {
        let d = DegreeDistribution::from_ratios(&[(1, 1, 4), (3, 1, 4), (5, 1, 2)]).unwrap();
        let t = d.truncated(3).unwrap();
        assert_eq!(t.entries(), &[(1, Rational::from((1, 4))), (3, Rational::from((3, 4)))]);
        assert!(d.check_fits(4).is_err());
        assert!(t.check_fits(4).is_ok());
    }

    #[test]
    fn bivariate_constraints() {
        let half = Rational::from((1, 2));
        assert!(BivariateDegreeDistribution::new([(0, 1, half.clone()), (2, 2, half.clone())], false).is_err());
        assert!(BivariateDegreeDistribution::new([(0, 1, half.clone()), (2, 2, half.clone())], true).is_ok());
        assert!(BivariateDegreeDistribution::new([(0, 0, half.clone()), (2, 2, half)], true).is_err());
    }
}
