//! Parsing of command-line values into library types.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use raptor_bounds::bounds::{BivariateDegreeDistribution, DegreeDistribution};
use raptor_bounds::galois::{field_new, is_prime, FieldSpec};
use raptor_bounds::outercodes::{hamming_generator, read_matrix, LinearCode, OuterEnsembleSpec};
use raptor_bounds::raptor::{omega_r10, omega_rq_bivariate, Construction, ConstructionKind, Distribution};

/// Errors surfaced to the user, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Feasibility(String),
    Runtime(String),
}

impl CliError {
    pub fn config(field: &str, reason: impl fmt::Display) -> Self {
        CliError::Config(format!("invalid {field}: {reason}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Feasibility(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Feasibility(m) => write!(f, "infeasible: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<raptor_bounds::Error> for CliError {
    fn from(e: raptor_bounds::Error) -> Self {
        use raptor_bounds::Error as E;
        match e {
            E::TooLarge { .. } => CliError::Feasibility(e.to_string()),
            E::Invalid { .. } | E::Parse(_) | E::ZeroInverse => CliError::Config(e.to_string()),
            E::Numerical(_) | E::Io(_) => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn parse_u32(field: &str, s: &str) -> CliResult<u32> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| CliError::config(field, format!("{s:?} is not an integer")))
}

/// `q`, `p^m`, with an optional modulus in decimal or 0x-hex.
pub fn parse_field(spec: &str, modulus: Option<&str>) -> CliResult<FieldSpec> {
    let (p, m) = match spec.split_once('^') {
        Some((p, m)) => (parse_u32("--field", p)?, parse_u32("--field", m)?),
        None => {
            let q = parse_u32("--field", spec)?;
            let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| CliError::config("--field", "order must be at least 2"))?;
            let mut m = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                m += 1;
            }
            if r != 1 {
                return Err(CliError::config("--field", format!("{q} is not a prime power")));
            }
            (p, m)
        }
    };
    if !is_prime(p) {
        return Err(CliError::config("--field", format!("{p} is not prime")));
    }
    let modulus = modulus.map(|s| parse_u32("--modulus", s)).transpose()?;
    field_new(p, m, modulus).map_err(|e| CliError::config("--field", e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OuterSource {
    Hamming(usize),
    UniformPc { h: usize, k: usize },
    Ldpc { dv: usize, dc: usize, h: usize },
    File(PathBuf),
}

impl FromStr for OuterSource {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = |why: &str| CliError::config("--outer", format!("{s:?}: {why}"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad("expected an integer parameter"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts[0] {
            "hamming" if parts.len() == 2 => Ok(OuterSource::Hamming(num(parts[1])?)),
            "uniform-pc" if parts.len() == 3 => Ok(OuterSource::UniformPc {
                h: num(parts[1])?,
                k: num(parts[2])?,
            }),
            "ldpc" if parts.len() == 4 => Ok(OuterSource::Ldpc {
                dv: num(parts[1])?,
                dc: num(parts[2])?,
                h: num(parts[3])?,
            }),
            "file" if parts.len() >= 2 => Ok(OuterSource::File(PathBuf::from(&s[5..]))),
            _ => Err(bad("expected hamming:t, uniform-pc:h:k, ldpc:dv:dc:h or file:path")),
        }
    }
}

impl fmt::Display for OuterSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterSource::Hamming(t) => write!(f, "hamming:{t}"),
            OuterSource::UniformPc { h, k } => write!(f, "uniform-pc:{h}:{k}"),
            OuterSource::Ldpc { dv, dc, h } => write!(f, "ldpc:{dv}:{dc}:{h}"),
            OuterSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// An explicit outer code or a random ensemble.
pub enum Outer {
    Code(LinearCode),
    Ensemble(OuterEnsembleSpec),
}

impl Outer {
    pub fn h(&self) -> usize {
        match self {
            Outer::Code(c) => c.h(),
            Outer::Ensemble(e) => e.h(),
        }
    }

    /// Dimension of the code, or the nominal dimension of the ensemble.
    pub fn k(&self) -> usize {
        match self {
            Outer::Code(c) => c.k(),
            Outer::Ensemble(e) => e.k(),
        }
    }
}

pub fn resolve_outer(src: &OuterSource, field: &FieldSpec) -> CliResult<Outer> {
    match src {
        OuterSource::Hamming(t) => {
            if field.q() != 2 {
                return Err(CliError::config("--outer", "Hamming codes are binary; use --field 2"));
            }
            Ok(Outer::Code(hamming_generator(*t).map_err(|e| CliError::config("--outer", e))?))
        }
        OuterSource::UniformPc { h, k } => {
            let spec = OuterEnsembleSpec::UniformParityCheck { h: *h, k: *k };
            spec.validate().map_err(|e| CliError::config("--outer", e))?;
            Ok(Outer::Ensemble(spec))
        }
        OuterSource::Ldpc { dv, dc, h } => {
            let spec = OuterEnsembleSpec::RegularLdpc { dv: *dv, dc: *dc, h: *h };
            spec.validate().map_err(|e| CliError::config("--outer", e))?;
            Ok(Outer::Ensemble(spec))
        }
        OuterSource::File(path) => {
            let g = read_matrix(path, Some(field)).map_err(|e| CliError::config("--outer", e))?;
            Ok(Outer::Code(LinearCode::from_generator(g).map_err(|e| CliError::config("--outer", e))?))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistSource {
    R10,
    RqMet,
    File(PathBuf),
}

impl FromStr for DistSource {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "r10" => DistSource::R10,
            "rq-met" => DistSource::RqMet,
            path => DistSource::File(PathBuf::from(path)),
        })
    }
}

impl fmt::Display for DistSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSource::R10 => write!(f, "r10"),
            DistSource::RqMet => write!(f, "rq-met"),
            DistSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

fn read_text(field: &str, path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::config(field, format!("{}: {e}", path.display())))
}

pub fn univariate_dist(src: &DistSource) -> CliResult<DegreeDistribution> {
    match src {
        DistSource::R10 => Ok(omega_r10()),
        DistSource::RqMet => Err(CliError::config("--dist", "rq-met is bivariate; use a multi-edge construction")),
        DistSource::File(p) => DegreeDistribution::parse(&read_text("--dist", p)?).map_err(|e| CliError::config("--dist", e)),
    }
}

pub fn bivariate_dist(src: &DistSource, relaxed: bool) -> CliResult<BivariateDegreeDistribution> {
    match src {
        DistSource::R10 | DistSource::RqMet => Ok(omega_rq_bivariate(&omega_r10())),
        DistSource::File(p) => {
            BivariateDegreeDistribution::parse(&read_text("--dist", p)?, relaxed).map_err(|e| CliError::config("--dist", e))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ConstructionName {
    Gfq,
    Met,
    Gfq01,
    Met01,
}

pub struct ConstructionRequest<'a> {
    pub name: ConstructionName,
    pub dist: &'a DistSource,
    pub split: Option<usize>,
    pub fold: bool,
    pub relaxed: bool,
}

/// Build the construction for an outer length h. Degrees beyond the
/// available positions are folded only when asked to.
pub fn resolve_construction(req: &ConstructionRequest<'_>, field: &FieldSpec, h: usize) -> CliResult<Construction> {
    let multi_edge = matches!(req.name, ConstructionName::Met | ConstructionName::Met01);
    if multi_edge {
        let ha = req.split.ok_or_else(|| CliError::config("--split", "multi-edge constructions need --split hA"))?;
        if ha == 0 || ha >= h {
            return Err(CliError::config("--split", format!("hA = {ha} must lie in 1..{h}")));
        }
        let hb = h - ha;
        let mut omega = bivariate_dist(req.dist, req.relaxed)?;
        if omega.max_a() as usize > ha || omega.max_b() as usize > hb {
            if !req.fold {
                return Err(CliError::config(
                    "--dist",
                    format!(
                        "degrees up to ({}, {}) exceed the parts ({ha}, {hb}); pass --fold-degrees to fold them",
                        omega.max_a(),
                        omega.max_b()
                    ),
                ));
            }
            omega = omega.truncated(ha as u32, hb as u32)?;
        }
        let kind = if req.name == ConstructionName::Met {
            ConstructionKind::MultiEdge { ha, hb }
        } else {
            ConstructionKind::MultiEdge01 { ha, hb }
        };
        Ok(Construction::new(kind, field, Distribution::Bivariate(omega))?)
    } else {
        if req.split.is_some() {
            return Err(CliError::config("--split", "only multi-edge constructions take a split"));
        }
        let mut omega = univariate_dist(req.dist)?;
        if omega.d_max() as usize > h {
            if !req.fold {
                return Err(CliError::config(
                    "--dist",
                    format!("maximum degree {} exceeds h = {h}; pass --fold-degrees to fold it", omega.d_max()),
                ));
            }
            omega = omega.truncated(h as u32)?;
        }
        let kind = if req.name == ConstructionName::Gfq { ConstructionKind::Gfq } else { ConstructionKind::Gfq01 };
        Ok(Construction::new(kind, field, Distribution::Univariate(omega))?)
    }
}

/// `start:stop:step` (inclusive), a comma list, or a single value.
pub fn parse_delta_range(s: &str) -> CliResult<Vec<i64>> {
    let bad = |why: &str| CliError::config("--delta", format!("{s:?}: {why}"));
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad("expected integers"));
    let values: Vec<i64> = if s.contains(':') {
        let p: Vec<&str> = s.split(':').collect();
        let (start, stop, step) = match p.len() {
            2 => (num(p[0])?, num(p[1])?, 1),
            3 => (num(p[0])?, num(p[1])?, num(p[2])?),
            _ => return Err(bad("expected start:stop:step")),
        };
        if step <= 0 || stop < start {
            return Err(bad("need step > 0 and stop ≥ start"));
        }
        (start..=stop).step_by(step as usize).collect()
    } else {
        s.split(',').map(num).collect::<CliResult<_>>()?
    };
    if values.iter().any(|&d| d < 0) {
        return Err(bad("overheads must be nonnegative"));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("values must be strictly increasing"));
    }
    Ok(values)
}

/// Real-valued `start:stop:step` range, inclusive up to rounding.
pub fn parse_real_range(field: &str, s: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::config(field, format!("{s:?}: {why}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("expected numbers"));
    if !s.contains(':') {
        return s.split(',').map(num).collect();
    }
    let p: Vec<&str> = s.split(':').collect();
    if p.len() != 3 {
        return Err(bad("expected start:stop:step"));
    }
    let (start, stop, step) = (num(p[0])?, num(p[1])?, num(p[2])?);
    if !(step > 0.0) || stop < start {
        return Err(bad("need step > 0 and stop ≥ start"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_delta_range("0:20:1").unwrap().len(), 21);
        assert_eq!(parse_delta_range("6,8,10").unwrap(), vec![6, 8, 10]);
        assert_eq!(parse_delta_range("2:6:2").unwrap(), vec![2, 4, 6]);
        assert!(parse_delta_range("3:1:1").is_err());
        assert!(parse_delta_range("-1").is_err());
        assert_eq!(parse_real_range("--epsilon", "0:0.1:0.05").unwrap().len(), 3);
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("4", None).unwrap().q(), 4);
        assert_eq!(parse_field("2^3", Some("0xb")).unwrap().q(), 8);
        assert!(parse_field("6", None).is_err());
        assert!(parse_field("4", Some("0x5")).is_err());
    }

    #[test]
    fn outer_specs() {
        assert_eq!("hamming:6".parse::<OuterSource>().unwrap(), OuterSource::Hamming(6));
        assert_eq!(
            "uniform-pc:70:64".parse::<OuterSource>().unwrap(),
            OuterSource::UniformPc { h: 70, k: 64 }
        );
        assert_eq!(
            "file:a:b.txt".parse::<OuterSource>().unwrap(),
            OuterSource::File(PathBuf::from("a:b.txt"))
        );
        assert!("hamming".parse::<OuterSource>().is_err());
    }
}
