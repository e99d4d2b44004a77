use std::fmt::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

use raptor_bounds::bounds::{bound_suite, BoundInputs, SecondOrder, PRECISION};
use raptor_bounds::enumerators::{
    bivariate_composition_from_weight, composition_from_weight, ldpc_weight_enum, met_split_weight_enum,
    uniform_pc_bicomposition, uniform_pc_joint_weight_binary, uniform_pc_weight_enum, write_fraction, BiweightEnumerator,
    WeightEnumerator,
};
use raptor_bounds::errexp::{errexp_lower_bound, ml_threshold_upper, AsymptoticKernel, SpectralShape};
use raptor_bounds::galois::FieldSpec;
use raptor_bounds::montecarlo::{mix, run_ensemble, run_single, Campaign, EnsembleCampaign, SimResult, StopRule};
use raptor_bounds::outercodes::{
    biweight, bivariate_weight_enumerator, exhaustive_bicomposition, exhaustive_bivariate_composition,
    exhaustive_composition, exhaustive_enumerators, weight_enumerator, write_matrix, EnumeratorKind, EnumeratorValue,
    LinearCode, OuterEnsembleSpec,
};
use raptor_bounds::raptor::{
    exact_pf_inclusion_exclusion, exact_pf_tuples, Construction, ConstructionKind, Distribution, RaptorInstance,
};

use crate::config::{
    parse_delta_range, parse_field, parse_real_range, resolve_construction, resolve_outer, univariate_dist, CliError,
    CliResult, ConstructionRequest, DistSource, Outer, OuterSource,
};
use crate::output::{self, Header};
use crate::{BoundArgs, CodeArgs, EnumerateArgs, ErrexpArgs, FieldArgs, KindName, OracleArgs, SimulateArgs};

/// Seed coordinate for codes drawn by `enumerate --dump-code`.
const TAG_DUMP: u64 = 0x6475_6d70_0000_0004;

fn field_of(args: &FieldArgs) -> CliResult<FieldSpec> {
    parse_field(&args.field, args.modulus.as_deref())
}

fn describe_field(f: &FieldSpec) -> String {
    match f.modulus() {
        Some(m) => format!("GF({}) modulus {m:#x}", f.q()),
        None => format!("GF({})", f.q()),
    }
}

struct Setup {
    field: FieldSpec,
    outer_src: OuterSource,
    outer: Outer,
    construction: Construction,
    deltas: Vec<i64>,
}

impl Setup {
    fn new(args: &CodeArgs) -> CliResult<Self> {
        let field = field_of(&args.field)?;
        let outer_src: OuterSource = args.outer.parse()?;
        let dist: DistSource = args.dist.parse()?;
        let deltas = parse_delta_range(&args.delta)?;
        let outer = resolve_outer(&outer_src, &field)?;
        let req = ConstructionRequest {
            name: args.construction,
            dist: &dist,
            split: args.split,
            fold: args.fold_degrees,
            relaxed: args.relax_bivariate,
        };
        let construction = resolve_construction(&req, &field, outer.h())?;
        Ok(Setup {
            field,
            outer_src,
            outer,
            construction,
            deltas,
        })
    }

    fn header(&self, command: &str, args: &CodeArgs) -> Header {
        let omega = match self.construction.omega() {
            Distribution::Univariate(o) => format!("{o:?}"),
            Distribution::Bivariate(o) => format!("{o:?}"),
        };
        let mut h = Header::new(command)
            .field("construction", self.construction.kind().name())
            .field("field", describe_field(&self.field))
            .field("outer", &self.outer_src)
            .field("h", self.outer.h())
            .field("k", self.outer.k());
        if let Some((ha, hb)) = self.construction.kind().split() {
            h = h.field("split", format!("{ha}+{hb}"));
        }
        h.field("dist", format!("{} {omega}", args.dist))
            .field("fold_degrees", args.fold_degrees)
            .field("delta", join(&self.deltas))
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn ensemble_weight(spec: &OuterEnsembleSpec, q: u32) -> CliResult<WeightEnumerator> {
    Ok(match *spec {
        OuterEnsembleSpec::UniformParityCheck { h, k } => uniform_pc_weight_enum(h, k, q)?,
        OuterEnsembleSpec::RegularLdpc { dv, dc, h } => ldpc_weight_enum(dv, dc, h, q)?,
        OuterEnsembleSpec::Explicit(ref c) => weight_enumerator(c)?,
    })
}

/// Joint weight enumerator for binary lower bounds, where one exists.
fn binary_second_order(outer: &Outer) -> CliResult<Option<BiweightEnumerator>> {
    Ok(match outer {
        Outer::Code(c) => Some(biweight(c)?),
        Outer::Ensemble(OuterEnsembleSpec::UniformParityCheck { h, k }) => Some(uniform_pc_joint_weight_binary(*h, *k)?),
        Outer::Ensemble(_) => None,
    })
}

/// Enumerators feeding the bounds. Lower bounds are included when asked for
/// and available for the construction and outer source.
fn bound_inputs(setup: &Setup, lower: bool) -> CliResult<BoundInputs> {
    let q = setup.field.q();
    let outer = &setup.outer;
    let c = &setup.construction;
    let weight = || -> CliResult<WeightEnumerator> {
        match outer {
            Outer::Code(code) => Ok(weight_enumerator(code)?),
            Outer::Ensemble(spec) => ensemble_weight(spec, q),
        }
    };
    Ok(match (c.kind(), c.omega()) {
        (ConstructionKind::Gfq, Distribution::Univariate(omega)) => {
            let second = if lower && q == 2 { binary_second_order(outer)? } else { None };
            BoundInputs::Gfq {
                enumerator: weight()?,
                omega: omega.clone(),
                second,
            }
        }
        (ConstructionKind::Gfq01, Distribution::Univariate(omega)) => {
            let enumerator = match outer {
                Outer::Code(code) => exhaustive_composition(code)?,
                Outer::Ensemble(_) => composition_from_weight(&weight()?, q)?,
            };
            let second = match (lower, outer) {
                (false, _) => None,
                (true, _) if q == 2 => binary_second_order(outer)?.map(SecondOrder::Biweight),
                (true, Outer::Code(code)) => Some(SecondOrder::Bicomposition(exhaustive_bicomposition(code)?)),
                (true, Outer::Ensemble(OuterEnsembleSpec::UniformParityCheck { h, k })) => {
                    Some(SecondOrder::Bicomposition(uniform_pc_bicomposition(*h, *k, q)?))
                }
                (true, Outer::Ensemble(_)) => None,
            };
            BoundInputs::Gfq01 {
                enumerator,
                omega: omega.clone(),
                second,
            }
        }
        (ConstructionKind::MultiEdge { ha, hb }, Distribution::Bivariate(omega)) => {
            let enumerator = match outer {
                Outer::Code(code) => bivariate_weight_enumerator(code, ha)?,
                Outer::Ensemble(_) => met_split_weight_enum(&weight()?, ha, hb)?,
            };
            BoundInputs::Met {
                enumerator,
                omega: omega.clone(),
            }
        }
        (ConstructionKind::MultiEdge01 { ha, hb }, Distribution::Bivariate(omega)) => {
            let enumerator = match outer {
                Outer::Code(code) => exhaustive_bivariate_composition(code, ha)?,
                Outer::Ensemble(_) => bivariate_composition_from_weight(&met_split_weight_enum(&weight()?, ha, hb)?, q)?,
            };
            BoundInputs::Met01 {
                enumerator,
                omega: omega.clone(),
            }
        }
        _ => unreachable!("construction kind and distribution agree"),
    })
}

pub fn bound(args: &BoundArgs) -> CliResult<String> {
    let setup = Setup::new(&args.code)?;
    let lower = !args.no_lower_bounds;
    let inputs = bound_inputs(&setup, lower)?;
    let results = bound_suite(&setup.field, setup.outer.k(), &inputs, &setup.deltas)?;
    let has_lower = results.first().is_some_and(|r| r.s2.is_some());

    let mut out = setup
        .header("bound", &args.code)
        .field(
            "lower_bounds",
            match (lower, has_lower) {
                (false, _) => "off",
                (true, true) => "on",
                (true, false) => "unavailable for this construction and outer source",
            },
        )
        .field("seed", "none (deterministic)")
        .render();
    out.push_str("delta,s1,s2,upper,lb_bonferroni,lb_dawson_sankoff\n");
    let one = Float::with_val(PRECISION, 1);
    for r in &results {
        let upper = if r.upper > one { one.clone() } else { r.upper.clone() };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.delta,
            output::float(&r.upper),
            output::optional(r.s2.as_ref()),
            output::float(&upper),
            output::optional(r.bonferroni.as_ref()),
            output::optional(r.dawson_sankoff.as_ref()),
        )
        .unwrap();
    }
    Ok(out)
}

fn sim_rows(out: &mut String, results: &[SimResult]) {
    out.push_str("delta,trials,failures,p_hat,ci_low,ci_high\n");
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.delta,
            r.trials,
            r.failures,
            output::real(r.p_hat),
            output::real(r.ci_low),
            output::real(r.ci_high)
        )
        .unwrap();
    }
}

pub fn simulate(args: &SimulateArgs) -> CliResult<String> {
    let setup = Setup::new(&args.code)?;
    let header = setup
        .header("simulate", &args.code)
        .field("seed", args.seed)
        .field("level", args.level);
    let mut out;
    match setup.outer {
        Outer::Code(code) => {
            let target = (args.target_failures > 0).then_some(args.target_failures);
            let stop = StopRule::new(target, args.max_trials).map_err(|e| CliError::config("--max-trials", e))?;
            out = header
                .field("target_failures", target.map_or("none".to_string(), |t| t.to_string()))
                .field("max_trials", args.max_trials)
                .render();
            let instance = RaptorInstance::new(code, setup.construction)?;
            let campaign = Campaign {
                deltas: setup.deltas,
                stop,
                master_seed: args.seed,
                level: args.level,
            };
            sim_rows(&mut out, &run_single(&instance, &campaign)?);
        }
        Outer::Ensemble(spec) => {
            out = header
                .field("codes", args.codes)
                .field("trials_per_code", args.trials_per_code)
                .render();
            let report = run_ensemble(&EnsembleCampaign {
                outer: spec,
                construction: setup.construction,
                deltas: setup.deltas,
                n_codes: args.codes,
                trials_per_code: args.trials_per_code,
                master_seed: args.seed,
                level: args.level,
            })?;
            sim_rows(&mut out, &report.results);
            let hist: Vec<String> = report.dimension_histogram().iter().map(|(k, n)| format!("{k}:{n}")).collect();
            writeln!(out, "# k_C histogram = {}", hist.join(" ")).unwrap();
        }
    }
    Ok(out)
}

fn split_of(args: &EnumerateArgs, h: usize) -> CliResult<usize> {
    let ha = args.split.ok_or_else(|| CliError::config("--split", "bivariate enumerators need --split hA"))?;
    if ha > h {
        return Err(CliError::config("--split", format!("hA = {ha} exceeds h = {h}")));
    }
    Ok(ha)
}

fn ensemble_enumerator(args: &EnumerateArgs, spec: &OuterEnsembleSpec, q: u32) -> CliResult<EnumeratorValue> {
    let h = spec.h();
    Ok(match args.kind {
        KindName::Weight => EnumeratorValue::Weight(ensemble_weight(spec, q)?),
        KindName::Composition => EnumeratorValue::Composition(composition_from_weight(&ensemble_weight(spec, q)?, q)?),
        KindName::BivariateWeight => {
            let ha = split_of(args, h)?;
            EnumeratorValue::BivariateWeight(met_split_weight_enum(&ensemble_weight(spec, q)?, ha, h - ha)?)
        }
        KindName::BivariateComposition => {
            let ha = split_of(args, h)?;
            let b = met_split_weight_enum(&ensemble_weight(spec, q)?, ha, h - ha)?;
            EnumeratorValue::BivariateComposition(bivariate_composition_from_weight(&b, q)?)
        }
        KindName::Biweight => match *spec {
            OuterEnsembleSpec::UniformParityCheck { h, k } if q == 2 => {
                EnumeratorValue::Biweight(uniform_pc_joint_weight_binary(h, k)?)
            }
            _ => return Err(CliError::config("--kind", "biweight enumerators need a binary uniform parity-check ensemble")),
        },
        KindName::Bicomposition => match *spec {
            OuterEnsembleSpec::UniformParityCheck { h, k } => {
                EnumeratorValue::Bicomposition(uniform_pc_bicomposition(h, k, q)?)
            }
            _ => return Err(CliError::config("--kind", "bicomposition enumerators need a uniform parity-check ensemble")),
        },
    })
}

fn code_kind(args: &EnumerateArgs, h: usize) -> CliResult<EnumeratorKind> {
    Ok(match args.kind {
        KindName::Weight => EnumeratorKind::Weight,
        KindName::Composition => EnumeratorKind::Composition,
        KindName::BivariateWeight => EnumeratorKind::BivariateWeight { ha: split_of(args, h)? },
        KindName::BivariateComposition => EnumeratorKind::BivariateComposition { ha: split_of(args, h)? },
        KindName::Biweight => EnumeratorKind::Biweight,
        KindName::Bicomposition => EnumeratorKind::Bicomposition,
    })
}

fn dump_code(path: &std::path::Path, header: &Header, code: &LinearCode) -> CliResult<()> {
    let text = format!("{}{}", header.render(), write_matrix(code.generator()));
    std::fs::write(path, text).map_err(|e| CliError::config("--dump-code", format!("{}: {e}", path.display())))
}

pub fn enumerate(args: &EnumerateArgs) -> CliResult<String> {
    let field = field_of(&args.field)?;
    let q = field.q();
    let outer_src: OuterSource = args.outer.parse()?;
    let outer = resolve_outer(&outer_src, &field)?;
    if args.kind == KindName::Biweight && q != 2 {
        return Err(CliError::config("--kind", "biweight enumerators are binary; use bicomposition for q > 2"));
    }
    let mut header = Header::new("enumerate")
        .field("field", describe_field(&field))
        .field("outer", &outer_src)
        .field("h", outer.h())
        .field("kind", format!("{:?}", args.kind).to_lowercase());
    if let Some(ha) = args.split {
        header = header.field("split", ha);
    }

    let value = match &outer {
        Outer::Code(code) => {
            if let Some(path) = &args.dump_code {
                dump_code(path, &header.clone().field("seed", "none (explicit code)"), code)?;
            }
            exhaustive_enumerators(code, code_kind(args, code.h())?)?
        }
        Outer::Ensemble(spec) => {
            if let Some(path) = &args.dump_code {
                let mut rng = ChaCha8Rng::seed_from_u64(mix(args.seed, &[TAG_DUMP]));
                let code = spec.sample(&field, &mut rng)?;
                dump_code(path, &header.clone().field("seed", args.seed).field("k_C", code.k()), &code)?;
            }
            ensemble_enumerator(args, spec, q)?
        }
    };
    let mut out = header.field("seed", "none (deterministic)").render();
    out.push_str(&value.to_csv(q));
    Ok(out)
}

pub fn errexp(args: &ErrexpArgs) -> CliResult<String> {
    let field = field_of(&args.field)?;
    let dist: DistSource = args.dist.parse()?;
    let omega = univariate_dist(&dist)?;
    let kernel: AsymptoticKernel = args.kernel.parse().map_err(|e| CliError::config("--kernel", e))?;
    let epsilons = parse_real_range("--epsilon", &args.epsilon)?;
    if epsilons.iter().any(|e| !(*e >= 0.0)) {
        return Err(CliError::config("--epsilon", "overheads must be nonnegative"));
    }
    let g = SpectralShape::uniform_pc(args.rate, field.q()).map_err(|e| CliError::config("--rate", e))?;

    let mut out = Header::new("errexp")
        .field("field", describe_field(&field))
        .field("rate", args.rate)
        .field("spectral_shape", "uniform parity-check")
        .field("dist", format!("{} {omega:?}", args.dist))
        .field("kernel", kernel.name())
        .field("epsilon", &args.epsilon)
        .field("seed", "none (deterministic)")
        .render();
    out.push_str("epsilon,bound_bits_per_symbol\n");
    for e in epsilons {
        let b = errexp_lower_bound(e, &omega, &g, kernel)?;
        writeln!(out, "{},{}", output::real(e), output::real(b)).unwrap();
    }
    match ml_threshold_upper(&omega, &g, kernel) {
        Ok(t) => writeln!(out, "# threshold_epsilon = {}", output::real(t)).unwrap(),
        Err(e) => writeln!(out, "# threshold_epsilon = none ({e})").unwrap(),
    }
    Ok(out)
}

pub fn oracle(args: &OracleArgs) -> CliResult<String> {
    let setup = Setup::new(&args.code)?;
    let header = setup.header("oracle", &args.code).field("seed", "none (exact)");
    let Outer::Code(code) = setup.outer else {
        return Err(CliError::config("--outer", "the exact oracle needs an explicit outer code"));
    };
    let instance = RaptorInstance::new(code, setup.construction)?;
    let mut out = header.render();
    out.push_str("delta,m,p_exact,p_exact_fraction,method\n");
    for &delta in &setup.deltas {
        let m = instance.k() + delta as usize;
        let tuples = exact_pf_tuples(&instance, m);
        let ie = exact_pf_inclusion_exclusion(&instance, m);
        let (p, method) = match (tuples, ie) {
            (Ok(a), Ok(b)) => {
                if a != b {
                    return Err(CliError::Runtime(format!("oracles disagree at δ = {delta}: {a} vs {b}")));
                }
                (a, "tuples+inclusion-exclusion")
            }
            (Ok(a), Err(_)) => (a, "tuples"),
            (Err(_), Ok(b)) => (b, "inclusion-exclusion"),
            (Err(e), Err(_)) => return Err(e.into()),
        };
        writeln!(out, "{delta},{m},{},{},{method}", output::rational(&p), write_fraction(&p)).unwrap();
    }
    Ok(out)
}
