mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

use common::random_instance;
use raptor_bounds::bounds::{DegreeDistribution, PRECISION};
use raptor_bounds::galois::FieldSpec;
use raptor_bounds::montecarlo::{run_ensemble, run_single, Campaign, EnsembleCampaign, StopRule};
use raptor_bounds::outercodes::{hamming_generator, LinearCode, Matrix, OuterEnsembleSpec};
use raptor_bounds::raptor::{
    exact_pf_inclusion_exclusion, exact_pf_tuples, inactivation_decode, omega_r10, Construction, FailureChecker,
    LTColumn, RaptorInstance,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn inactivation_agrees_with_elimination(
        seed in any::<u64>(),
        kind in 0usize..4,
        q in proptest::sample::select(vec![2u32, 4]),
        extra in 0usize..6,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let instance = random_instance(&mut rng, kind, q);
        let sampler = instance.sampler().unwrap();
        let m = (instance.k() + extra).saturating_sub(1);
        let cols: Vec<LTColumn> = (0..m).map(|_| sampler.sample(&mut rng)).collect();
        let ge = FailureChecker::new(instance.outer()).fails(&cols);
        let report = inactivation_decode(&instance, &cols);
        prop_assert_eq!(report.failure, ge);
    }
}

fn small_hamming() -> RaptorInstance {
    let code = hamming_generator(4).unwrap();
    let field = code.field().clone();
    RaptorInstance::new(code, Construction::gfq(&field, omega_r10().truncated(15).unwrap())).unwrap()
}

#[test]
fn simulations_do_not_depend_on_thread_count() {
    let instance = small_hamming();
    let campaign = Campaign {
        deltas: vec![0, 2, 5],
        stop: StopRule::new(Some(60), 50_000).unwrap(),
        master_seed: 11,
        level: 0.95,
    };
    let field = FieldSpec::of_order(4).unwrap();
    let ensemble = EnsembleCampaign {
        outer: OuterEnsembleSpec::UniformParityCheck { h: 16, k: 12 },
        construction: Construction::gfq01(&field, omega_r10().truncated(16).unwrap()),
        deltas: vec![0, 2],
        n_codes: 30,
        trials_per_code: 40,
        master_seed: 5,
        level: 0.9,
    };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| (run_single(&instance, &campaign).unwrap(), run_ensemble(&ensemble).unwrap()))
    };
    let (single_1, ens_1) = run(1);
    let (single_8, ens_8) = run(8);
    assert_eq!(single_1, single_8);
    assert_eq!(ens_1, ens_8);
}

#[test]
fn simulated_rates_cover_exact_values() {
    let f2 = FieldSpec::of_order(2).unwrap();
    let f4 = FieldSpec::of_order(4).unwrap();
    let half = DegreeDistribution::from_ratios(&[(1, 1, 2), (2, 1, 2)]).unwrap();
    let instances = [
        RaptorInstance::new(
            LinearCode::from_generator(Matrix::from_values(&f2, &[vec![1, 1]]).unwrap()).unwrap(),
            Construction::gfq(&f2, half.clone()),
        )
        .unwrap(),
        RaptorInstance::new(
            LinearCode::from_generator(Matrix::from_values(&f4, &[vec![1, 0, 2], vec![0, 1, 3]]).unwrap()).unwrap(),
            Construction::gfq01(&f4, DegreeDistribution::from_ratios(&[(1, 1, 3), (2, 1, 3), (3, 1, 3)]).unwrap()),
        )
        .unwrap(),
    ];
    for (n, instance) in instances.iter().enumerate() {
        let campaign = Campaign {
            deltas: (0..4).collect(),
            stop: StopRule::new(None, 20_000).unwrap(),
            master_seed: 100 + n as u64,
            level: 0.999,
        };
        for r in run_single(instance, &campaign).unwrap() {
            let m = instance.k() + r.delta as usize;
            let exact = exact_pf_tuples(instance, m).unwrap();
            assert_eq!(exact, exact_pf_inclusion_exclusion(instance, m).unwrap());
            let p = Float::with_val(PRECISION, &exact).to_f64();
            assert!(r.ci_low <= p && p <= r.ci_high, "instance {n}, δ = {}: {p} outside [{}, {}]", r.delta, r.ci_low, r.ci_high);
        }
    }
}
