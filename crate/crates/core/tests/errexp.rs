use raptor_bounds::bounds::DegreeDistribution;
use raptor_bounds::errexp::{
    errexp_lower_bound, kernel_limit_check, lrfc_errexp, ml_threshold_upper, AsymptoticKernel, SpectralShape,
};
use raptor_bounds::raptor::omega_r10;

#[test]
fn thresholds_for_both_kernels() {
    let omega = omega_r10();
    for rate in [0.90, 0.95, 0.98] {
        let g = SpectralShape::uniform_pc(rate, 2).unwrap();
        for kernel in [AsymptoticKernel::PiLimit, AsymptoticKernel::PaperVarrho] {
            match ml_threshold_upper(&omega, &g, kernel) {
                Ok(e) => println!("R = {rate}: {} → ε* = {e:.6e}", kernel.name()),
                Err(err) => println!("R = {rate}: {} → {err}", kernel.name()),
            }
        }
    }
    let g = SpectralShape::uniform_pc(0.95, 2).unwrap();
    let e = ml_threshold_upper(&omega, &g, AsymptoticKernel::PiLimit).unwrap();
    assert!((e / 1.33e-2 - 1.0).abs() < 0.05);
}

#[test]
fn small_rates_approach_random_fountain_line() {
    let omega = omega_r10();
    for q in [2u32, 4] {
        for rate in [0.5, 0.2, 0.05] {
            let g = SpectralShape::uniform_pc(rate, q).unwrap();
            let e = errexp_lower_bound(0.1, &omega, &g, AsymptoticKernel::PiLimit).unwrap();
            println!("q = {q}, R = {rate}: bound {e:.6}, lrfc {:.6}", lrfc_errexp(0.1, q));
            assert!((e - lrfc_errexp(0.1, q)).abs() < 1e-3);
        }
    }
}

#[test]
fn kernels_are_complementary_in_binary() {
    let omega = omega_r10();
    for i in 0..=64 {
        let w = i as f64 / 64.0;
        let a = AsymptoticKernel::PiLimit.eval(&omega, 2, w);
        let b = AsymptoticKernel::PaperVarrho.eval(&omega, 2, w);
        assert!((a + b - 1.0).abs() < 1e-12, "ω = {w}");
    }
}

#[test]
fn pi_limit_is_the_uniform_limit() {
    let omega = omega_r10();
    for q in [2u32, 4] {
        let mut prev = f64::INFINITY;
        for h in [100usize, 400, 1600] {
            let mut worst: f64 = 0.0;
            for i in 1..64 {
                let w = i as f64 / 64.0;
                let c = kernel_limit_check(&omega, h, q, w).unwrap();
                worst = worst.max((c.pi_l - c.pi_limit).abs());
            }
            println!("q = {q}, h = {h}: max gap {worst:.3e}");
            assert!(worst < prev);
            prev = worst;
        }
    }
}

#[test]
fn degree_one_limit() {
    let omega = DegreeDistribution::from_ratios(&[(1, 1, 1)]).unwrap();
    let c = kernel_limit_check(&omega, 100_000, 2, 1e-4).unwrap();
    assert!(c.pi_l > 0.999 && c.pi_limit > 0.999);
}
