//! Symmetries of the eigenfunction and the propagator at random separated points.

use calogero_core::wavefunction::{separated_points, separation_gap};
use calogero_core::{Complex64, Eigenfunction, ModelParams, Propagator};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn points(seed: u64, n: usize, ell: u32) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap = separation_gap(ell);
    (separated_points(&mut rng, n, gap), separated_points(&mut rng, n, gap))
}

fn eigen(n: usize, ell: u32) -> Eigenfunction {
    Eigenfunction::for_params(ModelParams::new(n, ell, 0.0).unwrap()).unwrap()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1e-300)
}

fn cases() -> impl Strategy<Value = (usize, u32)> {
    prop_oneof![Just((2, 1)), Just((2, 4)), Just((3, 1)), Just((3, 2)), Just((4, 1))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_two_particles_gives_the_exchange_sign(seed in any::<u64>(), (n, ell) in cases()) {
        let e = eigen(n, ell);
        let (x, p) = points(seed, n, ell);
        let mut swapped = x.clone();
        swapped.swap(0, n - 1);
        let sign = if ell % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert!(close(e.psi(&swapped, &p), sign * e.psi(&x, &p), 1e-11));
    }

    #[test]
    fn translation_multiplies_by_total_momentum_phase(seed in any::<u64>(), a in -3.0f64..3.0, (n, ell) in cases()) {
        let e = eigen(n, ell);
        let (x, p) = points(seed, n, ell);
        let moved: Vec<f64> = x.iter().map(|v| v + a).collect();
        let phase = Complex64::from_polar(1.0, a * p.iter().sum::<f64>());
        prop_assert!(close(e.psi(&moved, &p), phase * e.psi(&x, &p), 1e-10));
    }

    #[test]
    fn accurate_and_plain_evaluation_agree(seed in any::<u64>(), (n, ell) in cases()) {
        let e = eigen(n, ell);
        let (x, p) = points(seed, n, ell);
        let scale = e.script_f(&x, &p).unwrap().norm();
        prop_assert!((e.psi_accurate(&x, &p).unwrap() - e.psi(&x, &p)).norm() <= 1e-13 * scale);
    }

    #[test]
    fn kernel_is_reciprocal(seed in any::<u64>(), t in 0.1f64..1.4, (n, ell) in cases()) {
        let prop = Propagator::for_params(ModelParams::new(n, ell, 1.0).unwrap()).unwrap();
        let (x, y) = points(seed, n, ell);
        prop_assert!(close(prop.eval(&x, &y, t).unwrap(), prop.eval(&y, &x, t).unwrap(), 1e-10));
    }

    #[test]
    fn kernel_inherits_the_exchange_sign(seed in any::<u64>(), t in 0.1f64..1.4, (n, ell) in cases()) {
        let prop = Propagator::for_params(ModelParams::new(n, ell, 1.0).unwrap()).unwrap();
        let (x, y) = points(seed, n, ell);
        let mut swapped = x.clone();
        swapped.swap(0, 1);
        let sign = if ell % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert!(close(prop.eval(&swapped, &y, t).unwrap(), sign * prop.eval(&x, &y, t).unwrap(), 1e-10));
    }
}
