//! Benchmark inputs are fixed and evaluate to finite values.

use calogero_bench::points;
use calogero_core::{Eigenfunction, ModelParams};

#[test]
fn inputs_are_reproducible() {
    assert_eq!(points(3, 20), points(3, 20));
}

#[test]
fn inputs_evaluate_cleanly() {
    let e = Eigenfunction::for_params(ModelParams::new(3, 3, 0.0).unwrap()).unwrap();
    for (x, p) in points(3, 20) {
        let v = e.psi(&x, &p);
        assert!(v.re.is_finite() && v.im.is_finite());
    }
}
