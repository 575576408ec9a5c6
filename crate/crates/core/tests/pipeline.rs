//! End-to-end paths through the public API: tables, kernels and evolution.

use calogero_core::coefficients::{c3_table, to_representation};
use calogero_core::evolution::{evolve_with, EvolveOptions, KernelRoute};
use calogero_core::oracle::{resolve_table, solve, SolveOptions};
use calogero_core::propagator::{kernel_l0, KernelPoint};
use calogero_core::{
    CoefficientTable, Configuration, Eigenfunction, Error, Exchange, ModelParams, Propagator, QuadratureGrid,
    Representation, TableSource, WavePacket,
};

#[test]
fn oracle_reproduces_three_body_closed_form() {
    let report = solve(3, 2, &SolveOptions::default()).unwrap();
    let want = c3_table(2);
    assert_eq!(report.table.len(), want.len());
    for (m, v) in want.terms() {
        assert_eq!(report.table.get(m), *v, "{m:?}");
    }
}

#[test]
fn table_survives_json_and_representation_changes() {
    let table = resolve_table(3, 2, TableSource::ClosedForm).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    table.write(&path).unwrap();
    let back = CoefficientTable::read(&path).unwrap();
    assert_eq!(back.to_json().unwrap(), table.to_json().unwrap());

    let params = ModelParams::new(3, 2, 0.0).unwrap();
    let laurent = to_representation(&table, Representation::LaurentMonomial).unwrap();
    let a = Eigenfunction::new(params, table).unwrap();
    let b = Eigenfunction::new(params, laurent).unwrap();
    let (x, p) = ([-2.1, 0.4, 3.3], [1.7, -2.5, 0.2]);
    assert!((a.psi(&x, &p) - b.psi(&x, &p)).norm() <= 1e-12 * a.psi(&x, &p).norm());
}

#[test]
fn zero_coupling_propagator_matches_mehler_route() {
    let prop = Propagator::for_params(ModelParams::new(3, 0, 1.0).unwrap()).unwrap();
    let point = KernelPoint::new(vec![-1.2, 0.3, 2.0], vec![0.5, -0.7, 1.1], 0.6).unwrap();
    let a = prop.kernel(&point).unwrap();
    let b = kernel_l0(&point, 3, 1.0).unwrap();
    assert!((a - b).norm() <= 1e-12 * a.norm());
}

#[test]
fn caustic_and_mismatched_inputs_are_rejected() {
    let prop = Propagator::for_params(ModelParams::new(2, 1, 1.0).unwrap()).unwrap();
    assert!(matches!(prop.eval(&[0.0, 1.0], &[1.0, 2.0], std::f64::consts::PI), Err(Error::Caustic { .. })));
    assert!(matches!(KernelPoint::new(vec![0.0], vec![1.0, 2.0], 0.1), Err(Error::Domain(_))));
}

#[test]
fn evolution_routes_agree_at_zero_coupling() {
    let params = ModelParams::new(2, 0, 1.0).unwrap();
    let packet =
        WavePacket::gaussian(&[-2.0, 2.0], &[1.0, 1.0], &[0.0, 0.5], Exchange::Antisymmetric).unwrap();
    let outputs =
        vec![Configuration::new(vec![-2.0, 2.0]).unwrap(), Configuration::new(vec![0.5, -1.0]).unwrap()];
    let grid = QuadratureGrid::auto(&packet, 0.4, &params, &outputs).unwrap();
    let general = EvolveOptions { estimate_error: false, ..EvolveOptions::default() };
    let mehler = EvolveOptions { kernel: KernelRoute::ZeroCoupling, ..general.clone() };
    let a = evolve_with(&packet, 0.4, &params, &grid, &outputs, &general).unwrap();
    let b = evolve_with(&packet, 0.4, &params, &grid, &outputs, &mehler).unwrap();
    for (u, v) in a.values.iter().zip(&b.values) {
        assert!((u - v).norm() <= 1e-10 * u.norm().max(1e-6));
    }
}
