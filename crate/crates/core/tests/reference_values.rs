//! Values computed by a separate implementation (Kronecker-built
//! Hamiltonians, Gibbs states from a matrix exponential, concurrence from
//! `sqrt(ρ) ρ̃ sqrt(ρ)`), frozen here.

use spinlab::analysis::critical_temperature;
use spinlab::entangle::model_concurrence;
use spinlab::model::{Boundary, DeltaSign, ModelSpec};

fn c(spec: &ModelSpec, t: f64, pair: (usize, usize)) -> f64 {
    model_concurrence(spec, t, pair.0, pair.1).unwrap().value
}

// The reference square-root route loses digits on nearly pure states.
fn tol(t: f64) -> f64 {
    if t == 0.0 {
        1e-7
    } else {
        1e-9
    }
}

#[test]
fn open_xxz_chain() {
    let cases = [
        (0.5, 1.0, 0.1, 0.4826418074594653, 0.0),
        (0.5, 1.0, 0.5, 0.2958146527556814, 0.0),
        (-0.5, 2.0, 0.3, 0.4034654799884987, 0.05216323583596222),
        (1.5, 1.2, 1.0, 0.13792745042271434, 0.0),
        (-1.0, 0.3, 0.2, 0.0, 0.0),
    ];
    for (delta, d, t, c12, c13) in cases {
        let spec = ModelSpec::xxz(1.0, delta, d);
        assert!((c(&spec, t, (1, 2)) - c12).abs() < tol(t), "{delta} {d} {t}");
        assert!((c(&spec, t, (1, 3)) - c13).abs() < tol(t), "{delta} {d} {t}");
    }
}

#[test]
fn periodic_ring() {
    let cases = [
        (0.5, 1.0, 0.0, 0.3333333278043714),
        (0.5, 1.0, 0.4, 0.3056385864505491),
        (-0.5, 0.7, 0.2, 0.2698417871826242),
    ];
    for (delta, d, t, expect) in cases {
        let spec = ModelSpec::xxz(1.0, delta, d).with_boundary(Boundary::Periodic);
        for pair in [(1, 2), (1, 3), (2, 3)] {
            assert!((c(&spec, t, pair) - expect).abs() < tol(t), "{delta} {d} {t} {pair:?}");
        }
    }
}

#[test]
fn four_site_chain() {
    let cases = [
        (0.5, 1.0, 0.0, 0.8405113947249038, 0.01582973145885022, 0.01582973145885007),
        (0.5, 1.0, 0.3, 0.5997350391584786, 0.1359844695085972, 0.0),
        (1.0, 0.5, 0.0, 0.86546968955443, 0.00030552182492574187, 0.00030552182492607494),
    ];
    for (delta, d, t, c12, c23, c14) in cases {
        let spec = ModelSpec::xxz(1.0, delta, d).with_n(4);
        assert!((c(&spec, t, (1, 2)) - c12).abs() < tol(t));
        assert!((c(&spec, t, (2, 3)) - c23).abs() < tol(t));
        assert!((c(&spec, t, (1, 4)) - c14).abs() < tol(t));
        assert!((c(&spec, t, (3, 4)) - c12).abs() < tol(t), "reflection symmetry");
    }
}

#[test]
fn minus_sign_convention() {
    let spec = ModelSpec::xxz(1.0, 0.5, 1.0).with_delta_sign(DeltaSign::Minus);
    assert!((c(&spec, 0.3, (1, 2)) - 0.2312975365979526).abs() < 1e-9);
}

#[test]
fn ising_chain_in_field() {
    let cases = [
        (1.0, 1.0, 2.0, 0.3, 0.4617197143831151),
        (-1.0, 2.6, 2.0, 0.2, 0.39036964898881243),
        (1.0, 0.5, 0.5, 0.0, 0.577350269189626),
        (1.0, 1.0, 0.0, 0.0, 0.5),
    ];
    for (j, d, h, t, expect) in cases {
        let spec = ModelSpec::ising_dm_field(j, d, h);
        assert!((c(&spec, t, (1, 2)) - expect).abs() < tol(t), "{j} {d} {h} {t}");
    }
}

#[test]
fn critical_temperatures() {
    let cases = [
        (ModelSpec::xxz(1.0, 0.0, 0.0), 0.5267269915528574),
        (ModelSpec::xxz(1.0, 1.0, 1.0), 1.0853676884274366),
        (ModelSpec::xxz(1.0, 0.5, 2.0), 1.3626902360165398),
        (ModelSpec::ising_dm_field(-1.0, 2.3270152556440187, 2.0), 0.7915034984929643),
        (ModelSpec::ising_dm_field(1.0, 1.0, 2.0), 0.864954688874439),
    ];
    for (spec, expect) in cases {
        let tc = critical_temperature(&spec, (1, 2), 2.0).unwrap().unwrap();
        assert!((tc - expect).abs() < 2e-8, "{spec:?}: {tc} vs {expect}");
    }
}
