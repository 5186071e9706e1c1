use std::f64::consts::PI;

use num_complex::Complex64;
use scqc::dualrail::NoiseSample;
use scqc::protocols::*;
use scqc::sim::{c, max_abs_diff, CMatrix};

fn z_ab() -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| if i != j { c(0., 0.) } else if i == 1 || i == 2 { c(-1., 0.) } else { c(1., 0.) })
}

fn naive_protocol() -> ThreeStepProtocol {
    let drive = gaussian_swap_drive(2.0 * PI, 0.2, 400).unwrap();
    ThreeStepProtocol::naive(1.0, drive, 400).unwrap()
}

#[test]
fn noiseless_simulated_check_is_the_ideal_one_per_sector() {
    let jp = naive_protocol().simulate(1.0, &NoiseSample::default()).unwrap();
    assert!(jp.frame_x1);
    let cmp = compare_sectors_q4(jp.unitary.matrix(), &ideal_joint_parity()).unwrap();
    assert!(cmp.max_deviation() < 1e-8, "{cmp:?}");
}

#[test]
fn simulated_logical_zz_carries_a_local_z_pair() {
    let jp = naive_protocol().simulate(1.0, &NoiseSample::default()).unwrap();
    for theta in [0.0, PI / 3.0, PI / 2.0, 2.5] {
        let raw = logical_zz(theta, jp.unitary.matrix(), ANCILLA_TOLERANCE).unwrap();
        let expected = z_ab() * logical_zz_target(theta);
        let phase = (expected.adjoint() * &raw).trace();
        let aligned = &raw * Complex64::from_polar(1.0, -phase.arg());
        assert!(max_abs_diff(&aligned, &expected) < 1e-8, "theta {theta}");
        let corrected = logical_zz(theta, &jp.frame_corrected(), ANCILLA_TOLERANCE).unwrap();
        let phase = (expected.adjoint() * &corrected).trace();
        assert!(max_abs_diff(&(&corrected * Complex64::from_polar(1.0, -phase.arg())), &expected) < 1e-8);
    }
}

#[test]
fn ideal_logical_zz_has_no_local_correction() {
    let theta = 0.7;
    let block = logical_zz(theta, &ideal_joint_parity(), ANCILLA_TOLERANCE).unwrap();
    assert!(max_abs_diff(&block, &logical_zz_target(theta)) < 1e-12);
}

#[test]
fn ideal_check_classifies_every_input() {
    let inputs = [(0, 1), (1, 0), (0, 0), (1, 1)];
    let s = erasure_check_stats(&ideal_joint_parity(), &StateSpace::Q4, &inputs, MeasurementRule::OddOnF).unwrap();
    assert!(s.worst_case < 1e-12, "{s:?}");
    let flipped = erasure_check_stats(&ideal_joint_parity(), &StateSpace::Q4, &inputs, MeasurementRule::OddOnG).unwrap();
    assert!(flipped.worst_case > 0.99);
}

#[test]
fn naive_check_degrades_quadratically_with_dephasing() {
    let protocol = naive_protocol();
    let inputs = [(0, 1), (1, 0), (0, 0), (1, 1)];
    let table = noise_sweep_protocol("gamma", "worst_case", &scqc::sweep::log_grid(1e-3, 1e-1, 8), |gamma| {
        let jp = protocol.simulate(1.0, &NoiseSample { gamma, xi: 0.0 })?;
        Ok(erasure_check_stats(jp.unitary.matrix(), &StateSpace::Q4, &inputs, MeasurementRule::OddOnF)?.worst_case)
    })
    .unwrap();
    assert!((table.fit.slope - 2.0).abs() < 0.1, "{:?}", table.fit);
}

#[test]
fn swap_drive_needs_pi_area() {
    let drive = gaussian_swap_drive(2.0 * PI, 0.2, 400).unwrap();
    assert!((drive.area() - PI).abs() < SWAP_AREA_TOLERANCE);
    let short = scqc::dualrail::BeamSplitterDrive::constant(*drive.grid(), 0.1, 0.0, 0.0).unwrap();
    let anc = naive_swap_ancilla_pulse(*drive.grid()).unwrap();
    assert!(ProtocolStep::swap(short, anc).is_err());
}
