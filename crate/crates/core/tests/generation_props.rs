use std::f64::consts::{PI, TAU};

use btbs_core::generate::{linspace, synthetic_features};
use btbs_core::{
    amplitude_encode, angle_encode, decompose, eigendecompose, evolve, is_product_at,
    random_hermitian, superpose_eigenstates, Complex64, QubitOrder, SpectralDecomposition,
    StateBatch, TreeCoord,
};
use proptest::prelude::*;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn spectrum(n_qubits: usize, seed: u64) -> (btbs_core::HermitianMatrix, SpectralDecomposition) {
    let h = random_hermitian(n_qubits, seed).unwrap();
    let s = eigendecompose(&h).unwrap();
    (h, s)
}

#[test]
fn random_16x16_residual_and_orthonormality() {
    for seed in 0..5 {
        let (h, spec) = spectrum(4, seed);
        let scale = h.norm();
        for (lambda, v) in spec.eigenvalues().iter().zip(spec.eigenvectors()) {
            let hv = h.apply(v.amplitudes());
            let res: f64 = hv
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-8 * scale, "seed {seed}: residual {res}");
        }
        let vs = spec.eigenvectors();
        for j in 0..vs.len() {
            for k in 0..vs.len() {
                let target = if j == k { 1.0 } else { 0.0 };
                assert!((vs[j].inner(&vs[k]) - target).norm() <= 1e-10);
            }
        }
        assert!(spec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        // trace is preserved by the spectrum
        let trace: f64 = (0..16).map(|i| h.entry(i, i).re).sum();
        let sum: f64 = spec.eigenvalues().iter().sum();
        assert!((trace - sum).abs() < 1e-10);
    }
}

#[test]
fn superposition_overlaps() {
    let (_, spec) = spectrum(3, 5);
    let two = superpose_eigenstates(&spec, &[1, 4], &[one(), one()]).unwrap();
    assert!((two.norm() - 1.0).abs() < 1e-14);
    for k in [1, 4] {
        let o = spec.eigenvectors()[k].inner(&two).norm();
        assert!((o - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }
    let three = superpose_eigenstates(&spec, &[0, 3, 6], &[one(), one(), one()]).unwrap();
    for k in [0, 3, 6] {
        let o = spec.eigenvectors()[k].inner(&three).norm();
        assert!((o - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }
    assert!(spec.eigenvectors()[2].inner(&three).norm() < 1e-12);
}

#[test]
fn unitarity_and_energy_conservation() {
    let (h, spec) = spectrum(4, 21);
    let psi0 = superpose_eigenstates(
        &spec,
        &[2, 7, 11],
        &[one(), Complex64::new(0.3, 0.5), one()],
    )
    .unwrap();
    let times = linspace(-5.0, 40.0, 300).unwrap();
    let batch = evolve(&spec, &psi0, &times).unwrap();
    let e0 = h.expectation(&psi0);
    for s in &batch {
        assert!((s.norm() - 1.0).abs() <= 1e-10);
        assert!((h.expectation(s) - e0).abs() <= 1e-8 * h.norm());
    }
    let at_zero = evolve(&spec, &psi0, &[0.0]).unwrap();
    for (a, b) in at_zero.states()[0]
        .amplitudes()
        .iter()
        .zip(psi0.amplitudes())
    {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn two_eigenstate_periodicity() {
    let (_, spec) = spectrum(4, 3);
    let (i, j) = (1, 2);
    let psi0 = superpose_eigenstates(&spec, &[i, j], &[one(), one()]).unwrap();
    let period = TAU / (spec.eigenvalues()[i] - spec.eigenvalues()[j]).abs();
    let ts = linspace(0.0, period, 40).unwrap();
    let shifted: Vec<f64> = ts.iter().map(|t| t + period).collect();
    let a = evolve(&spec, &psi0, &ts).unwrap();
    let b = evolve(&spec, &psi0, &shifted).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(x.fidelity(y) >= 1.0 - 1e-8);
    }
    let id = QubitOrder::identity(4);
    let ra = decompose(&a, &id).unwrap();
    let rb = decompose(&b, &id).unwrap();
    assert!(ra.max_distance(&rb).unwrap() <= 1e-6);
}

/// Window start for the non-recurrence check, as a fraction of the fastest
/// beat period. Near t = 0 every pure-phase superposition has
/// 1 − F ≤ α²/8 where α is the fastest accumulated phase, so the window must
/// start where α²/8 is well above 1e−3.
const NON_RECURRENCE_START: f64 = 0.1;
/// Window end in slowest beat periods; longer windows eventually hit
/// near-rational gap ratios.
const NON_RECURRENCE_END: f64 = 2.0;

#[test]
fn three_eigenstates_do_not_recur() {
    let (_, spec) = spectrum(4, 3);
    let idx = [1, 2, 3];
    let psi0 = superpose_eigenstates(&spec, &idx, &[one(), one(), one()]).unwrap();
    let lam = spec.eigenvalues();
    let gaps = [
        (lam[idx[0]] - lam[idx[1]]).abs(),
        (lam[idx[1]] - lam[idx[2]]).abs(),
        (lam[idx[0]] - lam[idx[2]]).abs(),
    ];
    let t_fast = TAU / gaps.iter().cloned().fold(0.0, f64::max);
    let t_slow = TAU / gaps.iter().cloned().fold(f64::INFINITY, f64::min);
    let times = linspace(
        NON_RECURRENCE_START * t_fast,
        NON_RECURRENCE_END * t_slow,
        500,
    )
    .unwrap();
    let batch = evolve(&spec, &psi0, &times).unwrap();
    let worst = batch.iter().map(|s| s.fidelity(&psi0)).fold(0.0, f64::max);
    assert!(worst < 1.0 - 1e-3, "max fidelity {worst}");
}

#[test]
fn angle_encoding_is_product_everywhere() {
    for (k, x) in synthetic_features(20, 9).into_iter().enumerate() {
        let s = angle_encode(&x).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let reg = decompose(&StateBatch::single(s), &QubitOrder::identity(4)).unwrap();
        for (coord, _) in reg.iter().filter(|(c, _)| c.depth() < 3) {
            assert!(
                is_product_at(&reg, &coord, 1e-10).unwrap()[0],
                "sample {k} node {coord}"
            );
        }
        // every depth-d node carries feature d
        for (coord, v) in reg.iter() {
            assert!((v[0].theta - x[coord.depth()]).abs() < 1e-10);
        }
    }
    assert!(
        is_product_at(
            &decompose(
                &StateBatch::single(angle_encode(&[1.0, 2.0]).unwrap()),
                &QubitOrder::identity(2)
            )
            .unwrap(),
            &TreeCoord::root(),
            1e-12
        )
        .unwrap()[0]
    );
}

proptest! {
    #[test]
    fn encoding_norm(u in prop::collection::vec(0.0f64..1.0, 8), x in prop::collection::vec(-PI..PI, 1..7)) {
        if u.iter().any(|v| *v > 0.0) {
            prop_assert!((amplitude_encode(&u).unwrap().norm() - 1.0).abs() <= 1e-12);
        }
        prop_assert!((angle_encode(&x).unwrap().norm() - 1.0).abs() <= 1e-12);
    }
}
