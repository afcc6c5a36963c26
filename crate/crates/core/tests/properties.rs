//! Randomized structural properties tying the generators, the oracle, the
//! cost layer, and the combinatorial formulas together.

use proptest::prelude::*;

use symeig_core::analysis::{enumerate_critical_values, min_value_formula};
use symeig_core::brockett::{
    brockett_value, build_weights, multiplier_and_kkt, pair_rotation, WeightMode,
};
use symeig_core::linalg::Matrix;
use symeig_core::optimizer::{initial_frame, solve, SolverConfig};
use symeig_core::symplectic::{
    plant_spd, plant_spd_with_basis, random_symplectic, resymplectify, select_pairs,
    symplectic_spectrum, symplecticity_residual, williamson, SymplecticFrame,
};

/// Ascending spectrum with pairwise gaps at least `min_gap`, built from a
/// start value and a list of gap increments (no rejection sampling).
fn spectrum_from_gaps(start: f64, gaps: &[f64], min_gap: f64) -> Vec<f64> {
    let mut d = Vec::with_capacity(gaps.len() + 1);
    let mut cur = start;
    d.push(cur);
    for g in gaps {
        cur += min_gap + g;
        d.push(cur);
    }
    d
}

/// Strictly increasing weights from positive increments.
fn weights_from_gaps(gaps: &[f64]) -> Vec<f64> {
    let mut nu = Vec::with_capacity(gaps.len());
    let mut cur = 1.0;
    for g in gaps {
        cur += 0.01 + g;
        nu.push(cur);
    }
    nu
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_matrices_are_symplectic(
        n in 1usize..6,
        seed in any::<u64>(),
        magnitude in 0.0f64..0.8,
        orthosymplectic in any::<bool>(),
    ) {
        let r = random_symplectic(n, seed, orthosymplectic, magnitude).unwrap();
        let res = symplecticity_residual(&r).unwrap();
        prop_assert!(res <= 1e-11, "residual {res:.3e} for n={n}, seed={seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn orthosymplectic_matrices_are_orthogonal(n in 1usize..6, seed in any::<u64>()) {
        let r = random_symplectic(n, seed, true, 1.0).unwrap();
        let gram = r.transpose().matmul(&r);
        let err = (&gram - &Matrix::identity(2 * n)).frobenius_norm();
        prop_assert!(err <= 1e-11, "‖RᵀR − I‖ = {err:.3e}");
    }

    #[test]
    fn plant_then_spectrum_round_trips(
        n in 1usize..6,
        gaps in prop::collection::vec(0.0f64..0.6, 0..5),
        start in 0.3f64..1.5,
        seed in any::<u64>(),
        magnitude in 0.0f64..0.6,
    ) {
        let spectrum = spectrum_from_gaps(start, &gaps, 0.05);
        let n = n.min(spectrum.len());
        let spectrum = &spectrum[..n];
        let m = plant_spd(n, spectrum, seed, magnitude).unwrap();
        let got = symplectic_spectrum(&m).unwrap();
        for (g, want) in got.values.iter().zip(spectrum) {
            prop_assert!(
                (g - want).abs() <= 1e-8 * want,
                "recovered {g} vs planted {want} (n={n}, seed={seed})"
            );
        }
    }

    #[test]
    fn williamson_residuals_hold_on_random_instances(
        n in 1usize..5,
        gaps in prop::collection::vec(0.0f64..0.6, 4),
        seed in any::<u64>(),
        magnitude in 0.0f64..0.5,
    ) {
        let spectrum = spectrum_from_gaps(0.4, &gaps[..n - 1], 0.05);
        let m = plant_spd(n, &spectrum, seed, magnitude).unwrap();
        let dec = williamson(&m).unwrap();
        prop_assert!(dec.symplectic_residual <= 1e-10,
            "‖SᵀJS − J‖ = {:.3e}", dec.symplectic_residual);
        let m_norm = m.matrix().frobenius_norm();
        prop_assert!(dec.diag_residual <= 1e-8 * m_norm,
            "‖SᵀMS − diag(D,D)‖ = {:.3e} vs 1e-8·‖M‖ = {:.3e}",
            dec.diag_residual, 1e-8 * m_norm);
    }

    #[test]
    fn cost_is_invariant_under_pair_rotations(
        n in 2usize..5,
        k in 1usize..3,
        gaps in prop::collection::vec(0.0f64..0.6, 4),
        seed in any::<u64>(),
        phi in prop::collection::vec(0.0f64..std::f64::consts::TAU, 3),
    ) {
        let k = k.min(n);
        let spectrum = spectrum_from_gaps(0.4, &gaps[..n - 1], 0.05);
        let m = plant_spd(n, &spectrum, seed, 0.4).unwrap();
        let x = initial_frame(n, k, seed ^ 0x9e37).unwrap();
        let w = build_weights(k, WeightMode::Auto { eps: 0.05 }).unwrap();
        let f0 = brockett_value(&m, &x, &w).unwrap();
        let rot = pair_rotation(&phi[..k]);
        let xk = SymplecticFrame::new(rot.apply_right(x.matrix())).unwrap();
        let fk = brockett_value(&m, &xk, &w).unwrap();
        prop_assert!((fk - f0).abs() <= 1e-12 * f0.abs(),
            "rotation moved the cost by {:.3e}", fk - f0);
    }

    #[test]
    fn planted_pair_selections_are_critical(
        n in 2usize..6,
        seed in any::<u64>(),
        pick in prop::collection::vec(any::<u16>(), 2),
    ) {
        let spectrum: Vec<f64> = (1..=n).map(|i| 0.4 + 0.5 * i as f64).collect();
        let (m, s) = plant_spd_with_basis(n, &spectrum, seed, 0.4).unwrap();
        // Two distinct pair indices derived from the raw picks.
        let a = pick[0] as usize % n;
        let mut b = pick[1] as usize % n;
        if b == a {
            b = (b + 1) % n;
        }
        let x = SymplecticFrame::new(select_pairs(&s, &[a, b]).unwrap()).unwrap();
        let w = build_weights(2, WeightMode::Auto { eps: 0.05 }).unwrap();
        let (_, kkt) = multiplier_and_kkt(&m, &x, &w).unwrap();
        prop_assert!(kkt <= 1e-9, "planted frame has KKT residual {kkt:.3e}");
    }

    #[test]
    fn resymplectify_restores_perturbed_frames(
        n in 2usize..6,
        k in 1usize..3,
        seed in any::<u64>(),
        delta in 0.0f64..1e-3,
    ) {
        let k = k.min(n);
        let x = initial_frame(n, k, seed).unwrap().into_matrix();
        // Deterministic entrywise perturbation of size `delta`.
        let noisy = Matrix::from_fn(x.rows(), x.cols(), |i, j| {
            let wobble = ((i * 31 + j * 17 + 7) % 13) as f64 / 13.0 - 0.5;
            x[(i, j)] + delta * wobble
        });
        let input_residual = symplecticity_residual(&noisy).unwrap();
        let repaired = resymplectify(&noisy).unwrap();
        prop_assert!(repaired.residual() <= 1e-12,
            "repair left residual {:.3e}", repaired.residual());
        let moved = (repaired.matrix() - &noisy).frobenius_norm();
        let allowance = 10.0 * input_residual * noisy.frobenius_norm() + 1e-12;
        prop_assert!(moved <= allowance,
            "repair moved {moved:.3e}, allowed {allowance:.3e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerated_minimum_matches_rearrangement_formula(
        n in 1usize..7,
        k in 1usize..4,
        d_gaps in prop::collection::vec(0.0f64..1.0, 6),
        nu_gaps in prop::collection::vec(0.0f64..1.0, 3),
    ) {
        let k = k.min(n);
        let d = spectrum_from_gaps(0.2, &d_gaps[..n - 1], 0.0);
        let nu = weights_from_gaps(&nu_gaps[..k]);
        let w = build_weights(k, WeightMode::Explicit(nu)).unwrap();
        let values = enumerate_critical_values(&d, &w, k).unwrap();
        let formula = min_value_formula(&d[..k], &w).unwrap();
        let min = values[0];
        prop_assert!((min - formula).abs() <= 1e-12 * formula,
            "enumerated min {min} vs formula {formula}");
        // The formula lower-bounds the whole multiset, not only its minimum.
        for v in &values {
            prop_assert!(*v >= formula - 1e-12 * formula);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn solve_recovers_smallest_pairs_on_diagonal_instances(
        seed in any::<u64>(),
        k in 1usize..3,
    ) {
        let d = [0.7, 1.3, 2.1, 3.4];
        let diag: Vec<f64> = d.iter().chain(d.iter()).copied().collect();
        let m = symeig_core::SpdMatrix::new(Matrix::from_diag(&diag)).unwrap();
        let w = build_weights(k, WeightMode::Auto { eps: 0.05 }).unwrap();
        let cfg = SolverConfig { seed, ..Default::default() };
        let r = solve(&m, k, &w, &cfg).unwrap();
        prop_assert!(r.converged, "no convergence: kkt {:.3e}", r.kkt_residual);
        for (got, want) in r.values.iter().zip(&d[..k]) {
            prop_assert!((got - want).abs() <= 1e-6 * want,
                "value {got} vs planted {want}");
        }
    }
}
