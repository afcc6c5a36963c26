//! End-to-end acceptance checks, one test per contract criterion.
//!
//! Each test prints a single `criterion <id>: PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --show-output`); the harness verdict per
//! test mirrors it. Criteria that exercise the solver share one batch of
//! planted problems, built once.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symeig_core::analysis::{classify, min_value_formula, Classification};
use symeig_core::analysis::{enumerate_critical_values, saddle_certificate};
use symeig_core::brockett::{
    brockett_value, build_weights, euclid_gradient, multiplier_and_kkt, pair_rotation, WeightMode,
    WeightSpec,
};
use symeig_core::linalg::{sym_eig, Matrix};
use symeig_core::optimizer::{initial_frame, solve, solve_from, EigenResult, SolverConfig};
use symeig_core::symplectic::{plant_spd_with_basis, select_pairs, SymplecticFrame};
use symeig_core::SpdMatrix;

/// One planted problem together with the solver's output on it.
struct Planted {
    n: usize,
    k: usize,
    /// Full planted spectrum, ascending.
    spectrum: Vec<f64>,
    m: SpdMatrix,
    /// Symplectic basis whose pair `j` carries `spectrum[j]`.
    s: Matrix,
    w: WeightSpec,
    result: EigenResult,
    elapsed: Duration,
}

/// Condition number of `S` from the extreme eigenvalues of `SᵀS`.
fn condition_number(s: &Matrix) -> f64 {
    let gram = s.transpose().matmul(s);
    let eig = sym_eig(&gram).expect("SᵀS is symmetric");
    let lo = eig.values.first().copied().unwrap();
    let hi = eig.values.last().copied().unwrap();
    (hi / lo).sqrt()
}

/// 20 planted instances over n ∈ {5, 10, 20}, k ∈ {1, 2, 3}: spectra with
/// gaps ≥ 0.2, generator magnitude 0.3 re-seeded until cond(S) ≤ 1e3.
fn batch() -> &'static Vec<Planted> {
    static BATCH: OnceLock<Vec<Planted>> = OnceLock::new();
    BATCH.get_or_init(|| {
        let combos: Vec<(usize, usize)> = [5usize, 10, 20]
            .iter()
            .flat_map(|&n| [1usize, 2, 3].iter().map(move |&k| (n, k)))
            .collect();
        (0..20)
            .map(|i| {
                let (n, k) = combos[i % combos.len()];
                let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97 + i as u64);
                let mut spectrum = Vec::with_capacity(n);
                let mut cur = 0.5 + 0.3 * rng.random::<f64>();
                for _ in 0..n {
                    spectrum.push(cur);
                    cur += 0.2 + 0.3 * rng.random::<f64>();
                }
                let mut seed = 100 + i as u64;
                let (m, s) = loop {
                    let (m, s) = plant_spd_with_basis(n, &spectrum, seed, 0.3)
                        .expect("valid planted instance");
                    if condition_number(&s) <= 1e3 {
                        break (m, s);
                    }
                    seed += 1000;
                };
                let w = build_weights(k, WeightMode::Auto { eps: 0.05 }).unwrap();
                let cfg = SolverConfig {
                    seed: 7 + i as u64,
                    ..Default::default()
                };
                let t0 = Instant::now();
                let result = solve(&m, k, &w, &cfg).expect("solve runs");
                let elapsed = t0.elapsed();
                Planted {
                    n,
                    k,
                    spectrum,
                    m,
                    s,
                    w,
                    result,
                    elapsed,
                }
            })
            .collect()
    })
}

/// Prints the verdict line and panics on failure.
fn verdict(id: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("criterion {id}: PASS — {detail}"),
        Err(why) => {
            println!("criterion {id}: FAIL — {why}");
            panic!("criterion {id} failed: {why}");
        }
    }
}

/// The frame scaled by `W(t) = diag(tI_k, I_k/t)` — symplectic for t ≠ 0.
fn scaled_frame(x: &SymplecticFrame, t: f64) -> SymplecticFrame {
    let k = x.k();
    let mut y = x.matrix().clone();
    for j in 0..k {
        y.scale_col(j, t);
        y.scale_col(k + j, 1.0 / t);
    }
    SymplecticFrame::new(y).expect("diagonal pair scaling preserves feasibility")
}

#[test]
fn criterion_01_planted_spectrum_recovery() {
    let outcome = (|| {
        let mut worst_rel = 0.0f64;
        let mut slowest = Duration::ZERO;
        for (i, p) in batch().iter().enumerate() {
            if !p.result.converged {
                return Err(format!(
                    "instance {i} (n={}, k={}) did not converge: kkt {:.3e}",
                    p.n, p.k, p.result.kkt_residual
                ));
            }
            if p.elapsed > Duration::from_secs(10) {
                return Err(format!("instance {i} took {:?} (> 10 s)", p.elapsed));
            }
            slowest = slowest.max(p.elapsed);
            for (got, want) in p.result.values.iter().zip(&p.spectrum[..p.k]) {
                let rel = (got - want).abs() / want;
                worst_rel = worst_rel.max(rel);
                if rel > 1e-6 {
                    return Err(format!(
                        "instance {i} (n={}, k={}): value {got} vs planted {want} (rel {rel:.3e})",
                        p.n, p.k
                    ));
                }
            }
        }
        Ok(format!(
            "20/20 instances recovered the smallest k values; worst rel err {worst_rel:.3e}, \
             slowest solve {slowest:?}"
        ))
    })();
    verdict("1 (planted-spectrum recovery)", outcome);
}

#[test]
fn criterion_02_minimal_value_theorem() {
    let outcome = (|| {
        let mut worst = 0.0f64;
        for (i, p) in batch().iter().enumerate() {
            if !p.result.converged {
                return Err(format!("instance {i} did not converge"));
            }
            let oracle = min_value_formula(&p.spectrum[..p.k], &p.w)
                .map_err(|e| format!("formula failed: {e}"))?;
            let rel = (p.result.f_value - oracle).abs() / oracle;
            worst = worst.max(rel);
            if rel > 1e-8 {
                return Err(format!(
                    "instance {i} (n={}, k={}): f {} vs 2Σdᵢν_(k+1−i) = {oracle} (rel {rel:.3e})",
                    p.n, p.k, p.result.f_value
                ));
            }
        }
        Ok(format!(
            "converged f matches the rearrangement value; worst rel err {worst:.3e}"
        ))
    })();
    verdict("2 (minimal-value theorem)", outcome);
}

#[test]
fn criterion_03_trace_minimization_limit() {
    let outcome = (|| {
        let eps = [1e-2, 1e-3];
        let mut worst = 0.0f64;
        let mut checked = 0usize;
        for p in batch().iter().filter(|p| p.n == 5) {
            let target: f64 = p.spectrum[..p.k].iter().sum();
            let mut v = [0.0f64; 2];
            for (slot, &e) in eps.iter().enumerate() {
                let w = build_weights(p.k, WeightMode::Auto { eps: e }).unwrap();
                // ε = 1e-3 flattens the landscape to curvature O(ε); the
                // extra iteration headroom is what the tighter study needs.
                let cfg = SolverConfig {
                    seed: 3,
                    max_iter: 50_000,
                    ..Default::default()
                };
                let r = solve(&p.m, p.k, &w, &cfg).map_err(|e| format!("solve failed: {e}"))?;
                if !r.converged {
                    return Err(format!(
                        "n={}, k={}, eps={e}: no convergence (kkt {:.3e})",
                        p.n, p.k, r.kkt_residual
                    ));
                }
                v[slot] = r.f_value / 2.0;
            }
            // Linear model v(ε) = a + bε through both points; the intercept
            // must recover Σ_{j≤k} d_j.
            let a = (eps[1] * v[0] - eps[0] * v[1]) / (eps[1] - eps[0]);
            let rel = (a - target).abs() / target;
            worst = worst.max(rel);
            if rel > 1e-6 {
                return Err(format!(
                    "n={}, k={}: intercept {a} vs Σd = {target} (rel {rel:.3e})",
                    p.n, p.k
                ));
            }
            // Linear-in-ε decay: the error at ε = 1e-2 must be ≈ 10× the
            // error at ε = 1e-3.
            let err = [v[0] - target, v[1] - target];
            if err[1].abs() > 1e-14 * target {
                let ratio = err[0] / err[1];
                if !(5.0..=20.0).contains(&ratio) {
                    return Err(format!(
                        "n={}, k={}: error ratio {ratio:.2} not consistent with linear decay",
                        p.n, p.k
                    ));
                }
            }
            checked += 1;
        }
        Ok(format!(
            "{checked} instances: extrapolated intercept recovers Σd; worst rel err {worst:.3e}"
        ))
    })();
    verdict("3 (trace-minimization limit)", outcome);
}

#[test]
fn criterion_04_main_theorem_both_directions() {
    let outcome = (|| {
        let mut worst_kkt = 0.0f64;
        let mut worst_mass = 0.0f64;
        for (i, p) in batch().iter().enumerate() {
            // (a) planted symplectic eigenvector sets are critical points.
            let indices: Vec<usize> = (0..p.k).collect();
            let x = SymplecticFrame::new(select_pairs(&p.s, &indices).unwrap())
                .map_err(|e| format!("instance {i}: planted frame infeasible: {e}"))?;
            let (_, kkt) =
                multiplier_and_kkt(&p.m, &x, &p.w).map_err(|e| format!("instance {i}: {e}"))?;
            worst_kkt = worst_kkt.max(kkt);
            if kkt > 1e-10 {
                return Err(format!(
                    "instance {i} (n={}, k={}): planted frame KKT {kkt:.3e} > 1e-10",
                    p.n, p.k
                ));
            }
            // (b) converged solver output has XᵀMX in diag(D,D) form.
            if p.result.kkt_residual <= 1e-8 {
                let xm = p.result.frame.matrix();
                let b = xm.transpose().matmul(&p.m.matrix().matmul(xm));
                let mass = p.result.offdiag_residual * b.frobenius_norm();
                let bound = 1e-6 * p.m.matrix().frobenius_norm();
                worst_mass = worst_mass.max(mass / bound);
                if mass > bound {
                    return Err(format!(
                        "instance {i}: off-diagonal mass {mass:.3e} > 1e-6·‖M‖ = {bound:.3e}"
                    ));
                }
            }
        }
        Ok(format!(
            "planted frames critical (worst KKT {worst_kkt:.3e}); solver outputs diagonal \
             (worst mass at {:.1}% of bound)",
            100.0 * worst_mass
        ))
    })();
    verdict("4 (main theorem, both directions)", outcome);
}

#[test]
fn criterion_05_williamson_self_consistency() {
    let outcome = (|| {
        use symeig_core::symplectic::{plant_spd, symplectic_spectrum, williamson};
        let sizes = [1usize, 1, 2, 3, 5, 8, 12, 16, 20, 1];
        let mut n1_checked = 0usize;
        for trial in 0..50 {
            let n = sizes[trial % sizes.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f + trial as u64);
            let mut spectrum = Vec::with_capacity(n);
            let mut cur = 0.4 + 0.4 * rng.random::<f64>();
            for _ in 0..n {
                spectrum.push(cur);
                cur += 0.1 + 0.4 * rng.random::<f64>();
            }
            let m = plant_spd(n, &spectrum, 900 + trial as u64, 0.3)
                .map_err(|e| format!("trial {trial}: {e}"))?;
            let dec = williamson(&m).map_err(|e| format!("trial {trial}: {e}"))?;
            if dec.symplectic_residual > 1e-10 {
                return Err(format!(
                    "trial {trial} (n={n}): ‖SᵀJS − J‖ = {:.3e}",
                    dec.symplectic_residual
                ));
            }
            let m_norm = m.matrix().frobenius_norm();
            if dec.diag_residual > 1e-8 * m_norm {
                return Err(format!(
                    "trial {trial} (n={n}): ‖SᵀMS − diag(D,D)‖ = {:.3e} vs 1e-8·‖M‖ = {:.3e}",
                    dec.diag_residual,
                    1e-8 * m_norm
                ));
            }
            if n == 1 {
                let mm = m.matrix();
                let det = mm[(0, 0)] * mm[(1, 1)] - mm[(0, 1)] * mm[(1, 0)];
                let expect = det.sqrt();
                let got = symplectic_spectrum(&m).map_err(|e| format!("{e}"))?.values[0];
                if (got - expect).abs() > 1e-10 * expect {
                    return Err(format!(
                        "trial {trial}: n=1 spectrum {got} vs sqrt(det M) = {expect}"
                    ));
                }
                n1_checked += 1;
            }
        }
        Ok(format!(
            "50/50 decompositions within residual bounds; {n1_checked} n=1 determinant checks"
        ))
    })();
    verdict("5 (Williamson oracle self-consistency)", outcome);
}

#[test]
fn criterion_06_homogeneity_and_criticality_transport() {
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x40_60);
        let mut max_ratio = 0.0f64;
        for trial in 0..100 {
            // Even trials probe random frames, odd trials planted critical
            // points, so the 10× transport bound is exercised at both ends.
            let p = &batch()[trial % batch().len()];
            let x = if trial % 2 == 0 {
                initial_frame(p.n, p.k, 5000 + trial as u64).unwrap()
            } else {
                let indices: Vec<usize> = (0..p.k).collect();
                SymplecticFrame::new(select_pairs(&p.s, &indices).unwrap()).unwrap()
            };
            let phi: Vec<f64> = (0..p.k)
                .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
                .collect();
            let rot = pair_rotation(&phi);
            let xk = SymplecticFrame::new(rot.apply_right(x.matrix()))
                .map_err(|e| format!("trial {trial}: rotated frame infeasible: {e}"))?;

            let f0 = brockett_value(&p.m, &x, &p.w).unwrap();
            let f1 = brockett_value(&p.m, &xk, &p.w).unwrap();
            if (f1 - f0).abs() > 1e-12 * f0.abs() {
                return Err(format!(
                    "trial {trial}: f moved from {f0} to {f1} under a pair rotation"
                ));
            }
            let (_, r0) = multiplier_and_kkt(&p.m, &x, &p.w).unwrap();
            let (_, r1) = multiplier_and_kkt(&p.m, &xk, &p.w).unwrap();
            if r1 > 10.0 * r0 {
                return Err(format!(
                    "trial {trial}: KKT residual grew {r0:.3e} → {r1:.3e} (over 10×)"
                ));
            }
            if r0 > 0.0 {
                max_ratio = max_ratio.max(r1 / r0);
            }
        }
        Ok(format!(
            "100 (X, K) pairs: cost invariant, residual ratio ≤ {max_ratio:.2}"
        ))
    })();
    verdict("6 (homogeneity and criticality transport)", outcome);
}

#[test]
fn criterion_07_saddle_certificate_and_escape() {
    let outcome = (|| {
        let mut checked = 0usize;
        for p in batch().iter().filter(|p| p.k >= 2) {
            // Smallest-k pairs in ascending column order: a critical point
            // with pair values violating nonincreasing order — a saddle.
            let indices: Vec<usize> = (0..p.k).collect();
            let x = SymplecticFrame::new(select_pairs(&p.s, &indices).unwrap())
                .map_err(|e| format!("saddle frame infeasible: {e}"))?;
            let report = classify(&p.m, &x, &p.w, 1e-8).map_err(|e| format!("{e}"))?;
            if report.classification != Classification::Saddle {
                return Err(format!(
                    "n={}, k={}: expected saddle, classified {}",
                    p.n, p.k, report.classification
                ));
            }
            let (alpha, beta) = (0usize, p.k - 1);
            let cert = saddle_certificate(&p.m, &x, &p.w, alpha, beta, 1e-8)
                .map_err(|e| format!("certificate failed: {e}"))?;
            let (da, db) = (p.spectrum[alpha], p.spectrum[beta]);
            let (na, nb) = (p.w.nu()[alpha], p.w.nu()[beta]);
            let closed = 4.0 * ((db * na + da * nb) - (da * na + db * nb));
            if (cert.hessian_value - closed).abs() > 1e-8 * closed.abs() {
                return Err(format!(
                    "n={}, k={}: hessian form {} vs closed form {closed}",
                    p.n, p.k, cert.hessian_value
                ));
            }
            if da < db && cert.hessian_value >= 0.0 {
                return Err(format!(
                    "n={}, k={}: certificate {} not negative despite d_α < d_β",
                    p.n, p.k, cert.hessian_value
                ));
            }
            // The escape mechanism must carry the solver from this saddle to
            // the rearrangement minimum.
            let r = solve_from(&p.m, x, &p.w, &SolverConfig::default())
                .map_err(|e| format!("solve_from failed: {e}"))?;
            if r.escapes == 0 {
                return Err(format!("n={}, k={}: solver never escaped", p.n, p.k));
            }
            let oracle = min_value_formula(&p.spectrum[..p.k], &p.w).unwrap();
            if (r.f_value - oracle).abs() > 1e-8 * oracle {
                return Err(format!(
                    "n={}, k={}: post-escape f {} vs global {oracle}",
                    p.n, p.k, r.f_value
                ));
            }
            checked += 1;
        }
        Ok(format!(
            "{checked} planted saddles: certificates match the closed form and are negative; \
             escapes reach the global value"
        ))
    })();
    verdict("7 (saddle certificate and escape)", outcome);
}

#[test]
fn criterion_08_gradient_finite_differences() {
    let outcome = (|| {
        let mut worst = 0.0f64;
        for trial in 0..50 {
            let n = 2 + trial % 3;
            let k = 1 + trial % 2;
            let mut rng = ChaCha8Rng::seed_from_u64(0x62AD + trial as u64);
            let mut spectrum = Vec::with_capacity(n);
            let mut cur = 0.4 + 0.3 * rng.random::<f64>();
            for _ in 0..n {
                spectrum.push(cur);
                cur += 0.2 + 0.4 * rng.random::<f64>();
            }
            let (m, _) = plant_spd_with_basis(n, &spectrum, 40 + trial as u64, 0.4)
                .map_err(|e| format!("{e}"))?;
            let x = initial_frame(n, k, 70 + trial as u64).unwrap();
            let w = build_weights(k, WeightMode::Auto { eps: 0.05 }).unwrap();
            let g = euclid_gradient(&m, &x, &w).unwrap();

            let xm = x.matrix();
            let f_at = |y: &Matrix| {
                let gram = y.transpose().matmul(&m.matrix().matmul(y));
                let mut acc = 0.0;
                for (j, &v) in w.nu().iter().enumerate() {
                    acc += v * (gram[(j, j)] + gram[(k + j, k + j)]);
                }
                acc
            };
            let h = 1e-5 * xm.frobenius_norm();
            let mut err = 0.0f64;
            for i in 0..xm.rows() {
                for j in 0..xm.cols() {
                    let mut plus = xm.clone();
                    plus[(i, j)] += h;
                    let mut minus = xm.clone();
                    minus[(i, j)] -= h;
                    let fd = (f_at(&plus) - f_at(&minus)) / (2.0 * h);
                    err = err.max((fd - g[(i, j)]).abs());
                }
            }
            let rel = err / g.max_abs();
            worst = worst.max(rel);
            if rel > 1e-6 {
                return Err(format!(
                    "trial {trial} (n={n}, k={k}): FD mismatch {rel:.3e}"
                ));
            }
        }
        Ok(format!(
            "50 instances: gradient matches central differences, worst rel {worst:.3e}"
        ))
    })();
    verdict("8 (gradient finite-difference check)", outcome);
}

#[test]
fn criterion_09_rearrangement_brute_force() {
    let outcome = (|| {
        let mut cases = 0usize;
        for n in 1usize..=6 {
            for k in 1..=n.min(3) {
                // Integer spectra: consecutive, even, duplicated smallest,
                // and a seeded shuffle-free random multiset.
                let mut spectra: Vec<Vec<f64>> = vec![
                    (1..=n).map(|v| v as f64).collect(),
                    (1..=n).map(|v| (2 * v) as f64).collect(),
                ];
                if n >= 2 {
                    let mut dup: Vec<f64> = (1..=n - 1).map(|v| v as f64).collect();
                    dup.insert(0, 1.0);
                    spectra.push(dup);
                }
                let mut rng = ChaCha8Rng::seed_from_u64((n * 10 + k) as u64);
                let mut random_ints: Vec<f64> = (0..n)
                    .map(|_| (1 + rng.random_range(0..9u32)) as f64)
                    .collect();
                random_ints.sort_by(f64::total_cmp);
                spectra.push(random_ints);

                for d in &spectra {
                    for nu in [
                        (1..=k).map(|v| v as f64).collect::<Vec<_>>(),
                        (1..=k).map(|v| (2 * v - 1) as f64).collect::<Vec<_>>(),
                    ] {
                        let w = build_weights(k, WeightMode::Explicit(nu)).unwrap();
                        let values =
                            enumerate_critical_values(d, &w, k).map_err(|e| format!("{e}"))?;
                        let formula = min_value_formula(&d[..k], &w).unwrap();
                        let min = values[0];
                        if (min - formula).abs() > 1e-12 * formula {
                            return Err(format!(
                                "n={n}, k={k}, d={d:?}: enumerated min {min} vs formula {formula}"
                            ));
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok(format!(
            "{cases} integer-spectrum cases: brute-force min equals the formula"
        ))
    })();
    verdict("9 (rearrangement brute force)", outcome);
}

#[test]
fn criterion_10_coercivity_and_no_maximizer() {
    let outcome = (|| {
        // Coercivity: f(X) > ν₁·λ_min(M)·‖X‖_F² on every feasible sample.
        let mut samples = 0usize;
        for trial in 0..100 {
            let p = &batch()[trial % batch().len()];
            let lambda_min = sym_eig(p.m.matrix()).unwrap().values[0];
            let x = initial_frame(p.n, p.k, 9000 + trial as u64).unwrap();
            let f = brockett_value(&p.m, &x, &p.w).unwrap();
            let bound = p.w.nu()[0] * lambda_min * x.matrix().frobenius_norm().powi(2);
            if f <= bound {
                return Err(format!(
                    "trial {trial}: f = {f} ≤ coercivity bound {bound} (n={}, k={})",
                    p.n, p.k
                ));
            }
            samples += 1;
        }

        // No-maximizer probe: along W(t) = diag(tI, I/t) from a critical
        // point, the cost follows (t² + 1/t²)·Σνⱼd_{iⱼ} exactly.
        let mut probes = 0usize;
        for p in batch().iter().take(5) {
            let indices: Vec<usize> = (0..p.k).collect();
            let x = SymplecticFrame::new(select_pairs(&p.s, &indices).unwrap()).unwrap();
            let f_star = brockett_value(&p.m, &x, &p.w).unwrap();
            for t in [0.9f64, 1.1] {
                let xt = scaled_frame(&x, t);
                let f_t = brockett_value(&p.m, &xt, &p.w).unwrap();
                let expect = (t * t + 1.0 / (t * t)) * f_star / 2.0;
                if (f_t - expect).abs() > 1e-10 * expect {
                    return Err(format!(
                        "n={}, k={}, t={t}: f = {f_t} vs curve value {expect}",
                        p.n, p.k
                    ));
                }
                probes += 1;
            }
        }
        Ok(format!(
            "{samples} coercivity samples above the bound; {probes} scaling-curve probes match"
        ))
    })();
    verdict("10 (coercivity and no-maximizer probes)", outcome);
}
