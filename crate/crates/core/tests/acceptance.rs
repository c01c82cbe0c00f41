//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dualsvd_core::io::{parse_container, render_csv, serialize_container, AnyDualMatrix};
use dualsvd_core::random;
use dualsvd_core::rng::{self, run_trials};
use dualsvd_core::waves::{
    add_noise_at_snr, build_dual_from_series, detect_waves, rank_recovery, synthesize_wave, uniform_times,
    ComponentClass, DerivativeScheme, Peak, RankRecoveryOptions, Scene, SimilarityThresholds, StandingSpec,
    TravelingSpec, WaveParams,
};
use dualsvd_core::{
    cdsvd_exists, compute_cdsvd, dmpgi, frobenius_rank_k_degeneracy_demo, optimality_probe, penrose_residuals,
    rank_k_approx, Complex64, DualMatrix, DualScalar, Entry, Error,
};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rep_norm<T: Entry>(a: &DualMatrix<T>) -> f64 {
    a.representative_form().norm()
}

fn rep_diff<T: Entry>(a: &DualMatrix<T>, b: &DualMatrix<T>) -> f64 {
    rep_norm(&a.sub(b).expect("same shape"))
}

/// Distinct block values in `[0.5, 4]` with gaps of at least 0.2, each
/// repeated 1 to 3 times.
fn block_values<R: Rng>(max_rank: usize, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    let mut top = 4.0;
    while out.len() < max_rank && top > 0.5 {
        let size = rng.random_range(1..=3).min(max_rank - out.len());
        let v = top - rng.random_range(0.0..0.3);
        out.extend(std::iter::repeat_n(v, size));
        top = v - 0.2 - rng.random_range(0.0..0.4);
        if rng.random_bool(0.25) {
            break;
        }
    }
    out
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn factorization() -> Outcome {
    struct Trial {
        recon: f64,
        unitary: f64,
        sigma: f64,
        sorted: bool,
        repeated: bool,
    }
    let trials = run_trials(101, 200, |_, rng| {
        let m = rng.random_range(2..=64);
        let n = rng.random_range(2..=48);
        let sv = block_values(m.min(n), rng);
        let a = random::feasible::<Complex64, _>(m, n, &sv, rng);
        let res = compute_cdsvd(&a).expect("feasible by construction");
        let (us, ui) = res.u.unitarity_residuals();
        let (vs, vi) = res.v.unitarity_residuals();
        // U*AV must be a real diagonal dual matrix
        let d = res
            .u
            .conj_transpose()
            .mul(&a)
            .and_then(|x| x.mul(&res.v))
            .expect("conformable");
        let mut sigma = 0.0;
        for part in [d.standard(), d.infinitesimal()] {
            for ((i, j), z) in part.iter().enumerate().map(|(k, z)| ((k % part.nrows(), k / part.nrows()), z)) {
                sigma += if i == j { z.im * z.im } else { z.norm_sqr() };
            }
        }
        let s = res.dual_singular_values();
        Trial {
            recon: rep_diff(&a, &res.reconstruct()) / rep_norm(&a),
            unitary: max_of([us, ui, vs, vi]),
            sigma: sigma.sqrt() + res.sigma_offdiag_mass,
            sorted: s.windows(2).all(|w| w[0].total_cmp(&w[1]).is_ge()),
            repeated: !res.blocks.all_simple(),
        }
    });
    let recon = max_of(trials.iter().map(|t| t.recon));
    let unitary = max_of(trials.iter().map(|t| t.unitary));
    let sigma = max_of(trials.iter().map(|t| t.sigma));
    let repeated = trials.iter().filter(|t| t.repeated).count();
    ensure(recon <= 1e-10, || format!("reconstruction residual {recon:.2e}"))?;
    ensure(unitary <= 1e-10, || format!("unitarity residual {unitary:.2e}"))?;
    ensure(sigma <= 1e-10, || format!("Sigma off-diagonal/imaginary mass {sigma:.2e}"))?;
    ensure(trials.iter().all(|t| t.sorted), || "singular values out of order".into())?;
    ensure(repeated > 0, || "no repeated singular values were exercised".into())?;
    Ok(format!(
        "200 complex matrices ({repeated} with repeated values): reconstruction {recon:.1e}, unitarity {unitary:.1e}, Sigma mass {sigma:.1e}"
    ))
}

/// Instance `k` of the classifier set; even indices are feasible.
fn classifier_instance(k: usize, rng: &mut ChaCha8Rng) -> (DualMatrix<Complex64>, bool) {
    let m = rng.random_range(3..=20);
    let n = rng.random_range(3..=16);
    let r = rng.random_range(1..m.min(n));
    let sv: Vec<f64> = (0..r).map(|j| 3.0 - 2.0 * j as f64 / r as f64).collect();
    let real = k % 4 < 2;
    let feasible = k % 2 == 0;
    let a = match (feasible, real) {
        (true, true) => random::feasible::<f64, _>(m, n, &sv, rng).to_complex(),
        (true, false) => random::feasible::<Complex64, _>(m, n, &sv, rng),
        (false, real) => {
            let violation = 10f64.powf(-rng.random_range(0.0..6.0));
            if real {
                random::infeasible::<f64, _>(m, n, &sv, violation, rng).to_complex()
            } else {
                random::infeasible::<Complex64, _>(m, n, &sv, violation, rng)
            }
        }
    };
    (a, feasible)
}

fn infeasible_2x2() -> DualMatrix<f64> {
    DualMatrix::new(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]),
    )
    .unwrap()
}

fn existence() -> Outcome {
    let verdicts = run_trials(202, 200, |k, rng| {
        let (a, feasible) = classifier_instance(k, rng);
        cdsvd_exists(&a).exists == feasible
    });
    let errors = verdicts.iter().filter(|ok| !**ok).count();
    ensure(errors == 0, || format!("{errors} of 200 instances misclassified"))?;
    let cert = cdsvd_exists(&infeasible_2x2());
    ensure(!cert.exists && (cert.residual - 1.0).abs() <= 1e-15, || {
        format!("2x2 example: exists={} residual={}", cert.exists, cert.residual)
    })?;
    Ok(format!("200 instances, 0 errors; 2x2 example residual {}", cert.residual))
}

fn quasi_metric() -> Outcome {
    let i2 = DMatrix::<f64>::identity(2, 2);
    let z = DMatrix::<f64>::zeros(2, 2);
    let a = DualMatrix::new(i2.clone(), i2.clone()).unwrap();
    let b = DualMatrix::new(z.clone(), -i2).unwrap();
    let c = DualMatrix::<f64>::zeros(2, 2);
    let r2 = std::f64::consts::SQRT_2;
    let cases = [
        ("d*(A,B)", a.quasi_metric(&b).unwrap(), DualScalar::new(r2, 2.0 * r2)),
        ("d*(A,C)", a.quasi_metric(&c).unwrap(), DualScalar::new(r2, r2 / 2.0)),
        ("d*(C,B)", c.quasi_metric(&b).unwrap(), DualScalar::new(0.0, r2)),
    ];
    for (name, got, want) in &cases {
        ensure(
            (got.standard - want.standard).abs() <= 1e-14 && (got.infinitesimal - want.infinitesimal).abs() <= 1e-14,
            || format!("{name} = {got}, expected {want}"),
        )?;
    }
    let sum = cases[1].1 + cases[2].1;
    ensure(sum.less_than(cases[0].1), || format!("triangle inequality not violated: {} vs {sum}", cases[0].1))?;
    Ok(format!("d*(A,B) = {:.15} > d*(A,C) + d*(C,B) = {sum:.15}", cases[0].1))
}

/// Orthonormal basis of the orthogonal complement of the columns of `u`,
/// read off the unit eigenvalues of `I − U U*`.
fn complement_basis(u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let m = u.nrows();
    let p = DMatrix::<Complex64>::identity(m, m) - u * u.adjoint();
    let eig = p.symmetric_eigen();
    let keep: Vec<usize> = (0..m).filter(|&j| eig.eigenvalues[j] > 0.5).collect();
    DMatrix::from_fn(m, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])])
}

/// Leading `k` singular triplets from the eigenvectors of `A A*`, kept apart
/// from the SVD used by the library.
fn leading_pairs(a: &DMatrix<Complex64>, k: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
    let eig = (a * a.adjoint()).symmetric_eigen();
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let uk = eig.eigenvectors.select_columns(&order[..k]);
    let s: Vec<f64> = order[..k].iter().map(|&i| eig.eigenvalues[i].sqrt()).collect();
    let mut vk = a.adjoint() * &uk;
    for (mut col, s) in vk.column_iter_mut().zip(&s) {
        col.unscale_mut(*s);
    }
    let sk = DMatrix::from_fn(k, k, |i, j| if i == j { Complex64::from(s[i]) } else { Complex64::from(0.0) });
    (uk, sk, vk)
}

fn rank_k_optimality() -> Outcome {
    struct Trial {
        violations: usize,
        closed_form: f64,
        complement: f64,
    }
    let trials = run_trials(404, 50, |_, rng| {
        let m = rng.random_range(2..=12);
        let n = rng.random_range(2..=8);
        let r = rng.random_range(1..=m.min(n));
        let mut sv = vec![4.0];
        while sv.len() < r {
            sv.push(sv[sv.len() - 1] - rng.random_range(0.1..0.6));
        }
        let k = rng.random_range(1..=r.min(4));
        let standard = random::feasible::<Complex64, _>(m, n, &sv, rng).standard().clone();
        let a = DualMatrix::new(standard, dualsvd_core::matrix::random_matrix(m, n, rng)).unwrap();
        let opt = rank_k_approx(&a, k).unwrap();
        let probe = optimality_probe(&a, k, 1000, rng).unwrap();

        let (uk, sk, vk) = leading_pairs(a.standard(), k);
        let pu = DMatrix::<Complex64>::identity(m, m) - &uk * uk.adjoint();
        let pv = DMatrix::<Complex64>::identity(n, n) - &vk * vk.adjoint();
        let closed = DualMatrix::new(&uk * sk * vk.adjoint(), a.infinitesimal() - &pu * a.infinitesimal() * &pv).unwrap();
        let (cu, cv) = (complement_basis(&uk), complement_basis(&vk));
        let oracle = (cu.adjoint() * a.infinitesimal() * cv).norm();
        Trial {
            violations: probe.violations.len(),
            closed_form: rep_diff(&opt.approx, &closed),
            complement: (opt.infinitesimal_error - oracle).abs(),
        }
    });
    let violations: usize = trials.iter().map(|t| t.violations).sum();
    let closed = max_of(trials.iter().map(|t| t.closed_form));
    let complement = max_of(trials.iter().map(|t| t.complement));
    ensure(violations == 0, || format!("{violations} probe candidates beat the optimum"))?;
    ensure(closed <= 1e-12, || format!("closed form differs by {closed:.2e}"))?;
    ensure(complement <= 1e-12, || format!("infinitesimal error differs from the complement oracle by {complement:.2e}"))?;
    Ok(format!(
        "50 instances x 1000 candidates, no violations; closed form {closed:.1e}, complement oracle {complement:.1e}"
    ))
}

fn degeneracy() -> Outcome {
    let spreads = run_trials(505, 10, |_, rng| {
        let m = rng.random_range(4..=12);
        let n = rng.random_range(4..=10);
        let a = DualMatrix::<Complex64>::random_normal(m, n, rng);
        let k = rng.random_range(1..=3);
        frobenius_rank_k_degeneracy_demo(&a, k, 100, rng).unwrap().spread
    });
    let spread = max_of(spreads);
    ensure(spread <= 1e-10, || format!("epsilon-part spread {spread:.2e}"))?;
    Ok(format!("10 matrices x 100 infinitesimal factors, epsilon-part spread {spread:.1e}"))
}

fn pseudo_inverse() -> Outcome {
    struct Trial {
        penrose: f64,
        agreement: f64,
    }
    let trials = run_trials(606, 100, |k, rng| {
        let m = rng.random_range(2..=20);
        let n = rng.random_range(2..=16);
        let r = rng.random_range(1..=m.min(n));
        let sv: Vec<f64> = (0..r).map(|_| rng.random_range(0.5..3.0)).collect();
        let mut sv = sv;
        sv.sort_by(|x, y| y.total_cmp(x));
        let a = if k % 2 == 0 {
            random::feasible::<f64, _>(m, n, &sv, rng).to_complex()
        } else {
            random::feasible::<Complex64, _>(m, n, &sv, rng)
        };
        let x = dmpgi(&a).unwrap().pinv;
        let res = compute_cdsvd(&a).unwrap();
        let factored = res
            .v
            .mul(&res.sigma.dual_inverse().unwrap())
            .and_then(|y| y.mul(&res.u.conj_transpose()))
            .unwrap();
        Trial {
            penrose: max_of(penrose_residuals(&a, &x).unwrap()),
            agreement: rep_diff(&x, &factored),
        }
    });
    let penrose = max_of(trials.iter().map(|t| t.penrose));
    let agreement = max_of(trials.iter().map(|t| t.agreement));
    ensure(penrose <= 1e-10, || format!("Penrose residual {penrose:.2e}"))?;
    ensure(agreement <= 1e-10, || format!("closed form vs factors {agreement:.2e}"))?;

    let mismatches = run_trials(202, 200, |k, rng| {
        let (a, _) = classifier_instance(k, rng);
        let exists = cdsvd_exists(&a).exists;
        match dmpgi(&a) {
            Ok(_) => !exists,
            Err(Error::Infeasible { .. }) => exists,
            Err(_) => true,
        }
    });
    let mismatches = mismatches.iter().filter(|b| **b).count();
    ensure(mismatches == 0, || format!("{mismatches} verdicts disagree with the classifier"))?;
    Ok(format!(
        "100 instances: Penrose {penrose:.1e}, agreement {agreement:.1e}; 200 classifier verdicts matched"
    ))
}

fn traveling_pairs() -> Outcome {
    struct Trial {
        residual: f64,
        opposite: bool,
    }
    let trials = run_trials(707, 100, |_, rng| {
        let m = rng.random_range(3..=20);
        let n = rng.random_range(3..=20);
        let s1 = rng.random_range(1.5..4.0);
        let s2 = rng.random_range(0.5..s1 - 0.3);
        let standard = random::feasible::<f64, _>(m, n, &[s1, s2], rng).standard().clone();
        let mix = dualsvd_core::matrix::random_matrix::<f64, _>(n, n, rng);
        let a = DualMatrix::new(standard.clone(), &standard * mix).unwrap();
        let res = compute_cdsvd(&a).unwrap();
        let (us, ui) = (res.u.standard(), res.u.infinitesimal());
        let alpha = us.column(1).dot(&ui.column(0));
        let beta = us.column(0).dot(&ui.column(1));
        let r1 = (ui.column(0) - us.column(1) * alpha).norm();
        let r2 = (ui.column(1) - us.column(0) * beta).norm();
        Trial {
            residual: r1.max(r2),
            opposite: alpha * beta < 0.0,
        }
    });
    let residual = max_of(trials.iter().map(|t| t.residual));
    let opposite = trials.iter().filter(|t| t.opposite).count();
    ensure(residual <= 1e-8, || format!("pairing residual {residual:.2e}"))?;
    ensure(opposite == 100, || format!("alpha*beta < 0 in only {opposite} of 100"))?;
    Ok(format!("100 rank-2 matrices: pairing residual {residual:.1e}, alpha*beta < 0 in all"))
}

/// Four standing waves and one traveling wave on random orthonormal spatial
/// modes, 201 unit-spaced samples.
fn rank_six_mixture(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    const STANDING: [(f64, f64); 4] = [(2.2, 1.0), (2.5, 0.8), (2.8, 0.6), (3.0, 0.5)];
    let modes = random::unitary_columns::<f64, _>(400, 6, rng);
    let times = uniform_times(201, 1.0);
    let mut x = DMatrix::zeros(400, times.len());
    for (j, (omega, w)) in STANDING.into_iter().enumerate() {
        x += synthesize_wave(&WaveParams::standing(0.0, omega, modes.column(j) * w).unwrap(), &times);
    }
    let traveling = WaveParams::new(0.0, 2.6, modes.column(4) * 0.55, modes.column(5) * 0.55).unwrap();
    x + synthesize_wave(&traveling, &times)
}

fn rank_recovery_under_noise() -> Outcome {
    let start = Instant::now();
    let reports = run_trials(808, 50, |_, rng| {
        let clean = rank_six_mixture(rng);
        let noisy = add_noise_at_snr(&clean, 0.16, rng).unwrap();
        let a = build_dual_from_series(&noisy, DerivativeScheme::FirstDiff, 1.0).unwrap();
        rank_recovery(Some(6), &a, &RankRecoveryOptions::default()).unwrap()
    });
    let elapsed = start.elapsed();
    let dual = reports.iter().filter(|r| r.estimated_rank == 6).count();
    let classical = reports.iter().filter(|r| r.classical_rank == 6).count();
    ensure(dual >= 45, || format!("infinitesimal parts recovered rank 6 in {dual}/50"))?;
    ensure(classical < 45, || format!("standard parts recovered rank 6 in {classical}/50"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:.1?}"))?;
    Ok(format!("rank 6 from infinitesimal parts {dual}/50, from standard parts {classical}/50 ({elapsed:.1?})"))
}

fn combination_scene() -> Scene {
    let omega = |k: f64| 2.0 * std::f64::consts::PI * k / 160.0;
    let standing = |center, w, k| StandingSpec {
        center,
        sigma: 1.0,
        omega: omega(k),
        weight: w,
    };
    let traveling = |a, b, w, k| TravelingSpec {
        centers: [a, b],
        sigma: 1.0,
        omega: omega(k),
        weight: w,
    };
    Scene {
        grid: (200, 200),
        frames: 161,
        dt: 1.0,
        gamma: 0.0,
        standing: vec![
            standing((50.0, 50.0), 5.0, 3.0),
            standing((100.0, 100.0), 4.0, 5.0),
            standing((150.0, 70.0), 3.0, 7.0),
            standing((170.0, 180.0), 2.5, 9.0),
        ],
        traveling: vec![
            traveling((50.0, 100.0), (100.0, 50.0), 2.0, 4.0),
            traveling((120.0, 150.0), (70.0, 150.0), 1.5, 6.0),
        ],
        noise_snr: None,
        seed: 9,
    }
}

fn combination_waves() -> Outcome {
    let start = Instant::now();
    let scene = combination_scene();
    let x = scene.synthesize().map_err(|e| e.to_string())?;
    let a = build_dual_from_series(&x, DerivativeScheme::FirstDiff, scene.dt).map_err(|e| e.to_string())?;
    let res = compute_cdsvd(&a).map_err(|e| e.to_string())?;
    let report = detect_waves(&res, 8, &SimilarityThresholds::default(), scene.grid).map_err(|e| e.to_string())?;
    let unclassified = report
        .similarity
        .classes
        .iter()
        .filter(|c| matches!(c, ComponentClass::Unclassified))
        .count();
    ensure(report.standing.len() == 4 && report.traveling.len() == 2 && unclassified == 0, || {
        format!(
            "{} standing, {} traveling pairs, {unclassified} unclassified",
            report.standing.len(),
            report.traveling.len()
        )
    })?;

    let near = |p: &Peak, c: (f64, f64)| p.distance(c.0, c.1) <= 2.0;
    let mut worst: f64 = 0.0;
    for s in &scene.standing {
        let hit = report.standing.iter().map(|w| w.peak.distance(s.center.0, s.center.1)).fold(f64::INFINITY, f64::min);
        worst = worst.max(hit);
        ensure(hit <= 2.0, || format!("no standing peak near {:?}", s.center))?;
    }
    for t in &scene.traveling {
        let [c0, c1] = t.centers;
        let found = report.traveling.iter().any(|w| {
            let [p, q] = &w.peaks;
            (near(p, c0) && near(q, c1)) || (near(p, c1) && near(q, c0))
        });
        ensure(found, || format!("no traveling pair with peaks near {c0:?} and {c1:?}"))?;
    }
    for w in &report.traveling {
        for p in &w.peaks {
            let d = scene
                .ground_truth_peaks()
                .iter()
                .map(|c| p.distance(c.0, c.1))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:.1?}"))?;
    Ok(format!(
        "4 standing + 2 traveling pairs, all 10 peaks within {worst:.1} px ({elapsed:.1?})"
    ))
}

fn performance() -> Outcome {
    let mut rng = rng::stream(1010, 0);
    let a = DualMatrix::<f64>::random_normal(1000, 500, &mut rng);
    let start = Instant::now();
    let res = compute_cdsvd(&a).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let recon = rep_diff(&a, &res.reconstruct()) / rep_norm(&a);
    ensure(recon <= 1e-10, || format!("reconstruction residual {recon:.2e}"))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:.2?}"))?;
    Ok(format!("1000x500 real in {elapsed:.2?}, reconstruction {recon:.1e}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = rng::stream(1111, 0);
    let a = DualMatrix::<Complex64>::random_normal(5, 7, &mut rng);
    let prefix = dir.path().join("a");
    serialize_container(&a, &prefix).map_err(|e| e.to_string())?;
    let back = match parse_container(&prefix).map_err(|e| e.to_string())? {
        AnyDualMatrix::Complex(b) => b,
        AnyDualMatrix::Real(_) => return Err("complex container read back as real".into()),
    };
    let bits = |m: &DMatrix<Complex64>| m.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect::<Vec<_>>();
    ensure(
        bits(a.standard()) == bits(back.standard()) && bits(a.infinitesimal()) == bits(back.infinitesimal()),
        || "container round trip is not bit-exact".into(),
    )?;

    let noisy = Scene {
        noise_snr: Some(0.5),
        grid: (40, 40),
        ..combination_scene()
    };
    let shrink = |s: Scene| Scene {
        standing: s.standing.iter().map(|w| StandingSpec { center: (w.center.0 / 5.0, w.center.1 / 5.0), ..*w }).collect(),
        traveling: s
            .traveling
            .iter()
            .map(|w| TravelingSpec {
                centers: w.centers.map(|c| (c.0 / 5.0, c.1 / 5.0)),
                ..*w
            })
            .collect(),
        ..s
    };
    let scene = shrink(noisy);
    let first = render_csv(&scene.synthesize().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let second = render_csv(&scene.synthesize().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(first == second, || "identical seeds gave different scenes".into())?;

    let draw = || run_trials(7, 16, |_, r| r.random::<u64>());
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(draw);
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(draw);
    ensure(single == many, || "trial streams depend on the thread count".into())?;
    Ok(format!("round trip 0 ulp; {} scene bytes identical across runs; trials thread-independent", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("factorization correctness", factorization),
        ("existence classifier", existence),
        ("quasi-metric counterexample", quasi_metric),
        ("rank-k optimality", rank_k_optimality),
        ("Frobenius degeneracy", degeneracy),
        ("dual Moore-Penrose inverse", pseudo_inverse),
        ("traveling-wave pairing", traveling_pairs),
        ("rank recovery under noise", rank_recovery_under_noise),
        ("combination waves", combination_waves),
        ("performance", performance),
        ("I/O determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
