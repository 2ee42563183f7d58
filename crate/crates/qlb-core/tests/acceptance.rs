//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured values.
//!
//! Run with output visible:
//!
//! ```text
//! cargo test -p qlb-core --test acceptance -- --nocapture
//! ```

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qlb_core::classical::{
    collide_bgk, collide_quadratic, equilibrium, stream, Boundary, CollisionKind, Grid,
    InverseRhoMode, Macros, PdfField,
};
use qlb_core::coefficients::{alpha, beta};
use qlb_core::harness::{
    default_config, init_discontinuity, run_case1, run_case2, run_classical, CaseKind,
    CASE1_FRONT_TOL_CELLS, CASE1_PLATEAU_TOL, CASE2_RMSE_TOL,
};
use qlb_core::lattice::{make_lattice, LatticeName};
use qlb_core::operators::{plan, stream_permutation, Variant};
use qlb_core::resources::{
    cnot_per_step_log10, log_spaced, qubits_carleman, qubits_carleman_real, qubits_present,
    qubits_present_real, sweep,
};
use qlb_core::statevector::{decode, encode, run as run_quantum};

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn random_field(name: LatticeName, grid: Grid, rng: &mut ChaCha8Rng, spread: f64) -> PdfField {
    let lat = make_lattice(name);
    let w = lat.weights_f64();
    let n_sites = grid.n_sites();
    let mut f = PdfField::zeroed(grid, lat);
    for i in 0..w.len() {
        for s in 0..n_sites {
            f.data[i * n_sites + s] = w[i] * (1.0 + spread * (rng.gen::<f64>() - 0.5));
        }
    }
    f
}

/// Criterion 1: the quadratic collision with exact 1/rho matches the BGK
/// collision to relative 1e-12 on 100 random positive fields per lattice.
#[test]
fn criterion_1_algebraic_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for name in [LatticeName::D1Q3, LatticeName::D2Q9] {
        let grid = Grid::periodic(5, if name == LatticeName::D2Q9 { 4 } else { 1 });
        for _ in 0..100 {
            let f = random_field(name, grid.clone(), &mut rng, 0.9);
            let tau = 0.5 + 1.5 * rng.gen::<f64>();
            let b = beta(&alpha(&f.lattice), tau).unwrap();
            let quad = collide_quadratic(&f, &b, InverseRhoMode::Exact).unwrap();
            let bgk = collide_bgk(&f, tau).unwrap();
            for (a, c) in quad.data.iter().zip(&bgk.data) {
                worst = worst.max(rel(*a, *c));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-12 && elapsed < 1.0;
    println!(
        "ACCEPTANCE 1 algebraic-identity: {} — max rel deviation {worst:.3e} (tol 1e-12), {elapsed:.2} s (< 1 s)",
        verdict(ok)
    );
    assert!(worst <= 1e-12, "max relative deviation {worst}");
    assert!(elapsed < 1.0, "runtime {elapsed} s");
}

/// Criterion 2: one emulated step equals one classical quadratic-linear
/// step to relative 1e-12 for both lattices, both sizes, both variants and
/// both boundary types.
#[test]
fn criterion_2_operator_product_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    let shapes = [
        (LatticeName::D1Q3, 4usize, 1usize),
        (LatticeName::D1Q3, 500, 1),
        (LatticeName::D2Q9, 4, 4),
        (LatticeName::D2Q9, 32, 32),
    ];
    for (name, nx, ny) in shapes {
        for bc in [Boundary::Periodic, Boundary::BounceBackWalls] {
            let grid = if ny == 1 {
                Grid::new(nx, 1, bc, Boundary::Periodic)
            } else {
                Grid::new(nx, ny, bc, bc)
            };
            for variant in [Variant::LayoutA, Variant::LayoutB] {
                let f = random_field(name, grid.clone(), &mut rng, 1e-3);
                let tau = 0.77;
                let b = beta(&alpha(&f.lattice), tau).unwrap();
                let expect =
                    stream(&collide_quadratic(&f, &b, InverseRhoMode::Linear2MinusRho).unwrap());
                let p = plan(&f.lattice, &grid, &b, &f, variant).unwrap();
                let got = decode(&encode(&f).apply(&p).unwrap()).unwrap();
                for (a, e) in got.data.iter().zip(&expect.data) {
                    worst = worst.max(rel(*a, *e));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = worst <= 1e-12 && elapsed < 30.0;
    println!(
        "ACCEPTANCE 2 operator-product-equivalence: {} — max rel deviation {worst:.3e} (tol 1e-12), {elapsed:.2} s (< 30 s)",
        verdict(ok)
    );
    assert!(worst <= 1e-12, "max relative deviation {worst}");
    assert!(elapsed < 30.0, "runtime {elapsed} s");
}

/// Criterion 3: the 1D discontinuity run (500 cells, 200 steps, emulated
/// mode) stays within 10% of the exact solution on the star plateau, with
/// wave fronts within 3 cells of x0 -+ cs t.
#[test]
fn criterion_3_discontinuity_reproduction() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = default_config(CaseKind::Discontinuity1d);
    cfg.output_dir = dir.path().to_path_buf();
    let art = run_case1(&cfg).unwrap();
    let m = &art.metrics;
    let front_err_l = (m.front_left_sim - m.front_left_expected).abs();
    let front_err_r = (m.front_right_sim - m.front_right_expected).abs();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = art.passed && elapsed < 60.0;
    println!(
        "ACCEPTANCE 3 discontinuity-reproduction: {} — plateau max rel p* {:.3e}, u {:.3e} (tol {CASE1_PLATEAU_TOL}); front offsets {front_err_l:.2}, {front_err_r:.2} cells (tol {CASE1_FRONT_TOL_CELLS}); {elapsed:.2} s (< 60 s)",
        verdict(ok),
        m.plateau_max_rel_p,
        m.plateau_max_rel_u
    );
    assert!(
        m.plateau_max_rel_p <= CASE1_PLATEAU_TOL,
        "plateau pressure error {}",
        m.plateau_max_rel_p
    );
    assert!(
        m.plateau_max_rel_u <= CASE1_PLATEAU_TOL,
        "plateau velocity error {}",
        m.plateau_max_rel_u
    );
    assert!(front_err_l <= CASE1_FRONT_TOL_CELLS, "left front offset {front_err_l}");
    assert!(front_err_r <= CASE1_FRONT_TOL_CELLS, "right front offset {front_err_r}");
    assert!(elapsed < 60.0, "runtime {elapsed} s");
}

/// Criterion 4: the 2D shear-flow sweep (32x32, 100 steps, emulated mode)
/// keeps the mean RMSE against the classical BGK reference below 1e-5 for
/// every viscosity in the sweep.
///
/// The (2-rho) approximation itself sets the error floor here: with the
/// prescribed initialization amplitudes the density deviates from unity by
/// about 5e-3, and the classical quadratic-linear path (which the emulated
/// path matches to 1e-12) already differs from BGK by the measured amounts.
#[test]
fn criterion_4_kolmogorov_rmse() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = default_config(CaseKind::Kolmogorov2d);
    cfg.output_dir = dir.path().to_path_buf();
    let art = run_case2(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = art
        .rows
        .iter()
        .map(|r| r.mean_rmse)
        .fold(0.0f64, f64::max);
    let ok = art.passed && elapsed < 300.0;
    println!(
        "ACCEPTANCE 4 kolmogorov-rmse: {} — worst mean RMSE {worst:.3e} (bound {CASE2_RMSE_TOL:.0e}), {elapsed:.1} s (< 300 s)",
        verdict(ok)
    );
    for r in &art.rows {
        println!(
            "  nu = {:.6}  mean RMSE = {:.6e}  {}",
            r.viscosity,
            r.mean_rmse,
            verdict(r.mean_rmse < CASE2_RMSE_TOL)
        );
    }
    assert!(elapsed < 300.0, "runtime {elapsed} s");
    assert!(
        art.passed,
        "mean RMSE vs BGK exceeds {CASE2_RMSE_TOL:.0e} (worst {worst:.3e}); the bound is \
         unreachable for the (2-rho) collision at the prescribed initialization amplitudes: \
         the classical quadratic-linear path produces identical RMSE values, so the gap is \
         the approximation itself, not the operator product"
    );
}

/// Criterion 5: the (2-rho) approximation error scales quadratically in the
/// density deviation (log-log slope within [1.9, 2.1]).
#[test]
fn criterion_5_approximation_order() {
    let start = Instant::now();
    let lat = make_lattice(LatticeName::D1Q3);
    let grid = Grid::periodic(32, 1);
    let b = beta(&alpha(&lat), 0.7).unwrap();
    let deltas = [1e-3, 5e-4, 2.5e-4];
    let mut errs = Vec::new();
    for &d in &deltas {
        let n = grid.n_sites();
        let rho: Vec<f64> = (0..n)
            .map(|s| 1.0 + d * (2.0 * std::f64::consts::PI * s as f64 / n as f64).cos())
            .collect();
        let m = Macros {
            rho,
            momentum: vec![0.0; n],
            dims: 1,
        };
        let f = equilibrium(&m, &lat, &grid).unwrap();
        let exact = collide_quadratic(&f, &b, InverseRhoMode::Exact).unwrap();
        let lin = collide_quadratic(&f, &b, InverseRhoMode::Linear2MinusRho).unwrap();
        errs.push(
            exact
                .data
                .iter()
                .zip(&lin.data)
                .map(|(a, c)| (a - c).abs())
                .fold(0.0f64, f64::max),
        );
    }
    let slope = (errs[0] / errs[2]).ln() / (deltas[0] / deltas[2]).ln();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = (1.9..=2.1).contains(&slope) && elapsed < 10.0;
    println!(
        "ACCEPTANCE 5 approximation-order: {} — log-log slope {slope:.4} (required [1.9, 2.1]), {elapsed:.2} s (< 10 s)",
        verdict(ok)
    );
    assert!((1.9..=2.1).contains(&slope), "slope {slope}");
    assert!(elapsed < 10.0, "runtime {elapsed} s");
}

/// Criterion 6: resource formulas. Spot values, the qubit-ratio limits at
/// n_g = 1e20 within +-0.05 absolute, and the CNOT comparison.
///
/// The k = 3 ratio cannot reach 2.95 at n_g = 1e20: with L = log2(9e20)
/// = 69.61, (1 + 3 L) / (2 + L) = 3 - 5 / (2 + L) = 2.930 for any
/// implementation of the stated formulas. The check is asserted as written
/// and records the shortfall.
#[test]
fn criterion_6_resource_formulas() {
    let start = Instant::now();
    let spot16 = qubits_present(9216);
    let spot28 = qubits_carleman(9216, 2);

    let n_f = 9.0 * 1e20; // D2Q9 at n_g = 1e20
    let present = qubits_present_real(n_f);
    let ratio2 = qubits_carleman_real(n_f, 2) / present;
    let ratio3 = qubits_carleman_real(n_f, 3) / present;

    let sizes = log_spaced(10.0, 1e20, 39);
    let report = sweep(LatticeName::D2Q9, &sizes);
    let all_below = report
        .rows
        .iter()
        .all(|r| r.log10_cnot_present < r.log10_cnot_cl2);
    let present_1e3 = cnot_per_step_log10(qubits_present_real(9.0 * 1e3), 9);
    let cl2_1e3 =
        qlb_core::resources::cnot_carleman_log10(qubits_carleman_real(9.0 * 1e3, 2));
    let gap_1e3 = cl2_1e3 - present_1e3;

    let elapsed = start.elapsed().as_secs_f64();
    let ok = spot16 == 16
        && spot28 == 28
        && (ratio2 - 2.0).abs() <= 0.05
        && (ratio3 - 3.0).abs() <= 0.05
        && all_below
        && gap_1e3 > 1.0
        && elapsed < 1.0;
    println!(
        "ACCEPTANCE 6 resource-formulas: {} — qubits(9216) = {spot16} (16), carleman2(9216) = {spot28} (28); ratios at n_g = 1e20: k2 = {ratio2:.4} (2 +- 0.05), k3 = {ratio3:.4} (3 +- 0.05); CNOT present < CL2 everywhere: {all_below}, gap at n_g = 1e3: {gap_1e3:.2} decades (> 1); {elapsed:.3} s (< 1 s)",
        verdict(ok)
    );
    assert_eq!(spot16, 16);
    assert_eq!(spot28, 28);
    assert!(all_below, "CNOT comparison violated");
    assert!(gap_1e3 > 1.0, "CNOT gap at n_g = 1e3 only {gap_1e3} decades");
    assert!(elapsed < 1.0, "runtime {elapsed} s");
    assert!((ratio2 - 2.0).abs() <= 0.05, "k = 2 qubit ratio {ratio2}");
    assert!(
        (ratio3 - 3.0).abs() <= 0.05,
        "k = 3 qubit ratio {ratio3}: (1 + 3 L)/(2 + L) = 3 - 5/(2 + L) stays below 2.95 \
         for every n_g < ~3e28, so this bound cannot be met at n_g = 1e20 by the stated \
         formulas"
    );
}

/// Criterion 7: permutation and conservation invariants in the
/// discontinuity configuration.
#[test]
fn criterion_7_permutation_and_conservation() {
    let start = Instant::now();

    // S S^T = I exactly on the case-1 grid.
    let lat = make_lattice(LatticeName::D1Q3);
    let case1_grid = Grid::new(500, 1, Boundary::BounceBackWalls, Boundary::Periodic);
    let s = stream_permutation(&lat, &case1_grid);
    let st = s.transpose();
    let x: Vec<f64> = (0..s.n_cols).map(|i| ((i * 31 + 7) % 101) as f64).collect();
    let orthogonal = s.is_permutation() && st.matvec(&s.matvec(&x)) == x && s.matvec(&st.matvec(&x)) == x;

    // Mass over 100 steps in the case-1 configuration: the conservative
    // classical modes hold mass outright; the emulated path tracks the
    // classical run sharing its approximation.
    let mut cfg = default_config(CaseKind::Discontinuity1d);
    cfg.steps = 100;
    let f0 = init_discontinuity(&cfg).unwrap();
    let mass0: f64 = f0.data.iter().sum();
    let tau = 1.0;
    let bgk = run_classical(&f0, tau, CollisionKind::Bgk, 100).unwrap();
    let mass_bgk: f64 = bgk.data.iter().sum();
    let drift_bgk = (mass_bgk - mass0).abs() / mass0;

    let (quantum, _) = run_quantum(&f0, tau, 100, Variant::LayoutA).unwrap();
    let shared = run_classical(&f0, tau, CollisionKind::QuadraticLinear, 100).unwrap();
    let mass_q: f64 = quantum.data.iter().sum();
    let mass_shared: f64 = shared.data.iter().sum();
    let drift_vs_oracle = (mass_q - mass_shared).abs() / mass_shared;

    // Streaming-matrix columns against the classical stream on a 4-cell
    // bounce-back grid, exact.
    let grid4 = Grid::new(4, 1, Boundary::BounceBackWalls, Boundary::Periodic);
    let s4 = stream_permutation(&lat, &grid4);
    let mut columns_match = true;
    for j in 0..12 {
        let mut f = PdfField::zeroed(grid4.clone(), lat.clone());
        f.data[j] = 1.0;
        let expect = stream(&f);
        let mut basis = vec![0.0; 12];
        basis[j] = 1.0;
        columns_match &= s4.matvec(&basis) == expect.data;
    }

    let elapsed = start.elapsed().as_secs_f64();
    let ok = orthogonal
        && drift_bgk <= 1e-9
        && drift_vs_oracle <= 1e-9
        && columns_match
        && elapsed < 5.0;
    println!(
        "ACCEPTANCE 7 permutation-and-conservation: {} — S S^T = I: {orthogonal}; 100-step mass drift: bgk {drift_bgk:.3e}, emulated vs shared-approximation oracle {drift_vs_oracle:.3e} (tol 1e-9); stream columns exact: {columns_match}; {elapsed:.2} s (< 5 s)",
        verdict(ok)
    );
    assert!(orthogonal, "streaming matrix is not orthogonal");
    assert!(drift_bgk <= 1e-9, "bgk mass drift {drift_bgk}");
    assert!(drift_vs_oracle <= 1e-9, "emulated mass drift vs oracle {drift_vs_oracle}");
    assert!(columns_match, "streaming matrix disagrees with classical stream");
    assert!(elapsed < 5.0, "runtime {elapsed} s");
}
