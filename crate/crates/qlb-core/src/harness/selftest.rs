//! Built-in invariant suite behind the `selftest` CLI subcommand.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classical::{collide_bgk, collide_quadratic, stream, Grid, InverseRhoMode, PdfField};
use crate::coefficients::{alpha, beta};
use crate::lattice::{make_lattice, LatticeName};
use crate::operators::{plan, stream_permutation, Variant};
use crate::riemann::RiemannSetup;
use crate::statevector::{decode, encode};

/// One named check with its outcome.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
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

/// Runs the invariant suite with a fixed seed; every entry is independent.
pub fn selftest(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    // Lattice moment conditions in floating point.
    for name in [LatticeName::D1Q3, LatticeName::D2Q9] {
        let lat = make_lattice(name);
        let w = lat.weights_f64();
        let total: f64 = w.iter().sum();
        let mut first = [0.0; 2];
        let mut second = [[0.0; 2]; 2];
        for (wi, e) in w.iter().zip(&lat.velocities) {
            for a in 0..2 {
                first[a] += wi * f64::from(e[a]);
                for b in 0..2 {
                    second[a][b] += wi * f64::from(e[a] * e[b]);
                }
            }
        }
        let mut worst: f64 = (total - 1.0).abs();
        for a in 0..2 {
            worst = worst.max(first[a].abs());
            for b in 0..2 {
                let expect = if a == b && a < lat.dims { lat.cs2_f64() } else { 0.0 };
                worst = worst.max((second[a][b] - expect).abs());
            }
        }
        out.push(check(
            &format!("lattice_moments_{name}"),
            worst < 1e-15,
            format!("max condition residual {worst:.2e}"),
        ));
    }

    // Quadratic-exact collision against BGK.
    let mut worst = 0.0f64;
    for name in [LatticeName::D1Q3, LatticeName::D2Q9] {
        let grid = Grid::periodic(5, if name == LatticeName::D2Q9 { 4 } else { 1 });
        for _ in 0..20 {
            let f = random_field(name, grid.clone(), &mut rng, 0.8);
            let tau = 0.5 + rng.gen::<f64>();
            let b = beta(&alpha(&f.lattice), tau).unwrap();
            let quad = collide_quadratic(&f, &b, InverseRhoMode::Exact).unwrap();
            let bgk = collide_bgk(&f, tau).unwrap();
            for (a, c) in quad.data.iter().zip(&bgk.data) {
                worst = worst.max(rel(*a, *c));
            }
        }
    }
    out.push(check(
        "quadratic_exact_vs_bgk",
        worst < 1e-12,
        format!("max relative deviation {worst:.2e}"),
    ));

    // One emulated step against the classical linear collision.
    let mut worst = 0.0f64;
    for name in [LatticeName::D1Q3, LatticeName::D2Q9] {
        for variant in [Variant::LayoutA, Variant::LayoutB] {
            let grid = match name {
                LatticeName::D1Q3 => Grid::bounce_back(9, 1),
                LatticeName::D2Q9 => Grid::periodic(4, 4),
            };
            let f = random_field(name, grid.clone(), &mut rng, 1e-3);
            let tau = 0.7;
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
    out.push(check(
        "emulated_step_vs_classical",
        worst < 1e-12,
        format!("max relative deviation {worst:.2e}"),
    ));

    // Streaming matrix orthogonality.
    let mut ok = true;
    for (name, grid) in [
        (LatticeName::D1Q3, Grid::bounce_back(6, 1)),
        (LatticeName::D2Q9, Grid::periodic(4, 3)),
        (LatticeName::D2Q9, Grid::bounce_back(4, 3)),
    ] {
        let lat = make_lattice(name);
        let s = stream_permutation(&lat, &grid);
        let st = s.transpose();
        let x: Vec<f64> = (0..s.n_cols).map(|i| (i % 7) as f64 - 3.0).collect();
        ok &= s.is_permutation() && st.matvec(&s.matvec(&x)) == x;
    }
    out.push(check(
        "stream_matrix_orthogonal",
        ok,
        "S S^T = I on sample grids".to_string(),
    ));

    // Resource formula spot values.
    let spot = crate::resources::qubits_present(9216) == 16
        && crate::resources::qubits_carleman(9216, 2) == 28
        && (crate::resources::cnot_per_step_log10(1.0, 3) - 11f64.log10()).abs() < 1e-12;
    out.push(check(
        "resource_spot_values",
        spot,
        "qubits(9216)=16, carleman2(9216)=28, cnot(1,3)=log10(11)".to_string(),
    ));

    // Riemann star state in the weak-wave limit.
    let setup = RiemannSetup::discontinuity(500, 1e-6, 1.0 / 3f64.sqrt(), 200.0);
    let star = setup.star_state().unwrap();
    let p_star = (star.rho - 1.0) / 1e-6;
    out.push(check(
        "riemann_weak_wave_star",
        (p_star - 0.5).abs() < 1e-3,
        format!("normalized star pressure {p_star:.6}"),
    ));

    // RMSE hand value.
    let r_ok = {
        let lat = make_lattice(LatticeName::D1Q3);
        let mut e = PdfField::zeroed(Grid::periodic(2, 1), lat);
        e.data = vec![1.0; 6];
        let mut p = e.clone();
        p.data[0] = 1.3;
        p.data[1] = 1.4;
        let r = crate::harness::rmse(&p, &e).unwrap();
        (r.per_direction[0] - 0.25 * 2f64.sqrt()).abs() < 1e-15
    };
    out.push(check("rmse_hand_value", r_ok, "two-point value 0.25 sqrt(2)".to_string()));

    out
}
