//! The two verification cases and the resource sweep.

use std::path::PathBuf;

use rayon::prelude::*;

use crate::classical::{
    collide_bgk, collide_quadratic, equilibrium, moments, stream, Boundary, CollisionKind, Grid,
    InverseRhoMode, Macros, PdfField,
};
use crate::coefficients::{alpha, beta, tau_from_viscosity};
use crate::error::{Error, Result};
use crate::harness::{fmt_f64, rmse, CaseConfig, CaseKind, Mode, RmseResult};
use crate::lattice::{make_lattice, LatticeName};
use crate::resources::{log_spaced, sweep, ResourceReport};
use crate::riemann::RiemannSetup;
use crate::statevector::{run as run_quantum, StepTrace};

use super::output::atomic_write;

/// Acceptance gate on the star-region plateau of the discontinuity case.
pub const CASE1_PLATEAU_TOL: f64 = 0.10;
/// Wave fronts must sit within this many cells of x0 -+ cs t.
pub const CASE1_FRONT_TOL_CELLS: f64 = 3.0;
/// Per-viscosity bound on the mean RMSE of the 2D case.
pub const CASE2_RMSE_TOL: f64 = 1e-5;

/// Equilibrium field for the resting density step: rho = 1 + delta_rho on
/// cells x <= nx/2 (inclusive, 0-indexed), walls at both ends.
pub fn init_discontinuity(cfg: &CaseConfig) -> Result<PdfField> {
    if cfg.lattice != LatticeName::D1Q3 || cfg.ny != 1 {
        return Err(Error::Config(
            "discontinuity case needs lattice=d1q3 and ny=1".to_string(),
        ));
    }
    let lat = make_lattice(cfg.lattice);
    let grid = Grid::new(cfg.nx, 1, Boundary::BounceBackWalls, Boundary::Periodic);
    let rho: Vec<f64> = (0..cfg.nx)
        .map(|x| if x <= cfg.nx / 2 { 1.0 + cfg.delta_rho } else { 1.0 })
        .collect();
    let m = Macros {
        rho,
        momentum: vec![0.0; cfg.nx],
        dims: 1,
    };
    equilibrium(&m, &lat, &grid)
}

/// Shear-flow initialization on a doubly periodic grid:
/// f_i(x, y) = w_i [1 + A_x cos(2 pi k_x y / ny) e_ix
///                    + A_y cos(2 pi k_y x / nx) e_iy].
pub fn init_kolmogorov(cfg: &CaseConfig) -> Result<PdfField> {
    if cfg.lattice != LatticeName::D2Q9 {
        return Err(Error::Config("kolmogorov case needs lattice=d2q9".to_string()));
    }
    let lat = make_lattice(cfg.lattice);
    let grid = Grid::periodic(cfg.nx, cfg.ny);
    let w = lat.weights_f64();
    let n_sites = grid.n_sites();
    let tau_x = 2.0 * std::f64::consts::PI * f64::from(cfg.k_x) / cfg.ny as f64;
    let tau_y = 2.0 * std::f64::consts::PI * f64::from(cfg.k_y) / cfg.nx as f64;
    let mut f = PdfField::zeroed(grid.clone(), lat.clone());
    for i in 0..lat.n_e() {
        let e = lat.velocity_f64(i);
        for y in 0..cfg.ny {
            let shear_x = cfg.a_x * (tau_x * y as f64).cos();
            for x in 0..cfg.nx {
                let shear_y = cfg.a_y * (tau_y * x as f64).cos();
                f.data[i * n_sites + grid.idx(x, y, 0)] =
                    w[i] * (1.0 + shear_x * e[0] + shear_y * e[1]);
            }
        }
    }
    Ok(f)
}

/// Runs `steps` classical updates with the beta tensor built once.
pub fn run_classical(
    f0: &PdfField,
    tau: f64,
    kind: CollisionKind,
    steps: usize,
) -> Result<PdfField> {
    let mut f = f0.clone();
    match kind {
        CollisionKind::Bgk => {
            for _ in 0..steps {
                f = stream(&collide_bgk(&f, tau)?);
            }
        }
        CollisionKind::QuadraticExact | CollisionKind::QuadraticLinear => {
            let b = beta(&alpha(&f.lattice), tau)?;
            let mode = if kind == CollisionKind::QuadraticExact {
                InverseRhoMode::Exact
            } else {
                InverseRhoMode::Linear2MinusRho
            };
            for _ in 0..steps {
                f = stream(&collide_quadratic(&f, &b, mode)?);
            }
        }
    }
    Ok(f)
}

fn evolve(cfg: &CaseConfig, f0: &PdfField, tau: f64) -> Result<(PdfField, Option<StepTrace>)> {
    match cfg.mode {
        Mode::QuantumEmulated => {
            let (f, trace) = run_quantum(f0, tau, cfg.steps, cfg.variant)?;
            Ok((f, Some(trace)))
        }
        Mode::ClassicalQuadratic => Ok((
            run_classical(f0, tau, CollisionKind::QuadraticLinear, cfg.steps)?,
            None,
        )),
        Mode::ClassicalBgk => Ok((run_classical(f0, tau, CollisionKind::Bgk, cfg.steps)?, None)),
    }
}

/// Position and plateau metrics of the discontinuity run.
#[derive(Debug, Clone)]
pub struct Case1Metrics {
    pub front_left_sim: f64,
    pub front_right_sim: f64,
    pub front_left_expected: f64,
    pub front_right_expected: f64,
    pub plateau_cells: (usize, usize),
    pub plateau_max_rel_p: f64,
    pub plateau_max_rel_u: f64,
    pub plateau_l2_rel_p: f64,
    pub plateau_l2_rel_u: f64,
}

#[derive(Debug)]
pub struct Case1Artifacts {
    pub csv: PathBuf,
    pub trace_csv: Option<PathBuf>,
    pub metrics: Case1Metrics,
    pub passed: bool,
}

fn first_crossing_below(values: &[f64], threshold: f64) -> Option<f64> {
    for i in 1..values.len() {
        if values[i - 1] >= threshold && values[i] < threshold {
            let t = (threshold - values[i - 1]) / (values[i] - values[i - 1]);
            return Some((i - 1) as f64 + t);
        }
    }
    None
}

/// Runs the 1D discontinuity case and compares against the exact solution.
pub fn run_case1(cfg: &CaseConfig) -> Result<Case1Artifacts> {
    if cfg.case != CaseKind::Discontinuity1d {
        return Err(Error::Config(format!("run_case1 got case {}", cfg.case)));
    }
    let f0 = init_discontinuity(cfg)?;
    let nu = cfg.viscosities[0];
    let tau = tau_from_viscosity(nu)?;
    let (f, trace) = evolve(cfg, &f0, tau)?;

    let lat = &f.lattice;
    let cs = lat.cs2_f64().sqrt();
    let m = moments(&f);
    let n = cfg.nx;
    let p_sim: Vec<f64> = m
        .rho
        .iter()
        .map(|r| {
            if cfg.delta_rho == 0.0 {
                0.0
            } else {
                (r - 1.0) / cfg.delta_rho
            }
        })
        .collect();
    let u_sim: Vec<f64> = (0..n).map(|s| m.velocity(0, s)).collect();

    let xs: Vec<f64> = (0..n).map(|x| x as f64).collect();
    let setup = RiemannSetup::discontinuity(n, cfg.delta_rho, cs, cfg.steps as f64);
    let exact = setup.solve(&xs)?;

    // Wave fronts from the half-jump crossings of the normalized pressure.
    let t = cfg.steps as f64;
    let front_left_expected = setup.x0 - cs * t;
    let front_right_expected = setup.x0 + cs * t;
    let front_left_sim = first_crossing_below(&p_sim, 0.75).unwrap_or(f64::NAN);
    let front_right_sim = first_crossing_below(&p_sim, 0.25).unwrap_or(f64::NAN);

    // Star-region plateau, excluding the viscous smearing around the fronts.
    let margin = (3.0 * (2.0 * nu * t).sqrt()).ceil().max(5.0);
    let lo = (front_left_expected + margin).ceil() as usize;
    let hi = (front_right_expected - margin).floor() as usize;
    let star = setup.star_state()?;
    let p_star_exact = if cfg.delta_rho == 0.0 {
        0.0
    } else {
        (star.rho - 1.0) / cfg.delta_rho
    };
    if lo >= hi {
        return Err(Error::Config(format!(
            "no star plateau to evaluate: {} cells and {} steps leave nothing between the \
             front margins",
            cfg.nx, cfg.steps
        )));
    }
    let (mut max_p, mut max_u, mut l2_p, mut l2_u) = (0.0f64, 0.0f64, 0.0, 0.0);
    for x in lo..=hi {
        let rp = (p_sim[x] - exact.p_star[x]).abs() / p_star_exact.abs().max(1e-300);
        let ru = (u_sim[x] - exact.u[x]).abs() / star.u.abs().max(1e-300);
        max_p = max_p.max(rp);
        max_u = max_u.max(ru);
        l2_p += rp * rp;
        l2_u += ru * ru;
    }
    let count = (hi - lo + 1) as f64;
    let metrics = Case1Metrics {
        front_left_sim,
        front_right_sim,
        front_left_expected,
        front_right_expected,
        plateau_cells: (lo, hi),
        plateau_max_rel_p: max_p,
        plateau_max_rel_u: max_u,
        plateau_l2_rel_p: (l2_p / count).sqrt(),
        plateau_l2_rel_u: (l2_u / count).sqrt(),
    };

    std::fs::create_dir_all(&cfg.output_dir)?;
    let csv = cfg.output_dir.join("case1.csv");
    let mut buf = String::from("x,p_star_sim,u_sim,p_star_exact,u_exact\n");
    for x in 0..n {
        buf.push_str(&format!(
            "{x},{},{},{},{}\n",
            fmt_f64(p_sim[x]),
            fmt_f64(u_sim[x]),
            fmt_f64(exact.p_star[x]),
            fmt_f64(exact.u[x])
        ));
    }
    atomic_write(&csv, buf.as_bytes())?;

    let trace_csv = match trace {
        Some(trace) => {
            let path = cfg.output_dir.join("case1_trace.csv");
            let mut buf = Vec::new();
            trace.write_csv(&mut buf)?;
            atomic_write(&path, &buf)?;
            Some(path)
        }
        None => None,
    };

    let passed = metrics.plateau_max_rel_p <= CASE1_PLATEAU_TOL
        && metrics.plateau_max_rel_u <= CASE1_PLATEAU_TOL
        && (metrics.front_left_sim - metrics.front_left_expected).abs() <= CASE1_FRONT_TOL_CELLS
        && (metrics.front_right_sim - metrics.front_right_expected).abs() <= CASE1_FRONT_TOL_CELLS;

    Ok(Case1Artifacts {
        csv,
        trace_csv,
        metrics,
        passed,
    })
}

#[derive(Debug)]
pub struct Case2Artifacts {
    pub summary_csv: PathBuf,
    pub detail_csv: PathBuf,
    pub rows: Vec<RmseResult>,
    pub passed: bool,
}

/// Runs the 2D shear-flow sweep: for every viscosity, the configured mode
/// against the BGK reference, reporting the mean RMSE per viscosity.
pub fn run_case2(cfg: &CaseConfig) -> Result<Case2Artifacts> {
    if cfg.case != CaseKind::Kolmogorov2d {
        return Err(Error::Config(format!("run_case2 got case {}", cfg.case)));
    }
    let f0 = init_kolmogorov(cfg)?;
    std::fs::create_dir_all(&cfg.output_dir)?;

    let results: Vec<(RmseResult, Option<StepTrace>)> = cfg
        .viscosities
        .par_iter()
        .map(|&nu| -> Result<(RmseResult, Option<StepTrace>)> {
            let tau = tau_from_viscosity(nu)?;
            let reference = run_classical(&f0, tau, CollisionKind::Bgk, cfg.steps)?;
            let (f, trace) = evolve(cfg, &f0, tau)?;
            let mut r = rmse(&f, &reference)?;
            r.viscosity = nu;
            Ok((r, trace))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(results.len());
    for (i, (row, trace)) in results.into_iter().enumerate() {
        if let Some(trace) = trace {
            let path = cfg.output_dir.join(format!("case2_trace_{i:02}.csv"));
            let mut buf = Vec::new();
            trace.write_csv(&mut buf)?;
            atomic_write(&path, &buf)?;
        }
        rows.push(row);
    }

    let summary_csv = cfg.output_dir.join("case2_rmse.csv");
    let mut buf = String::from("nu,mean_rmse,mean_rmse_literal,flagged\n");
    for r in &rows {
        buf.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(r.viscosity),
            fmt_f64(r.mean_rmse),
            fmt_f64(r.mean_rmse_literal),
            r.flagged
        ));
    }
    atomic_write(&summary_csv, buf.as_bytes())?;

    let detail_csv = cfg.output_dir.join("case2_directions.csv");
    let mut buf = String::from("nu,direction,rmse\n");
    for r in &rows {
        for (d, v) in r.per_direction.iter().enumerate() {
            buf.push_str(&format!("{},{d},{}\n", fmt_f64(r.viscosity), fmt_f64(*v)));
        }
    }
    atomic_write(&detail_csv, buf.as_bytes())?;

    let passed = rows.iter().all(|r| r.mean_rmse < CASE2_RMSE_TOL);
    Ok(Case2Artifacts {
        summary_csv,
        detail_csv,
        rows,
        passed,
    })
}

/// Emits the qubit/CNOT scaling table.
pub fn run_resources(
    lattice: LatticeName,
    grid_min: f64,
    grid_max: f64,
    points: usize,
    output_dir: &std::path::Path,
) -> Result<(PathBuf, ResourceReport)> {
    if !(grid_min >= 1.0) || !(grid_max > grid_min) || points < 2 {
        return Err(Error::Config(format!(
            "invalid resource sweep range [{grid_min}, {grid_max}] with {points} points"
        )));
    }
    let report = sweep(lattice, &log_spaced(grid_min, grid_max, points));
    std::fs::create_dir_all(output_dir)?;
    let path = output_dir.join("resources.csv");
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    atomic_write(&path, &buf)?;
    Ok((path, report))
}
