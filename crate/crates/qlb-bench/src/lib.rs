//! Shared fixtures for the benchmarks.

use qlb_core::classical::{equilibrium, Grid, Macros, PdfField};
use qlb_core::lattice::{make_lattice, LatticeName};

/// Near-equilibrium field with a smooth density ripple, deterministic.
pub fn ripple_field(name: LatticeName, nx: usize, ny: usize, amplitude: f64) -> PdfField {
    let lat = make_lattice(name);
    let grid = Grid::periodic(nx, ny);
    let n = grid.n_sites();
    let rho: Vec<f64> = (0..n)
        .map(|s| 1.0 + amplitude * (2.0 * std::f64::consts::PI * s as f64 / n as f64).cos())
        .collect();
    let momentum = vec![0.0; lat.dims * n];
    let m = Macros {
        rho,
        momentum,
        dims: lat.dims,
    };
    equilibrium(&m, &lat, &grid).expect("positive density")
}
