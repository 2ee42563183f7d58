//! Classical reference solver: BGK collision, the quadratic-form collision in
//! both exact-1/rho and (2-rho) variants, and pull-style streaming with
//! periodic or halfway bounce-back boundaries.
//!
//! Populations are stored direction-major, `f[x + y*nx + i*nx*ny]`, the same
//! layout the streaming permutation and the statevector encoding use.

use std::io::Write;
use std::path::Path;

use crate::coefficients::{alpha, beta, BetaTensor};
use crate::error::{Error, Result};
use crate::lattice::LatticeModel;

/// Boundary rule for one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Halfway bounce-back walls on both ends of the axis.
    BounceBackWalls,
}

/// Cartesian grid with per-axis boundary rules. 1D grids use `ny = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub bc_x: Boundary,
    pub bc_y: Boundary,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, bc_x: Boundary, bc_y: Boundary) -> Self {
        assert!(nx > 0 && ny > 0, "grid must have at least one site");
        Grid { nx, ny, bc_x, bc_y }
    }

    pub fn periodic(nx: usize, ny: usize) -> Self {
        Grid::new(nx, ny, Boundary::Periodic, Boundary::Periodic)
    }

    pub fn bounce_back(nx: usize, ny: usize) -> Self {
        Grid::new(nx, ny, Boundary::BounceBackWalls, Boundary::BounceBackWalls)
    }

    pub fn n_sites(&self) -> usize {
        self.nx * self.ny
    }

    /// Flat population index: x + y nx + i nx ny.
    #[inline]
    pub fn idx(&self, x: usize, y: usize, direction: usize) -> usize {
        x + y * self.nx + direction * self.nx * self.ny
    }

    /// Pull source of the population arriving at (x, y) along `direction`.
    ///
    /// Interior and periodic links pull from the upstream neighbour; a link
    /// blocked by a wall pulls the reflected direction at the same site
    /// (halfway bounce-back). Diagonal links blocked on either axis reflect
    /// link-wise. This single definition feeds both the classical stream and
    /// the streaming matrix.
    pub fn pull_source(
        &self,
        lattice: &LatticeModel,
        x: usize,
        y: usize,
        direction: usize,
    ) -> (usize, usize, usize) {
        let e = lattice.velocities[direction];
        let raw_x = x as i64 - i64::from(e[0]);
        let raw_y = y as i64 - i64::from(e[1]);

        let resolve = |raw: i64, n: usize, bc: Boundary| -> Option<usize> {
            if (0..n as i64).contains(&raw) {
                Some(raw as usize)
            } else {
                match bc {
                    Boundary::Periodic => Some(raw.rem_euclid(n as i64) as usize),
                    Boundary::BounceBackWalls => None,
                }
            }
        };

        match (resolve(raw_x, self.nx, self.bc_x), resolve(raw_y, self.ny, self.bc_y)) {
            (Some(sx), Some(sy)) => (sx, sy, direction),
            _ => (x, y, lattice.reflect[direction]),
        }
    }
}

/// Per-site, per-direction populations on a grid.
#[derive(Debug, Clone)]
pub struct PdfField {
    pub grid: Grid,
    pub lattice: LatticeModel,
    pub data: Vec<f64>,
}

/// Zeroth and first moments per site. Momentum is component-major:
/// `momentum[axis * n_sites + site]`.
#[derive(Debug, Clone)]
pub struct Macros {
    pub rho: Vec<f64>,
    pub momentum: Vec<f64>,
    pub dims: usize,
}

impl Macros {
    pub fn velocity(&self, axis: usize, site: usize) -> f64 {
        self.momentum[axis * self.rho.len() + site] / self.rho[site]
    }
}

impl PdfField {
    pub fn zeroed(grid: Grid, lattice: LatticeModel) -> Self {
        let data = vec![0.0; grid.n_sites() * lattice.n_e()];
        PdfField { grid, lattice, data }
    }

    pub fn n_f(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, direction: usize) -> f64 {
        self.data[self.grid.idx(x, y, direction)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, direction: usize, value: f64) {
        let i = self.grid.idx(x, y, direction);
        self.data[i] = value;
    }

    /// Errors on non-finite entries; logs a warning for nonpositive ones
    /// (the (2-rho) collision can transiently undershoot).
    pub fn validate(&self) -> Result<()> {
        let mut nonpositive = 0usize;
        for (i, v) in self.data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::ShapeMismatch(format!(
                    "non-finite population {v} at flat index {i}"
                )));
            }
            if *v <= 0.0 {
                nonpositive += 1;
            }
        }
        if nonpositive > 0 {
            log::warn!(
                "field has {nonpositive} nonpositive population(s) out of {}",
                self.data.len()
            );
        }
        Ok(())
    }
}

/// Density and momentum per site.
pub fn moments(f: &PdfField) -> Macros {
    let n_sites = f.grid.n_sites();
    let n_e = f.lattice.n_e();
    let dims = f.lattice.dims;
    let mut rho = vec![0.0; n_sites];
    let mut momentum = vec![0.0; dims * n_sites];
    for i in 0..n_e {
        let e = f.lattice.velocity_f64(i);
        let block = &f.data[i * n_sites..(i + 1) * n_sites];
        for s in 0..n_sites {
            rho[s] += block[s];
            for a in 0..dims {
                momentum[a * n_sites + s] += e[a] * block[s];
            }
        }
    }
    Macros { rho, momentum, dims }
}

/// Second-order equilibrium populations for the given moments.
pub fn equilibrium(macros: &Macros, lattice: &LatticeModel, grid: &Grid) -> Result<PdfField> {
    let n_sites = grid.n_sites();
    let w = lattice.weights_f64();
    let cs2 = lattice.cs2_f64();
    let mut out = PdfField::zeroed(grid.clone(), lattice.clone());
    for s in 0..n_sites {
        let rho = macros.rho[s];
        if !(rho > 0.0) {
            return Err(Error::NonpositiveDensity { rho, site: s });
        }
        let mut u = [0.0; 2];
        for a in 0..macros.dims {
            u[a] = macros.momentum[a * n_sites + s] / rho;
        }
        let uu = u[0] * u[0] + u[1] * u[1];
        for i in 0..lattice.n_e() {
            let e = lattice.velocity_f64(i);
            let eu = e[0] * u[0] + e[1] * u[1];
            let val = w[i]
                * rho
                * (1.0 + eu / cs2 + eu * eu / (2.0 * cs2 * cs2) - uu / (2.0 * cs2));
            out.data[i * n_sites + s] = val;
        }
    }
    Ok(out)
}

/// BGK relaxation toward equilibrium: f* = f - (dt/tau)(f - f_eq).
pub fn collide_bgk(f: &PdfField, tau: f64) -> Result<PdfField> {
    if !(tau >= 0.5) {
        return Err(Error::UnstableTau(tau));
    }
    let omega = crate::coefficients::DT / tau;
    let eq = equilibrium(&moments(f), &f.lattice, &f.grid)?;
    let mut out = f.clone();
    for (o, (v, e)) in out.data.iter_mut().zip(f.data.iter().zip(eq.data.iter())) {
        *o = v - omega * (v - e);
    }
    Ok(out)
}

/// How the 1/rho prefactor of the quadratic collision form is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseRhoMode {
    Exact,
    /// First-order approximation 1/rho ~ 2 - rho (weakly compressible).
    Linear2MinusRho,
}

/// Quadratic-form collision. The exact mode is algebraically identical to
/// `collide_bgk`; the linear mode replaces 1/rho by (2 - rho).
///
/// The linear mode evaluates the form in the same nesting the operator
/// product uses (scale by (2 - rho) first, then contract), so the two paths
/// agree to rounding noise rather than merely to truncation order.
pub fn collide_quadratic(
    f: &PdfField,
    beta: &BetaTensor,
    mode: InverseRhoMode,
) -> Result<PdfField> {
    let n_e = f.lattice.n_e();
    if beta.n_e() != n_e {
        return Err(Error::DimensionMismatch(format!(
            "beta tensor has {} directions, field has {n_e}",
            beta.n_e()
        )));
    }
    let n_sites = f.grid.n_sites();
    let mut out = PdfField::zeroed(f.grid.clone(), f.lattice.clone());
    let mut f_site = vec![0.0; n_e];
    let mut scaled = vec![0.0; n_e];
    let mut undershoot = 0usize;
    for s in 0..n_sites {
        for i in 0..n_e {
            f_site[i] = f.data[i * n_sites + s];
        }
        let mut neg_rho = 0.0;
        for v in &f_site {
            neg_rho -= v;
        }
        match mode {
            InverseRhoMode::Exact => {
                let rho = -neg_rho;
                if !(rho > 0.0) {
                    return Err(Error::NonpositiveDensity { rho, site: s });
                }
                for i in 0..n_e {
                    let mut total = 0.0;
                    for j in 0..n_e {
                        let mut inner = 0.0;
                        for k in j..n_e {
                            inner += beta.get(i, j, k) * f_site[k];
                        }
                        total += f_site[j] * inner;
                    }
                    out.data[i * n_sites + s] = total / rho;
                }
            }
            InverseRhoMode::Linear2MinusRho => {
                let two_minus_rho = neg_rho + 2.0;
                for (g, v) in scaled.iter_mut().zip(&f_site) {
                    *g = v * two_minus_rho;
                }
                for i in 0..n_e {
                    let mut total = 0.0;
                    for j in 0..n_e {
                        let mut inner = 0.0;
                        for k in j..n_e {
                            inner += beta.get(i, j, k) * scaled[k];
                        }
                        total += f_site[j] * inner;
                    }
                    if total <= 0.0 {
                        undershoot += 1;
                    }
                    out.data[i * n_sites + s] = total;
                }
            }
        }
    }
    if undershoot > 0 {
        log::warn!("(2-rho) collision produced {undershoot} nonpositive population(s)");
    }
    Ok(out)
}

/// Pull-style streaming: each population is gathered from its upstream site,
/// with wall links reflected per halfway bounce-back.
pub fn stream(f: &PdfField) -> PdfField {
    let mut out = PdfField::zeroed(f.grid.clone(), f.lattice.clone());
    gather(f, &mut out.data);
    out
}

/// Data-parallel variant of `stream`. The gather is a pure permutation, so
/// the output is bitwise identical to the sequential version for any thread
/// count.
pub fn stream_par(f: &PdfField) -> PdfField {
    use rayon::prelude::*;
    let grid = f.grid.clone();
    let lattice = f.lattice.clone();
    let n_sites = grid.n_sites();
    let data: Vec<f64> = (0..f.data.len())
        .into_par_iter()
        .map(|flat| {
            let d = flat / n_sites;
            let rem = flat % n_sites;
            let y = rem / grid.nx;
            let x = rem % grid.nx;
            let (sx, sy, sd) = grid.pull_source(&lattice, x, y, d);
            f.data[grid.idx(sx, sy, sd)]
        })
        .collect();
    PdfField { grid, lattice, data }
}

fn gather(f: &PdfField, out: &mut [f64]) {
    let grid = &f.grid;
    for d in 0..f.lattice.n_e() {
        for y in 0..grid.ny {
            for x in 0..grid.nx {
                let (sx, sy, sd) = grid.pull_source(&f.lattice, x, y, d);
                out[grid.idx(x, y, d)] = f.data[grid.idx(sx, sy, sd)];
            }
        }
    }
}

/// Collision model selector for `step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionKind {
    Bgk,
    QuadraticExact,
    QuadraticLinear,
}

/// One full update: collide, then stream.
pub fn step(f: &PdfField, tau: f64, kind: CollisionKind) -> Result<PdfField> {
    let collided = match kind {
        CollisionKind::Bgk => collide_bgk(f, tau)?,
        CollisionKind::QuadraticExact | CollisionKind::QuadraticLinear => {
            let b = beta(&alpha(&f.lattice), tau)?;
            let mode = if kind == CollisionKind::QuadraticExact {
                InverseRhoMode::Exact
            } else {
                InverseRhoMode::Linear2MinusRho
            };
            collide_quadratic(f, &b, mode)?
        }
    };
    Ok(stream(&collided))
}

/// Writes a field snapshot as CSV (x, y, direction, f) plus a `.meta`
/// sidecar recording lattice, grid shape and step number.
pub fn write_field_csv(f: &PdfField, step: usize, path: &Path) -> Result<()> {
    let mut csv = std::fs::File::create(path)?;
    writeln!(csv, "x,y,direction,f")?;
    for d in 0..f.lattice.n_e() {
        for y in 0..f.grid.ny {
            for x in 0..f.grid.nx {
                writeln!(csv, "{x},{y},{d},{}", crate::harness::fmt_f64(f.get(x, y, d)))?;
            }
        }
    }
    let meta_path = path.with_extension("meta");
    let mut meta = std::fs::File::create(meta_path)?;
    writeln!(meta, "lattice={}", f.lattice.name)?;
    writeln!(meta, "nx={}", f.grid.nx)?;
    writeln!(meta, "ny={}", f.grid.ny)?;
    writeln!(meta, "step={step}")?;
    Ok(())
}
