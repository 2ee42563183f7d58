//! Exact Riemann solution of the 1D isothermal Euler equations
//! (p = cs^2 rho), used as the reference for the discontinuity case.
//!
//! For a density jump at rest the solution is a left-moving rarefaction and
//! a right-moving shock around a star state found by matching velocities
//! across both waves. A linear-acoustics closed form is provided alongside;
//! in the weak-wave regime the two are interchangeable and cross-checked in
//! tests.

use crate::error::{Error, Result};

/// Initial data: two half-states at rest separated at `x0`.
#[derive(Debug, Clone)]
pub struct RiemannSetup {
    pub rho_left: f64,
    pub rho_right: f64,
    /// Isothermal sound speed.
    pub cs: f64,
    /// Evaluation time.
    pub t: f64,
    /// Interface position.
    pub x0: f64,
}

/// Sampled solution: normalized pressure and velocity.
#[derive(Debug, Clone)]
pub struct RiemannSolution {
    pub p_star: Vec<f64>,
    pub u: Vec<f64>,
}

/// Star state between the two waves.
#[derive(Debug, Clone, Copy)]
pub struct StarState {
    pub rho: f64,
    pub u: f64,
}

impl RiemannSetup {
    /// Setup matching the discontinuity initialization: the left state is
    /// `1 + delta_rho` over cells `x <= n_g / 2` (inclusive, 0-indexed), so
    /// the interface sits half a cell beyond that.
    pub fn discontinuity(n_g: usize, delta_rho: f64, cs: f64, t: f64) -> Self {
        RiemannSetup {
            rho_left: 1.0 + delta_rho,
            rho_right: 1.0,
            cs,
            t,
            x0: (n_g / 2) as f64 + 0.5,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.rho_left > 0.0) {
            return Err(Error::Vacuum(self.rho_left));
        }
        if !(self.rho_right > 0.0) {
            return Err(Error::Vacuum(self.rho_right));
        }
        if !(self.cs > 0.0) || self.t < 0.0 {
            return Err(Error::Config(format!(
                "invalid Riemann setup: cs = {}, t = {}",
                self.cs, self.t
            )));
        }
        Ok(())
    }

    /// Velocity reached behind the left wave for a trial star density.
    /// Rarefaction branch for rho <= rho_left, shock branch above.
    fn u_from_left(&self, rho: f64) -> f64 {
        let c = self.cs;
        if rho <= self.rho_left {
            -c * (rho / self.rho_left).ln()
        } else {
            -c * (rho - self.rho_left) / (rho * self.rho_left).sqrt()
        }
    }

    /// Velocity reached behind the right wave for a trial star density.
    fn u_from_right(&self, rho: f64) -> f64 {
        let c = self.cs;
        if rho <= self.rho_right {
            c * (rho / self.rho_right).ln()
        } else {
            c * (rho - self.rho_right) / (rho * self.rho_right).sqrt()
        }
    }

    /// Solves the velocity-matching equation by bisection.
    pub fn star_state(&self) -> Result<StarState> {
        self.check()?;
        if self.rho_left == self.rho_right {
            return Ok(StarState {
                rho: self.rho_left,
                u: 0.0,
            });
        }
        let g = |rho: f64| self.u_from_left(rho) - self.u_from_right(rho);
        let mut lo = 1e-12 * self.rho_left.min(self.rho_right);
        let mut hi = self.rho_left.max(self.rho_right);
        while g(hi) > 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Config("star-state bracketing failed".to_string()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi.max(1.0) {
                break;
            }
        }
        let rho = 0.5 * (lo + hi);
        Ok(StarState {
            rho,
            u: self.u_from_left(rho),
        })
    }

    /// Samples density and velocity at positions `xs` and time `t`.
    pub fn sample(&self, xs: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let star = self.star_state()?;
        let c = self.cs;
        let (rho_l, rho_r) = (self.rho_left, self.rho_right);

        let state_at = |xi: f64| -> (f64, f64) {
            // Left wave.
            if star.rho <= rho_l {
                let head = -c;
                let tail = star.u - c;
                if xi <= head {
                    return (rho_l, 0.0);
                }
                if xi < tail {
                    let u = xi + c;
                    return (rho_l * (-u / c).exp(), u);
                }
            } else {
                let s_left = -c * (star.rho / rho_l).sqrt();
                if xi <= s_left {
                    return (rho_l, 0.0);
                }
            }
            // Right wave.
            if star.rho > rho_r {
                let s_right = c * (star.rho / rho_r).sqrt();
                if xi >= s_right {
                    return (rho_r, 0.0);
                }
            } else {
                let head = c;
                let tail = star.u + c;
                if xi >= head {
                    return (rho_r, 0.0);
                }
                if xi > tail {
                    let u = xi - c;
                    return (rho_r * (u / c).exp(), u);
                }
            }
            (star.rho, star.u)
        };

        let mut rho = Vec::with_capacity(xs.len());
        let mut u = Vec::with_capacity(xs.len());
        for &x in xs {
            if self.t == 0.0 {
                let (r, v) = if x <= self.x0 { (rho_l, 0.0) } else { (rho_r, 0.0) };
                rho.push(r);
                u.push(v);
            } else {
                let (r, v) = state_at((x - self.x0) / self.t);
                rho.push(r);
                u.push(v);
            }
        }
        Ok((rho, u))
    }

    /// Exact solution in normalized-pressure form:
    /// p* = (p - p_right) / (delta_rho cs^2) = (rho - rho_right) / delta_rho.
    pub fn solve(&self, xs: &[f64]) -> Result<RiemannSolution> {
        let (rho, u) = self.sample(xs)?;
        let delta = self.rho_left - self.rho_right;
        let p_star = rho
            .iter()
            .map(|r| {
                if delta == 0.0 {
                    0.0
                } else {
                    (r - self.rho_right) / delta
                }
            })
            .collect();
        Ok(RiemannSolution { p_star, u })
    }

    /// Linear-acoustics closed form: two fronts at x0 -+ cs t, star values
    /// p* = 1/2 and u = cs delta_rho / (2 rho_right).
    pub fn solve_linear(&self, xs: &[f64]) -> Result<RiemannSolution> {
        self.check()?;
        let c = self.cs;
        let delta = self.rho_left - self.rho_right;
        let u_star = c * delta / (2.0 * self.rho_right);
        let mut p_star = Vec::with_capacity(xs.len());
        let mut u = Vec::with_capacity(xs.len());
        for &x in xs {
            let xi = if self.t == 0.0 {
                if x <= self.x0 {
                    -f64::INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                (x - self.x0) / self.t
            };
            if xi < -c {
                p_star.push(1.0);
                u.push(0.0);
            } else if xi > c {
                p_star.push(0.0);
                u.push(0.0);
            } else {
                p_star.push(0.5);
                u.push(u_star);
            }
        }
        Ok(RiemannSolution { p_star, u })
    }
}
