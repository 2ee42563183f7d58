//! Coefficient tensors of the quadratic collision form.
//!
//! The BGK collision update can be written as a quadratic form in the
//! populations: the equilibrium part is carried by a third-order tensor
//! `alpha` built from lattice constants only, and the full post-collision
//! value by `beta`, which mixes `alpha` with identity terms weighted by the
//! relaxation rate. Both tensors are stored densely for all (i, j, k); the
//! upper-triangular restriction (j <= k) is applied where the tensors are
//! consumed, through the indicator `chi`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::lattice::LatticeModel;

/// Time step, fixed to one lattice unit.
pub const DT: f64 = 1.0;

/// Equilibrium coefficients alpha_ijk, indexed i, j, k in [0, n_e).
#[derive(Debug, Clone)]
pub struct AlphaTensor {
    n_e: usize,
    data: Vec<f64>,
}

/// Collision coefficients beta_ijk for a fixed relaxation parameter.
#[derive(Debug, Clone)]
pub struct BetaTensor {
    n_e: usize,
    tau: f64,
    data: Vec<f64>,
}

/// 1 when j <= k, else 0 (upper-triangular consumption).
#[inline]
pub fn chi(j: usize, k: usize) -> f64 {
    if j <= k {
        1.0
    } else {
        0.0
    }
}

/// Identity-part indicator: delta_ij + delta_ik - delta_ij * delta_ik.
#[inline]
pub fn gamma(i: usize, j: usize, k: usize) -> f64 {
    let dij = (i == j) as u8;
    let dik = (i == k) as u8;
    f64::from(dij + dik - dij * dik)
}

impl AlphaTensor {
    pub fn n_e(&self) -> usize {
        self.n_e
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n_e + j) * self.n_e + k]
    }

    /// Dumps all entries as CSV with columns i,j,k,value.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        write_tensor_csv(w, self.n_e, |i, j, k| self.get(i, j, k))
    }
}

impl BetaTensor {
    pub fn n_e(&self) -> usize {
        self.n_e
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n_e + j) * self.n_e + k]
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        write_tensor_csv(w, self.n_e, |i, j, k| self.get(i, j, k))
    }
}

fn write_tensor_csv<W: Write>(w: &mut W, n_e: usize, get: impl Fn(usize, usize, usize) -> f64) -> Result<()> {
    writeln!(w, "i,j,k,value")?;
    for i in 0..n_e {
        for j in 0..n_e {
            for k in 0..n_e {
                writeln!(w, "{i},{j},{k},{}", crate::harness::fmt_f64(get(i, j, k)))?;
            }
        }
    }
    Ok(())
}

/// Builds the equilibrium coefficient tensor for a lattice:
///
/// alpha_ijk = w_i (1/2)^{delta_jk} [ 2 + (e_i.e_j + e_i.e_k - e_j.e_k)/cs2
///                                      + (e_i.e_j)(e_i.e_k)/cs2^2 ]
pub fn alpha(lattice: &LatticeModel) -> AlphaTensor {
    let n_e = lattice.n_e();
    let w = lattice.weights_f64();
    let cs2 = lattice.cs2_f64();
    let inv_cs2 = 1.0 / cs2;
    let inv_cs4 = inv_cs2 * inv_cs2;

    let dot = |a: usize, b: usize| -> f64 {
        let ea = lattice.velocities[a];
        let eb = lattice.velocities[b];
        f64::from(ea[0] * eb[0] + ea[1] * eb[1])
    };

    let mut data = vec![0.0; n_e * n_e * n_e];
    for i in 0..n_e {
        for j in 0..n_e {
            for k in 0..n_e {
                let half = if j == k { 0.5 } else { 1.0 };
                let bracket =
                    2.0 + inv_cs2 * (dot(i, j) + dot(i, k) - dot(j, k)) + inv_cs4 * dot(i, j) * dot(i, k);
                data[(i * n_e + j) * n_e + k] = w[i] * half * bracket;
            }
        }
    }
    AlphaTensor { n_e, data }
}

/// Mixes alpha with the identity part:
///
/// beta_ijk = gamma_ijk (1 - dt/tau) + chi_jk (dt/tau) alpha_ijk
pub fn beta(alpha: &AlphaTensor, tau: f64) -> Result<BetaTensor> {
    if !(tau >= 0.5) {
        return Err(Error::UnstableTau(tau));
    }
    let n_e = alpha.n_e;
    let omega = DT / tau;
    let mut data = vec![0.0; n_e * n_e * n_e];
    for i in 0..n_e {
        for j in 0..n_e {
            for k in 0..n_e {
                data[(i * n_e + j) * n_e + k] =
                    gamma(i, j, k) * (1.0 - omega) + chi(j, k) * omega * alpha.get(i, j, k);
            }
        }
    }
    Ok(BetaTensor { n_e, tau, data })
}

/// tau = 3 nu + 0.5 in lattice units.
pub fn tau_from_viscosity(nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::NonpositiveViscosity(nu));
    }
    Ok(3.0 * nu + 0.5)
}
