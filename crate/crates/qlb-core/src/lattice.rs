//! DmQn lattice descriptors.
//!
//! Two lattices are provided. Direction 0 is the rest velocity; moving
//! directions are ordered axis-positive, axis-negative, then diagonals.
//! For D2Q9:
//!
//! ```text
//!   6   2   5
//!    \  |  /
//!   3 - 0 - 1
//!    /  |  \
//!   7   4   8
//! ```
//!
//! Weights and the squared sound speed are kept as exact rationals so the
//! moment conditions can be checked without floating-point slack; fields
//! convert to `f64` on initialization.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::error::{Error, Result};

/// Supported lattice models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeName {
    D1Q3,
    D2Q9,
}

impl fmt::Display for LatticeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeName::D1Q3 => write!(f, "d1q3"),
            LatticeName::D2Q9 => write!(f, "d2q9"),
        }
    }
}

impl FromStr for LatticeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d1q3" => Ok(LatticeName::D1Q3),
            "d2q9" => Ok(LatticeName::D2Q9),
            other => Err(Error::UnknownLattice(other.to_string())),
        }
    }
}

/// Velocity set, weights and reflection map of a DmQn lattice.
///
/// Velocities are stored as two-component integer vectors; 1D lattices use a
/// zero second component throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeModel {
    pub name: LatticeName,
    /// Number of spatial dimensions.
    pub dims: usize,
    /// Lattice velocities e_i in lattice units (dx/dt = 1).
    pub velocities: Vec<[i32; 2]>,
    /// Quadrature weights w_i, exact.
    pub weights: Vec<Rational64>,
    /// Squared sound speed, exact.
    pub cs2: Rational64,
    /// Opposite-direction map: velocities[reflect[i]] == -velocities[i].
    pub reflect: Vec<usize>,
}

impl LatticeModel {
    /// Number of velocity directions.
    pub fn n_e(&self) -> usize {
        self.velocities.len()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(ratio_to_f64).collect()
    }

    pub fn cs2_f64(&self) -> f64 {
        ratio_to_f64(&self.cs2)
    }

    pub fn velocity_f64(&self, i: usize) -> [f64; 2] {
        let e = self.velocities[i];
        [f64::from(e[0]), f64::from(e[1])]
    }
}

fn ratio_to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Builds the descriptor for one of the supported lattices.
pub fn make_lattice(name: LatticeName) -> LatticeModel {
    match name {
        LatticeName::D1Q3 => LatticeModel {
            name,
            dims: 1,
            velocities: vec![[0, 0], [1, 0], [-1, 0]],
            weights: vec![
                Rational64::new(2, 3),
                Rational64::new(1, 6),
                Rational64::new(1, 6),
            ],
            cs2: Rational64::new(1, 3),
            reflect: vec![0, 2, 1],
        },
        LatticeName::D2Q9 => {
            let velocities = vec![
                [0, 0],
                [1, 0],
                [0, 1],
                [-1, 0],
                [0, -1],
                [1, 1],
                [-1, 1],
                [-1, -1],
                [1, -1],
            ];
            let w = |n, d| Rational64::new(n, d);
            LatticeModel {
                name,
                dims: 2,
                velocities,
                weights: vec![
                    w(4, 9),
                    w(1, 9),
                    w(1, 9),
                    w(1, 9),
                    w(1, 9),
                    w(1, 36),
                    w(1, 36),
                    w(1, 36),
                    w(1, 36),
                ],
                cs2: Rational64::new(1, 3),
                reflect: vec![0, 3, 4, 1, 2, 7, 8, 5, 6],
            }
        }
    }
}

/// Parses a lattice name and builds its descriptor.
pub fn lattice_from_name(s: &str) -> Result<LatticeModel> {
    Ok(make_lattice(s.parse()?))
}
