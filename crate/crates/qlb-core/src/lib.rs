//! Lattice Boltzmann solver whose collision step is decomposed into a finite
//! product of sparse operators applied to an amplitude-encoded statevector.
//!
//! The crate provides both paths end to end: a classical BGK reference
//! solver, the quadratic collision form it is algebraically equivalent to,
//! the operator decomposition of that form under the weakly compressible
//! (2 - rho) approximation, and an emulated quantum register that applies
//! the operator product. Verification utilities include an exact isothermal
//! Riemann solution, an RMSE sweep harness and qubit/CNOT resource
//! estimates against Carleman linearization.

pub mod classical;
pub mod coefficients;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod operators;
pub mod resources;
pub mod riemann;
pub mod statevector;

pub use classical::{
    Boundary, CollisionKind, Grid, InverseRhoMode, Macros, PdfField,
};
pub use coefficients::{AlphaTensor, BetaTensor};
pub use error::{Error, Result};
pub use harness::{CaseConfig, CaseKind, Mode, RmseResult};
pub use lattice::{make_lattice, LatticeModel, LatticeName};
pub use operators::{OperatorPlan, SparseOperator, Variant};
pub use resources::ResourceReport;
pub use riemann::RiemannSetup;
pub use statevector::{QlbState, StepTrace};
