//! Overset-grid discontinuous Galerkin solver for the 2D compressible Euler
//! equations.
//!
//! The library couples overlapping structured quadrilateral grids through an
//! element-based communication scheme: degrees of freedom of cells at an
//! artificial (overset) boundary are rebuilt from cell averages and
//! donor-interpolated point values by one-dimensional WENO reconstructions in
//! each grid direction. The same machinery doubles as a subcell WENO limiter
//! for interior troubled cells.
//!
//! Module map:
//! - [`basis`]: tensor-product orthonormal Legendre basis, Gauss and
//!   Gauss-Lobatto rules.
//! - [`euler`]: conserved-variable algebra, fluxes, numerical fluxes,
//!   characteristic decompositions.
//! - [`mesh`]: component grids, overlap classification, ghost cells, k-d tree
//!   donor search, Newton inversion of element maps.
//! - [`weno`]: 1D WENO reconstruction tableaux from cell averages.
//! - [`exchange`]: the inter-grid communication scheme (plans, gathering,
//!   directional reconstruction, install).
//! - [`limiter`]: KXRCF troubled-cell detection and subcell-WENO limiting.
//! - [`solver`]: modal DG residual, boundary conditions, RK4 time stepping.
//! - [`cases`]: experiment layer (initial data, exact solutions, error norms,
//!   runners, file output).

pub mod basis;
pub mod cases;
pub mod error;
pub mod euler;
pub mod exchange;
pub mod limiter;
pub mod mesh;
pub mod solver;
pub mod weno;

pub use basis::{gauss_lobatto_rule, gauss_rule, ModalBasis, QuadratureRule};
pub use cases::{CaseConfig, CaseKind, OversetLayout};
pub use error::Error;
pub use euler::{ConservedState, FluxKind, GAMMA};
pub use mesh::{ComponentGrid, OversetAssembly};
pub use solver::{DgSolver, FieldState, ModalField};
