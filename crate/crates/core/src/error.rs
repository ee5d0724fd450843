//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported quadrature size {0}")]
    UnsupportedQuadrature(usize),

    #[error("unsupported polynomial order {0} (supported: 1..=4)")]
    UnsupportedOrder(usize),

    #[error("invalid state: {reason} (rho={rho:.6e}, p={p:.6e})")]
    InvalidState { reason: &'static str, rho: f64, p: f64 },

    #[error("invalid state in grid {grid} element {element}: {reason}")]
    InvalidStateAt { grid: usize, element: usize, reason: &'static str },

    #[error("degenerate element geometry: {0}")]
    GeometricDegeneracy(String),

    #[error("degenerate rectangle: {0}")]
    DegenerateRectangle(String),

    #[error("no donor found for point ({x:.12e}, {y:.12e}) needed by grid {receptor_grid}")]
    OrphanPoint { receptor_grid: usize, x: f64, y: f64 },

    #[error("overset assembly failed: {0}")]
    Assembly(String),

    #[error("linear-weight system is singular at reconstruction point {point:.12e}")]
    SingularWeights { point: f64 },

    #[error("mismatched lengths: {0}")]
    Mismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("solver aborted at t={time:.6e}, step {step}: {source}")]
    Abort { time: f64, step: usize, source: Box<Error> },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
