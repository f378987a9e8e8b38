//! Fractional spectral collocation toolkit.
//!
//! Builds Caputo and modified Riemann-Liouville fractional pseudospectral
//! differentiation matrices (F-PSDMs) at Jacobi-Gauss-Lobatto points,
//! constructs fractional Birkhoff interpolation bases whose matrices exactly
//! invert the interior differentiation matrices, and assembles
//! well-conditioned collocation systems for fractional differential
//! equations with an iterative (BiCGSTAB) solver.

pub mod birkhoff;
pub mod connection;
pub mod error;
pub mod fracmat;
pub mod linalg;
pub mod mittag;
pub mod orthopoly;
pub mod presets;
pub mod quadrature;
pub mod series;
pub mod solver;
pub mod special;
pub mod spectra;

pub use error::{Error, Result};
pub use orthopoly::JacobiParam;
pub use quadrature::QuadratureRule;
