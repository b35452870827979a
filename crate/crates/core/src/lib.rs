//! Information geometry on the probability simplex and on density matrices.
//!
//! Canonical and dual divergences are computed as path integrals along
//! mixture and exponential geodesics and agree with the Kullback-Leibler
//! divergence and the quantum relative entropy. The `complexity` module
//! measures how far a joint distribution or a multi-qubit state lies from
//! families of interaction-restricted reference systems.

pub mod complexity;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod quantum;
pub mod sampling;
pub mod simplex;

pub use complexity::OptimizerConfig;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, SpectralDecomposition};
pub use quadrature::QuadratureConfig;
pub use quantum::DensityMatrix;
pub use simplex::ProbabilityVector;
