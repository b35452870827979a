//! Complexity as divergence from a family of non-interacting reference systems.

pub mod classical;
pub mod quantum;

/// Stopping rule for the iterative projections.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Marginal residual (IPF) or gradient residual (Gibbs) at which to stop.
    pub tolerance: f64,
    /// IPF sweeps or optimizer iterations.
    pub max_iterations: usize,
}

impl OptimizerConfig {
    /// Defaults for iterative proportional fitting.
    pub fn ipf() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 10_000,
        }
    }

    /// Defaults for the Gibbs-family free-energy minimization.
    pub fn gibbs() -> Self {
        Self {
            tolerance: 1e-7,
            max_iterations: 10_000,
        }
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self::ipf()
    }
}
