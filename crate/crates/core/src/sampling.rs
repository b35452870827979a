//! Seeded random states for tests and the self-test harness.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::quantum::DensityMatrix;
use crate::simplex::ProbabilityVector;

/// Weight added to `G G† / Tr(G G†)` before renormalizing.
pub const DENSITY_FLOOR: f64 = 1e-3;

/// Half-width of the uniform exponents used for simplex samples.
const SIMPLEX_SPREAD: f64 = 3.0;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normalized exponentials of uniform variates on `[-3, 3]`.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbabilityVector {
    let w: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-SIMPLEX_SPREAD..=SIMPLEX_SPREAD).exp())
        .collect();
    ProbabilityVector::from_unnormalized(w).expect("exponentials are positive")
}

pub fn random_complex_gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random Hermitian matrix with Frobenius norm `norm` (so spectral norm ≤ `norm`).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, norm: f64) -> HermitianMatrix {
    let g = random_complex_gaussian(rng, dim);
    let h = HermitianMatrix::symmetrize(&g);
    let f = h.as_matrix().frobenius_norm();
    h.scale(norm / f)
}

/// Full-rank state `(G G†/Tr(G G†) + floor·I)` renormalized, `G` complex Gaussian.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = random_complex_gaussian(rng, dim);
    let gg = HermitianMatrix::symmetrize(&g.matmul(&g.adjoint()));
    let tr = gg.trace();
    let m = gg
        .scale(1.0 / tr)
        .add(&HermitianMatrix::identity(dim).scale(DENSITY_FLOOR));
    DensityMatrix::from_positive(m).expect("floored Wishart samples are full rank")
}

/// Random state commuting with the computational basis.
pub fn random_diagonal_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let p = random_simplex(rng, dim);
    DensityMatrix::from_diag(p.weights()).expect("simplex samples are positive")
}
