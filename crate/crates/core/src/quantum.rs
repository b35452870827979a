//! Positive density matrices with the Bogoliubov (Kubo–Mori) generalized
//! covariance: mixture/exponential representations, the quantum Fisher
//! metric, the two geodesics and the divergences along them.
//!
//! All λ-integrals `∫₀¹ ρ^λ X ρ^(1−λ) dλ` are evaluated in closed form in the
//! eigenbasis of `ρ` using the logarithmic-mean kernel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    check_dims, dlog_frechet, eig_hermitian, log_mean_kernel, matrix_log, positive_eig,
    ComplexMatrix, HermitianMatrix, SpectralDecomposition,
};
use crate::quadrature::{integrate_t_weighted, QuadratureConfig};

/// Smallest admissible eigenvalue of a density matrix.
pub const MIN_EIGENVALUE: f64 = 1e-12;
/// Tolerance on `Tr ρ = 1` for strict admission.
pub const TRACE_TOL: f64 = 1e-10;

/// Hermitian, strictly positive, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        Self::admit(matrix, TRACE_TOL)
    }

    /// Admission with a caller-chosen tolerance on Hermiticity and trace;
    /// the accepted matrix is symmetrized and renormalized.
    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let h = HermitianMatrix::with_tolerance(matrix, tol)?;
        Self::admit(h, tol)
    }

    fn admit(matrix: HermitianMatrix, tol: f64) -> Result<Self> {
        let tr = matrix.trace();
        if !((tr - 1.0).abs() <= tol) {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let matrix = if tr != 1.0 { matrix.scale(1.0 / tr) } else { matrix };
        let min = eig_hermitian(&matrix).min_eigenvalue();
        if !(min > MIN_EIGENVALUE) {
            return Err(Error::NotPositive(min));
        }
        Ok(Self(matrix))
    }

    /// Normalizes a positive definite matrix by its trace.
    pub fn from_positive(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        Self::admit(matrix.scale(1.0 / tr), TRACE_TOL)
    }

    pub fn from_diag(spectrum: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diag(spectrum))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    pub fn eig(&self) -> SpectralDecomposition {
        eig_hermitian(&self.0)
    }

    pub fn log(&self) -> HermitianMatrix {
        matrix_log(&self.0).expect("density matrices are positive definite")
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    /// `ρ ⊗ σ`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }
}

/// Mixture representation of a tangent vector: traceless Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct MTangent(HermitianMatrix);

impl MTangent {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if tr.abs() > TRACE_TOL * matrix.as_matrix().max_abs().max(1.0) {
            return Err(Error::InvalidTangent(tr));
        }
        Ok(Self(matrix))
    }

    /// `ρ2 − ρ1`.
    pub fn between(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<Self> {
        check_dims(rho1.dim(), rho2.dim())?;
        Ok(Self(rho2.0.sub(&rho1.0)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(HermitianMatrix::zeros(dim))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// Exponential representation of a tangent vector at `basepoint`: `Tr(ρ X) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ETangent {
    pub matrix: HermitianMatrix,
    pub basepoint: DensityMatrix,
}

impl ETangent {
    pub fn new(matrix: HermitianMatrix, basepoint: DensityMatrix) -> Result<Self> {
        check_dims(basepoint.dim(), matrix.dim())?;
        let centre = basepoint.0.trace_product(&matrix);
        if centre.abs() > 1e-9 * matrix.as_matrix().max_abs().max(1.0) {
            return Err(Error::InvalidTangent(centre));
        }
        Ok(Self { matrix, basepoint })
    }
}

/// Bogoliubov inner product `∫₀¹ Tr(ρ^λ A ρ^(1−λ) B) dλ`.
pub fn bogoliubov_inner(rho: &DensityMatrix, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    check_dims(rho.dim(), a.dim())?;
    check_dims(rho.dim(), b.dim())?;
    let eig = positive_eig(&rho.0)?;
    let at = eig.to_eigenbasis(a.as_matrix());
    let bt = eig.to_eigenbasis(b.as_matrix());
    let l = &eig.eigenvalues;
    let n = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += at[(i, j)] * bt[(j, i)] * log_mean_kernel(l[i], l[j]);
        }
    }
    Ok(acc.re)
}

/// The `e`-representation of a tangent given in `m`-representation: the
/// Hermitian `X` with `∫₀¹ ρ^λ X ρ^(1−λ) dλ = V`, i.e. the derivative of `log`
/// at `ρ` in direction `V`.
pub fn e_representation(rho: &DensityMatrix, v: &MTangent) -> Result<ETangent> {
    check_dims(rho.dim(), v.0.dim())?;
    let x = dlog_frechet(&rho.0, &v.0)?;
    Ok(ETangent {
        matrix: x,
        basepoint: rho.clone(),
    })
}

/// Inverse of [`e_representation`]: `∫₀¹ ρ^λ X ρ^(1−λ) dλ`.
pub fn m_representation(x: &ETangent) -> Result<MTangent> {
    let eig = positive_eig(&x.basepoint.0)?;
    Ok(MTangent(eig.divided_difference_map(&x.matrix, log_mean_kernel)))
}

/// Quantum Fisher metric `Tr(D1 · D2^(e))`.
pub fn quantum_fisher(rho: &DensityMatrix, d1: &MTangent, d2: &MTangent) -> Result<f64> {
    check_dims(rho.dim(), d1.0.dim())?;
    let e2 = e_representation(rho, d2)?;
    Ok(d1.0.trace_product(&e2.matrix))
}

/// Quantum relative entropy `Tr ρ1 (log ρ1 − log ρ2)` in nats.
pub fn quantum_relative_entropy(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1.dim(), rho2.dim())?;
    let eig1 = positive_eig(&rho1.0)?;
    let self_term: f64 = eig1.eigenvalues.iter().map(|l| l * l.ln()).sum();
    let log2 = matrix_log(&rho2.0)?;
    Ok(self_term - rho1.0.trace_product(&log2))
}

/// Von Neumann entropy `−Tr ρ log ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.eig().eigenvalues.iter().map(|l| l * l.ln()).sum::<f64>()
}

/// Mixture geodesic `(1 − t) ρ1 + t ρ2`.
pub fn m_geodesic_q(rho1: &DensityMatrix, rho2: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_dims(rho1.dim(), rho2.dim())?;
    if t == 0.0 {
        return Ok(rho1.clone());
    }
    if t == 1.0 {
        return Ok(rho2.clone());
    }
    Ok(DensityMatrix(rho1.0.scale(1.0 - t).add(&rho2.0.scale(t))))
}

/// A point `e^{H + tA} / Tr e^{H + tA}` on the exponential geodesic, kept in
/// the eigenbasis of `H + tA`.
struct ExpFamilyPoint {
    eig: SpectralDecomposition,
    weights: Vec<f64>,
}

impl ExpFamilyPoint {
    fn new(h: &HermitianMatrix, a: &HermitianMatrix, t: f64) -> Self {
        let eig = eig_hermitian(&h.add(&a.scale(t)));
        let max = eig.max_eigenvalue();
        let raw: Vec<f64> = eig.eigenvalues.iter().map(|k| (k - max).exp()).collect();
        let z: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / z).collect();
        Self { eig, weights }
    }

    fn state(&self) -> HermitianMatrix {
        self.eig.compose(&self.weights)
    }

    /// Mean of `A` and `A` in the eigenbasis.
    fn centred(&self, a: &HermitianMatrix) -> (f64, ComplexMatrix) {
        let mut at = self.eig.to_eigenbasis(a.as_matrix());
        let mean: f64 = self.weights.iter().enumerate().map(|(i, w)| w * at[(i, i)].re).sum();
        for i in 0..at.dim() {
            at[(i, i)] -= mean;
        }
        (mean, at)
    }

    /// `∫₀¹ Tr(γ^λ B γ^(1−λ) B) dλ` for `B = A − ⟨A⟩`, which equals
    /// `Tr(γ̇^(m) γ̇^(e))` along the exponential geodesic.
    fn bogoliubov_variance(&self, a: &HermitianMatrix) -> f64 {
        let (_, b) = self.centred(a);
        let n = self.weights.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += log_mean_kernel(self.weights[i], self.weights[j]) * b[(i, j)].norm_sqr();
            }
        }
        acc
    }
}

fn exp_coordinates(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    check_dims(rho1.dim(), rho2.dim())?;
    let h = matrix_log(&rho1.0)?;
    let a = matrix_log(&rho2.0)?.sub(&h);
    Ok((h, a))
}

/// Exponential geodesic `e^{H + tA} / Tr e^{H + tA}` with `H = log ρ1`,
/// `A = log ρ2 − log ρ1`.
pub fn e_geodesic_q(rho1: &DensityMatrix, rho2: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let (h, a) = exp_coordinates(rho1, rho2)?;
    let point = ExpFamilyPoint::new(&h, &a, t);
    let min = point.weights.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::NotPositive(min));
    }
    Ok(DensityMatrix(point.state()))
}

/// Velocity of the exponential geodesic in `m`-representation.
///
/// The derivative of `e^{K(t)}` is the Daleckii–Krein map with the divided
/// differences of `exp`; normalized, that is `L(w_i, w_j)·(A − ⟨A⟩)_ij` in the
/// eigenbasis of `K(t)` with `w` the spectrum of `γ_e(t)`.
pub fn e_velocity_q(rho1: &DensityMatrix, rho2: &DensityMatrix, t: f64) -> Result<MTangent> {
    let (h, a) = exp_coordinates(rho1, rho2)?;
    let point = ExpFamilyPoint::new(&h, &a, t);
    let (_, b) = point.centred(&a);
    let n = b.dim();
    let mut v = b;
    for i in 0..n {
        for j in 0..n {
            v[(i, j)] *= log_mean_kernel(point.weights[i], point.weights[j]);
        }
    }
    Ok(MTangent(HermitianMatrix::symmetrize(&point.eig.from_eigenbasis(&v))))
}

/// Velocity of the exponential geodesic in `e`-representation: `A − ⟨A⟩_{γ_e(t)}`.
pub fn e_velocity_q_exp_rep(rho1: &DensityMatrix, rho2: &DensityMatrix, t: f64) -> Result<ETangent> {
    let (h, a) = exp_coordinates(rho1, rho2)?;
    let point = ExpFamilyPoint::new(&h, &a, t);
    let (mean, _) = point.centred(&a);
    let dim = a.dim();
    Ok(ETangent {
        matrix: a.sub(&HermitianMatrix::identity(dim).scale(mean)),
        basepoint: DensityMatrix(point.state()),
    })
}

/// Canonical divergence `∫₀¹ t Tr(γ̇_m · d/dt log γ_m(t)) dt` along the
/// mixture geodesic from `ρ1` to `ρ2`.
pub fn canonical_divergence_quantum(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let velocity = MTangent::between(rho1, rho2)?;
    let speed = |t: f64| -> Result<f64> {
        let point = rho1.0.scale(1.0 - t).add(&rho2.0.scale(t));
        let dlog = dlog_frechet(&point, &velocity.0)?;
        Ok(velocity.0.trace_product(&dlog))
    };
    integrate_t_weighted(&speed, cfg)
}

/// Dual divergence `∫₀¹ t Tr(γ̇_e^(m) γ̇_e^(e)) dt` along the exponential
/// geodesic from `ρ1` to `ρ2`. The integrand is the Bogoliubov variance of
/// `A = log ρ2 − log ρ1` at `γ_e(t)`.
pub fn dual_divergence_quantum(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (h, a) = exp_coordinates(rho1, rho2)?;
    let speed = |t: f64| -> Result<f64> { Ok(ExpFamilyPoint::new(&h, &a, t).bogoliubov_variance(&a)) };
    integrate_t_weighted(&speed, cfg)
}

/// Reduced state on the sites in `keep` of a state on `⊗_i C^{site_dims[i]}`.
/// Sites are ordered most-significant first; kept sites retain their order.
pub fn partial_trace(rho: &DensityMatrix, site_dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    if site_dims.contains(&0) {
        return Err(Error::OutOfRange("site dimensions must be positive".into()));
    }
    let total: usize = site_dims.iter().product();
    check_dims(rho.dim(), total)?;
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&s| s >= site_dims.len()) {
        return Err(Error::InvalidSubset(format!(
            "keep set {keep:?} is not a set of distinct sites below {}",
            site_dims.len()
        )));
    }
    let kept = |s: usize| keep_sorted.binary_search(&s).is_ok();

    // split each full index into (kept index, traced index)
    let split: Vec<(usize, usize)> = (0..total)
        .map(|mut idx| {
            let (mut k, mut kmul, mut r, mut rmul) = (0, 1, 0, 1);
            for s in (0..site_dims.len()).rev() {
                let d = site_dims[s];
                let digit = idx % d;
                idx /= d;
                if kept(s) {
                    k += digit * kmul;
                    kmul *= d;
                } else {
                    r += digit * rmul;
                    rmul *= d;
                }
            }
            (k, r)
        })
        .collect();
    let out_dim: usize = keep_sorted.iter().map(|&s| site_dims[s]).product();
    let mut out = ComplexMatrix::zeros(out_dim);
    let m = rho.0.as_matrix();
    for i in 0..total {
        let (ki, ri) = split[i];
        for j in 0..total {
            let (kj, rj) = split[j];
            if ri == rj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    DensityMatrix::new(HermitianMatrix::symmetrize(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use crate::sampling::{random_density, random_hermitian, seeded_rng};
    use crate::simplex::{self, ProbabilityVector};
    use std::f64::consts::LN_2;

    fn bell(eps: f64) -> DensityMatrix {
        let s = 0.5;
        let mut m = ComplexMatrix::zeros(4);
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                m[(i, j)] = Complex64::new((1.0 - eps) * s, 0.0);
            }
        }
        for i in 0..4 {
            m[(i, i)] += eps / 4.0;
        }
        DensityMatrix::new(HermitianMatrix::new(m).unwrap()).unwrap()
    }

    fn traceless(rng: &mut rand_chacha::ChaCha8Rng, dim: usize) -> MTangent {
        let h = random_hermitian(rng, dim, 1.0);
        let shift = h.trace() / dim as f64;
        MTangent::new(h.sub(&HermitianMatrix::identity(dim).scale(shift))).unwrap()
    }

    /// Tr(ρ^λ A ρ^(1−λ) B) integrated over λ with a 64-point rule.
    fn bogoliubov_oracle(rho: &DensityMatrix, a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
        let eig = rho.eig();
        let rule = GaussLegendre::new(64);
        rule.integrate(0.0, 1.0, |lam| {
            let p1: Vec<f64> = eig.eigenvalues.iter().map(|l| l.powf(lam)).collect();
            let p2: Vec<f64> = eig.eigenvalues.iter().map(|l| l.powf(1.0 - lam)).collect();
            let r1 = eig.compose(&p1);
            let r2 = eig.compose(&p2);
            let prod = r1
                .as_matrix()
                .matmul(a.as_matrix())
                .matmul(r2.as_matrix())
                .matmul(b.as_matrix());
            Ok(prod.trace().re)
        })
        .unwrap()
    }

    #[test]
    fn admission_rules() {
        assert!(DensityMatrix::from_diag(&[0.5, 0.5]).is_ok());
        assert!(matches!(DensityMatrix::from_diag(&[1.0, 0.0]), Err(Error::NotPositive(_))));
        assert!(matches!(DensityMatrix::from_diag(&[0.5, 0.6]), Err(Error::InvalidState(_))));
        let almost = ComplexMatrix::from_diag(&[0.5 + 1e-10, 0.5]);
        let rho = DensityMatrix::with_tolerance(almost, 1e-9).unwrap();
        assert!((rho.as_hermitian().trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bogoliubov_commuting_case() {
        let rho = DensityMatrix::maximally_mixed(2);
        let z = HermitianMatrix::from_diag(&[1.0, -1.0]);
        assert!((bogoliubov_inner(&rho, &z, &z).unwrap() - 1.0).abs() < 1e-15);
        let id = HermitianMatrix::identity(2);
        assert!((bogoliubov_inner(&rho, &id, &id).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bogoliubov_against_lambda_quadrature() {
        let mut rng = seeded_rng(21);
        for _ in 0..10 {
            let rho = random_density(&mut rng, 3);
            let a = random_hermitian(&mut rng, 3, 1.0);
            let b = random_hermitian(&mut rng, 3, 1.0);
            let closed = bogoliubov_inner(&rho, &a, &b).unwrap();
            let oracle = bogoliubov_oracle(&rho, &a, &b);
            assert!((closed - oracle).abs() <= 1e-9, "{closed} vs {oracle}");
            let swapped = bogoliubov_inner(&rho, &b, &a).unwrap();
            assert!((closed - swapped).abs() <= 1e-14);
            assert!(bogoliubov_inner(&rho, &a, &a).unwrap() >= 0.0);
        }
    }

    #[test]
    fn e_representation_examples() {
        let rho = DensityMatrix::from_diag(&[0.2, 0.3, 0.5]).unwrap();
        let zero = e_representation(&rho, &MTangent::zeros(3)).unwrap();
        assert_eq!(zero.matrix.as_matrix().max_abs(), 0.0);

        let v = MTangent::new(HermitianMatrix::from_diag(&[0.1, -0.3, 0.2])).unwrap();
        let x = e_representation(&rho, &v).unwrap();
        let expected = HermitianMatrix::from_diag(&[0.1 / 0.2, -0.3 / 0.3, 0.2 / 0.5]);
        assert!(x.matrix.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn e_representation_round_trip_and_centering() {
        let mut rng = seeded_rng(8);
        for dim in [2, 3, 4, 8] {
            let rho = random_density(&mut rng, dim);
            let v = traceless(&mut rng, dim);
            let x = e_representation(&rho, &v).unwrap();
            let back = m_representation(&x).unwrap();
            assert!(back.matrix().max_abs_diff(v.matrix()) <= 1e-10);
            assert!(rho.as_hermitian().trace_product(&x.matrix).abs() <= 1e-9);
            assert!(ETangent::new(x.matrix.clone(), rho.clone()).is_ok());
            // pairing: Tr(V X) = <X, X>_ρ
            let lhs = v.matrix().trace_product(&x.matrix);
            let rhs = bogoliubov_inner(&rho, &x.matrix, &x.matrix).unwrap();
            assert!((lhs - rhs).abs() <= 1e-9);
        }
    }

    #[test]
    fn quantum_fisher_properties() {
        let mut rng = seeded_rng(13);
        let rho = random_density(&mut rng, 3);
        let zero = MTangent::zeros(3);
        assert_eq!(quantum_fisher(&rho, &zero, &zero).unwrap(), 0.0);
        for _ in 0..10 {
            let x = traceless(&mut rng, 3);
            let y = traceless(&mut rng, 3);
            let gxy = quantum_fisher(&rho, &x, &y).unwrap();
            let gyx = quantum_fisher(&rho, &y, &x).unwrap();
            assert!((gxy - gyx).abs() <= 1e-10);
            assert!(quantum_fisher(&rho, &x, &x).unwrap() > 0.0);
        }
    }

    #[test]
    fn quantum_fisher_reduces_to_classical() {
        let p = [0.1, 0.25, 0.65];
        let rho = DensityMatrix::from_diag(&p).unwrap();
        let x = [0.2, -0.05, -0.15];
        let y = [-0.1, 0.3, -0.2];
        let gq = quantum_fisher(
            &rho,
            &MTangent::new(HermitianMatrix::from_diag(&x)).unwrap(),
            &MTangent::new(HermitianMatrix::from_diag(&y)).unwrap(),
        )
        .unwrap();
        let gc = simplex::fisher_inner(
            &ProbabilityVector::new(p.to_vec()).unwrap(),
            &simplex::SimplexTangent::new(x.to_vec()).unwrap(),
            &simplex::SimplexTangent::new(y.to_vec()).unwrap(),
        )
        .unwrap();
        assert!((gq - gc).abs() < 1e-14);
    }

    #[test]
    fn relative_entropy_examples() {
        let a = DensityMatrix::from_diag(&[0.75, 0.25]).unwrap();
        let b = DensityMatrix::from_diag(&[0.5, 0.5]).unwrap();
        assert!(quantum_relative_entropy(&a, &a).unwrap().abs() < 1e-15);
        let expected = 0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln();
        assert!((quantum_relative_entropy(&a, &b).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_two_spectral_oracle() {
        let mut rng = seeded_rng(99);
        for _ in 0..10 {
            let r1 = random_density(&mut rng, 2);
            let r2 = random_density(&mut rng, 2);
            let e1 = r1.eig();
            let e2 = r2.eig();
            // Σ_i λ_i log λ_i − Σ_ij |<u_i|v_j>|² λ_i log μ_j
            let overlap = e1.eigenvectors.adjoint().matmul(&e2.eigenvectors);
            let mut oracle: f64 = e1.eigenvalues.iter().map(|l| l * l.ln()).sum();
            for i in 0..2 {
                for j in 0..2 {
                    oracle -= overlap[(i, j)].norm_sqr() * e1.eigenvalues[i] * e2.eigenvalues[j].ln();
                }
            }
            let q = quantum_relative_entropy(&r1, &r2).unwrap();
            assert!((q - oracle).abs() <= 1e-10);
        }
    }

    #[test]
    fn geodesic_endpoints_and_normalization() {
        let mut rng = seeded_rng(4);
        let r1 = random_density(&mut rng, 3);
        let r2 = random_density(&mut rng, 3);
        assert_eq!(m_geodesic_q(&r1, &r2, 0.0).unwrap(), r1);
        assert_eq!(m_geodesic_q(&r1, &r2, 1.0).unwrap(), r2);
        assert!(e_geodesic_q(&r1, &r2, 0.0).unwrap().max_abs_diff(&r1) <= 1e-10);
        assert!(e_geodesic_q(&r1, &r2, 1.0).unwrap().max_abs_diff(&r2) <= 1e-10);
        let mid = e_geodesic_q(&r1, &r2, 0.5).unwrap();
        assert!((mid.as_hermitian().trace() - 1.0).abs() <= 1e-12);
        for &t in &[0.3, 0.7] {
            assert!(m_geodesic_q(&r1, &r1, t).unwrap().max_abs_diff(&r1) < 1e-15);
            assert!(e_geodesic_q(&r1, &r1, t).unwrap().max_abs_diff(&r1) < 1e-12);
        }
    }

    #[test]
    fn geodesics_reduce_to_classical_on_diagonal_states() {
        let p = ProbabilityVector::new(vec![0.75, 0.25]).unwrap();
        let q = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        let r1 = DensityMatrix::from_diag(p.weights()).unwrap();
        let r2 = DensityMatrix::from_diag(q.weights()).unwrap();
        let mid = m_geodesic_q(&r1, &r2, 0.5).unwrap();
        assert!(mid.max_abs_diff(&DensityMatrix::from_diag(&[0.625, 0.375]).unwrap()) < 1e-15);
        for &t in &[0.25, 0.5, 0.75] {
            let eq = e_geodesic_q(&r1, &r2, t).unwrap();
            let ec = simplex::e_geodesic(&p, &q, t).unwrap();
            assert!(eq.max_abs_diff(&DensityMatrix::from_diag(ec.weights()).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn e_velocity_matches_finite_difference() {
        let mut rng = seeded_rng(31);
        let r1 = random_density(&mut rng, 3);
        let r2 = random_density(&mut rng, 3);
        let h = 1e-5;
        for &t in &[0.25, 0.5, 0.75] {
            let v = e_velocity_q(&r1, &r2, t).unwrap();
            let plus = e_geodesic_q(&r1, &r2, t + h).unwrap();
            let minus = e_geodesic_q(&r1, &r2, t - h).unwrap();
            let fd = plus.as_hermitian().sub(minus.as_hermitian()).scale(0.5 / h);
            assert!(fd.max_abs_diff(v.matrix()) <= 1e-6);
            assert!(v.matrix().trace().abs() <= 1e-12);
            // e-representation is the derivative of log γ_e
            let e = e_velocity_q_exp_rep(&r1, &r2, t).unwrap();
            let lp = plus.log();
            let lm = minus.log();
            let fd_log = lp.sub(&lm).scale(0.5 / h);
            assert!(fd_log.max_abs_diff(&e.matrix) <= 1e-6);
        }
    }

    #[test]
    fn commuting_velocity_has_product_form() {
        // with commuting endpoints d/dt γ_e = Aγ − γ Tr(Aγ)
        let r1 = DensityMatrix::from_diag(&[0.2, 0.3, 0.5]).unwrap();
        let r2 = DensityMatrix::from_diag(&[0.6, 0.1, 0.3]).unwrap();
        let a = r2.log().sub(&r1.log());
        for &t in &[0.25, 0.5, 0.75] {
            let g = e_geodesic_q(&r1, &r2, t).unwrap();
            let ag = a.as_matrix().matmul(g.as_hermitian().as_matrix());
            let mean = ag.trace().re;
            let formula = ag.sub(&g.as_hermitian().as_matrix().scale(mean));
            let v = e_velocity_q(&r1, &r2, t).unwrap();
            assert!(v.matrix().as_matrix().max_abs_diff(&formula) <= 1e-12);
        }
    }

    #[test]
    fn divergences_match_relative_entropy() {
        let cfg = QuadratureConfig::default();
        let mut rng = seeded_rng(77);
        for dim in [2, 3, 4] {
            let r1 = random_density(&mut rng, dim);
            let r2 = random_density(&mut rng, dim);
            let d = canonical_divergence_quantum(&r1, &r2, &cfg).unwrap();
            assert!((d - quantum_relative_entropy(&r1, &r2).unwrap()).abs() <= 1e-7);
            let ds = dual_divergence_quantum(&r1, &r2, &cfg).unwrap();
            assert!((ds - quantum_relative_entropy(&r2, &r1).unwrap()).abs() <= 1e-7);
        }
        let r = random_density(&mut rng, 3);
        assert_eq!(canonical_divergence_quantum(&r, &r, &cfg).unwrap(), 0.0);
        assert!(dual_divergence_quantum(&r, &r, &cfg).unwrap().abs() < 1e-20);
    }

    #[test]
    fn diagonal_pair_matches_kl() {
        let cfg = QuadratureConfig::default();
        let a = DensityMatrix::from_diag(&[0.75, 0.25]).unwrap();
        let b = DensityMatrix::from_diag(&[0.5, 0.5]).unwrap();
        let d = canonical_divergence_quantum(&a, &b, &cfg).unwrap();
        assert!((d - 0.130812035941137).abs() <= 1e-8);
    }

    #[test]
    fn entropy_examples() {
        let eps = 1e-6;
        let rho = DensityMatrix::from_diag(&[1.0 - eps, eps]).unwrap();
        let expected = -(1.0 - eps) * (1.0 - eps).ln() - eps * eps.ln();
        assert!((von_neumann_entropy(&rho) - expected).abs() < 1e-15);
        assert!((von_neumann_entropy(&rho) - 1.48e-5).abs() < 1e-7);
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(5)) - 5f64.ln()).abs() < 1e-14);
        let r = DensityMatrix::from_diag(&[0.5, 0.25, 0.25]).unwrap();
        assert!((von_neumann_entropy(&r) - 1.5 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let mut rng = seeded_rng(2);
        let s1 = random_density(&mut rng, 2);
        let s2 = random_density(&mut rng, 3);
        let prod = s1.kron(&s2);
        assert!(partial_trace(&prod, &[2, 3], &[0]).unwrap().max_abs_diff(&s1) < 1e-15);
        assert!(partial_trace(&prod, &[2, 3], &[1]).unwrap().max_abs_diff(&s2) < 1e-15);
        assert!(partial_trace(&prod, &[2, 3], &[0, 1]).unwrap().max_abs_diff(&prod) < 1e-15);

        for eps in [0.01, 0.3, 1.0] {
            let b = bell(eps);
            let half = DensityMatrix::maximally_mixed(2);
            assert!(partial_trace(&b, &[2, 2], &[0]).unwrap().max_abs_diff(&half) < 1e-15);
            assert!(partial_trace(&b, &[2, 2], &[1]).unwrap().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_errors() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(partial_trace(&rho, &[2, 2], &[]), Err(Error::EmptyKeepSet)));
        assert!(matches!(
            partial_trace(&rho, &[2, 3], &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(partial_trace(&rho, &[2, 2], &[2]), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn partial_trace_defining_identity() {
        // Tr(σ_1 a) = Tr(ρ (a ⊗ I)) for random observables a
        let mut rng = seeded_rng(6);
        let rho = random_density(&mut rng, 8);
        for keep in 0..3 {
            let sigma = partial_trace(&rho, &[2, 2, 2], &[keep]).unwrap();
            let a = random_hermitian(&mut rng, 2, 1.0);
            let mut full = HermitianMatrix::identity(1);
            for s in 0..3 {
                let f = if s == keep { a.clone() } else { HermitianMatrix::identity(2) };
                full = full.kron(&f);
            }
            let lhs = sigma.as_hermitian().trace_product(&a);
            let rhs = rho.as_hermitian().trace_product(&full);
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }
}
