//! Many-party correlation: relative entropy from the k-local Gibbs family.
//!
//! Pauli strings are kept symbolic. A string `P` maps basis state `c` to
//! `c ^ xmask` with amplitude `i^{#Y} (-1)^{popcount(c & zmask)}`, where `xmask`
//! marks the X/Y sites and `zmask` the Y/Z sites. Site 0 is the most
//! significant bit.

use std::fmt;

use num_complex::Complex64;

use super::OptimizerConfig;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, matrix_log, ComplexMatrix, HermitianMatrix};
use crate::quantum::{partial_trace, quantum_relative_entropy, von_neumann_entropy, DensityMatrix};

/// Largest supported number of qubits.
pub const MAX_QUBITS: usize = 8;

/// Floor on the diagonal preconditioner `1 − ⟨T⟩²`.
const PRECONDITIONER_FLOOR: f64 = 1e-3;
const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// A density matrix on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiQubitState {
    n_sites: usize,
    state: DensityMatrix,
}

impl MultiQubitState {
    pub fn new(n_sites: usize, state: DensityMatrix) -> Result<Self> {
        check_sites(n_sites)?;
        if state.dim() != 1 << n_sites {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_sites,
                found: state.dim(),
            });
        }
        Ok(Self { n_sites, state })
    }

    /// Infers the qubit count from the dimension.
    pub fn from_density(state: DensityMatrix) -> Result<Self> {
        let dim = state.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::InvalidState(format!("dimension {dim} is not a power of two")));
        }
        Self::new(dim.trailing_zeros() as usize, state)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn into_state(self) -> DensityMatrix {
        self.state
    }

    /// Reduced state of a single qubit.
    pub fn site_marginal(&self, site: usize) -> Result<DensityMatrix> {
        partial_trace(&self.state, &vec![2; self.n_sites], &[site])
    }
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::OutOfRange(format!(
            "qubit count {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Pauli operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    factors: Vec<Pauli>,
    xmask: usize,
    zmask: usize,
    n_y: u32,
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Result<Self> {
        check_sites(factors.len())?;
        let n = factors.len();
        let (mut xmask, mut zmask, mut n_y) = (0usize, 0usize, 0u32);
        for (site, f) in factors.iter().enumerate() {
            let bit = 1 << (n - 1 - site);
            match f {
                Pauli::I => {}
                Pauli::X => xmask |= bit,
                Pauli::Y => {
                    xmask |= bit;
                    zmask |= bit;
                    n_y += 1;
                }
                Pauli::Z => zmask |= bit,
            }
        }
        Ok(Self {
            factors,
            xmask,
            zmask,
            n_y,
        })
    }

    /// Parses a label such as `"XIZ"`.
    pub fn parse(label: &str) -> Result<Self> {
        let factors = label
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::OutOfRange(format!("unknown Pauli symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn n_sites(&self) -> usize {
        self.factors.len()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.iter().filter(|&&f| f != Pauli::I).count()
    }

    /// Row and amplitude of the single nonzero entry in column `c`.
    fn column(&self, c: usize) -> (usize, Complex64) {
        let sign = if (c & self.zmask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        (c ^ self.xmask, Complex64::i().powu(self.n_y) * sign)
    }

    pub fn to_matrix(&self) -> HermitianMatrix {
        let dim = 1 << self.n_sites();
        let mut m = ComplexMatrix::zeros(dim);
        for c in 0..dim {
            let (r, v) = self.column(c);
            m[(r, c)] = v;
        }
        HermitianMatrix::symmetrize(&m)
    }

    /// `Tr(ρ P)`.
    pub fn expectation(&self, rho: &HermitianMatrix) -> f64 {
        let m = rho.as_matrix();
        (0..m.dim())
            .map(|c| {
                let (r, v) = self.column(c);
                (m[(c, r)] * v).re
            })
            .sum()
    }

    /// Adds `coeff · P` to `h`.
    fn accumulate(&self, coeff: f64, h: &mut ComplexMatrix) {
        for c in 0..h.dim() {
            let (r, v) = self.column(c);
            h[(r, c)] += v * coeff;
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.factors.iter().try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

/// All Pauli strings of weight `1..=k` on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct KLocalBasis {
    n_sites: usize,
    locality: usize,
    labels: Vec<PauliString>,
}

impl KLocalBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn locality(&self) -> usize {
        self.locality
    }

    pub fn labels(&self) -> &[PauliString] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Dense matrices of all basis operators.
    pub fn operators(&self) -> Vec<HermitianMatrix> {
        self.labels.iter().map(PauliString::to_matrix).collect()
    }

    /// `Tr(ρ T_α)` for every basis operator.
    pub fn expectations(&self, rho: &HermitianMatrix) -> Vec<f64> {
        self.labels.iter().map(|p| p.expectation(rho)).collect()
    }

    /// `H(θ) = Σ_α θ_α T_α`.
    pub fn hamiltonian(&self, theta: &GibbsParameters) -> Result<HermitianMatrix> {
        if theta.0.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: theta.0.len(),
            });
        }
        let mut h = ComplexMatrix::zeros(1 << self.n_sites);
        for (p, &t) in self.labels.iter().zip(&theta.0) {
            if t != 0.0 {
                p.accumulate(t, &mut h);
            }
        }
        Ok(HermitianMatrix::symmetrize(&h))
    }
}

pub fn klocal_basis(n: usize, k: usize) -> Result<KLocalBasis> {
    check_sites(n)?;
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("locality {k} outside 1..={n}")));
    }
    const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    let mut labels = Vec::new();
    // enumerate base-4 digit strings, keep weights 1..=k
    for code in 1..(1usize << (2 * n)) {
        let factors: Vec<Pauli> = (0..n)
            .map(|site| match (code >> (2 * (n - 1 - site))) & 3 {
                0 => Pauli::I,
                d => NON_IDENTITY[d - 1],
            })
            .collect();
        let weight = factors.iter().filter(|&&f| f != Pauli::I).count();
        if weight <= k {
            labels.push(PauliString::new(factors)?);
        }
    }
    labels.sort_by_key(|p| p.weight());
    Ok(KLocalBasis {
        n_sites: n,
        locality: k,
        labels,
    })
}

/// Coefficients of a k-local Hamiltonian in a [`KLocalBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsParameters(Vec<f64>);

impl GibbsParameters {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(bad) = theta.iter().find(|t| !t.is_finite()) {
            return Err(Error::OutOfRange(format!("non-finite coefficient {bad}")));
        }
        Ok(Self(theta))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Gibbs state with its log-partition function.
struct GibbsPoint {
    sigma: HermitianMatrix,
    log_z: f64,
}

fn gibbs_point(theta: &GibbsParameters, basis: &KLocalBasis) -> Result<GibbsPoint> {
    let h = basis.hamiltonian(theta)?;
    let eig = eig_hermitian(&h);
    let shift = eig.max_eigenvalue();
    let w: Vec<f64> = eig.eigenvalues.iter().map(|l| (l - shift).exp()).collect();
    let z: f64 = w.iter().sum();
    let probs: Vec<f64> = w.iter().map(|x| x / z).collect();
    Ok(GibbsPoint {
        sigma: eig.compose(&probs),
        log_z: shift + z.ln(),
    })
}

/// `e^H / Tr e^H` for `H = Σ_α θ_α T_α`.
pub fn gibbs_state(theta: &GibbsParameters, basis: &KLocalBasis) -> Result<MultiQubitState> {
    let point = gibbs_point(theta, basis)?;
    MultiQubitState::new(basis.n_sites, DensityMatrix::new(point.sigma)?)
}

/// Result of the Gibbs-family projection.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumProjectionReport {
    pub sigma_hat: MultiQubitState,
    pub theta: GibbsParameters,
    /// `S(ρ ‖ σ̂)` in nats.
    pub divergence: f64,
    pub iterations: usize,
    /// `max_α |Tr(σ̂ T_α) − Tr(ρ T_α)|`.
    pub gradient_residual: f64,
    /// Free energy at the start point and after every accepted step.
    pub free_energy: Vec<f64>,
}

struct Objective<'a> {
    basis: &'a KLocalBasis,
    target: Vec<f64>,
}

struct Evaluation {
    theta: Vec<f64>,
    value: f64,
    expectations: Vec<f64>,
    sigma: HermitianMatrix,
}

impl Evaluation {
    fn gradient(&self, target: &[f64]) -> Vec<f64> {
        self.expectations.iter().zip(target).map(|(e, b)| e - b).collect()
    }
}

impl Objective<'_> {
    /// `F(θ) = log Tr e^{H(θ)} − θ·b`.
    fn evaluate(&self, theta: Vec<f64>) -> Result<Evaluation> {
        let params = GibbsParameters::new(theta)?;
        let point = gibbs_point(&params, self.basis)?;
        let dot: f64 = params.0.iter().zip(&self.target).map(|(t, b)| t * b).sum();
        Ok(Evaluation {
            expectations: self.basis.expectations(&point.sigma),
            value: point.log_z - dot,
            sigma: point.sigma,
            theta: params.0,
        })
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Minimizes the free energy over the k-local Gibbs family by diagonally
/// preconditioned gradient descent with Armijo backtracking.
///
/// For `k = n` the start point is `θ_α = Tr(log ρ · T_α) / 2^n`, which is
/// already the minimizer; otherwise the search starts from `θ = 0`.
pub fn maxent_project_quantum(
    rho: &MultiQubitState,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<QuantumProjectionReport> {
    let basis = klocal_basis(rho.n_sites, k)?;
    let objective = Objective {
        basis: &basis,
        target: basis.expectations(rho.state.as_hermitian()),
    };
    let start = if k == rho.n_sites {
        let log_rho = matrix_log(rho.state.as_hermitian())?;
        let scale = 1.0 / (1usize << rho.n_sites) as f64;
        basis.expectations(&log_rho).iter().map(|v| v * scale).collect()
    } else {
        vec![0.0; basis.len()]
    };

    let mut current = objective.evaluate(start)?;
    let mut free_energy = vec![current.value];
    let mut grad = current.gradient(&objective.target);
    let mut residual = max_abs(&grad);
    let mut iterations = 0;
    while residual > cfg.tolerance && iterations < cfg.max_iterations {
        let direction: Vec<f64> = grad
            .iter()
            .zip(&current.expectations)
            .map(|(g, e)| -g / (1.0 - e * e).max(PRECONDITIONER_FLOOR))
            .collect();
        let slope: f64 = grad.iter().zip(&direction).map(|(g, d)| g * d).sum();
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = current
                .theta
                .iter()
                .zip(&direction)
                .map(|(t, d)| t + step * d)
                .collect();
            let eval = objective.evaluate(trial)?;
            if eval.value <= current.value + ARMIJO_C * step * slope {
                accepted = Some(eval);
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some(eval) => {
                free_energy.push(eval.value);
                current = eval;
            }
            None => {
                log::warn!("line search stalled at residual {residual:e}");
                break;
            }
        }
        grad = current.gradient(&objective.target);
        residual = max_abs(&grad);
        log::debug!(
            "gibbs iteration {iterations}: F = {:.15}, residual {residual:e}, step {step}",
            current.value
        );
    }

    let sigma_hat = MultiQubitState::new(rho.n_sites, DensityMatrix::new(current.sigma)?)?;
    let divergence = quantum_relative_entropy(&rho.state, &sigma_hat.state)?;
    let report = QuantumProjectionReport {
        sigma_hat,
        theta: GibbsParameters(current.theta),
        divergence,
        iterations,
        gradient_residual: residual,
        free_energy,
    };
    if residual > cfg.tolerance {
        return Err(Error::GibbsNotConverged(Box::new(report)));
    }
    Ok(report)
}

/// `Q(ρ, ℰ_k) = inf_{σ ∈ ℰ_k} S(ρ ‖ σ)`.
pub fn many_party_correlation(
    rho: &MultiQubitState,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<QuantumProjectionReport> {
    maxent_project_quantum(rho, k, cfg)
}

/// `Σ_i S(ρ_i) − S(ρ)` with von Neumann entropies.
pub fn quantum_multi_information(rho: &MultiQubitState) -> f64 {
    let local: f64 = (0..rho.n_sites)
        .map(|i| von_neumann_entropy(&rho.site_marginal(i).expect("single qubit is a valid keep set")))
        .sum();
    local - von_neumann_entropy(&rho.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::classical::{multi_information, ConfigurationSpace, JointDistribution};
    use crate::sampling::{random_density, random_diagonal_density, seeded_rng};
    use crate::simplex::ProbabilityVector;
    use rand::Rng;
    use std::f64::consts::LN_2;

    fn bell(eps: f64) -> MultiQubitState {
        let mut m = ComplexMatrix::zeros(4);
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                m[(i, j)] = Complex64::new((1.0 - eps) * 0.5, 0.0);
            }
        }
        for i in 0..4 {
            m[(i, i)] += eps / 4.0;
        }
        let rho = DensityMatrix::new(HermitianMatrix::new(m).unwrap()).unwrap();
        MultiQubitState::new(2, rho).unwrap()
    }

    fn random_state(seed: u64, n: usize) -> MultiQubitState {
        let mut rng = seeded_rng(seed);
        MultiQubitState::new(n, random_density(&mut rng, 1 << n)).unwrap()
    }

    fn random_theta(seed: u64, len: usize, scale: f64) -> GibbsParameters {
        let mut rng = seeded_rng(seed);
        GibbsParameters::new((0..len).map(|_| rng.random_range(-scale..scale)).collect()).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        let y = PauliString::parse("Y").unwrap().to_matrix();
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
        let z = PauliString::parse("Z").unwrap().to_matrix();
        assert_eq!(z.max_abs_diff(&HermitianMatrix::from_diag(&[1.0, -1.0])), 0.0);

        // site 0 is the left Kronecker factor
        let ops = ["I", "X", "Y", "Z"].map(|s| PauliString::parse(s).unwrap().to_matrix());
        for (a, la) in ops.iter().zip(["I", "X", "Y", "Z"]) {
            for (b, lb) in ops.iter().zip(["I", "X", "Y", "Z"]) {
                let label = format!("{la}{lb}");
                let symbolic = PauliString::parse(&label).unwrap();
                assert_eq!(symbolic.to_string(), label);
                assert_eq!(symbolic.to_matrix().max_abs_diff(&a.kron(b)), 0.0);
            }
        }
        assert!(PauliString::parse("XQ").is_err());
    }

    #[test]
    fn symbolic_expectation_matches_dense_trace() {
        let rho = random_state(3, 3);
        let basis = klocal_basis(3, 3).unwrap();
        for (p, t) in basis.labels().iter().zip(basis.operators()) {
            let dense = rho.state().as_hermitian().trace_product(&t);
            assert!((p.expectation(rho.state().as_hermitian()) - dense).abs() < 1e-14);
        }
    }

    #[test]
    fn basis_counts_and_orthogonality() {
        assert_eq!(klocal_basis(1, 1).unwrap().len(), 3);
        assert_eq!(klocal_basis(2, 1).unwrap().len(), 6);
        assert_eq!(klocal_basis(3, 2).unwrap().len(), 36);
        assert_eq!(klocal_basis(3, 3).unwrap().len(), 63);
        assert!(klocal_basis(2, 3).is_err());
        assert!(klocal_basis(2, 0).is_err());
        assert!(klocal_basis(9, 1).is_err());

        let ops = klocal_basis(3, 2).unwrap().operators();
        for (a, ta) in ops.iter().enumerate() {
            for (b, tb) in ops.iter().enumerate() {
                let expected = if a == b { 8.0 } else { 0.0 };
                assert!((ta.trace_product(tb) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gibbs_state_examples() {
        let basis = klocal_basis(2, 2).unwrap();
        let zero = gibbs_state(&GibbsParameters::zeros(basis.len()), &basis).unwrap();
        assert!(zero.state().max_abs_diff(&DensityMatrix::maximally_mixed(4)) < 1e-15);

        let single = klocal_basis(1, 1).unwrap();
        let b = 0.7;
        // labels are X, Y, Z
        let sigma = gibbs_state(&GibbsParameters::new(vec![0.0, 0.0, b]).unwrap(), &single).unwrap();
        let z = b.exp() + (-b).exp();
        let expected = DensityMatrix::from_diag(&[b.exp() / z, (-b).exp() / z]).unwrap();
        assert!(sigma.state().max_abs_diff(&expected) < 1e-14);

        let theta = random_theta(4, basis.len(), 1.0);
        let h = basis.hamiltonian(&theta).unwrap();
        let s = gibbs_state(&theta, &basis).unwrap();
        let sm = s.state().as_hermitian().as_matrix();
        let comm = sm.matmul(h.as_matrix()).sub(&h.as_matrix().matmul(sm));
        assert!(comm.max_abs() < 1e-10);

        assert!(gibbs_state(&GibbsParameters::zeros(2), &single).is_err());
        assert!(GibbsParameters::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn gibbs_round_trip() {
        let basis = klocal_basis(3, 2).unwrap();
        let theta = random_theta(5, basis.len(), 0.3);
        let rho = gibbs_state(&theta, &basis).unwrap();
        let r = maxent_project_quantum(&rho, 2, &OptimizerConfig::gibbs()).unwrap();
        assert!(r.divergence <= 1e-8, "divergence {}", r.divergence);
        assert!(r.gradient_residual <= 1e-7);
    }

    #[test]
    fn full_locality_is_exact() {
        let rho = random_state(6, 2);
        let r = maxent_project_quantum(&rho, 2, &OptimizerConfig::gibbs()).unwrap();
        assert!(r.divergence.abs() <= 1e-10);
        assert!(r.sigma_hat.state().max_abs_diff(rho.state()) <= 1e-10);
    }

    #[test]
    fn product_state_has_no_correlation() {
        let mut rng = seeded_rng(7);
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 2);
        let rho = MultiQubitState::new(2, a.kron(&b)).unwrap();
        let r = maxent_project_quantum(&rho, 1, &OptimizerConfig::gibbs()).unwrap();
        assert!(r.divergence <= 1e-10);
        assert!(quantum_multi_information(&rho).abs() <= 1e-12);
    }

    #[test]
    fn noisy_bell_pair() {
        let near = quantum_multi_information(&bell(1e-6));
        assert!((near - 2.0 * LN_2).abs() <= 1e-4);

        let rho = bell(0.01);
        let r = many_party_correlation(&rho, 1, &OptimizerConfig::gibbs()).unwrap();
        assert!((r.divergence - quantum_multi_information(&rho)).abs() <= 1e-6);
        let full = many_party_correlation(&rho, 2, &OptimizerConfig::gibbs()).unwrap();
        assert!(full.divergence.abs() <= 1e-9);
    }

    #[test]
    fn two_qubit_multi_information_is_mutual_information() {
        let rho = random_state(8, 2);
        let s1 = von_neumann_entropy(&partial_trace(rho.state(), &[2, 2], &[0]).unwrap());
        let s2 = von_neumann_entropy(&partial_trace(rho.state(), &[2, 2], &[1]).unwrap());
        let mi = s1 + s2 - von_neumann_entropy(rho.state());
        assert!((quantum_multi_information(&rho) - mi).abs() < 1e-14);
        assert!(mi >= 0.0);
    }

    #[test]
    fn first_order_correlation_is_multi_information() {
        for (seed, n) in [(9, 2), (10, 3)] {
            let rho = random_state(seed, n);
            let r = many_party_correlation(&rho, 1, &OptimizerConfig::gibbs()).unwrap();
            assert!((r.divergence - quantum_multi_information(&rho)).abs() <= 1e-5);
            let target = klocal_basis(n, 1).unwrap().expectations(rho.state().as_hermitian());
            let got = klocal_basis(n, 1).unwrap().expectations(r.sigma_hat.state().as_hermitian());
            assert!(target.iter().zip(&got).all(|(a, b)| (a - b).abs() <= 1e-6));
        }
    }

    #[test]
    fn correlation_decreases_with_locality() {
        let rho = random_state(11, 3);
        let cfg = OptimizerConfig::gibbs();
        let q1 = many_party_correlation(&rho, 1, &cfg).unwrap().divergence;
        let q2 = many_party_correlation(&rho, 2, &cfg).unwrap();
        let q3 = many_party_correlation(&rho, 3, &cfg).unwrap().divergence;
        assert!(q1 >= q2.divergence - 1e-9);
        assert!(q2.divergence >= q3 - 1e-9);
        assert!(q3.abs() <= 1e-9);

        // the projection is closer than any other member of the family
        let basis = klocal_basis(3, 2).unwrap();
        for seed in 0..5 {
            let sigma = gibbs_state(&random_theta(100 + seed, basis.len(), 0.5), &basis).unwrap();
            let q = quantum_relative_entropy(rho.state(), sigma.state()).unwrap();
            assert!(q >= q2.divergence - 1e-7);
        }
    }

    #[test]
    fn diagonal_states_embed_classical_multi_information() {
        let mut rng = seeded_rng(12);
        let rho = random_diagonal_density(&mut rng, 8);
        let diag: Vec<f64> = (0..8).map(|i| rho.as_hermitian()[(i, i)].re).collect();
        let p = JointDistribution::new(
            ConfigurationSpace::binary(3).unwrap(),
            ProbabilityVector::new(diag).unwrap(),
        )
        .unwrap();
        let q = MultiQubitState::new(3, rho).unwrap();
        let r = many_party_correlation(&q, 1, &OptimizerConfig::gibbs()).unwrap();
        assert!((r.divergence - multi_information(&p)).abs() <= 1e-7);
    }

    #[test]
    fn reports_non_convergence() {
        let rho = random_state(13, 2);
        let cfg = OptimizerConfig {
            tolerance: 1e-12,
            max_iterations: 1,
        };
        match maxent_project_quantum(&rho, 1, &cfg) {
            Err(Error::GibbsNotConverged(r)) => assert_eq!(r.iterations, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn state_validation() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(MultiQubitState::from_density(rho).is_err());
        assert!(MultiQubitState::new(1, DensityMatrix::maximally_mixed(4)).is_err());
        assert_eq!(
            MultiQubitState::from_density(DensityMatrix::maximally_mixed(8)).unwrap().n_sites(),
            3
        );
    }
}
