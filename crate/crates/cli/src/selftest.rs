//! Oracle-equivalence and duality suites run by `geodiv selftest`.
//!
//! Every case draws its inputs from a generator seeded by `(seed, suite, case)`,
//! so a fixed seed always reproduces the same case list.

use std::f64::consts::LN_2;
use std::thread;

use geodiv_core::complexity::classical::{
    complexity_classical, family_member, ipf_project, marginal, multi_information,
    product_of_marginals, ConfigurationSpace, JointDistribution, MarginalFamily,
};
use geodiv_core::complexity::quantum::{
    gibbs_state, klocal_basis, many_party_correlation, quantum_multi_information, GibbsParameters,
    MultiQubitState,
};
use geodiv_core::linalg::{dlog_frechet, spectral_fn};
use geodiv_core::quadrature::{eguchi_metric_check, GaussLegendre};
use geodiv_core::quantum::{
    bogoliubov_inner, canonical_divergence_quantum, dual_divergence_quantum,
    quantum_relative_entropy,
};
use geodiv_core::sampling::{
    random_density, random_diagonal_density, random_hermitian, random_simplex, seeded_rng,
};
use geodiv_core::simplex::{
    canonical_divergence_simplex, dual_divergence_simplex, fisher_chart_metric, from_chart, kl,
};
use geodiv_core::{
    ComplexMatrix, DensityMatrix, HermitianMatrix, OptimizerConfig, ProbabilityVector,
    QuadratureConfig,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::state::StateFile;

/// A failing case together with the inputs needed to replay it.
#[derive(Clone, Debug)]
pub struct Failure {
    pub case: usize,
    pub detail: String,
    pub inputs: Value,
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub worst_error: f64,
    pub failures: Vec<Failure>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Suite {
    name: &'static str,
    cases: usize,
    worst_error: f64,
    failures: Vec<Failure>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            worst_error: 0.0,
            failures: Vec::new(),
        }
    }

    /// Records `|error| ≤ tol`; the inputs are only built on failure.
    fn check(&mut self, case: usize, what: &str, error: f64, tol: f64, inputs: impl FnOnce() -> Value) {
        let error = error.abs();
        if error.is_nan() || error > self.worst_error {
            self.worst_error = error;
        }
        if !(error <= tol) {
            self.failures.push(Failure {
                case,
                detail: format!("{what}: error {error:e} exceeds {tol:e}"),
                inputs: inputs(),
            });
        }
    }

    fn fail(&mut self, case: usize, detail: String, inputs: Value) {
        self.worst_error = f64::NAN;
        self.failures.push(Failure { case, detail, inputs });
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name,
            cases: self.cases,
            worst_error: self.worst_error,
            failures: self.failures,
        }
    }
}

fn case_rng(seed: u64, suite: u64, case: usize) -> ChaCha8Rng {
    seeded_rng(seed ^ (suite << 48) ^ (case as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn pair(a: StateFile, b: StateFile) -> Value {
    json!({ "a": a, "b": b })
}

/// Canonical and dual divergences on the simplex against `KL(p,q)` and `KL(q,p)`.
fn simplex_duality(seed: u64, trials: Option<usize>) -> SuiteOutcome {
    const TOL: f64 = 1e-8;
    let mut suite = Suite::new("simplex duality");
    let cfg = QuadratureConfig::default();
    let per_dim = trials.unwrap_or(100);
    for (d, &n) in [2usize, 3, 5, 10].iter().enumerate() {
        for i in 0..per_dim {
            let case = d * per_dim + i;
            let mut rng = case_rng(seed, 1, case);
            let p = random_simplex(&mut rng, n);
            let q = random_simplex(&mut rng, n);
            let inputs = || pair(StateFile::from_simplex(&p), StateFile::from_simplex(&q));
            suite.cases += 1;
            let result = (|| -> geodiv_core::Result<(f64, f64, f64, f64)> {
                Ok((
                    canonical_divergence_simplex(&p, &q, &cfg)?,
                    kl(&p, &q)?,
                    dual_divergence_simplex(&p, &q, &cfg)?,
                    kl(&q, &p)?,
                ))
            })();
            match result {
                Ok((c, kpq, dual, kqp)) => {
                    suite.check(case, "canonical vs KL(p,q)", c - kpq, TOL, inputs);
                    suite.check(case, "dual vs KL(q,p)", dual - kqp, TOL, inputs);
                }
                Err(e) => suite.fail(case, e.to_string(), inputs()),
            }
        }
    }
    suite.finish()
}

/// Canonical and dual divergences on density matrices against the relative entropy.
fn quantum_duality(seed: u64, trials: Option<usize>) -> SuiteOutcome {
    const TOL: f64 = 1e-7;
    const DIMS: [usize; 4] = [2, 3, 4, 8];
    let mut suite = Suite::new("quantum duality");
    let cfg = QuadratureConfig::default();
    for case in 0..trials.unwrap_or(50) {
        let mut rng = case_rng(seed, 2, case);
        let dim = DIMS[case % DIMS.len()];
        let r1 = random_density(&mut rng, dim);
        let r2 = random_density(&mut rng, dim);
        let inputs = || pair(StateFile::from_density(&r1), StateFile::from_density(&r2));
        suite.cases += 1;
        let result = (|| -> geodiv_core::Result<(f64, f64, f64, f64)> {
            Ok((
                canonical_divergence_quantum(&r1, &r2, &cfg)?,
                quantum_relative_entropy(&r1, &r2)?,
                dual_divergence_quantum(&r1, &r2, &cfg)?,
                quantum_relative_entropy(&r2, &r1)?,
            ))
        })();
        match result {
            Ok((c, s12, dual, s21)) => {
                suite.check(case, "canonical vs S(r1||r2)", c - s12, TOL, inputs);
                suite.check(case, "dual vs S(r2||r1)", dual - s21, TOL, inputs);
            }
            Err(e) => suite.fail(case, e.to_string(), inputs()),
        }
    }
    suite.finish()
}

/// Diagonal density matrices reproduce the simplex values.
fn commuting_reduction(seed: u64, trials: Option<usize>) -> SuiteOutcome {
    const TOL: f64 = 1e-9;
    let mut suite = Suite::new("commuting reduction");
    let cfg = QuadratureConfig::default();
    for case in 0..trials.unwrap_or(20) {
        let mut rng = case_rng(seed, 3, case);
        let dim = 2 + case % 5;
        let r1 = random_diagonal_density(&mut rng, dim);
        let r2 = random_diagonal_density(&mut rng, dim);
        let inputs = || pair(StateFile::from_density(&r1), StateFile::from_density(&r2));
        suite.cases += 1;
        let diag = |r: &DensityMatrix| {
            let h = r.as_hermitian();
            ProbabilityVector::from_unnormalized((0..dim).map(|i| h[(i, i)].re).collect())
        };
        let result = (|| -> geodiv_core::Result<[(f64, f64); 4]> {
            let (p, q) = (diag(&r1)?, diag(&r2)?);
            Ok([
                (canonical_divergence_quantum(&r1, &r2, &cfg)?, canonical_divergence_simplex(&p, &q, &cfg)?),
                (dual_divergence_quantum(&r1, &r2, &cfg)?, dual_divergence_simplex(&p, &q, &cfg)?),
                (quantum_relative_entropy(&r1, &r2)?, kl(&p, &q)?),
                (quantum_relative_entropy(&r2, &r1)?, kl(&q, &p)?),
            ])
        })();
        match result {
            Ok(pairs) => {
                for ((quantum, classical), what) in pairs
                    .iter()
                    .zip(["canonical", "dual", "S(r1||r2)", "S(r2||r1)"])
                {
                    suite.check(case, what, quantum - classical, TOL, inputs);
                }
            }
            Err(e) => suite.fail(case, e.to_string(), inputs()),
        }
    }
    suite.finish()
}

/// Fisher metric recovered from KL by mixed second differences on the 2-simplex.
///
/// The central difference of `−∂_i ∂'_j KL` carries a leading error of
/// `(h²/3)(δ_ij/q_i³ + 1/q_n³)`, which is at least `1.7e-5` anywhere on the
/// 2-simplex at `h = 1e-3`. Each case must stay within that bound (plus room
/// for the `O(h⁴)` remainder) and shrink about fourfold when `h` is halved.
fn eguchi_recovery(seed: u64, trials: Option<usize>) -> SuiteOutcome {
    const H: f64 = 1e-3;
    let mut suite = Suite::new("eguchi recovery");
    let divergence = |x: &[f64], y: &[f64]| kl(&from_chart(x)?, &from_chart(y)?);
    for case in 0..trials.unwrap_or(20) {
        let mut rng = case_rng(seed, 4, case);
        // keep the base point away from the boundary so the step stays small
        let raw = random_simplex(&mut rng, 3);
        let w: Vec<f64> = raw.weights().iter().map(|v| 0.5 * v + 0.5 / 3.0).collect();
        let p = ProbabilityVector::from_unnormalized(w).expect("mixture with uniform is positive");
        let q = p.weights();
        let g = fisher_chart_metric(&p);
        let leading = (0..2)
            .map(|i| H * H / 3.0 * (1.0 / q[i].powi(3) + 1.0 / q[2].powi(3)))
            .fold(0.0, f64::max);
        let point = &q[..2];
        let inputs = || json!({ "point": StateFile::from_simplex(&p), "h": H });
        suite.cases += 1;
        let errors = eguchi_metric_check(divergence, point, |i, j| g[i][j], H).and_then(|e1| {
            eguchi_metric_check(divergence, point, |i, j| g[i][j], H / 2.0).map(|e2| (e1, e2))
        });
        match errors {
            Ok((e1, e2)) => {
                suite.check(case, "metric at h", e1, 1.05 * leading, inputs);
                let ratio = e1 / e2;
                if !(3.5..=4.5).contains(&ratio) {
                    suite.fail(case, format!("halving h shrank the error by {ratio}, expected about 4"), inputs());
                }
            }
            Err(e) => suite.fail(case, e.to_string(), inputs()),
        }
    }
    suite.finish()
}

fn random_joint(rng: &mut ChaCha8Rng, cards: Vec<usize>) -> JointDistribution {
    let space = ConfigurationSpace::new(cards).expect("small spaces are valid");
    let w = random_simplex(rng, space.size());
    JointDistribution::new(space, w).expect("sizes agree")
}

fn entropy(weights: &[f64]) -> f64 {
    -weights.iter().map(|w| w * w.ln()).sum::<f64>()
}

/// IPF against product marginals, entropy arithmetic and the Pythagorean relation.
fn classical_complexity(seed: u64, trials: Option<usize>) -> SuiteOutcome {
    let mut suite = Suite::new("classical complexity");
    let cfg = OptimizerConfig::ipf();
    let n_cases = trials.unwrap_or(20);
    if n_cases > 0 {
        // two correlated bits: H(X) + H(Y) − H(X,Y) with uniform marginals
        let eps = 0.05;
        let w = vec![0.5 - eps, eps, eps, 0.5 - eps];
        let oracle = 2.0 * entropy(&[0.5, 0.5]) - entropy(&w);
        let p = JointDistribution::new(
            ConfigurationSpace::binary(2).expect("two bits"),
            ProbabilityVector::new(w).expect("valid weights"),
        )
        .expect("sizes agree");
        suite.cases += 1;
        match complexity_classical(&p, &MarginalFamily::singletons(2), &cfg) {
            Ok(r) => suite.check(0, "correlated bits", r.divergence - oracle, 1e-6, || {
                json!({ "p": StateFile::from_joint(&p) })
            }),
            Err(e) => suite.fail(0, e.to_string(), json!({ "p": StateFile::from_joint(&p) })),
        }
    }
    for case in 1..=n_cases {
        let mut rng = case_rng(seed, 5, case);
        let cards = if case % 2 == 0 { vec![2, 2, 2] } else { vec![2, 3, 2] };
        let p = random_joint(&mut rng, cards);
        let inputs = || json!({ "p": StateFile::from_joint(&p) });
        suite.cases += 1;
        let pairs = MarginalFamily::pairs(3);
        let result = (|| -> geodiv_core::Result<()> {
            let single = ipf_project(&p, &MarginalFamily::singletons(3), &cfg)?;
            let pm = product_of_marginals(&p);
            suite.check(case, "singletons vs product of marginals",
                single.projection.weights.max_abs_diff(&pm.weights), 1e-9, inputs);
            suite.check(case, "singletons vs multi-information",
                single.divergence - multi_information(&p), 1e-9, inputs);

            let proj = ipf_project(&p, &pairs, &cfg)?;
            suite.check(case, "pairwise marginal residual", proj.residual, 1e-9, inputs);
            if proj.iterations > 2000 {
                suite.fail(case, format!("pairwise fit took {} sweeps", proj.iterations), inputs());
            }
            for subset in pairs.subsets() {
                let want = marginal(&p, subset)?;
                let got = marginal(&proj.projection, subset)?;
                suite.check(case, "pairwise marginals", want.weights.max_abs_diff(&got.weights), 1e-9, inputs);
            }

            let potentials: Vec<Vec<f64>> = pairs
                .subsets()
                .iter()
                .map(|s| {
                    let size: usize = s.iter().map(|&v| p.space.cards()[v]).product();
                    (0..size).map(|_| rng.random_range(-1.0..1.0)).collect()
                })
                .collect();
            let q = family_member(&p.space, &pairs, &potentials)?;
            let lhs = kl(&p.weights, &q.weights)?;
            let rhs = proj.divergence + kl(&proj.projection.weights, &q.weights)?;
            suite.check(case, "pythagorean relation", lhs - rhs, 1e-7, inputs);
            Ok(())
        })();
        if let Err(e) = result {
            suite.fail(case, e.to_string(), inputs());
        }
    }
    suite.finish()
}

fn bell_state(eps: f64) -> MultiQubitState {
    let mut m = ComplexMatrix::zeros(4);
    for &i in &[0usize, 3] {
        for &j in &[0usize, 3] {
            m[(i, j)] = Complex64::new(0.5 * (1.0 - eps), 0.0);
        }
    }
    for i in 0..4 {
        m[(i, i)] += eps / 4.0;
    }
    let rho = DensityMatrix::with_tolerance(m, 1e-12).expect("noisy Bell states are full rank");
    MultiQubitState::new(2, rho).expect("two qubits")
}

/// Gibbs round trip, first-order identity and monotonicity in the locality.
fn quantum_complexity(seed: u64, trials: Option<usize>) -> SuiteOutcome {
    let mut suite = Suite::new("quantum complexity");
    let cfg = OptimizerConfig::gibbs();
    let n_cases = trials.unwrap_or(10);
    if n_cases > 0 {
        let bell = bell_state(1e-6);
        suite.cases += 1;
        suite.check(0, "noisy Bell multi-information", quantum_multi_information(&bell) - 2.0 * LN_2, 1e-4, || {
            json!({ "rho": StateFile::from_multiqubit(&bell) })
        });
    }
    let basis = klocal_basis(3, 2).expect("3 qubits, 2-local");
    for case in 1..=n_cases {
        let mut rng = case_rng(seed, 6, case);
        let rho3 = MultiQubitState::new(3, random_density(&mut rng, 8)).expect("dim 8");
        let rho2 = MultiQubitState::new(2, random_density(&mut rng, 4)).expect("dim 4");
        let theta = GibbsParameters::new((0..basis.len()).map(|_| rng.random_range(-0.3..0.3)).collect())
            .expect("finite");
        suite.cases += 1;
        let inputs = || {
            json!({
                "rho3": StateFile::from_multiqubit(&rho3),
                "rho2": StateFile::from_multiqubit(&rho2),
                "theta": theta.values(),
            })
        };
        let result = (|| -> geodiv_core::Result<()> {
            let member = gibbs_state(&theta, &basis)?;
            let back = many_party_correlation(&member, 2, &cfg)?;
            suite.check(case, "gibbs round trip", back.divergence, 1e-8, inputs);

            let q1 = many_party_correlation(&rho3, 1, &cfg)?.divergence;
            let q2 = many_party_correlation(&rho3, 2, &cfg)?.divergence;
            suite.check(case, "Q1 vs multi-information (3 qubits)", q1 - quantum_multi_information(&rho3), 1e-5, inputs);
            if !(q1 >= q2 && q2 >= 0.0) {
                suite.fail(case, format!("monotonicity violated: Q1 = {q1}, Q2 = {q2}"), inputs());
            }
            let q1_two = many_party_correlation(&rho2, 1, &cfg)?.divergence;
            suite.check(case, "Q1 vs multi-information (2 qubits)", q1_two - quantum_multi_information(&rho2), 1e-5, inputs);
            Ok(())
        })();
        if let Err(e) = result {
            suite.fail(case, e.to_string(), inputs());
        }
    }
    suite.finish()
}

/// Derivative of the matrix logarithm and the Bogoliubov product against
/// finite differences and a λ-quadrature.
fn numerics(seed: u64, trials: Option<usize>) -> SuiteOutcome {
    let mut suite = Suite::new("numerics substrate");
    let rule = GaussLegendre::new(64);
    for case in 0..trials.unwrap_or(20) {
        let mut rng = case_rng(seed, 7, case);
        let dim = 2 + case % 3;
        let rho = random_density(&mut rng, dim);
        let v = random_hermitian(&mut rng, dim, 1.0);
        let a = random_hermitian(&mut rng, dim, 1.0);
        let b = random_hermitian(&mut rng, dim, 1.0);
        let inputs = || {
            json!({
                "rho": StateFile::from_density(&rho),
                "v": [v.as_matrix().re_rows(), v.as_matrix().im_rows()],
            })
        };
        suite.cases += 1;
        let result = (|| -> geodiv_core::Result<()> {
            // finite differences need room on both sides of the base point
            let inner = rho
                .as_hermitian()
                .scale(0.5)
                .add(&HermitianMatrix::identity(dim).scale(0.5 / dim as f64));
            let exact = dlog_frechet(&inner, &v)?;
            let mut errors = [0.0; 2];
            for (e, h) in errors.iter_mut().zip([1e-4, 1e-5]) {
                let plus = spectral_fn(&inner.add(&v.scale(h)), f64::ln)?;
                let minus = spectral_fn(&inner.sub(&v.scale(h)), f64::ln)?;
                let fd = plus.sub(&minus).scale(0.5 / h);
                *e = fd.max_abs_diff(&exact);
                suite.check(case, &format!("dlog at h = {h:e}"), *e, h, inputs);
            }

            let closed = bogoliubov_inner(&rho, &a, &b)?;
            let eig = rho.eig();
            let quad = rule.integrate(0.0, 1.0, |lambda| {
                let left = eig.compose(&eig.eigenvalues.iter().map(|l| l.powf(lambda)).collect::<Vec<_>>());
                let right = eig.compose(&eig.eigenvalues.iter().map(|l| l.powf(1.0 - lambda)).collect::<Vec<_>>());
                let prod = left.as_matrix().matmul(a.as_matrix()).matmul(right.as_matrix());
                Ok(prod.trace_product(b.as_matrix()).re)
            })?;
            suite.check(case, "bogoliubov vs quadrature", closed - quad, 1e-9, inputs);
            Ok(())
        })();
        if let Err(e) = result {
            suite.fail(case, e.to_string(), inputs());
        }
    }
    suite.finish()
}

type SuiteFn = fn(u64, Option<usize>) -> SuiteOutcome;

const SUITES: [SuiteFn; 7] = [
    simplex_duality,
    quantum_duality,
    commuting_reduction,
    eguchi_recovery,
    classical_complexity,
    quantum_complexity,
    numerics,
];

/// Runs every suite on its own thread and returns the outcomes in order.
pub fn run_all(seed: u64, trials: Option<usize>) -> Vec<SuiteOutcome> {
    thread::scope(|s| {
        let handles: Vec<_> = SUITES
            .iter()
            .map(|suite| s.spawn(move || suite(seed, trials)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

/// Pass/fail table, one row per suite.
pub fn format_table(outcomes: &[SuiteOutcome]) -> String {
    let mut out = format!("{:<22} {:>6} {:>8} {:>12}  {}\n", "suite", "cases", "failed", "worst", "status");
    for o in outcomes {
        out.push_str(&format!(
            "{:<22} {:>6} {:>8} {:>12.3e}  {}\n",
            o.name,
            o.cases,
            o.failures.len(),
            o.worst_error,
            if o.passed() { "PASS" } else { "FAIL" }
        ));
    }
    out
}
