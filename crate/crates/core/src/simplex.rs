//! The open probability simplex with the Fisher metric and its mixture and
//! exponential geodesics.
//!
//! Points are stored as full length-`n` vectors with the sum-to-one
//! constraint maintained; tangents are length-`n` vectors summing to zero.

use crate::error::{Error, Result};
use crate::linalg::check_dims;
use crate::quadrature::{integrate_t_weighted, QuadratureConfig};

/// Smallest admissible weight.
pub const MIN_WEIGHT: f64 = 1e-12;
/// Tolerance on `Σ p_i = 1` for strict admission.
pub const SUM_TOL: f64 = 1e-12;

/// A strictly positive probability vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Strict admission: every weight `≥ 1e-12`, sum within `1e-12` of one.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(weights, SUM_TOL)
    }

    /// Admits `weights` if they sum to one within `tol`, then renormalizes.
    pub fn with_tolerance(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty weight vector".into()));
        }
        if let Some((i, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= MIN_WEIGHT))
        {
            return Err(Error::InvalidDistribution(format!(
                "weight {i} = {w:e} is below the positivity floor {MIN_WEIGHT:e}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Ok(Self::normalize_unchecked(weights))
    }

    /// Normalizes arbitrary positive weights.
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Self::with_tolerance(weights.iter().map(|w| w / sum).collect(), 1e-9)
    }

    fn normalize_unchecked(mut weights: Vec<f64>) -> Self {
        let sum: f64 = weights.iter().sum();
        if sum != 1.0 {
            weights.iter_mut().for_each(|w| *w /= sum);
        }
        Self(weights)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self.0.iter().map(|&p| p * p.ln()).sum::<f64>()
    }
}

/// A tangent vector to the simplex: components summing to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexTangent(Vec<f64>);

impl SimplexTangent {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        let sum: f64 = components.iter().sum();
        let scale = components.iter().map(|c| c.abs()).fold(1.0, f64::max);
        if sum.abs() > SUM_TOL * scale {
            return Err(Error::InvalidTangent(sum));
        }
        Ok(Self(components))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// `q − p`.
    pub fn between(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<Self> {
        check_dims(p.len(), q.len())?;
        Ok(Self(p.0.iter().zip(&q.0).map(|(a, b)| b - a).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }
}

/// Fisher metric `g_p(X, Y) = Σ X_i Y_i / p_i`.
pub fn fisher_inner(p: &ProbabilityVector, x: &SimplexTangent, y: &SimplexTangent) -> Result<f64> {
    check_dims(p.len(), x.len())?;
    check_dims(p.len(), y.len())?;
    Ok(p.0
        .iter()
        .zip(x.0.iter().zip(&y.0))
        .map(|(pi, (xi, yi))| xi * yi / pi)
        .sum())
}

/// Mixture geodesic `p + t(q − p)`.
pub fn m_geodesic(p: &ProbabilityVector, q: &ProbabilityVector, t: f64) -> Result<ProbabilityVector> {
    check_dims(p.len(), q.len())?;
    if t == 0.0 {
        return Ok(p.clone());
    }
    if t == 1.0 {
        return Ok(q.clone());
    }
    let w = p.0.iter().zip(&q.0).map(|(a, b)| a + t * (b - a)).collect();
    Ok(ProbabilityVector::normalize_unchecked(w))
}

/// Exponential geodesic `p_i (q_i/p_i)^t / Σ_j p_j (q_j/p_j)^t`, accumulated in log space.
pub fn e_geodesic(p: &ProbabilityVector, q: &ProbabilityVector, t: f64) -> Result<ProbabilityVector> {
    check_dims(p.len(), q.len())?;
    if t == 0.0 {
        return Ok(p.clone());
    }
    if t == 1.0 {
        return Ok(q.clone());
    }
    let logs: Vec<f64> = p
        .0
        .iter()
        .zip(&q.0)
        .map(|(a, b)| a.ln() + t * (b.ln() - a.ln()))
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w = logs.iter().map(|l| (l - max).exp()).collect();
    Ok(ProbabilityVector::normalize_unchecked(w))
}

/// Velocity of the exponential geodesic:
/// `γ_i(t)·(log(q_i/p_i) − Σ_j γ_j(t) log(q_j/p_j))`.
pub fn e_velocity(p: &ProbabilityVector, q: &ProbabilityVector, t: f64) -> Result<SimplexTangent> {
    let gamma = e_geodesic(p, q, t)?;
    let log_ratio: Vec<f64> = p.0.iter().zip(&q.0).map(|(a, b)| (b / a).ln()).collect();
    let mean: f64 = gamma.0.iter().zip(&log_ratio).map(|(g, l)| g * l).sum();
    Ok(SimplexTangent(
        gamma.0.iter().zip(&log_ratio).map(|(g, l)| g * (l - mean)).collect(),
    ))
}

/// Kullback–Leibler divergence `Σ p_i log(p_i/q_i)` in nats.
pub fn kl(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    check_dims(p.len(), q.len())?;
    Ok(p.0.iter().zip(&q.0).map(|(a, b)| a * (a / b).ln()).sum())
}

/// Canonical divergence `∫₀¹ t‖γ̇_m(t)‖² dt` along the mixture geodesic from `p` to `q`.
pub fn canonical_divergence_simplex(
    p: &ProbabilityVector,
    q: &ProbabilityVector,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let velocity = SimplexTangent::between(p, q)?;
    let speed = |t: f64| -> Result<f64> {
        let gamma = m_geodesic(p, q, t)?;
        fisher_inner(&gamma, &velocity, &velocity)
    };
    integrate_t_weighted(&speed, cfg)
}

/// Dual divergence `∫₀¹ t‖γ̇_e(t)‖² dt` along the exponential geodesic from `p` to `q`.
pub fn dual_divergence_simplex(
    p: &ProbabilityVector,
    q: &ProbabilityVector,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_dims(p.len(), q.len())?;
    let speed = |t: f64| -> Result<f64> {
        let gamma = e_geodesic(p, q, t)?;
        let v = e_velocity(p, q, t)?;
        fisher_inner(&gamma, &v, &v)
    };
    integrate_t_weighted(&speed, cfg)
}

/// Lifts chart coordinates (first `n − 1` weights) to a full probability vector.
pub fn from_chart(coords: &[f64]) -> Result<ProbabilityVector> {
    let last = 1.0 - coords.iter().sum::<f64>();
    let mut w = coords.to_vec();
    w.push(last);
    ProbabilityVector::with_tolerance(w, 1e-9)
}

/// Fisher metric in chart coordinates: `δ_ij/p_i + 1/p_n`.
pub fn fisher_chart_metric(p: &ProbabilityVector) -> Vec<Vec<f64>> {
    let n = p.len();
    let last = 1.0 / p.0[n - 1];
    (0..n - 1)
        .map(|i| {
            (0..n - 1)
                .map(|j| if i == j { 1.0 / p.0[i] + last } else { last })
                .collect()
        })
        .collect()
}
