//! t-weighted geodesic quadrature and the Eguchi finite-difference check.
//!
//! Every divergence in this crate has the form `∫₀¹ t·s(t) dt` where `s(t)`
//! is the squared speed of a geodesic. The integral is evaluated with a
//! Gauss–Legendre rule and checked against a lower-order rule; disagreement
//! triggers global adaptive bisection of the worst interval.

use crate::error::{Error, Result};

/// Quadrature settings for [`integrate_t_weighted`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Gauss–Legendre points per interval.
    pub base_points: usize,
    /// Absolute tolerance on the sum of per-interval error estimates.
    pub tolerance: f64,
    /// Maximum number of interval bisections.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            base_points: 48,
            tolerance: 1e-9,
            max_subdivisions: 20,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.base_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "base_points must be at least 2, got {}",
                self.base_points
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    /// Point count of the companion rule used for error estimation.
    fn check_points(&self) -> usize {
        (self.base_points * 2 / 3).max(1).min(self.base_points - 1)
    }
}

/// Squared geodesic speed `t ↦ ‖γ̇(t)‖²` on `[0, 1]`.
pub trait SpeedFunction {
    fn speed(&self, t: f64) -> Result<f64>;
}

impl<F> SpeedFunction for F
where
    F: Fn(f64) -> Result<f64>,
{
    fn speed(&self, t: f64) -> Result<f64> {
        self(t)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are roots of `P_n` found by Newton iteration from Chebyshev-like guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(x) dx`.
    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

/// `∫₀¹ t·f(t) dt` for a squared-speed function `f`.
pub fn integrate_t_weighted<S: SpeedFunction + ?Sized>(f: &S, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    let fine = GaussLegendre::new(cfg.base_points);
    let coarse = GaussLegendre::new(cfg.check_points());

    let integrand = |t: f64| -> Result<f64> {
        let s = f.speed(t)?;
        if !s.is_finite() || s < -1e-12 {
            return Err(Error::InvalidSpeed { t, value: s });
        }
        Ok(t * s)
    };
    let panel = |lo: f64, hi: f64| -> Result<Panel> {
        let value = fine.integrate(lo, hi, integrand)?;
        let check = coarse.integrate(lo, hi, integrand)?;
        Ok(Panel {
            lo,
            hi,
            value,
            error: (value - check).abs(),
        })
    };

    let mut panels = vec![panel(0.0, 1.0)?];
    let mut subdivisions = 0;
    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        if total_error <= cfg.tolerance {
            return Ok(panels.iter().map(|p| p.value).sum());
        }
        let (worst_idx, worst) = panels
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("at least one panel");
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::QuadratureNotConverged {
                lo: worst.lo,
                hi: worst.hi,
                residual: total_error,
                subdivisions,
            });
        }
        panels.swap_remove(worst_idx);
        let mid = 0.5 * (worst.lo + worst.hi);
        panels.push(panel(worst.lo, mid)?);
        panels.push(panel(mid, worst.hi)?);
        subdivisions += 1;
        log::debug!("quadrature: bisected [{}, {}], total error {total_error:e}", worst.lo, worst.hi);
    }
}

/// Max-abs deviation between the metric recovered from a divergence by a
/// central mixed second difference and the supplied metric.
///
/// Entry `(i, j)` of the recovered metric is
/// `−[D(x+he_i, x+he_j) − D(x+he_i, x−he_j) − D(x−he_i, x+he_j) + D(x−he_i, x−he_j)]/(4h²)`.
/// A divergence that rejects a perturbed point (invalid distribution or state)
/// yields `StepTooLarge`.
pub fn eguchi_metric_check<D, G>(divergence: D, point: &[f64], metric: G, h: f64) -> Result<f64>
where
    D: Fn(&[f64], &[f64]) -> Result<f64>,
    G: Fn(usize, usize) -> f64,
{
    if !(h > 0.0) {
        return Err(Error::OutOfRange(format!("step must be positive, got {h}")));
    }
    let n = point.len();
    let shifted = |i: usize, s: f64| -> Vec<f64> {
        let mut x = point.to_vec();
        x[i] += s;
        x
    };
    let eval = |a: &[f64], b: &[f64]| -> Result<f64> {
        divergence(a, b).map_err(|e| match e {
            Error::InvalidDistribution(_) | Error::InvalidState(_) | Error::NotPositive(_) => {
                Error::StepTooLarge(h)
            }
            other => other,
        })
    };

    let mut worst = 0.0f64;
    for i in 0..n {
        let (ip, im) = (shifted(i, h), shifted(i, -h));
        for j in 0..n {
            let (jp, jm) = (shifted(j, h), shifted(j, -h));
            let mixed = eval(&ip, &jp)? - eval(&ip, &jm)? - eval(&im, &jp)? + eval(&im, &jm)?;
            let recovered = -mixed / (4.0 * h * h);
            worst = worst.max((recovered - metric(i, j)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(5);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // degree 9 is the highest integrated exactly by 5 points
        let v = rule.integrate(0.0, 1.0, |x| Ok(x.powi(9))).unwrap();
        assert!((v - 0.1).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_48_nodes_sorted_and_symmetric() {
        let rule = GaussLegendre::new(48);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        for (a, b) in rule.nodes().iter().zip(rule.nodes().iter().rev()) {
            assert!((a + b).abs() < 1e-15);
        }
        let v = rule.integrate(0.0, std::f64::consts::PI, |x| Ok(x.sin())).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn t_weighted_examples() {
        let cfg = QuadratureConfig::default();
        assert_eq!(integrate_t_weighted(&|_t: f64| Ok(0.0), &cfg).unwrap(), 0.0);
        let c = integrate_t_weighted(&|_t: f64| Ok(3.0), &cfg).unwrap();
        assert!((c - 1.5).abs() < 1e-14);
        let q = integrate_t_weighted(&|t: f64| Ok(t * t), &cfg).unwrap();
        assert!((q - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn adaptive_refinement_handles_sharp_integrand() {
        // ∫ t/(t + a) dt = 1 − a ln((1 + a)/a)
        let a = 1e-4;
        let cfg = QuadratureConfig {
            max_subdivisions: 200,
            ..Default::default()
        };
        let v = integrate_t_weighted(&|t: f64| Ok(1.0 / (t + a)), &cfg).unwrap();
        let exact = 1.0 - a * ((1.0 + a) / a).ln();
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            max_subdivisions: 2,
            ..Default::default()
        };
        let err = integrate_t_weighted(&|t: f64| Ok(1.0 / (t + 1e-8)), &cfg).unwrap_err();
        match err {
            Error::QuadratureNotConverged { lo, subdivisions, .. } => {
                assert_eq!(lo, 0.0);
                assert_eq!(subdivisions, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_speed_and_bad_config() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            integrate_t_weighted(&|_t: f64| Ok(-1.0), &cfg),
            Err(Error::InvalidSpeed { .. })
        ));
        let bad = QuadratureConfig {
            base_points: 1,
            ..cfg
        };
        assert!(matches!(
            integrate_t_weighted(&|_t: f64| Ok(1.0), &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn linear_in_speed() {
        let cfg = QuadratureConfig::default();
        let f = |t: f64| Ok((3.0 * t).cos() + 1.5);
        let g = |t: f64| Ok(1.0 / (1.0 + t));
        let fg = |t: f64| Ok(2.0 * ((3.0 * t).cos() + 1.5) + 1.0 / (1.0 + t));
        let lhs = integrate_t_weighted(&fg, &cfg).unwrap();
        let rhs = 2.0 * integrate_t_weighted(&f, &cfg).unwrap() + integrate_t_weighted(&g, &cfg).unwrap();
        assert!((lhs - rhs).abs() <= 3.0 * cfg.tolerance);
    }

    #[test]
    fn invariant_under_doubling_points() {
        let cfg = QuadratureConfig::default();
        let doubled = QuadratureConfig {
            base_points: 96,
            ..cfg
        };
        let f = |t: f64| Ok((t * 5.0).sin().powi(2) / (0.2 + t));
        let a = integrate_t_weighted(&f, &cfg).unwrap();
        let b = integrate_t_weighted(&f, &doubled).unwrap();
        assert!((a - b).abs() <= 2.0 * cfg.tolerance);
    }

    #[test]
    fn eguchi_quadratic_divergence() {
        let d = |a: &[f64], b: &[f64]| -> Result<f64> {
            Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>())
        };
        let id = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        let dev = eguchi_metric_check(d, &[0.3, -1.0, 2.0], id, 1e-3).unwrap();
        assert!(dev <= 1e-6);
    }

    #[test]
    fn eguchi_step_leaving_domain() {
        let d = |a: &[f64], _b: &[f64]| -> Result<f64> {
            if a.iter().any(|&x| x <= 0.0) {
                Err(Error::InvalidDistribution("negative".into()))
            } else {
                Ok(0.0)
            }
        };
        let err = eguchi_metric_check(d, &[0.1], |_, _| 0.0, 0.5).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge(_)));
    }
}
