//! Classical complexity: KL divergence from the maximum-entropy estimate
//! determined by a family of marginals.
//!
//! Configurations are indexed site-major: site 0 is the most significant
//! digit of the flat index.

use super::OptimizerConfig;
use crate::error::{Error, Result};
use crate::simplex::{kl, ProbabilityVector};

/// Upper bound on the number of joint configurations.
pub const MAX_CONFIGURATIONS: usize = 1 << 20;

/// Product configuration set `Π_v I_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationSpace {
    cards: Vec<usize>,
}

impl ConfigurationSpace {
    pub fn new(cards: Vec<usize>) -> Result<Self> {
        if cards.is_empty() {
            return Err(Error::OutOfRange("at least one site is required".into()));
        }
        if let Some(&c) = cards.iter().find(|&&c| c < 2) {
            return Err(Error::OutOfRange(format!("site cardinality {c} is below 2")));
        }
        let size = cards
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c).filter(|&s| s <= MAX_CONFIGURATIONS));
        if size.is_none() {
            return Err(Error::OutOfRange(format!(
                "configuration space {cards:?} exceeds {MAX_CONFIGURATIONS} states"
            )));
        }
        Ok(Self { cards })
    }

    pub fn binary(n_sites: usize) -> Result<Self> {
        Self::new(vec![2; n_sites])
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn n_sites(&self) -> usize {
        self.cards.len()
    }

    pub fn size(&self) -> usize {
        self.cards.iter().product()
    }

    /// Digits of a flat configuration index.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.cards.len()];
        for (d, &c) in digits.iter_mut().zip(&self.cards).rev() {
            *d = index % c;
            index /= c;
        }
        digits
    }

    /// Sub-space of the sites in `subset` (sorted) and, for each configuration,
    /// its index in that sub-space.
    fn projection(&self, subset: &[usize]) -> (ConfigurationSpace, Vec<usize>) {
        let sub = ConfigurationSpace {
            cards: subset.iter().map(|&s| self.cards[s]).collect(),
        };
        let map = (0..self.size())
            .map(|x| {
                let digits = self.decode(x);
                subset
                    .iter()
                    .zip(&sub.cards)
                    .fold(0, |acc, (&s, &c)| acc * c + digits[s])
            })
            .collect();
        (sub, map)
    }

    fn check_subset(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(Error::InvalidSubset("subset is empty".into()));
        }
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != subset.len() {
            return Err(Error::InvalidSubset(format!("{subset:?} repeats a site")));
        }
        if let Some(&bad) = s.iter().find(|&&v| v >= self.n_sites()) {
            return Err(Error::InvalidSubset(format!(
                "site {bad} out of range for {} sites",
                self.n_sites()
            )));
        }
        Ok(s)
    }
}

/// A strictly positive distribution on a configuration space.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    pub space: ConfigurationSpace,
    pub weights: ProbabilityVector,
}

impl JointDistribution {
    pub fn new(space: ConfigurationSpace, weights: ProbabilityVector) -> Result<Self> {
        if weights.len() != space.size() {
            return Err(Error::DimensionMismatch {
                expected: space.size(),
                found: weights.len(),
            });
        }
        Ok(Self { space, weights })
    }

    /// Product distribution `q_1 ⊗ … ⊗ q_n`.
    pub fn product(factors: &[ProbabilityVector]) -> Result<Self> {
        let space = ConfigurationSpace::new(factors.iter().map(|f| f.len()).collect())?;
        let w = (0..space.size())
            .map(|x| {
                space
                    .decode(x)
                    .iter()
                    .zip(factors)
                    .map(|(&d, f)| f.weights()[d])
                    .product()
            })
            .collect();
        Self::new(space, ProbabilityVector::from_unnormalized(w)?)
    }

    pub fn entropy(&self) -> f64 {
        self.weights.entropy()
    }
}

/// A hierarchical family given by an antichain of site subsets covering every site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalFamily {
    subsets: Vec<Vec<usize>>,
}

impl MarginalFamily {
    /// Validates the subsets, drops any contained in another and checks coverage.
    pub fn new(n_sites: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        let space_stub = ConfigurationSpace {
            cards: vec![2; n_sites],
        };
        let mut sets = subsets
            .iter()
            .map(|s| space_stub.check_subset(s))
            .collect::<Result<Vec<_>>>()?;
        sets.sort();
        sets.dedup();
        // larger subsets first, so containment only needs to look backwards
        sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for s in sets {
            if !kept.iter().any(|k| s.iter().all(|v| k.binary_search(v).is_ok())) {
                kept.push(s);
            }
        }
        kept.sort();
        for site in 0..n_sites {
            if !kept.iter().any(|k| k.contains(&site)) {
                return Err(Error::InvalidSubset(format!("site {site} is not covered")));
            }
        }
        Ok(Self { subsets: kept })
    }

    pub fn singletons(n_sites: usize) -> Self {
        Self {
            subsets: (0..n_sites).map(|i| vec![i]).collect(),
        }
    }

    /// All pairs of sites; a single site yields the singleton family.
    pub fn pairs(n_sites: usize) -> Self {
        if n_sites < 2 {
            return Self::singletons(n_sites);
        }
        let mut subsets = Vec::new();
        for i in 0..n_sites {
            for j in (i + 1)..n_sites {
                subsets.push(vec![i, j]);
            }
        }
        Self { subsets }
    }

    pub fn full(n_sites: usize) -> Self {
        Self {
            subsets: vec![(0..n_sites).collect()],
        }
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    fn max_site(&self) -> usize {
        self.subsets.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Result of a maximum-entropy projection.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport {
    pub projection: JointDistribution,
    /// `KL(p, p̂)` in nats.
    pub divergence: f64,
    pub iterations: usize,
    /// Largest marginal mismatch over the family.
    pub residual: f64,
}

fn marginal_by_map(weights: &[f64], map: &[usize], size: usize) -> Vec<f64> {
    let mut out = vec![0.0; size];
    for (w, &m) in weights.iter().zip(map) {
        out[m] += w;
    }
    out
}

/// Marginal of `p` on the sites in `subset`, ordered by site index.
pub fn marginal(p: &JointDistribution, subset: &[usize]) -> Result<JointDistribution> {
    let s = p.space.check_subset(subset)?;
    let (sub, map) = p.space.projection(&s);
    let w = marginal_by_map(p.weights.weights(), &map, sub.size());
    let weights = ProbabilityVector::with_tolerance(w, 1e-9)?;
    Ok(JointDistribution { space: sub, weights })
}

/// `Π_i p_i(x_i)`: the projection onto the singleton family.
pub fn product_of_marginals(p: &JointDistribution) -> JointDistribution {
    let factors: Vec<ProbabilityVector> = (0..p.space.n_sites())
        .map(|i| marginal(p, &[i]).expect("single sites are valid subsets").weights)
        .collect();
    JointDistribution::product(&factors).expect("product of valid marginals")
}

/// `Σ_i H(X_i) − H(X_1, …, X_n)` in nats.
pub fn multi_information(p: &JointDistribution) -> f64 {
    let marginal_entropy: f64 = (0..p.space.n_sites())
        .map(|i| marginal(p, &[i]).expect("single sites are valid subsets").entropy())
        .sum();
    marginal_entropy - p.entropy()
}

/// Member of the hierarchical family: `q(x) ∝ exp(Σ_A φ_A(x_A))`, one
/// potential table per subset (indexed like [`marginal`]).
pub fn family_member(
    space: &ConfigurationSpace,
    family: &MarginalFamily,
    potentials: &[Vec<f64>],
) -> Result<JointDistribution> {
    if potentials.len() != family.subsets.len() {
        return Err(Error::DimensionMismatch {
            expected: family.subsets.len(),
            found: potentials.len(),
        });
    }
    if family.max_site() >= space.n_sites() {
        return Err(Error::InvalidSubset("family refers to sites outside the space".into()));
    }
    let mut log_w = vec![0.0; space.size()];
    for (subset, phi) in family.subsets.iter().zip(potentials) {
        let (sub, map) = space.projection(subset);
        if phi.len() != sub.size() {
            return Err(Error::DimensionMismatch {
                expected: sub.size(),
                found: phi.len(),
            });
        }
        for (lw, &m) in log_w.iter_mut().zip(&map) {
            *lw += phi[m];
        }
    }
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w = log_w.iter().map(|l| (l - max).exp()).collect();
    JointDistribution::new(space.clone(), ProbabilityVector::from_unnormalized(w)?)
}

/// Maximum-entropy projection of `p` onto the closure of the family by
/// iterative proportional fitting, started from the uniform distribution.
///
/// Each sweep rescales the iterate by `p_A / p̂_A` for every `A` in turn.
pub fn ipf_project(
    p: &JointDistribution,
    family: &MarginalFamily,
    cfg: &OptimizerConfig,
) -> Result<ProjectionReport> {
    if family.max_site() >= p.space.n_sites() {
        return Err(Error::InvalidSubset("family refers to sites outside the space".into()));
    }
    let target = p.weights.weights();
    let blocks: Vec<(usize, Vec<usize>, Vec<f64>)> = family
        .subsets
        .iter()
        .map(|s| {
            let (sub, map) = p.space.projection(s);
            let goal = marginal_by_map(target, &map, sub.size());
            (sub.size(), map, goal)
        })
        .collect();

    let residual_of = |q: &[f64]| -> f64 {
        blocks
            .iter()
            .map(|(size, map, goal)| {
                marginal_by_map(q, map, *size)
                    .iter()
                    .zip(goal)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };

    let n = target.len();
    let mut q = vec![1.0 / n as f64; n];
    let mut residual = residual_of(&q);
    let mut sweeps = 0;
    while residual > cfg.tolerance && sweeps < cfg.max_iterations {
        for (size, map, goal) in &blocks {
            let current = marginal_by_map(&q, map, *size);
            let ratio: Vec<f64> = goal.iter().zip(&current).map(|(g, c)| g / c).collect();
            for (w, &m) in q.iter_mut().zip(map) {
                *w *= ratio[m];
            }
        }
        sweeps += 1;
        residual = residual_of(&q);
        log::debug!("ipf sweep {sweeps}: residual {residual:e}");
    }

    let projection = JointDistribution::new(p.space.clone(), ProbabilityVector::from_unnormalized(q)?)?;
    let divergence = kl(&p.weights, &projection.weights)?;
    let report = ProjectionReport {
        projection,
        divergence,
        iterations: sweeps,
        residual,
    };
    if residual > cfg.tolerance {
        return Err(Error::IpfNotConverged(Box::new(report)));
    }
    Ok(report)
}

/// `KL(p, ℰ_𝔖) = KL(p, p̂)` via [`ipf_project`].
pub fn complexity_classical(
    p: &JointDistribution,
    family: &MarginalFamily,
    cfg: &OptimizerConfig,
) -> Result<ProjectionReport> {
    ipf_project(p, family, cfg)
}
