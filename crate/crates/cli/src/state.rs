//! JSON state files.

use std::fs;
use std::path::Path;

use geodiv_core::complexity::classical::{ConfigurationSpace, JointDistribution};
use geodiv_core::complexity::quantum::MultiQubitState;
use geodiv_core::{ComplexMatrix, DensityMatrix, ProbabilityVector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Tolerance used when admitting states read from disk.
pub const ADMISSION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Simplex {
        p: Vec<f64>,
    },
    Density {
        dim: usize,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
    Multiqubit {
        n: usize,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
    Joint {
        cards: Vec<usize>,
        p: Vec<f64>,
    },
}

impl StateFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn from_simplex(p: &ProbabilityVector) -> Self {
        StateFile::Simplex {
            p: p.weights().to_vec(),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.as_hermitian().as_matrix();
        StateFile::Density {
            dim: m.dim(),
            re: m.re_rows(),
            im: m.im_rows(),
        }
    }

    pub fn from_multiqubit(rho: &MultiQubitState) -> Self {
        let m = rho.state().as_hermitian().as_matrix();
        StateFile::Multiqubit {
            n: rho.n_sites(),
            re: m.re_rows(),
            im: m.im_rows(),
        }
    }

    pub fn from_joint(p: &JointDistribution) -> Self {
        StateFile::Joint {
            cards: p.space.cards().to_vec(),
            p: p.weights.weights().to_vec(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            StateFile::Simplex { .. } => "simplex",
            StateFile::Density { .. } => "density",
            StateFile::Multiqubit { .. } => "multiqubit",
            StateFile::Joint { .. } => "joint",
        }
    }

    /// A probability vector from a simplex or joint file.
    pub fn probability_vector(&self) -> Result<ProbabilityVector, CliError> {
        match self {
            StateFile::Simplex { p } | StateFile::Joint { p, .. } => {
                Ok(ProbabilityVector::with_tolerance(p.clone(), ADMISSION_TOL)?)
            }
            other => Err(CliError::WrongKind {
                expected: "simplex",
                found: other.kind(),
            }),
        }
    }

    /// A density matrix from a density or multiqubit file.
    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        match self {
            StateFile::Density { dim, re, im } => {
                let m = matrix(re, im)?;
                if m.dim() != *dim {
                    return Err(CliError::Parse(format!(
                        "declared dim {dim} but matrix is {}x{}",
                        m.dim(),
                        m.dim()
                    )));
                }
                Ok(DensityMatrix::with_tolerance(m, ADMISSION_TOL)?)
            }
            StateFile::Multiqubit { .. } => Ok(self.multiqubit()?.into_state()),
            other => Err(CliError::WrongKind {
                expected: "density",
                found: other.kind(),
            }),
        }
    }

    pub fn multiqubit(&self) -> Result<MultiQubitState, CliError> {
        match self {
            StateFile::Multiqubit { n, re, im } => {
                let m = matrix(re, im)?;
                let rho = DensityMatrix::with_tolerance(m, ADMISSION_TOL)?;
                Ok(MultiQubitState::new(*n, rho)?)
            }
            other => Err(CliError::WrongKind {
                expected: "multiqubit",
                found: other.kind(),
            }),
        }
    }

    pub fn joint(&self) -> Result<JointDistribution, CliError> {
        match self {
            StateFile::Joint { cards, p } => {
                let space = ConfigurationSpace::new(cards.clone())?;
                let weights = ProbabilityVector::with_tolerance(p.clone(), ADMISSION_TOL)?;
                Ok(JointDistribution::new(space, weights)?)
            }
            other => Err(CliError::WrongKind {
                expected: "joint",
                found: other.kind(),
            }),
        }
    }
}

fn matrix(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<ComplexMatrix, CliError> {
    let n = re.len();
    if re.iter().chain(im).any(|row| row.len() != n) || im.len() != n {
        return Err(CliError::Parse("re and im must be square arrays of equal size".into()));
    }
    Ok(ComplexMatrix::from_parts(re, im)?)
}
