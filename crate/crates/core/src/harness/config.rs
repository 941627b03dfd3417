//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "channel": {"type": "depolarizing", "d": 2, "p": 0.1},
//!   "probe":   {"type": "isotropic", "d": 2, "F": 0.95},
//!   "povm":    {"type": "bell"},
//!   "sweep":   {"variable": "p", "start": 0.0, "stop": 0.25, "steps": 51},
//!   "shots": 0,
//!   "seed": 42,
//!   "optimize": false
//! }
//! ```
//!
//! Complex entries are written either as a bare number (real) or as a
//! `[re, im]` pair; matrices are arrays of rows.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channel::{
    depolarizing_channel, erasure_channel, pauli_channel, PauliChannelParams, QuantumChannel,
};
use crate::detection::{bell_povm, erasure_povm, Povm};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, DensityMatrix};
use crate::probe::{
    bell_diagonal_probe, isotropic_probe, maximally_entangled_probe, BipartiteProbeState,
    PureDecomposition,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexSpec> for Complex<f64> {
    fn from(c: ComplexSpec) -> Self {
        match c {
            ComplexSpec::Real(re) => Complex::new(re, 0.0),
            ComplexSpec::Pair([re, im]) => Complex::new(re, im),
        }
    }
}

pub type MatrixSpec = Vec<Vec<ComplexSpec>>;

fn to_matrix(m: &MatrixSpec) -> Result<ComplexMatrix<f64>> {
    ComplexMatrix::from_rows(
        m.iter()
            .map(|row| row.iter().map(|&c| c.into()).collect())
            .collect(),
    )
    .map_err(|e| Error::Config(e.to_string()))
}

fn flatten_grid(d: usize, grid: &[Vec<f64>], what: &str) -> Result<Vec<f64>> {
    if grid.len() != d || grid.iter().any(|row| row.len() != d) {
        return Err(Error::Config(format!("{what} must be a {d}x{d} grid")));
    }
    Ok(grid.iter().flatten().copied().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelSpec {
    Pauli {
        d: usize,
        probs: Vec<Vec<f64>>,
    },
    Depolarizing {
        d: usize,
        p: f64,
    },
    Erasure {
        d: usize,
        p: f64,
    },
    Kraus {
        kraus: Vec<MatrixSpec>,
        #[serde(default)]
        label: Option<String>,
    },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<QuantumChannel<f64>> {
        match self {
            Self::Pauli { d, probs } => {
                let params = PauliChannelParams::new(*d, flatten_grid(*d, probs, "probs")?)?;
                pauli_channel(&params)
            }
            Self::Depolarizing { d, p } => depolarizing_channel(*d, *p),
            Self::Erasure { d, p } => erasure_channel(*d, *p),
            Self::Kraus { kraus, label } => {
                let ops = kraus.iter().map(to_matrix).collect::<Result<Vec<_>>>()?;
                QuantumChannel::new(ops, label.clone().unwrap_or_else(|| "kraus".into()))
            }
        }
    }

    /// The channel with its noise parameter replaced, for sweeps over `p`.
    pub fn with_p(&self, value: f64) -> Result<Self> {
        match self {
            Self::Depolarizing { d, .. } => Ok(Self::Depolarizing { d: *d, p: value }),
            Self::Erasure { d, .. } => Ok(Self::Erasure { d: *d, p: value }),
            _ => Err(Error::Config(
                "sweeping p needs a depolarizing or erasure channel".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub weight: f64,
    pub op: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProbeSpec {
    MaxEntangled {
        d: usize,
    },
    Isotropic {
        d: usize,
        #[serde(rename = "F", alias = "fidelity")]
        fidelity: f64,
    },
    BellDiagonal {
        d: usize,
        q: Vec<Vec<f64>>,
    },
    /// Either explicit decomposition terms or a density matrix on `d·d`.
    Custom {
        #[serde(default)]
        terms: Option<Vec<TermSpec>>,
        #[serde(default)]
        density: Option<MatrixSpec>,
    },
}

impl ProbeSpec {
    pub fn build(&self) -> Result<BipartiteProbeState<f64>> {
        match self {
            Self::MaxEntangled { d } => maximally_entangled_probe(*d),
            Self::Isotropic { d, fidelity } => isotropic_probe(*d, *fidelity),
            Self::BellDiagonal { d, q } => bell_diagonal_probe(*d, &flatten_grid(*d, q, "q")?),
            Self::Custom { terms, density } => match (terms, density) {
                (Some(terms), None) => {
                    let terms = terms
                        .iter()
                        .map(|t| Ok((t.weight, to_matrix(&t.op)?)))
                        .collect::<Result<Vec<_>>>()?;
                    BipartiteProbeState::custom(PureDecomposition::new(terms)?, "custom")
                }
                (None, Some(m)) => {
                    BipartiteProbeState::from_density(DensityMatrix::new(to_matrix(m)?)?, "custom")
                }
                _ => Err(Error::Config(
                    "custom probe needs exactly one of 'terms' or 'density'".into(),
                )),
            },
        }
    }

    /// The probe with its fidelity replaced, for sweeps over `F`.
    pub fn with_fidelity(&self, value: f64) -> Result<Self> {
        match self {
            Self::MaxEntangled { d } | Self::Isotropic { d, .. } => Ok(Self::Isotropic {
                d: *d,
                fidelity: value,
            }),
            _ => Err(Error::Config(
                "sweeping F needs an isotropic or maximally entangled probe".into(),
            )),
        }
    }

    /// Fidelity with the maximally entangled state, for the isotropic family.
    pub fn isotropic_fidelity(&self) -> Option<f64> {
        match self {
            Self::MaxEntangled { .. } => Some(1.0),
            Self::Isotropic { fidelity, .. } => Some(*fidelity),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PovmSpec {
    Bell,
    ErasureAdapted,
    Custom {
        elements: Vec<MatrixSpec>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

impl PovmSpec {
    /// Builds the measurement for a probe of dimension `d`.
    pub fn build(&self, d: usize) -> Result<Povm<f64>> {
        match self {
            Self::Bell => bell_povm(d),
            Self::ErasureAdapted => erasure_povm(d),
            Self::Custom { elements, labels } => {
                let ops = elements.iter().map(to_matrix).collect::<Result<Vec<_>>>()?;
                let labels = labels
                    .clone()
                    .unwrap_or_else(|| (0..ops.len()).map(|i| format!("e{i}")).collect());
                Povm::new(ops, labels)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub channel: ChannelSpec,
    pub probe: ProbeSpec,
    pub povm: PovmSpec,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub optimize: bool,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}
