//! Parameter sweeps and the reference figure tables.

use std::str::FromStr;

use rayon::prelude::*;

use crate::certification::{
    certify, depolarizing_isotropic_qdet, erasure_exact_capacity, erasure_qdet_closed_form,
    CertificationResult,
};
use crate::channel::{depolarizing_channel, erasure_channel};
use crate::detection::{bell_povm, coarse_grain_povm, erasure_povm};
use crate::error::{Error, Result};
use crate::probe::isotropic_probe;

use super::config::{ChannelSpec, Config, PovmSpec, SweepConfig};
use super::report::{format_number, format_optional, Table};
use super::sampling::{estimate_qdet, point_seed, sample_outcomes, ShotRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Channel noise parameter.
    P,
    /// Probe fidelity.
    F,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            Self::P => "p",
            Self::F => "F",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(Self::P),
            "F" | "fidelity" => Ok(Self::F),
            other => Err(Error::Config(format!("unknown sweep variable '{other}'"))),
        }
    }
}

/// Evenly spaced grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::Config(format!(
                "a sweep needs at least 2 steps, got {steps}"
            )));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(Error::Config(format!(
                "sweep range [{start}, {stop}] must be finite and increasing"
            )));
        }
        Ok(Self {
            variable,
            start,
            stop,
            steps,
        })
    }

    pub fn from_config(cfg: &SweepConfig) -> Result<Self> {
        Self::new(cfg.variable.parse()?, cfg.start, cfg.stop, cfg.steps)
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub qdet: f64,
    /// Closed-form bound when the configuration belongs to a known family.
    pub closed_form: Option<f64>,
    /// Exact quantum capacity, known for the erasure channel.
    pub exact_capacity: Option<f64>,
    pub coherent_information: f64,
    pub qdet_estimate: Option<f64>,
}

fn closed_form(cfg: &Config) -> Result<Option<f64>> {
    let Some(f) = cfg.probe.isotropic_fidelity() else {
        return Ok(None);
    };
    match (&cfg.channel, &cfg.povm) {
        (ChannelSpec::Depolarizing { d, p }, PovmSpec::Bell) => {
            depolarizing_isotropic_qdet(*d, *p, f).map(Some)
        }
        (ChannelSpec::Erasure { d, p }, PovmSpec::ErasureAdapted) => {
            erasure_qdet_closed_form(*d, *p, f).map(Some)
        }
        _ => Ok(None),
    }
}

fn exact_capacity(cfg: &Config) -> Result<Option<f64>> {
    match &cfg.channel {
        ChannelSpec::Erasure { d, p } => erasure_exact_capacity(*d, *p).map(Some),
        _ => Ok(None),
    }
}

/// Certifies a configuration once.
pub fn run_certify(cfg: &Config) -> Result<CertificationResult<f64>> {
    let channel = cfg.channel.build()?;
    let probe = cfg.probe.build()?;
    let povm = cfg.povm.build(probe.d())?;
    certify(&probe, &channel, &povm, cfg.optimize)
}

/// Finite-shot run on the (possibly merged) statistics of a configuration.
#[derive(Debug, Clone)]
pub struct SampleReport {
    pub result: CertificationResult<f64>,
    pub labels: Vec<String>,
    pub record: ShotRecord,
    pub qdet_estimate: f64,
}

pub fn run_sample(cfg: &Config, shots: u64, seed: u64) -> Result<SampleReport> {
    let channel = cfg.channel.build()?;
    let probe = cfg.probe.build()?;
    let povm = cfg.povm.build(probe.d())?;
    let result = certify(&probe, &channel, &povm, cfg.optimize)?;
    let labels = coarse_grain_povm(&povm, &result.grouping)?
        .labels()
        .to_vec();
    let record = sample_outcomes(&result.probabilities, shots, seed)?;
    let qdet_estimate = estimate_qdet(&record, &result.t, result.output_entropy)?;
    Ok(SampleReport {
        result,
        labels,
        record,
        qdet_estimate,
    })
}

fn sweep_point(cfg: &Config, spec: &SweepSpec, index: usize, value: f64) -> Result<SweepRow> {
    let mut point = cfg.clone();
    match spec.variable {
        SweepVariable::P => point.channel = cfg.channel.with_p(value)?,
        SweepVariable::F => point.probe = cfg.probe.with_fidelity(value)?,
    }
    let result = run_certify(&point)?;
    let qdet_estimate = if cfg.shots > 0 {
        let record = sample_outcomes(
            &result.probabilities,
            cfg.shots,
            point_seed(cfg.seed, index),
        )?;
        Some(estimate_qdet(&record, &result.t, result.output_entropy)?)
    } else {
        None
    };
    Ok(SweepRow {
        value,
        qdet: result.qdet,
        closed_form: closed_form(&point)?,
        exact_capacity: exact_capacity(&point)?,
        coherent_information: result.coherent_information,
        qdet_estimate,
    })
}

/// Evaluates every grid point; points run in parallel and are returned in
/// grid order. Point `k` samples with seed `point_seed(seed, k)`.
pub fn run_sweep(cfg: &Config, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.values()
        .into_par_iter()
        .enumerate()
        .map(|(k, v)| sweep_point(cfg, spec, k, v))
        .collect()
}

pub fn sweep_table(spec: &SweepSpec, rows: &[SweepRow]) -> Result<Table> {
    let mut table = Table::new(&[
        spec.variable.name(),
        "qdet",
        "closed_form",
        "exact_capacity",
        "coherent_information",
        "qdet_estimate",
    ]);
    for r in rows {
        table.push(vec![
            format_number(r.value),
            format_number(r.qdet),
            format_optional(r.closed_form),
            format_optional(r.exact_capacity),
            format_number(r.coherent_information),
            format_optional(r.qdet_estimate),
        ])?;
    }
    Ok(table)
}

const FIGURE_FIDELITIES: [f64; 4] = [1.0, 0.98, 0.95, 0.90];
const FIGURE_POINTS: usize = 51;

/// Tables behind the two reference figures, qubit case:
/// 1. depolarizing channel, Bell measurement, `p ∈ [0, 0.25]`;
/// 2. erasure channel, erasure-adapted measurement, `p ∈ [0, 0.5]`, with
///    the exact capacity alongside.
///
/// Each bound is computed through the full pipeline with isotropic probes.
pub fn figure_table(which: u8) -> Result<Table> {
    let d = 2;
    let (stop, erasure) = match which {
        1 => (0.25, false),
        2 => (0.5, true),
        other => return Err(Error::Config(format!("no figure {other}; choose 1 or 2"))),
    };
    let spec = SweepSpec::new(SweepVariable::P, 0.0, stop, FIGURE_POINTS)?;
    let mut header = vec!["p".to_owned()];
    if erasure {
        header.push("capacity_exact".into());
    }
    header.extend(FIGURE_FIDELITIES.iter().map(|f| format!("qdet_F{f:.2}")));
    let probes = FIGURE_FIDELITIES
        .iter()
        .map(|&f| isotropic_probe(d, f))
        .collect::<Result<Vec<_>>>()?;
    let povm = if erasure {
        erasure_povm(d)?
    } else {
        bell_povm(d)?
    };

    let rows = spec
        .values()
        .into_par_iter()
        .map(|p| {
            let channel = if erasure {
                erasure_channel(d, p)?
            } else {
                depolarizing_channel(d, p)?
            };
            let mut row = vec![format_number(p)];
            if erasure {
                row.push(format_number(erasure_exact_capacity(d, p)?));
            }
            for probe in &probes {
                row.push(format_number(certify(probe, &channel, &povm, false)?.qdet));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}
