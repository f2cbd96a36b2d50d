//! Dispatch to a solver, compare against the oracle, report.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::generate::{generate_instance, GenerateError, InstanceSpec};
use super::io::{read_points, IoError};
use crate::exact::{exact_mcp_count, exact_mcp_with_limit, ExactError, DEFAULT_MAX_N, HARD_MAX_N};
use crate::graph::{build_graph, validate_partition, CliquePartition, PointSet, Violation};
use crate::grid::{ptas_solve, CellSolver, GridError, PtasConfig};
use crate::strips::{
    deterministic_3approx, randomized_solve, RandomizedConfig, StripWidth, StripsError, Variant,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "strips3")]
    Strips3,
    #[serde(rename = "strips-rand")]
    StripsRand,
    #[serde(rename = "grid-ptas")]
    GridPtas,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Strips3 => "strips3",
            Algorithm::StripsRand => "strips-rand",
            Algorithm::GridPtas => "grid-ptas",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "exact" => Algorithm::Exact,
            "strips3" => Algorithm::Strips3,
            "strips-rand" => Algorithm::StripsRand,
            "grid-ptas" => Algorithm::GridPtas,
            _ => return Err(format!("unknown algorithm {s:?}")),
        })
    }
}

#[derive(Clone, Debug)]
pub enum InstanceSource {
    File(PathBuf),
    Generated(InstanceSpec),
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub source: InstanceSource,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub variant: Variant,
    pub rounds: Option<usize>,
    pub k_override: Option<u32>,
    pub cell_solver: CellSolver,
    /// Instances up to this size get an optimal count and a ratio.
    pub oracle_cap: usize,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, source: InstanceSource) -> Self {
        ExperimentConfig {
            algorithm,
            source,
            eps: 0.3,
            delta: 0.1,
            seed: 0,
            variant: Variant::Irrational,
            rounds: None,
            k_override: None,
            cell_solver: CellSolver::Oracle,
            oracle_cap: DEFAULT_MAX_N,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("exact solver: {0}")]
    Exact(#[from] ExactError),
    #[error("strip solver: {0}")]
    Strips(#[from] StripsError),
    #[error("grid solver: {0}")]
    Grid(#[from] GridError),
    #[error("solver produced an invalid partition: {}", .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(Vec<Violation>),
}

impl ExperimentError {
    /// Input problems as opposed to solver failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, ExperimentError::Io(_) | ExperimentError::Generate(_))
    }

    /// A solver parameter (`eps`, `delta`, `k`) outside its valid range.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            ExperimentError::Strips(
                StripsError::EpsOutOfRange(_)
                    | StripsError::DeltaOutOfRange(_)
                    | StripsError::Width(_)
            ) | ExperimentError::Grid(
                GridError::EpsOutOfRange(_) | GridError::DeltaOutOfRange(_) | GridError::BadK
            )
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub n: usize,
    pub num_cliques: usize,
    pub cliques: Vec<Vec<usize>>,
    pub optimal: Option<usize>,
    pub ratio: Option<f64>,
    pub seed: Option<u64>,
    pub rounds: Option<usize>,
    pub width: Option<Value>,
    pub elapsed_ms: f64,
}

impl RunResult {
    pub fn partition(&self) -> CliquePartition {
        CliquePartition::new(self.cliques.clone())
    }
}

fn big(v: &num_bigint::BigInt) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

/// `{"p", "q"}` with `width = p/q` in lowest terms, or `"sqrt3/2"`.
pub fn width_json(w: &StripWidth) -> Value {
    match w {
        StripWidth::SqrtThreeHalves => json!("sqrt3/2"),
        StripWidth::Rational(r) => {
            let d = r.d();
            json!({ "p": big(d.numer()), "q": big(d.denom()) })
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunResult, ExperimentError> {
    let ps = match &cfg.source {
        InstanceSource::File(path) => read_points(path)?,
        InstanceSource::Generated(spec) => generate_instance(spec)?,
    };
    run_on(&ps, cfg)
}

pub fn run_on(ps: &PointSet, cfg: &ExperimentConfig) -> Result<RunResult, ExperimentError> {
    let start = Instant::now();
    let g = build_graph(ps);
    let mut seed = None;
    let mut rounds = None;
    let mut width = None;
    let partition = match cfg.algorithm {
        Algorithm::Exact => exact_mcp_with_limit(&g, HARD_MAX_N)?,
        Algorithm::Strips3 => {
            rounds = Some(1);
            width = Some(width_json(&StripWidth::SqrtThreeHalves));
            deterministic_3approx(ps)?
        }
        Algorithm::StripsRand => {
            let out = randomized_solve(
                ps,
                &RandomizedConfig {
                    eps: cfg.eps,
                    delta: cfg.delta,
                    seed: cfg.seed,
                    variant: cfg.variant,
                    rounds: cfg.rounds,
                    width: None,
                },
            )?;
            seed = Some(cfg.seed);
            rounds = Some(out.rounds);
            width = Some(width_json(&out.width));
            out.partition
        }
        Algorithm::GridPtas => {
            let mut pc = PtasConfig::new(cfg.eps, cfg.delta, cfg.seed);
            pc.k_override = cfg.k_override;
            pc.cell_solver = cfg.cell_solver;
            pc.rounds = cfg.rounds;
            let out = ptas_solve(ps, &pc)?;
            seed = Some(cfg.seed);
            rounds = Some(out.rounds);
            out.partition
        }
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let violations = validate_partition(&g, &partition);
    if !violations.is_empty() {
        return Err(ExperimentError::Invalid(violations));
    }
    let optimal = if ps.len() <= cfg.oracle_cap.min(HARD_MAX_N) {
        match cfg.algorithm {
            Algorithm::Exact => Some(partition.len()),
            _ => Some(exact_mcp_with_limit(&g, cfg.oracle_cap)?.len()),
        }
    } else {
        None
    };
    let ratio = optimal
        .filter(|&z| z > 0)
        .map(|z| partition.len() as f64 / z as f64);
    Ok(RunResult {
        algorithm: cfg.algorithm,
        n: ps.len(),
        num_cliques: partition.len(),
        cliques: partition.parts,
        optimal,
        ratio,
        seed,
        rounds,
        width,
        elapsed_ms,
    })
}

/// Optimal count when the instance fits the default oracle.
pub fn optimal_if_small(ps: &PointSet) -> Option<usize> {
    exact_mcp_count(&build_graph(ps)).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(algorithm: Algorithm, spec: InstanceSpec) -> ExperimentConfig {
        ExperimentConfig::new(algorithm, InstanceSource::Generated(spec))
    }

    #[test]
    fn exact_has_ratio_one() {
        let r = run_experiment(&cfg(
            Algorithm::Exact,
            InstanceSpec::uniform(10, 3.0, 3.0, 4),
        ))
        .unwrap();
        assert_eq!(r.ratio, Some(1.0));
        assert_eq!(r.optimal, Some(r.num_cliques));
    }

    #[test]
    fn reproducible_apart_from_time() {
        let c = cfg(
            Algorithm::StripsRand,
            InstanceSpec::uniform(15, 4.0, 4.0, 2),
        );
        let mut a = run_experiment(&c).unwrap();
        let mut b = run_experiment(&c).unwrap();
        a.elapsed_ms = 0.0;
        b.elapsed_ms = 0.0;
        assert_eq!(a, b);
        assert_eq!(a.width, Some(json!("sqrt3/2")));
    }

    #[test]
    fn rational_width_is_reported_as_fraction() {
        let mut c = cfg(Algorithm::StripsRand, InstanceSpec::uniform(5, 2.0, 2.0, 2));
        c.variant = Variant::Rational;
        c.eps = 0.01;
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.width, Some(json!({"p": 84, "q": 97})));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [
            Algorithm::Exact,
            Algorithm::Strips3,
            Algorithm::StripsRand,
            Algorithm::GridPtas,
        ] {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
            assert_eq!(serde_json::to_value(a).unwrap(), json!(a.name()));
        }
    }
}
