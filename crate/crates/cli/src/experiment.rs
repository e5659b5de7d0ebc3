//! Grid experiments: one solver run per (n, k, bound, seed), streamed as CSV.

use std::io::Write;
use std::time::{Duration, Instant};

use ihs_core::search::{solve_clique_factor, solve_power_hamilton_par};
use ihs_core::{Budget, Error};
use serde::{Deserialize, Serialize};

use crate::models::{generate, GenParams, Model};
use crate::witness::{cliques_of, report_outcome, sequence_of, WitnessFile};
use crate::CliError;

/// Bumped whenever the columns of [`ExperimentRow`] change.
pub const SCHEMA_VERSION: u32 = 1;

pub const HEADER: [&str; 11] = [
    "schema_version",
    "instance_id",
    "n",
    "k",
    "bound",
    "min_degree",
    "status",
    "witness_len",
    "nodes_expanded",
    "wall_ms",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    #[default]
    HamiltonPower,
    /// `K_{k+1}`-factor.
    CliqueFactor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    #[serde(default)]
    pub problem: Problem,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    /// Ignored by the barrier model, whose system is fixed.
    #[serde(default = "default_bounds")]
    pub bound: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub p: Option<f64>,
    pub min_degree: Option<usize>,
    pub budget_nodes: Option<u64>,
    pub budget_secs: Option<f64>,
    #[serde(default = "default_threads")]
    pub threads: usize,
    /// Single worker and no wall times, so reruns are byte-identical.
    #[serde(default)]
    pub deterministic: bool,
}

fn default_bounds() -> Vec<usize> {
    vec![0]
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_threads() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub schema_version: u32,
    pub instance_id: String,
    pub n: usize,
    pub k: usize,
    pub bound: usize,
    pub min_degree: usize,
    pub status: String,
    pub witness_len: usize,
    pub nodes_expanded: u64,
    pub wall_ms: Option<f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn budget(&self) -> Result<Budget, CliError> {
        if self.budget_nodes == Some(0) {
            return Err(Error::BadParams("budget_nodes must be positive".into()).into());
        }
        let max_time = match self.budget_secs {
            Some(s) if s > 0.0 && s.is_finite() => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(Error::BadParams(format!("budget_secs must be positive, got {s}")).into()),
            None => None,
        };
        Ok(Budget {
            max_nodes: self.budget_nodes,
            max_time,
        })
    }

    fn threads(&self) -> usize {
        if self.deterministic {
            1
        } else {
            self.threads.max(1)
        }
    }
}

/// Runs the grid in `n, k, bound, seed` order and writes each row as soon as it
/// is known. Every SAT certificate is re-validated before its row is written.
pub fn run_experiment<W: Write>(cfg: &ExperimentConfig, out: W) -> Result<Vec<ExperimentRow>, CliError> {
    let budget = cfg.budget()?;
    if cfg.n.is_empty() || cfg.k.is_empty() || cfg.seeds.is_empty() {
        return Err(Error::BadParams("n, k and seeds need at least one value".into()).into());
    }
    let bounds = match cfg.model {
        Model::Barrier => vec![0],
        _ if cfg.bound.is_empty() => return Err(Error::BadParams("bound needs at least one value".into()).into()),
        _ => cfg.bound.clone(),
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER)?;
    w.flush()?;
    let mut rows = Vec::new();
    for &n in &cfg.n {
        for &k in &cfg.k {
            for &bound in &bounds {
                for &seed in &cfg.seeds {
                    let row = run_one(cfg, budget, n, k, bound, seed)?;
                    w.serialize(&row)?;
                    w.flush()?;
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

fn run_one(
    cfg: &ExperimentConfig,
    budget: Budget,
    n: usize,
    k: usize,
    bound: usize,
    seed: u64,
) -> Result<ExperimentRow, CliError> {
    let inst = generate(&GenParams {
        model: cfg.model,
        n,
        k: Some(k),
        bound,
        p: cfg.p,
        min_degree: cfg.min_degree,
        seed,
    })?;
    let (g, sys) = (&inst.graph, &inst.system);
    let start = Instant::now();
    let report = match cfg.problem {
        Problem::HamiltonPower => {
            let out = solve_power_hamilton_par(g, sys, k, budget, cfg.threads())?;
            report_outcome(
                "hamilton-power",
                &out,
                |w| WitnessFile::HamiltonPower { k, cycle: sequence_of(w) },
                g,
                sys,
            )?
        }
        Problem::CliqueFactor => {
            let out = solve_clique_factor(g, sys, k + 1, budget)?;
            report_outcome(
                "clique-factor",
                &out,
                |w| WitnessFile::CliqueFactor {
                    r: k + 1,
                    cliques: cliques_of(w),
                },
                g,
                sys,
            )?
        }
    };
    let wall = start.elapsed();
    let bound = match cfg.model {
        Model::Barrier => sys.boundedness(),
        _ => bound,
    };
    Ok(ExperimentRow {
        schema_version: SCHEMA_VERSION,
        instance_id: format!("{}-n{n}-k{k}-b{bound}-s{seed}", cfg.model.as_str()),
        n,
        k,
        bound,
        min_degree: g.min_degree(),
        status: report.status.to_string(),
        witness_len: report.witness.as_ref().map_or(0, WitnessFile::len),
        nodes_expanded: report.nodes_expanded,
        wall_ms: (!cfg.deterministic).then(|| (wall.as_secs_f64() * 1e6).round() / 1e3),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(model: Model, n: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            model,
            problem: Problem::HamiltonPower,
            n,
            k: vec![2],
            bound: vec![0],
            seeds: vec![0],
            p: None,
            min_degree: None,
            budget_nodes: None,
            budget_secs: None,
            threads: 1,
            deterministic: true,
        }
    }

    #[test]
    fn barrier_rows_are_unsat() {
        let mut buf = Vec::new();
        let rows = run_experiment(&config(Model::Barrier, vec![9, 12, 15]), &mut buf).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.status == "UNSAT"));
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), HEADER.join(","));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn empty_system_on_complete_graph_is_sat() {
        let mut cfg = config(Model::Complete, (3..=9).collect());
        cfg.seeds = vec![0, 1];
        let rows = run_experiment(&cfg, std::io::sink()).unwrap();
        assert!(rows.iter().all(|r| r.status == "SAT" && r.witness_len == r.n));
    }

    #[test]
    fn reruns_are_byte_identical() {
        let mut cfg = config(Model::Gnp, vec![7, 8]);
        cfg.bound = vec![0, 2];
        cfg.seeds = vec![1, 2, 3];
        cfg.p = Some(0.8);
        let mut a = Vec::new();
        let mut b = Vec::new();
        run_experiment(&cfg, &mut a).unwrap();
        run_experiment(&cfg, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_budget_is_rejected() {
        let mut cfg = config(Model::Complete, vec![5]);
        cfg.budget_nodes = Some(0);
        assert!(matches!(
            run_experiment(&cfg, std::io::sink()),
            Err(CliError::Core(Error::BadParams(_)))
        ));
        cfg.budget_nodes = None;
        cfg.budget_secs = Some(0.0);
        assert!(matches!(
            run_experiment(&cfg, std::io::sink()),
            Err(CliError::Core(Error::BadParams(_)))
        ));
    }

    #[test]
    fn timeouts_get_rows() {
        let mut cfg = config(Model::Complete, vec![12]);
        cfg.bound = vec![2];
        cfg.budget_nodes = Some(1);
        let rows = run_experiment(&cfg, std::io::sink()).unwrap();
        assert_eq!(rows[0].status, "TIMEOUT");
        assert_eq!(rows[0].witness_len, 0);
    }

    #[test]
    fn clique_factor_problem() {
        let mut cfg = config(Model::Barrier, vec![9]);
        cfg.problem = Problem::CliqueFactor;
        let rows = run_experiment(&cfg, std::io::sink()).unwrap();
        assert_eq!(rows[0].status, "UNSAT");
        let mut cfg = config(Model::Complete, vec![9]);
        cfg.problem = Problem::CliqueFactor;
        assert_eq!(run_experiment(&cfg, std::io::sink()).unwrap()[0].status, "SAT");
    }
}
