use std::io::Write;
use std::path::Path;
use std::time::Duration;

use ihs_core::pipeline::{run_pipeline, PipelineParams};
use ihs_core::search::validate::{validate_hamilton_power, validate_power};
use ihs_core::search::{
    connect_ends, count_mates, enumerate_absorbers, enumerate_mates, is_absorber, solve_clique_factor,
    solve_power_hamilton_par,
};
use ihs_core::{BaseSequence, Budget, Error, KTuple, Status};
use serde_json::json;

use crate::args::{BudgetArgs, Cli, Command, Output, SolveProblem};
use crate::experiment::{run_experiment, ExperimentConfig};
use crate::instance::{emit_instance, read_instance};
use crate::models::{generate, GenParams};
use crate::witness::{cliques_of, report_outcome, sequence_of, CertificateInput, SolveReport, WitnessFile};
use crate::{CliError, EXIT_OK, EXIT_REJECTED, EXIT_TIMEOUT, EXIT_UNSAT};

/// Runs one command and returns its exit code.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Gen(a) => {
            let inst = generate(&GenParams {
                model: a.model,
                n: a.n,
                k: a.k,
                bound: a.bound,
                p: a.p,
                min_degree: a.min_degree,
                seed: a.seed,
            })?;
            write_out(&a.out, &emit_instance(&inst.graph, &inst.system, &inst.metadata))?;
            Ok(EXIT_OK)
        }
        Command::Check(a) => {
            let inst = read_instance(&a.instance)?;
            let (g, sys) = (&inst.graph, &inst.system);
            let mut ok = true;
            let bound = a.bound.map(|b| {
                let holds = sys.boundedness() <= b;
                ok &= holds;
                json!({ "limit": b, "holds": holds })
            });
            let witness = match &a.witness {
                None => None,
                Some(path) => {
                    let input: CertificateInput = serde_json::from_slice(&read(path)?)?;
                    let verdict = match input.witness() {
                        None => Err("file carries no certificate".to_string()),
                        Some(w) => w.validate(g, sys).map_err(|e| e.to_string()),
                    };
                    ok &= verdict.is_ok();
                    Some(match verdict {
                        Ok(()) => json!({ "valid": true }),
                        Err(e) => json!({ "valid": false, "error": e }),
                    })
                }
            };
            let summary = json!({
                "n": g.n(),
                "edges": g.edge_count(),
                "pairs": sys.pair_count(),
                "boundedness": sys.boundedness(),
                "min_degree": g.min_degree(),
                "max_degree": g.max_degree(),
                "bound": bound,
                "witness": witness,
            });
            write_json(&a.out, &summary)?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::Solve(a) => solve(a.problem),
        Command::Mates(a) => {
            let inst = read_instance(&a.instance)?;
            let (g, sys) = (&inst.graph, &inst.system);
            let tuple = KTuple::new(a.tuple.clone())?;
            let count = count_mates(g, sys, tuple.vertices(), None, None)?;
            let mates = enumerate_mates(g, sys, &tuple, a.limit)?;
            let k = tuple.k();
            for f in &mates {
                let seq = BaseSequence::path([tuple.vertices(), f.vertices()].concat())?;
                validate_power(g, sys, &seq, k)?;
            }
            let listed: Vec<&[usize]> = mates.iter().map(KTuple::vertices).collect();
            write_json(&a.out, &json!({ "tuple": a.tuple, "k": k, "count": count, "mates": listed }))?;
            Ok(EXIT_OK)
        }
        Command::Absorbers(a) => {
            let inst = read_instance(&a.instance)?;
            let (g, sys) = (&inst.graph, &inst.system);
            let found = enumerate_absorbers(g, sys, a.vertex, a.k, a.beta, a.limit)?;
            for w in &found {
                if !is_absorber(g, sys, a.vertex, w.vertices(), a.k) {
                    return Err(Error::InvalidSequence(format!("{:?} does not absorb {}", w.vertices(), a.vertex)).into());
                }
            }
            let threshold = (a.beta * (g.n() as f64).powi(a.k as i32)).ceil() as u64;
            let listed: Vec<&[usize]> = found.iter().map(|w| w.vertices()).collect();
            let doc = json!({
                "vertex": a.vertex,
                "k": a.k,
                "beta": a.beta,
                "mate_threshold": threshold,
                "count": listed.len(),
                "absorbers": listed,
            });
            write_json(&a.out, &doc)?;
            Ok(EXIT_OK)
        }
        Command::Pipeline(a) => {
            let inst = read_instance(&a.instance)?;
            let (g, sys) = (&inst.graph, &inst.system);
            let mut params = match &a.params {
                Some(path) => toml::from_str::<PipelineParams>(&read_text(path)?)?,
                None => PipelineParams::default(),
            };
            match (a.k, inst.metadata.k, &a.params) {
                (Some(k), _, _) => params.k = k,
                (None, Some(k), None) => params.k = k,
                (None, None, None) => return Err(CliError::Usage("pass --k or give the instance a k".into())),
                _ => {}
            }
            if let Some(p) = a.p {
                params.p = p;
            }
            if let Some(t) = a.tau {
                params.tau = t;
            }
            if a.gamma.is_some() {
                params.gamma = a.gamma;
            }
            if let Some(n) = a.attempts {
                params.attempts = n;
            }
            if a.max_interior.is_some() {
                params.max_interior = a.max_interior;
            }
            if let Some(b) = a.budget_nodes {
                params.connect_nodes = b;
                params.absorber_nodes = b;
            }
            let report = run_pipeline(g, sys, &params, a.seed)?;
            if let Some(cycle) = report.certificate() {
                validate_hamilton_power(g, sys, &BaseSequence::cycle(cycle.to_vec())?, params.k)?;
            }
            write_json(&a.out, &report)?;
            match &report.outcome {
                ihs_core::pipeline::PipelineOutcome::Certificate { .. } => {
                    eprintln!("certificate found");
                    Ok(EXIT_OK)
                }
                ihs_core::pipeline::PipelineOutcome::Failure(f) => {
                    eprintln!("failed at {}: {}", f.stage, f.reason);
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::Experiment(a) => {
            let mut cfg: ExperimentConfig = toml::from_str(&read_text(&a.config)?)?;
            if let Some(t) = a.threads {
                cfg.threads = t;
            }
            cfg.deterministic |= a.deterministic;
            match &a.out.output {
                Some(path) => {
                    let f = std::fs::File::create(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
                    run_experiment(&cfg, f)?;
                }
                None => {
                    run_experiment(&cfg, std::io::stdout().lock())?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn solve(problem: SolveProblem) -> Result<i32, CliError> {
    let (report, out) = match problem {
        SolveProblem::HamiltonPower {
            instance,
            k,
            budget,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let (g, sys) = (&inst.graph, &inst.system);
            let res = solve_power_hamilton_par(g, sys, k, to_budget(&budget), threads(&budget))?;
            let rep = report_outcome(
                "hamilton-power",
                &res,
                |w| WitnessFile::HamiltonPower { k, cycle: sequence_of(w) },
                g,
                sys,
            )?;
            (rep, out)
        }
        SolveProblem::CliqueFactor {
            instance,
            r,
            budget,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let (g, sys) = (&inst.graph, &inst.system);
            let res = solve_clique_factor(g, sys, r, to_budget(&budget))?;
            let rep = report_outcome(
                "clique-factor",
                &res,
                |w| WitnessFile::CliqueFactor { r, cliques: cliques_of(w) },
                g,
                sys,
            )?;
            (rep, out)
        }
        SolveProblem::Connect {
            instance,
            k,
            from,
            to,
            forbid,
            max_interior,
            budget,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let (g, sys) = (&inst.graph, &inst.system);
            if from.len() != k || to.len() != k {
                return Err(CliError::Usage(format!("--from and --to need exactly k = {k} vertices")));
            }
            let e1 = KTuple::new(from)?;
            let e2 = KTuple::new(to)?;
            let lmax = max_interior.unwrap_or(g.n().saturating_sub(2 * k));
            let res = connect_ends(g, sys, &e1, &e2, &forbid, lmax, to_budget(&budget))?;
            let rep = report_outcome(
                "connect",
                &res,
                |w| WitnessFile::PowerPath { k, path: sequence_of(w) },
                g,
                sys,
            )?;
            (rep, out)
        }
    };
    write_json(&out, &report)?;
    Ok(status_code(&report))
}

fn status_code(r: &SolveReport) -> i32 {
    eprintln!("{} (nodes expanded: {})", r.status, r.nodes_expanded);
    match r.status {
        Status::Sat => EXIT_OK,
        Status::Unsat => EXIT_UNSAT,
        Status::Timeout => EXIT_TIMEOUT,
    }
}

fn to_budget(b: &BudgetArgs) -> Budget {
    Budget {
        max_nodes: b.budget_nodes,
        max_time: b.budget_secs.map(|s| Duration::from_secs_f64(s.max(0.0))),
    }
}

fn threads(b: &BudgetArgs) -> usize {
    if b.deterministic {
        1
    } else {
        b.threads.max(1)
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn write_json<T: serde::Serialize>(out: &Output, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_out(out, &text)
}

fn write_out(out: &Output, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
