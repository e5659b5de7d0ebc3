//! A desk-scale absorption embedder for compatible powers of Hamilton cycles.
//!
//! Stages, in order: sample a reservoir `R`; give every vertex of `R` its own
//! absorber outside `R`; chain those absorbers into one power path; cover most of
//! the rest with greedy power paths; give each leftover vertex an absorber made of
//! `R` vertices; connect all pieces through `R` into a cycle; finally insert every
//! unused reservoir vertex into its absorber. The result is only reported after the
//! independent validator accepts it.

mod good_mates;
mod pieces;
mod reservoir;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BaseSequence, Graph};
use crate::incompat::IncompatibilitySystem;
use crate::search::absorbers::absorbed_sequence;
use crate::search::validate::validate_hamilton_power;
use crate::search::{
    connect_variants, find_absorber, greedy_longest_power_path, is_absorber, AbsorberQuery, Budget,
    GreedyOptions, Status,
};

pub use good_mates::filter_good_mates;
pub use reservoir::{
    a1_holds, a2_holds, check_reservoir, sample_reservoir, sample_reservoir_with, Reservoir,
    ReservoirConfig,
};

use pieces::{Block, Piece};

/// Run parameters. `None` fields are derived from the instance, see [`ResolvedParams`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineParams {
    pub k: usize,
    /// Degree slack; `None` takes `delta(G)/n - k/(k+1)`, floored at 0.
    pub gamma: Option<f64>,
    /// Reservoir inclusion probability.
    pub p: f64,
    /// The cover may leave at most `tau * n` vertices.
    pub tau: f64,
    /// Cover segments need at least `lambda * n` vertices; `None` means `3(k+1)`.
    pub lambda: Option<f64>,
    /// Most interior vertices of one connection; `None` means `3k + 6`.
    pub max_interior: Option<usize>,
    /// Mates (outside `R`) each end of a reservoir vertex's absorber needs.
    pub absorber_min_mates: u64,
    pub reservoir_retries: usize,
    pub a3_samples: usize,
    pub a4_samples: usize,
    pub a4_min_mates: u64,
    /// Node budget of each connection search.
    pub connect_nodes: u64,
    /// Node budget of each absorber search.
    pub absorber_nodes: u64,
    pub greedy: GreedyOptions,
    /// Fail a connection stage once its avoid set reaches this size.
    pub avoid_cap: Option<usize>,
    /// Whole-pipeline attempts, each with a fresh reservoir.
    pub attempts: usize,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            k: 2,
            gamma: None,
            p: 0.1,
            tau: 0.1,
            lambda: None,
            max_interior: None,
            absorber_min_mates: 1,
            reservoir_retries: 2000,
            a3_samples: 4,
            a4_samples: 8,
            a4_min_mates: 1,
            connect_nodes: 200_000,
            absorber_nodes: 200_000,
            greedy: GreedyOptions::default(),
            avoid_cap: None,
            attempts: 3,
        }
    }
}

impl PipelineParams {
    pub fn with_k(k: usize) -> Self {
        PipelineParams {
            k,
            ..Self::default()
        }
    }

    /// The cap `min(gamma, beta) * n / 2` on avoid sets used by the connecting argument.
    pub fn theoretical_avoid_cap(n: usize, gamma: f64, beta: f64) -> usize {
        (gamma.min(beta) * n as f64 / 2.0).floor() as usize
    }

    pub fn resolve(&self, g: &Graph, sys: &IncompatibilitySystem) -> Result<ResolvedParams> {
        let n = g.n();
        let k = self.k;
        if k == 0 {
            return Err(Error::BadParams("k must be at least 1".into()));
        }
        if n < 2 * k + 2 {
            return Err(Error::BadParams(format!("n = {n} is too small for k = {k}")));
        }
        if !(0.0..=1.0).contains(&self.p) || !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::BadParams("p and tau must lie in [0, 1]".into()));
        }
        if self.attempts == 0 {
            return Err(Error::BadParams("attempts must be at least 1".into()));
        }
        let gamma = match self.gamma {
            Some(gm) if gm.is_finite() => gm,
            Some(gm) => return Err(Error::BadParams(format!("gamma must be finite, got {gm}"))),
            None => (g.min_degree() as f64 / n as f64 - k as f64 / (k + 1) as f64).max(0.0),
        };
        let min_segment = match self.lambda {
            Some(l) if l > 0.0 => ((l * n as f64).ceil() as usize).max(k),
            Some(l) => return Err(Error::BadParams(format!("lambda must be positive, got {l}"))),
            None => 3 * (k + 1),
        };
        Ok(ResolvedParams {
            gamma,
            min_segment,
            max_interior: self.max_interior.unwrap_or(3 * k + 6),
            leftover_cap: (self.tau * n as f64).floor() as usize,
            system_bound: sys.boundedness(),
        })
    }
}

/// Parameters after filling in instance-dependent defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParams {
    pub gamma: f64,
    pub min_segment: usize,
    pub max_interior: usize,
    pub leftover_cap: usize,
    /// Largest number of pairs any edge lies in at one endpoint.
    pub system_bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Reservoir,
    Absorbers,
    Chain,
    Cover,
    LeftoverAbsorbers,
    Connections,
    Absorption,
    Validation,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
        Stage::Reservoir => "reservoir",
        Stage::Absorbers => "absorbers",
        Stage::Chain => "chain",
        Stage::Cover => "cover",
        Stage::LeftoverAbsorbers => "leftover_absorbers",
        Stage::Connections => "connections",
        Stage::Absorption => "absorption",
            Stage::Validation => "validation",
        }
    }
}

/// Vertices a stage took, with a short note. Apart from the reservoir itself,
/// the ledgers of one attempt are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageLog {
    pub stage: Stage,
    pub vertices: Vec<usize>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorberAssignment {
    pub vertex: usize,
    pub absorber: Vec<usize>,
    /// Whether the vertex ended up inside the absorber.
    pub absorbed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptLog {
    pub seed: u64,
    pub stages: Vec<StageLog>,
    pub assignments: Vec<AbsorberAssignment>,
    pub failure: Option<StageFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineOutcome {
    /// Base cycle of a validated compatible Hamilton `k`-th power.
    Certificate { cycle: Vec<usize> },
    Failure(StageFailure),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub n: usize,
    pub seed: u64,
    pub params: PipelineParams,
    pub resolved: ResolvedParams,
    pub attempts: Vec<AttemptLog>,
    pub outcome: PipelineOutcome,
}

impl PipelineReport {
    pub fn certificate(&self) -> Option<&[usize]> {
        match &self.outcome {
            PipelineOutcome::Certificate { cycle } => Some(cycle),
            PipelineOutcome::Failure(_) => None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.certificate().is_some()
    }
}

/// Runs the absorption pipeline. Stage failures are reported in the outcome;
/// only malformed parameters are errors. Deterministic for a fixed seed.
pub fn run_pipeline(
    g: &Graph,
    sys: &IncompatibilitySystem,
    params: &PipelineParams,
    seed: u64,
) -> Result<PipelineReport> {
    if !sys.is_over(g) {
        return Err(Error::BadParams(
            "incompatibility system was built over a different graph".into(),
        ));
    }
    let resolved = params.resolve(g, sys)?;
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = Vec::new();
    let mut outcome = None;
    for i in 0..params.attempts {
        let attempt_seed = if i == 0 { seed } else { seeds.gen() };
        let mut run = Attempt::new(g, sys, params, &resolved, attempt_seed);
        let result = run.execute();
        let failure = result.as_ref().err().cloned();
        attempts.push(AttemptLog {
            seed: attempt_seed,
            stages: run.stages,
            assignments: run.assignments,
            failure: failure.clone(),
        });
        match result {
            Ok(cycle) => {
                outcome = Some(PipelineOutcome::Certificate { cycle });
                break;
            }
            Err(f) => outcome = Some(PipelineOutcome::Failure(f)),
        }
    }
    Ok(PipelineReport {
        n: g.n(),
        seed,
        params: params.clone(),
        resolved,
        attempts,
        outcome: outcome.expect("at least one attempt"),
    })
}

type StageResult<T> = std::result::Result<T, StageFailure>;

fn fail<T>(stage: Stage, reason: impl Into<String>) -> StageResult<T> {
    Err(StageFailure {
        stage,
        reason: reason.into(),
    })
}

struct Attempt<'a> {
    g: &'a Graph,
    sys: &'a IncompatibilitySystem,
    params: &'a PipelineParams,
    resolved: &'a ResolvedParams,
    seed: u64,
    k: usize,
    used: FixedBitSet,
    /// Reservoir vertices consumed after the reservoir stage.
    r_taken: FixedBitSet,
    stages: Vec<StageLog>,
    assignments: Vec<AbsorberAssignment>,
}

impl<'a> Attempt<'a> {
    fn new(
        g: &'a Graph,
        sys: &'a IncompatibilitySystem,
        params: &'a PipelineParams,
        resolved: &'a ResolvedParams,
        seed: u64,
    ) -> Self {
        Attempt {
            g,
            sys,
            params,
            resolved,
            seed,
            k: params.k,
            used: FixedBitSet::with_capacity(g.n()),
            r_taken: FixedBitSet::with_capacity(g.n()),
            stages: Vec::new(),
            assignments: Vec::new(),
        }
    }

    fn log(&mut self, stage: Stage, mut vertices: Vec<usize>, note: String) {
        vertices.sort_unstable();
        self.stages.push(StageLog {
            stage,
            vertices,
            note,
        });
    }

    fn take(&mut self, vs: &[usize]) {
        for &v in vs {
            debug_assert!(!self.used.contains(v), "vertex {v} used twice");
            self.used.insert(v);
        }
    }

    fn execute(&mut self) -> StageResult<Vec<usize>> {
        let n = self.g.n();
        let k = self.k;

        // reservoir
        let cfg = ReservoirConfig {
            p: self.params.p,
            gamma: self.resolved.gamma,
            k,
            max_retries: self.params.reservoir_retries,
            a3_samples: self.params.a3_samples,
            a4_samples: self.params.a4_samples,
            absorber_min_mates: self.params.absorber_min_mates,
            a4_min_mates: self.params.a4_min_mates,
            search_nodes: self.params.absorber_nodes,
        };
        let reservoir = match sample_reservoir_with(self.g, self.sys, &cfg, self.seed) {
            Ok(r) => r,
            Err(e) => return fail(Stage::Reservoir, e.to_string()),
        };
        let r_set = reservoir.as_set(n);
        let mut outside = r_set.clone();
        outside.toggle_range(..);
        self.log(
            Stage::Reservoir,
            reservoir.vertices.clone(),
            format!("|R| = {} after {} retries", reservoir.len(), reservoir.retries_used),
        );
        self.take(&reservoir.vertices);

        // one absorber per reservoir vertex, outside R
        let mut absorber_pieces = Vec::with_capacity(reservoir.len());
        let mut absorber_vertices = Vec::new();
        for &v in &reservoir.vertices {
            let mut free = self.used.clone();
            free.toggle_range(..);
            let mut q = AbsorberQuery::new(v, k);
            q.allowed = Some(&free);
            q.min_mates = self.params.absorber_min_mates;
            q.mates_within = Some(&outside);
            q.budget = Budget::nodes(self.params.absorber_nodes);
            let a = match find_absorber(self.g, self.sys, &q) {
                Ok(Some(a)) => a,
                Ok(None) => {
                    self.log(Stage::Absorbers, absorber_vertices, "incomplete".into());
                    return fail(Stage::Absorbers, format!("no absorber for reservoir vertex {v}"));
                }
                Err(e) => return fail(Stage::Absorbers, e.to_string()),
            };
            let base = a.base.into_vertices();
            self.take(&base);
            absorber_vertices.extend_from_slice(&base);
            self.assignments.push(AbsorberAssignment {
                vertex: v,
                absorber: base.clone(),
                absorbed: false,
            });
            absorber_pieces.push(Piece::single(Block::Absorber {
                base,
                vertex: v,
                absorbed: false,
            }));
        }
        let count = absorber_pieces.len();
        self.log(Stage::Absorbers, absorber_vertices, format!("{count} absorbers"));

        // chain the absorbers through vertices outside R
        let mut chain_pool = self.used.clone();
        chain_pool.toggle_range(..);
        let (chain, chain_interior) = match self.connect_all(absorber_pieces, &chain_pool, n, false) {
            Ok(x) => x,
            Err(reason) => return fail(Stage::Chain, reason),
        };
        self.take(&chain_interior);
        let note = format!("{} interior vertices", chain_interior.len());
        self.log(Stage::Chain, chain_interior, note);

        // greedy almost-cover of what is left outside R
        let mut rest = self.used.clone();
        rest.toggle_range(..);
        let mut segments = Vec::new();
        let mut covered = Vec::new();
        let mut round = 0u64;
        while rest.count_ones(..) > 0 {
            let seed = self.seed ^ (round.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            round += 1;
            let path = match greedy_longest_power_path(
                self.g,
                self.sys,
                &rest,
                k,
                seed,
                &self.params.greedy,
            ) {
                Ok(p) => p.base.into_vertices(),
                Err(e) => return fail(Stage::Cover, e.to_string()),
            };
            if path.len() < self.resolved.min_segment {
                break;
            }
            for &v in &path {
                rest.set(v, false);
            }
            covered.extend_from_slice(&path);
            segments.push(path);
        }
        let leftover: Vec<usize> = rest.ones().collect();
        self.take(&covered);
        let note = format!("{} segments, {} leftover", segments.len(), leftover.len());
        self.log(Stage::Cover, covered, note);
        if leftover.len() > self.resolved.leftover_cap {
            return fail(
                Stage::Cover,
                format!(
                    "{} vertices left uncovered, more than the cap {}",
                    leftover.len(),
                    self.resolved.leftover_cap
                ),
            );
        }

        // leftover vertices go into absorbers made of reservoir vertices
        let mut pieces = vec![chain];
        pieces.extend(segments.into_iter().map(|s| Piece::single(Block::Fixed(s))));
        let mut leftover_ledger = Vec::new();
        for &t in &leftover {
            let mut free = r_set.clone();
            free.difference_with(&self.r_taken);
            let mut q = AbsorberQuery::new(t, k);
            q.allowed = Some(&free);
            q.budget = Budget::nodes(self.params.absorber_nodes);
            let a = match find_absorber(self.g, self.sys, &q) {
                Ok(Some(a)) => a.base.into_vertices(),
                Ok(None) => {
                    self.log(Stage::LeftoverAbsorbers, leftover_ledger, "incomplete".into());
                    return fail(
                        Stage::LeftoverAbsorbers,
                        format!("no absorber in the reservoir for leftover vertex {t}"),
                    );
                }
                Err(e) => return fail(Stage::LeftoverAbsorbers, e.to_string()),
            };
            self.take_reservoir(&a);
            self.take(&[t]);
            leftover_ledger.push(t);
            leftover_ledger.extend_from_slice(&a);
            self.assignments.push(AbsorberAssignment {
                vertex: t,
                absorber: a.clone(),
                absorbed: true,
            });
            pieces.push(Piece::single(Block::Fixed(absorbed_sequence(&a, t, k))));
        }
        let note = format!("{} leftover vertices absorbed", leftover.len());
        self.log(Stage::LeftoverAbsorbers, leftover_ledger, note);

        // connect everything through the free part of R and close the cycle
        let mut pool = r_set.clone();
        pool.difference_with(&self.r_taken);
        let (whole, interior) = match self.connect_all(pieces, &pool, reservoir.len(), true) {
            Ok(x) => x,
            Err(reason) => return fail(Stage::Connections, reason),
        };
        self.take_reservoir(&interior);
        let note = format!("{} reservoir vertices used", interior.len());
        self.log(Stage::Connections, interior, note);

        // absorb every reservoir vertex nobody used
        let spare: Vec<usize> = reservoir
            .vertices
            .iter()
            .copied()
            .filter(|&v| !self.r_taken.contains(v))
            .collect();
        let mut whole = whole;
        for block in &mut whole.blocks {
            if let Block::Absorber {
                base,
                vertex,
                absorbed,
            } = block
            {
                if spare.contains(vertex) {
                    if !is_absorber(self.g, self.sys, *vertex, base, k) {
                        return fail(Stage::Absorption, format!("absorber of {vertex} no longer absorbs"));
                    }
                    *absorbed = true;
                    if let Some(a) = self.assignments.iter_mut().find(|a| a.vertex == *vertex) {
                        a.absorbed = true;
                    }
                }
            }
        }
        let note = format!("{} reservoir vertices absorbed", spare.len());
        self.log(Stage::Absorption, spare, note);

        let cycle = whole.flatten(k);
        let base = match BaseSequence::cycle(cycle.clone()) {
            Ok(b) => b,
            Err(e) => return fail(Stage::Validation, e.to_string()),
        };
        if let Err(e) = validate_hamilton_power(self.g, self.sys, &base, k) {
            return fail(Stage::Validation, e.to_string());
        }
        Ok(cycle)
    }

    fn take_reservoir(&mut self, vs: &[usize]) {
        for &v in vs {
            debug_assert!(!self.r_taken.contains(v), "reservoir vertex {v} used twice");
            self.r_taken.insert(v);
        }
    }

    /// Joins `pieces` one after another, always trying the remaining pieces in
    /// order, with interiors drawn from `pool`. With `close` the last piece is also
    /// joined back to the first. `universe` is the size of the host the pool lives
    /// in; the avoid set is everything of it outside the pool.
    fn connect_all(
        &self,
        pieces: Vec<Piece>,
        pool: &FixedBitSet,
        universe: usize,
        close: bool,
    ) -> std::result::Result<(Piece, Vec<usize>), String> {
        let k = self.k;
        let window = 2 * k;
        let mut remaining = pieces;
        if remaining.is_empty() {
            return Err("nothing to connect".into());
        }
        let mut current = remaining.remove(0);
        let mut pool = pool.clone();
        let mut interior = Vec::new();
        while !remaining.is_empty() {
            let prefixes = current.tail_variants(window, k);
            let mut joined = None;
            for (i, next) in remaining.iter().enumerate() {
                let suffixes = next.head_variants(window, k);
                if let Some(q) = self.connect(&prefixes, &suffixes, &pool, universe)? {
                    joined = Some((i, q));
                    break;
                }
            }
            let Some((i, q)) = joined else {
                return Err(format!(
                    "no connection from the current path to any of {} remaining pieces",
                    remaining.len()
                ));
            };
            for &v in &q {
                pool.set(v, false);
            }
            interior.extend_from_slice(&q);
            let next = remaining.remove(i);
            current.append(q, next);
        }
        if close {
            let prefixes = current.tail_variants(window, k);
            let suffixes = current.head_variants(window, k);
            let Some(q) = self.connect(&prefixes, &suffixes, &pool, universe)? else {
                return Err("could not close the cycle".into());
            };
            interior.extend_from_slice(&q);
            current.append(q, Piece::default());
        }
        Ok((current, interior))
    }

    fn connect(
        &self,
        prefixes: &[Vec<usize>],
        suffixes: &[Vec<usize>],
        pool: &FixedBitSet,
        universe: usize,
    ) -> std::result::Result<Option<Vec<usize>>, String> {
        let avoid = universe.saturating_sub(pool.count_ones(..));
        if let Some(cap) = self.params.avoid_cap {
            if avoid >= cap {
                return Err(format!("avoid set of {avoid} vertices reached the cap {cap}"));
            }
        }
        let out = connect_variants(
            self.g,
            self.sys,
            self.k,
            prefixes,
            suffixes,
            pool,
            self.resolved.max_interior,
            Budget::nodes(self.params.connect_nodes),
        )
        .map_err(|e| e.to_string())?;
        Ok((out.status == Status::Sat).then(|| out.interior.unwrap_or_default()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_space_barrier, BarrierSpec};

    fn check_ledgers(report: &PipelineReport) {
        let n = report.n;
        for attempt in &report.attempts {
            let mut seen = vec![false; n];
            for log in attempt.stages.iter().filter(|l| l.stage != Stage::Reservoir) {
                for &v in &log.vertices {
                    assert!(!seen[v], "vertex {v} in two ledgers");
                    seen[v] = true;
                }
            }
            if attempt.failure.is_none() {
                assert!(seen.iter().all(|&b| b), "ledgers do not cover V");
            }
        }
    }

    #[test]
    fn complete_graph_succeeds() {
        let g = Graph::complete(40);
        let sys = IncompatibilitySystem::empty(&g);
        let report = run_pipeline(&g, &sys, &PipelineParams::with_k(2), 7).unwrap();
        let cycle = report.certificate().expect("K_40 must succeed");
        let base = BaseSequence::cycle(cycle.to_vec()).unwrap();
        validate_hamilton_power(&g, &sys, &base, 2).unwrap();
        check_ledgers(&report);
    }

    #[test]
    fn dense_random_host_succeeds_and_validates() {
        let g = crate::generators::gnp(60, 0.9, 3).unwrap();
        let sys = crate::incompat::gen_random_system(&g, 1, 3);
        let report = run_pipeline(&g, &sys, &PipelineParams::with_k(2), 3).unwrap();
        let cycle = report.certificate().expect("fixture seed succeeds");
        let base = BaseSequence::cycle(cycle.to_vec()).unwrap();
        validate_hamilton_power(&g, &sys, &base, 2).unwrap();
        check_ledgers(&report);
        for a in report.attempts.last().unwrap().assignments.iter().filter(|a| a.absorbed) {
            assert!(is_absorber(&g, &sys, a.vertex, &a.absorber, 2));
        }
    }

    #[test]
    fn barrier_never_certifies() {
        let b = build_space_barrier(&BarrierSpec::standard(2, 12).unwrap()).unwrap();
        let mut params = PipelineParams::with_k(2);
        params.reservoir_retries = 50;
        for seed in 0..5 {
            let report = run_pipeline(&b.graph, &b.system, &params, seed).unwrap();
            assert!(!report.is_success());
            check_ledgers(&report);
        }
    }

    #[test]
    fn same_seed_same_report() {
        let g = crate::generators::gnp(40, 0.9, 11).unwrap();
        let sys = crate::incompat::gen_random_system(&g, 1, 11);
        let params = PipelineParams::with_k(2);
        let a = run_pipeline(&g, &sys, &params, 99).unwrap();
        let b = run_pipeline(&g, &sys, &params, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn k1_pipeline() {
        let g = crate::generators::gnp(40, 0.8, 5).unwrap();
        let sys = crate::incompat::gen_random_system(&g, 2, 5);
        let report = run_pipeline(&g, &sys, &PipelineParams::with_k(1), 5).unwrap();
        if let Some(cycle) = report.certificate() {
            let base = BaseSequence::cycle(cycle.to_vec()).unwrap();
            validate_hamilton_power(&g, &sys, &base, 1).unwrap();
        }
        check_ledgers(&report);
    }

    #[test]
    fn avoid_cap_and_partial_params() {
        assert_eq!(PipelineParams::theoretical_avoid_cap(60, 0.1, 0.2), 3);
        assert_eq!(PipelineParams::theoretical_avoid_cap(60, 0.3, 0.05), 1);
        let p: PipelineParams = serde_json::from_str(r#"{"k": 3, "greedy": {"restarts": 1}}"#).unwrap();
        assert_eq!(p.k, 3);
        assert_eq!(p.greedy.restarts, 1);
        assert_eq!(p.attempts, PipelineParams::default().attempts);
        assert!(serde_json::from_str::<PipelineParams>(r#"{"q": 1}"#).is_err());
    }

    #[test]
    fn malformed_params_are_errors() {
        let g = Graph::complete(20);
        let sys = IncompatibilitySystem::empty(&g);
        let mut p = PipelineParams::with_k(0);
        assert!(run_pipeline(&g, &sys, &p, 0).is_err());
        p.k = 2;
        p.p = 1.5;
        assert!(run_pipeline(&g, &sys, &p, 0).is_err());
        p.p = 0.1;
        p.attempts = 0;
        assert!(run_pipeline(&g, &sys, &p, 0).is_err());
        let small = Graph::complete(5);
        let small_sys = IncompatibilitySystem::empty(&small);
        assert!(run_pipeline(&small, &small_sys, &PipelineParams::with_k(2), 0).is_err());
    }

    #[test]
    fn avoid_cap_stops_connections() {
        let g = Graph::complete(40);
        let sys = IncompatibilitySystem::empty(&g);
        let mut p = PipelineParams::with_k(2);
        p.avoid_cap = Some(1);
        let report = run_pipeline(&g, &sys, &p, 7).unwrap();
        match &report.outcome {
            PipelineOutcome::Failure(f) => {
                assert_eq!(f.stage, Stage::Chain);
                assert!(f.reason.contains("cap"));
            }
            other => panic!("expected a failure, got {other:?}"),
        }
    }

    #[test]
    fn p_zero_fails_at_the_reservoir() {
        let g = Graph::complete(20);
        let sys = IncompatibilitySystem::empty(&g);
        let mut p = PipelineParams::with_k(2);
        p.p = 0.0;
        p.attempts = 1;
        let report = run_pipeline(&g, &sys, &p, 0).unwrap();
        assert!(matches!(
            report.outcome,
            PipelineOutcome::Failure(StageFailure { stage: Stage::Reservoir, .. })
        ));
    }
}
