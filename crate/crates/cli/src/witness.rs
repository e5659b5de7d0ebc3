use ihs_core::search::validate::{validate_clique_factor, validate_hamilton_power, validate_power};
use ihs_core::{BaseSequence, CertificateError, Graph, IncompatibilitySystem, SolveOutcome, Status, Witness};
use serde::{Deserialize, Serialize};

/// A certificate as written to disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WitnessFile {
    HamiltonPower { k: usize, cycle: Vec<usize> },
    PowerPath { k: usize, path: Vec<usize> },
    CliqueFactor { r: usize, cliques: Vec<Vec<usize>> },
}

impl WitnessFile {
    pub fn validate(&self, g: &Graph, sys: &IncompatibilitySystem) -> Result<(), CertificateError> {
        match self {
            WitnessFile::HamiltonPower { k, cycle } => {
                let base = BaseSequence::cycle(cycle.clone()).map_err(CertificateError::Malformed)?;
                validate_hamilton_power(g, sys, &base, *k)
            }
            WitnessFile::PowerPath { k, path } => {
                let base = BaseSequence::path(path.clone()).map_err(CertificateError::Malformed)?;
                validate_power(g, sys, &base, *k)
            }
            WitnessFile::CliqueFactor { r, cliques } => validate_clique_factor(g, sys, cliques, *r),
        }
    }

    /// Number of vertices the certificate lists.
    pub fn len(&self) -> usize {
        match self {
            WitnessFile::HamiltonPower { cycle, .. } => cycle.len(),
            WitnessFile::PowerPath { path, .. } => path.len(),
            WitnessFile::CliqueFactor { cliques, .. } => cliques.iter().map(Vec::len).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What `solve` writes: the status plus the certificate when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub problem: String,
    pub status: Status,
    pub nodes_expanded: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFile>,
}

/// Either a bare certificate or a solve report carrying one.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CertificateInput {
    Bare(WitnessFile),
    Report(SolveReport),
}

impl CertificateInput {
    pub fn witness(&self) -> Option<&WitnessFile> {
        match self {
            CertificateInput::Bare(w) => Some(w),
            CertificateInput::Report(r) => r.witness.as_ref(),
        }
    }
}

/// Turns a solver outcome into a report, re-checking the certificate first.
pub fn report_outcome(
    problem: &str,
    out: &SolveOutcome,
    make: impl FnOnce(&Witness) -> WitnessFile,
    g: &Graph,
    sys: &IncompatibilitySystem,
) -> Result<SolveReport, CertificateError> {
    let witness = out.witness.as_ref().map(make);
    if let Some(w) = &witness {
        w.validate(g, sys)?;
    }
    Ok(SolveReport {
        problem: problem.into(),
        status: out.status,
        nodes_expanded: out.nodes_expanded,
        witness,
    })
}

pub fn sequence_of(w: &Witness) -> Vec<usize> {
    match w {
        Witness::Sequence(s) => s.vertices().to_vec(),
        Witness::Factor(f) => f.concat(),
    }
}

pub fn cliques_of(w: &Witness) -> Vec<Vec<usize>> {
    match w {
        Witness::Factor(f) => f.clone(),
        Witness::Sequence(s) => vec![s.vertices().to_vec()],
    }
}
