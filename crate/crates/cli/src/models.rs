use clap::ValueEnum;
use ihs_core::generators::{derive_seed, gnp, gnp_min_degree};
use ihs_core::{build_space_barrier, gen_random_system, BarrierSpec, Graph};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::instance::{Instance, Metadata};
use crate::CliError;

/// Instance families `gen` and `experiment` can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// The unbalanced complete multipartite barrier; needs `k` and `(k+1) | n`.
    Barrier,
    /// `G(n, p)` with a random `bound`-bounded system.
    Gnp,
    /// `K_n` with a random `bound`-bounded system.
    Complete,
    /// `G(n, p)` resampled until the minimum degree reaches `min_degree`.
    Dirac,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Barrier => "barrier",
            Model::Gnp => "gnp",
            Model::Complete => "complete",
            Model::Dirac => "dirac",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub model: Model,
    pub n: usize,
    pub k: Option<usize>,
    pub bound: usize,
    pub p: Option<f64>,
    pub min_degree: Option<usize>,
    pub seed: u64,
}

const GRAPH_STREAM: u64 = 0;
const SYSTEM_STREAM: u64 = 1;
const DIRAC_TRIES: usize = 100_000;

/// Builds one instance. Graph and system draw from separate streams of `seed`.
pub fn generate(gp: &GenParams) -> Result<Instance, CliError> {
    let n = gp.n;
    let graph_seed = derive_seed(gp.seed, GRAPH_STREAM);
    let system_seed = derive_seed(gp.seed, SYSTEM_STREAM);
    let random_system = |g: &Graph| gen_random_system(g, gp.bound, system_seed);
    let (graph, system, seed, spec) = match gp.model {
        Model::Barrier => {
            let k = gp
                .k
                .ok_or_else(|| CliError::Usage("the barrier model needs --k".into()))?;
            let b = build_space_barrier(&BarrierSpec::standard(k, n)?)?;
            let spec = serde_json::to_value(&b.spec)?;
            (b.graph, b.system, None, spec)
        }
        Model::Gnp => {
            let p = gp.p.unwrap_or(0.5);
            let g = gnp(n, p, graph_seed)?;
            let sys = random_system(&g);
            (g, sys, Some(gp.seed), json!({ "model": "gnp", "p": p, "bound": gp.bound }))
        }
        Model::Complete => {
            let g = Graph::complete(n);
            let sys = random_system(&g);
            (g, sys, Some(gp.seed), json!({ "model": "complete", "bound": gp.bound }))
        }
        Model::Dirac => {
            let p = gp.p.unwrap_or(0.6);
            let d = gp.min_degree.unwrap_or(n.div_ceil(2));
            let (g, rejected) = gnp_min_degree(n, p, d, graph_seed, DIRAC_TRIES)?;
            let sys = random_system(&g);
            let spec = json!({
                "model": "dirac",
                "p": p,
                "min_degree": d,
                "bound": gp.bound,
                "rejected": rejected,
            });
            (g, sys, Some(gp.seed), spec)
        }
    };
    Ok(Instance {
        graph,
        system,
        metadata: Metadata {
            generator: Some(gp.model.as_str().into()),
            seed,
            k: gp.k,
            spec: Some(spec),
        },
    })
}
