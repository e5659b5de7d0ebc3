use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop at vertex {0} is not a valid edge")]
    InvalidEdge(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge id {id} out of range ({count} edges)")]
    EdgeOutOfRange { id: usize, count: usize },
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid incompatibility pair at vertex {vertex}: {reason}")]
    InvalidPair { vertex: usize, reason: String },
    #[error("edge {0} has no color")]
    MissingColor(usize),
    #[error("{n} is not divisible by {by}")]
    BadDivisibility { n: usize, by: usize },
    #[error("inside graph of part {part} is not bipartite")]
    NotBipartite { part: usize },
    #[error("tuple {0:?} does not induce a compatible clique")]
    NotACompatibleClique(Vec<usize>),
    #[error("pattern has {size} vertices, limit is {limit}")]
    PatternTooLarge { size: usize, limit: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("reservoir sampling failed after {retries} retries: property {property} violated")]
    ReservoirFailure {
        property: ReservoirProperty,
        retries: usize,
    },
}

/// The four reservoir properties checked after sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ReservoirProperty {
    /// Size lies in `[pn/2, 3pn/2]` and the reservoir is nonempty.
    A1,
    /// Every vertex keeps a `k/(k+1) + gamma/2` share of the reservoir as neighbours.
    A2,
    /// Sampled vertices keep vertex-disjoint absorbers inside the reservoir.
    A3,
    /// Sampled tuples with many mates keep a `p^k/2` share of them inside the reservoir.
    A4,
}

impl std::fmt::Display for ReservoirProperty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ReservoirProperty::A1 => "A1",
            ReservoirProperty::A2 => "A2",
            ReservoirProperty::A3 => "A3",
            ReservoirProperty::A4 => "A4",
        };
        f.write_str(s)
    }
}
