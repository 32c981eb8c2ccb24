use crate::graph::{VertexId, VertexLabel};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} has label {existing}, event carries {given}")]
    LabelConflict {
        vertex: VertexId,
        existing: VertexLabel,
        given: VertexLabel,
    },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(VertexId, VertexId),
    #[error("subgraph size {k} outside the supported range {min}..={max}")]
    UnsupportedK { k: usize, min: usize, max: usize },
    #[error("pattern enumeration needs {needed} labelings, budget is {budget}")]
    EnumerationBudget { needed: u128, budget: u128 },
    #[error("subgraph {0:?} is already in the sample")]
    DuplicateInstance(alloc::vec::Vec<VertexId>),
    #[error("subgraph {0:?} is not in the sample")]
    NotInSample(alloc::vec::Vec<VertexId>),
    #[error("requested {requested} new subgraphs but only {available} exist")]
    NotEnoughSubgraphs { requested: usize, available: usize },
    #[error("sketches differ in size ({0} vs {1}) or hasher")]
    SketchMismatch(usize, usize),
    #[error("hash value {0:#018x} is not stored in the sketch")]
    SketchValueAbsent(u64),
    #[error("deletion event in an incremental engine")]
    DeletionNotAllowed,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("invariant violated: {0}")]
    Invariant(&'static str),
}
