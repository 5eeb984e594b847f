use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational `{0}`")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: u64, vertex: u64 },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(u64),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(u64),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownEndpoint { edge: u64, vertex: u64 },
    #[error("unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("graph has no edges")]
    NoEdges,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(u64),
    #[error("graph is disconnected (vertex {0} unreachable)")]
    Disconnected(u64),
    #[error("edge {edge} joins vertices with equal value {value}")]
    EqualValues { edge: u64, value: Rational },
    #[error("edge {edge} has label {label}, not allowed in binary mode")]
    BadLabel { edge: u64, label: u32 },
    #[error("dimension must be at least 2 in general mode, got {0}")]
    BadDimension(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("edge {edge} at degree-1 vertex {vertex} has label {label}; only 0, 1 or 2 are realizable")]
    CapLabel { edge: u64, vertex: u64, label: u32 },
    #[error("binary graphs plan in dimension 1, general graphs in dimension >= 2 (got {0})")]
    DimensionMismatch(u32),
    #[error("no route for vertex {0}")]
    MissingRoute(u64),
    #[error("local model at vertex {vertex} rejected: {reason}")]
    Model { vertex: u64, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("triple (a, b, c) = ({a}, {b}, {c}) has no saddle model")]
    Forbidden { a: usize, b: usize, c: usize },
    #[error("degenerate interval [{lo}, {hi}]")]
    DegenerateInterval { lo: Rational, hi: Rational },
    #[error("fiber {0} cannot be meshed")]
    UnsupportedFiber(String),
    #[error("plan has dimension {0}; only dimension-1 plans can be meshed")]
    Dimension(u32),
    #[error("internal invariant breach in {location}: {detail}")]
    Internal { location: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("edge ({0}, {1}) belongs to {2} triangles")]
    EdgeIncidence(u32, u32, usize),
    #[error("boundary edge ({0}, {1}) is not marked ideal")]
    UnflaggedBoundary(u32, u32),
    #[error("ideal edge ({0}, {1}) is not a boundary edge")]
    IdealNotBoundary(u32, u32),
    #[error("link of vertex {0} is neither a disk nor a circle")]
    VertexLink(u32),
    #[error("triangle ({0}, {1}, {2}) is flat")]
    FlatTriangle(u32, u32, u32),
    #[error("triangle references unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("surface is not orientable")]
    NonOrientable,
    #[error("surface is not connected")]
    Disconnected,
    #[error("coordinates missing for vertex {0}")]
    MissingCoordinates(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReebError {
    #[error("band ({lo}, {hi}) has a cross-section that is not a circle or a line: {detail}")]
    BandCrossSection {
        lo: Rational,
        hi: Rational,
        detail: String,
    },
    #[error("band ({lo}, {hi}) does not close onto a single level component")]
    Attachment { lo: Rational, hi: Rational },
    #[error("mesh has no triangles")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupingError {
    #[error("essential node at {0} lies in no vertex collar")]
    Orphan(Rational),
    #[error("nodes in the collar of value {0} do not form a tree")]
    NotContractible(Rational),
    #[error("no node of the collar cluster sits at the vertex value {0}")]
    MissingCenter(Rational),
}

/// Any failure of the synthesis/verification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Reeb(#[from] ReebError),
    #[error(transparent)]
    Grouping(#[from] GroupingError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
