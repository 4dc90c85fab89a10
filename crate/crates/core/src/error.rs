use thiserror::Error;

use crate::rootsys::Vertex;

/// Errors raised by the library. Every variant carries enough context to
/// reproduce the failing call.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("vertex {0} is out of range")]
    BadVertex(Vertex),

    #[error("word is not reduced (first failure at position {0})")]
    NotReduced(usize),

    #[error("word has length {got}, a word for the longest element needs {expected}")]
    NotLongest { got: usize, expected: usize },

    #[error("vertex {0} is not a source")]
    NotSource(Vertex),

    #[error("vertex {0} is not a sink")]
    NotSink(Vertex),

    #[error("coordinate is not a vertex of the repetition quiver")]
    NotInRepetition,

    #[error("meshes are not defined for A1")]
    RankOne,

    #[error("invalid height function: {0}")]
    InvalidHeight(String),

    #[error("({0},{1}) violates the parity condition")]
    Parity(Vertex, i64),

    #[error("gather map at vertex {0} is not surjective")]
    NotSurjective(Vertex),

    #[error("window covers {got} indices, at least {need} are required")]
    WindowTooSmall { got: usize, need: usize },

    #[error("object is not concentrated in degree zero")]
    NotDegreeZero,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
