use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("closure of the linear parts exceeds order 12; not a planar crystallographic point group")]
    HolonomyUnbounded,
    #[error("translation lattice has rank {rank} < 2; the group is not cocompact")]
    LatticeDeficient { rank: usize },
    #[error("matrix group is not finite (closure exceeded 12 elements)")]
    NotFinite,
    #[error("cochain fails the cocycle identity at ({0}, {1}, {2})")]
    InvalidCocycle(usize, usize, usize),
    #[error("generator `{0}` has no assigned image")]
    UnboundGenerator(String),
    #[error("coset enumeration exceeded {max} cosets")]
    TableOverflow { max: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown identifier `{0}`")]
    UnknownName(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
