use alloc::string::String;

/// Errors raised by the structural and numeric operations of this crate.
///
/// Failed *checks* (a representation violating an axiom, a CK family with a
/// nonzero defect) are not errors; they are reported through
/// [`crate::rep::CovarianceReport`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("operands live over different algebras (blocks {left:?} vs {right:?})")]
    AlgebraMismatch {
        left: alloc::vec::Vec<usize>,
        right: alloc::vec::Vec<usize>,
    },

    #[error("operands live in different Hilbert modules (fibers {left:?} vs {right:?})")]
    ModuleMismatch {
        left: alloc::vec::Vec<usize>,
        right: alloc::vec::Vec<usize>,
    },

    #[error("{what}: expected a {expected_rows}x{expected_cols} matrix, got {rows}x{cols}")]
    Shape {
        what: String,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("block index {index} out of range for an algebra with {blocks} blocks")]
    BlockOutOfRange { index: usize, blocks: usize },

    #[error("invalid left action: {0}")]
    InvalidLeftAction(String),

    #[error("invalid partial automorphism: {0}")]
    InvalidPartialAutomorphism(String),

    #[error("graph references unknown vertex \"{vertex}\" in edge \"{edge}\"")]
    UnknownVertex { edge: String, vertex: String },

    #[error("duplicate {kind} name \"{name}\"")]
    DuplicateName { kind: &'static str, name: String },

    #[error("unknown {kind} \"{name}\"")]
    UnknownName { kind: &'static str, name: String },

    #[error("vertex \"{0}\" is an infinite emitter; only the symbolic graph operations support it")]
    InfiniteEmitter(String),

    #[error("level {level} of the Fock space has dimension {dim}, above the cap {cap}")]
    DimensionCap { level: usize, dim: usize, cap: usize },

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("psi_t is not well defined on this input: decomposition residual {residual:e}")]
    IllDefinedPsi { residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
