use thiserror::Error;

use crate::complex::Simplex;

/// Errors reported by the operations of this crate.
///
/// Every failure carries a finite witness: the offending simplex, the
/// face pair on which a compatibility check broke, or the name of the
/// violated law together with a printable witness term.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed simplex: duplicate or empty vertex list {0:?}")]
    MalformedSimplex(Vec<String>),

    #[error("simplex {0} does not belong to the complex")]
    NotInComplex(Simplex),

    #[error("invalid barycentric point: {0}")]
    InvalidPoint(String),

    #[error("Jacobi identity fails on basis triple ({i},{j},{k}); defect {defect}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        defect: String,
    },

    #[error("cochain degree {degree} exceeds Lie algebra dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("Lie algebra structure constants malformed: {0}")]
    MalformedLieAlgebra(String),

    #[error("forms live on different simplices: {0} vs {1}")]
    SimplexMismatch(Simplex, Simplex),

    #[error("degrees do not match: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("a form mixes terms of different total degrees")]
    MixedDegree,

    #[error("{face} is not a face of {of}")]
    NotAFace { face: Simplex, of: Simplex },

    #[error("boundary family incompatible on face {face}; difference {difference}")]
    IncompatibleBoundary { face: Simplex, difference: String },

    #[error("family incompatible: restriction of the {simplex} component to {face} differs by {difference}")]
    Incompatible {
        simplex: Simplex,
        face: Simplex,
        difference: String,
    },

    #[error("{0} is not a simplex of a subcomplex of the base")]
    NotASubcomplex(Simplex),

    #[error("operands belong to different parents: {0}")]
    ParentMismatch(String),

    #[error("presheaf law `{law}` violated; witness: {witness}")]
    LawViolation { law: String, witness: String },

    #[error("cover misses the interior of {0}")]
    MissingSimplex(Simplex),

    #[error("not a cover of the complex (interior of {0} uncovered)")]
    NotACover(Simplex),

    #[error("sections over {left} and {right} disagree on {simplex}; difference {difference}")]
    GluingIncompatible {
        left: Simplex,
        right: Simplex,
        simplex: Simplex,
        difference: String,
    },

    #[error("parse error in {file}: {message}")]
    Parse { file: String, message: String },
}
