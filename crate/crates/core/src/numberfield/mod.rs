//! Polycyclic groups `G = O_F ⋊ U_F` from number fields.
//!
//! Degree 1 and real quadratic fields are built from scratch: the order and
//! a fundamental unit are computed here. For higher degree the caller
//! supplies units of the power-basis order `Z[θ]` (or a finished
//! presentation file); [`predicted_hirsch`] works for any degree.

mod poly;
mod quadratic;
mod semidirect;

pub use poly::{predicted_hirsch, signature, Polynomial, Signature};
pub use quadratic::{fundamental_unit, unit_action_matrices, QuadraticFieldData};
pub use semidirect::{
    build_from_power_basis_units, build_from_unit_action, build_semidirect_presentation,
    power_basis_unit_matrix, IntMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumberFieldError {
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("polynomial must have degree at least 1")]
    ZeroDegree,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is reducible over the rationals")]
    Reducible,
    #[error("degree {0} fields need externally supplied units or a presentation file")]
    UnsupportedDegree(usize),
    #[error("field Q(sqrt({0})) is not real quadratic")]
    NotRealQuadratic(i64),
    #[error("discriminant too large for squarefree factorisation")]
    DiscriminantTooLarge,
    #[error("polynomial must be monic for a power-basis order")]
    NotMonic,
    #[error("invalid unit data: {0}")]
    InvalidUnit(String),
}
