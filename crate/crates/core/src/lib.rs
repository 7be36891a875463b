//! Anshel-Anshel-Goldfeld key exchange over polycyclic groups, and
//! length-based attacks against it.
//!
//! The crate is organised bottom-up:
//!
//! * [`presentation`]: polycyclic presentations, their JSON file format and
//!   the consistency (overlap) test.
//! * [`collector`]: collection to normal form and group arithmetic.
//! * [`numberfield`]: groups `O_F ⋊ U_F` built from integer polynomials.
//! * [`aag`]: the key-exchange protocol and instance generation.
//! * [`attacks`]: four length-based attack variants.
//! * [`harness`]: batch experiments and report files.

pub mod aag;
pub mod attacks;
pub mod collector;
pub mod harness;
pub mod int;
pub mod numberfield;
pub mod presentation;
pub mod rng;

pub use collector::{length, tuple_length, CollectError, Group, GroupElement, GroupError};
pub use int::Int;
pub use presentation::{
    check_consistency, ConsistencyReport, GeneratorWord, PcPresentation, PresentationError,
    RelOrder, Sign,
};
