use thiserror::Error;

use crate::lie::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no simple type {family}{rank}: valid ranks are A 1..=16, B/C 2..=16, D 4..=16, E 6..=8, F 4, G 2")]
    InvalidType { family: Family, rank: usize },
    #[error("unknown family {0:?}: expected one of A, B, C, D, E, F, G")]
    UnknownFamily(String),
    #[error("simple root index {index} out of range for rank {rank}")]
    RootIndex { index: usize, rank: usize },
    #[error("Cartan submatrix does not match any finite type: {0}")]
    Classification(String),
    #[error("boundary squares to nonzero on J1={j1}, roots {i} and {j}: {value}")]
    BoundarySquare {
        j1: String,
        i: usize,
        j: usize,
        value: i64,
    },
    #[error("{0} is not supported for {1}")]
    Unsupported(&'static str, String),
    #[error("tau_{j} bilinear identity is not proportional")]
    NotProportional { j: usize },
    #[error("tau_{k} restricts to zero")]
    VanishingTau { k: usize },
    #[error("tau_{k} vanishes at the evaluation point (divisor hit)")]
    BlowUp { k: usize },
    #[error("zero polynomial has no Sturm sequence")]
    ZeroPolynomial,
    #[error("component counts disagree: polynomial gives {polynomial}, sign action gives {weyl}")]
    ComponentMismatch { polynomial: usize, weyl: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
