use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    Domain {
        x: Box<Rational>,
        lo: Box<Rational>,
        hi: Box<Rational>,
    },

    #[error("invalid piecewise-linear map: {0}")]
    InvalidMap(String),

    #[error("not a homeomorphism of [0,1]: {0}")]
    NotHomeo(String),

    #[error("not an open interval map: {0}")]
    NotOpen(String),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("expected f(0) = 0, found {0}")]
    NonzeroAtOrigin(Rational),

    #[error("tent degree must be at least 1")]
    ZeroDegree,

    #[error("block sum needs at least one part")]
    EmptyBlockSum,

    #[error("fixed-point signatures differ: {0} vs {1}")]
    SignatureMismatch(String, String),

    #[error("orbit iteration exceeded the cap of {0} steps (tolerance too small for the cap)")]
    OrbitCap(usize),

    #[error("grid point {0} is not fixed")]
    GridNotFixed(Rational),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("truncation too short: need coordinate {need}, have {have}")]
    TruncationTooShort { need: usize, have: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("certification failed: {0}")]
    Counterexample(String),
}

pub type Result<T> = std::result::Result<T, Error>;
