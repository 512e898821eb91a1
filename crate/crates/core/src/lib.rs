//! Guessing random additive noise decoding (GRAND) for short binary linear
//! block codes.
//!
//! The crate provides three pattern orders over one decoding engine:
//!
//! * step-GRAND, which tests Hamming-weight-ordered patterns restricted to
//!   shrinking subsets of the least reliable positions;
//! * GRANDAB, the hard-input baseline that tests every pattern up to an
//!   abandonment weight;
//! * ORBGRAND, the soft-input baseline ordered by logistic weight.
//!
//! Around the engine sit a GF(2) substrate ([`gf2`]), code constructors
//! ([`codes`]), a BPSK/AWGN channel ([`channel`]), a cycle model of the
//! step-GRAND hardware schedule ([`hwmodel`]) and a Monte-Carlo harness
//! ([`sim`]).

pub mod channel;
pub mod codes;
pub mod decoder;
pub mod gf2;
pub mod hwmodel;
pub mod patterns;
pub mod sim;

pub use channel::{ChannelConfig, SoftVector};
pub use codes::{CrcSpec, LinearCode};
pub use decoder::{DecodeResult, DecodeTrace, Decoder, Variant};
pub use gf2::{BitMatrix, BitWord};
pub use hwmodel::LatencyModel;
pub use patterns::{SortedReliability, StepSchedule, Tep};
pub use sim::{PointStats, SweepConfig};

/// Errors produced by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is rank deficient: expected rank {expected}, found rank {rank}")]
    RankDeficient { expected: usize, rank: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed decode trace: {0}")]
    MalformedTrace(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
