//! Lie algebras generated by k-local, G-symmetric skew-Hermitian operators
//! on m qubits, for Abelian symmetry groups.
//!
//! The crate computes these algebras three ways and cross-checks them:
//!
//! - an exact brute-force Lie-closure engine over Gaussian-rational sparse
//!   operators ([`closure`]),
//! - closed-form membership criteria and dimension formulas
//!   ([`characterization`]),
//! - explicit bracket-expression certificates that constructively generate
//!   diagonal and off-diagonal targets ([`synthesis`], [`product_rep`]).
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod bits;
pub mod characterization;
pub mod closure;
pub mod dense;
pub mod io;
pub mod operator;
pub mod product_rep;
pub mod scalar;
pub mod symmetry;
pub mod synthesis;

pub use bits::BitString;
pub use operator::{commutator, linear_combine, Operator, PauliTerm};
pub use scalar::{Rational, Scalar};
pub use symmetry::LValue;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("qubit count {0} out of range (1..=16)")]
    QubitCount(u8),
    #[error("bit word {bits:#b} does not fit in {m} qubits")]
    BitsOutOfRange { bits: u16, m: u8 },
    #[error("cannot parse bit string {0:?}")]
    BitStringParse(String),
    #[error("operator qubit counts differ: {0} vs {1}")]
    DimensionMismatch(u8, u8),
    #[error("qubit index {index} out of range for m = {m}")]
    IndexOutOfRange { index: u8, m: u8 },
    #[error("duplicate qubit index {0}")]
    DuplicateIndex(u8),
    #[error("weight {weight} out of range for m = {m}")]
    WeightOutOfRange { weight: u8, m: u8 },
    #[error("empty linear combination")]
    EmptyCombination,
    #[error("operator is not a real combination of iZ-strings")]
    NotDiagonal,
    #[error("empty generator set")]
    EmptyGeneratorSet,
    #[error("locality k = {k} out of range for m = {m}")]
    LocalityOutOfRange { k: u8, m: u8 },
    #[error("group generators do not commute pairwise")]
    NonCommutingGenerators,
    #[error("generator is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),
    #[error("matrix is not an involution (u² deviates from I by {0:.3e})")]
    NonInvolution(f64),
    #[error("sector residue {l} out of range for modulus {modulus}")]
    SectorOutOfRange { l: u32, modulus: u32 },
    #[error("sector projectors need a finite modulus; use exact-weight projectors for L = INF")]
    InfiniteModulusProjector,
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("excluded target: iZ^b with w(b) = m is outside the algebra when L is even")]
    ExcludedTarget,
    #[error("weight {got} does not match the required ladder weight {expected}")]
    WeightMismatch { got: u8, expected: u8 },
    #[error("weights of {0} and {1} are incongruent modulo {2}")]
    IncongruentWeights(String, String, u32),
    #[error("targets coincide; nothing to synthesize")]
    IdenticalTargets,
    #[error("symmetry mask weight {weight} exceeds the locality bound k = {k}")]
    MaskTooHeavy { weight: u8, k: u8 },
    #[error("m = {0} too large for the product-representation oracle path (m ≤ 4)")]
    OracleTooLarge(u8),
    #[error("cannot snap floating value {0} to a rational at the requested tolerance")]
    SnapFailed(f64),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("cannot parse rational {0:?}")]
    RationalParse(String),
    #[error("exact and floating closure dimensions disagree: {exact} vs {float}")]
    ModeDisagreement { exact: usize, float: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
