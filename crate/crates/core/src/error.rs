use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is below the required minimum of 3")]
    DimensionTooSmall(usize),

    #[error("operator is singular (smallest/largest singular value ratio {ratio:.3e})")]
    SingularOperator { ratio: f64 },

    #[error("conjugation is not a ring automorphism of the real field")]
    ConjugationOnReal,

    #[error("entries must be real for a real-field object")]
    ComplexEntryInRealField,

    #[error("non-finite entry")]
    NonFinite,

    #[error("zero vector where a nonzero representative is required")]
    ZeroVector,

    #[error(
        "pairing <x,f> = {pairing:.3e} is too small: the pair spans a nilpotent, not an idempotent"
    )]
    DegeneratePair { pairing: f64 },

    #[error("matrix is not an idempotent (defect {defect:.3e})")]
    NotIdempotent { defect: f64 },

    #[error("extended map is not an idempotent of the expected rank: the map does not preserve zero products")]
    ExtensionInconsistent,

    #[error("trace probe gave {re:.6} + {im:.6}i; expected +i (identity) or -i (conjugation)")]
    UnrecognizedAutomorphism { re: f64, im: f64 },

    #[error("map is not induced by a semilinear operator (residual {residual:.3e})")]
    NotInduced { residual: f64 },

    #[error("probe {index} returned an invalid image: {reason}")]
    DegenerateProbe { index: usize, reason: String },

    #[error("image pairing <Tx,Sf> = {pairing:.3e} vanishes although <x,f> = 1")]
    DegenerateImage { pairing: f64 },

    #[error("map has no entry for the requested idempotent")]
    MissingEntry,

    #[error("malformed input: {0}")]
    Malformed(String),
}
