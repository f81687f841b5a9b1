use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a squarefree integer greater than 1")]
    NotSquarefree(String),
    #[error("radicands are dependent modulo squares")]
    DependentRadicands,
    #[error("zero radicand")]
    ZeroRadicand,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("place is complex for this tower")]
    ComplexPlace,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("radicand has no square root in the residue field")]
    IrreducibleRadicand,
    #[error("quaternion algebras differ")]
    AlgebraMismatch,
    #[error("dyadic Hilbert symbol cannot be determined (2 splits in the base field)")]
    DyadicAmbiguity,
    #[error("zero argument to Hilbert symbol")]
    ZeroArgument,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cocycle table is incomplete")]
    IncompleteTable,
    #[error("cocycle is not linear: {0}")]
    NotLinear(String),
    #[error("Hilbert 90 solver exhausted {0} retries")]
    ExhaustedRetries(u32),
    #[error("form is degenerate")]
    Degenerate,
    #[error("no anisotropic pivot found")]
    IsotropicPivotFailure,
    #[error("signature profile mismatch: {0}")]
    SignatureProfileMismatch(String),
    #[error("relator does not evaluate to the identity")]
    RelatorViolation,
    #[error("determinant is not 1")]
    DetNotOne,
    #[error("spectrum of the curve image does not split in the working field")]
    NonSplitSpectrum,
    #[error("multipliers do not multiply to 1")]
    ProductNotOne,
    #[error("multiplier is not positive at the designated place")]
    NonpositiveMultiplier,
    #[error("bending element does not commute with the curve image")]
    CommutationViolation,
    #[error("datum is not expressed in a supported eigenbasis")]
    UnsupportedBasis,
    #[error("even characteristic is not supported")]
    EvenCharacteristic,
    #[error("integer too large to factor: {0}")]
    FactorizationTooHard(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that signal a case outside the implemented scope rather than bad input.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            Error::DyadicAmbiguity
                | Error::IsotropicPivotFailure
                | Error::NonSplitSpectrum
                | Error::UnsupportedBasis
                | Error::IrreducibleRadicand
                | Error::FactorizationTooHard(_)
                | Error::Unsupported(_)
                | Error::NotLinear(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
