use cfermat_core::bounds::PermError;
use cfermat_core::hilbert::HilbertError;
use cfermat_core::residue::ResidueError;
use cfermat_core::solvers::SolveError;
use cfermat_core::waring::WaringError;
use cfermat_core::FieldError;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// A well-posed question whose answer is negative or undefined
/// (no solution, not representable, division by zero, invalid certificate).
pub const EXIT_DOMAIN: i32 = 1;
/// Malformed flags, field specs, elements or JSON documents.
pub const EXIT_USAGE: i32 = 2;
/// An enumeration, brute-force or search cap was hit.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{message}")]
    Domain { result: &'static str, message: String },
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema(_) => EXIT_USAGE,
            CliError::Domain { .. } => EXIT_DOMAIN,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Io(_) => EXIT_USAGE,
        }
    }

    /// Short machine-readable tag for the `result` key of error documents.
    pub fn result_tag(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage_error",
            CliError::Schema(_) => "schema_error",
            CliError::Domain { result, .. } => result,
            CliError::Resource(_) => "resource_cap",
            CliError::Io(_) => "io_error",
        }
    }

    pub fn domain(result: &'static str, message: impl Into<String>) -> CliError {
        CliError::Domain { result, message: message.into() }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> CliError {
        match e {
            FieldError::EnumerationCapExceeded { .. } | FieldError::OrderTooLarge => CliError::Resource(e.to_string()),
            FieldError::DivisionByZero => CliError::domain("division_by_zero", e.to_string()),
            FieldError::ZeroDivisor => CliError::domain("zero_divisor", e.to_string()),
            FieldError::InfiniteField => CliError::domain("infinite_field", e.to_string()),
            FieldError::FieldMismatch => CliError::domain("field_mismatch", e.to_string()),
            FieldError::CompositeCharacteristic(_)
            | FieldError::ReducibleModulus
            | FieldError::InvalidModulus(_)
            | FieldError::NonSquarefreeNumberFieldPolynomial
            | FieldError::Parse(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> CliError {
        match e {
            ResidueError::Field(f) => f.into(),
            ResidueError::ZeroExponent => CliError::Usage(e.to_string()),
            ResidueError::ZeroElement => CliError::domain("zero_element", e.to_string()),
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> CliError {
        match e {
            HilbertError::Field(f) => f.into(),
            HilbertError::SearchBudgetExceeded { .. } | HilbertError::TooManyCopies(_) => {
                CliError::Resource(e.to_string())
            }
            HilbertError::InvalidArguments | HilbertError::InvalidWeight | HilbertError::InvalidExponent => {
                CliError::Usage(e.to_string())
            }
            HilbertError::InvalidIdentity(_) => CliError::domain("invalid_identity", e.to_string()),
            HilbertError::PositiveCharacteristic => CliError::domain("positive_characteristic", e.to_string()),
        }
    }
}

impl From<WaringError> for CliError {
    fn from(e: WaringError) -> CliError {
        match e {
            WaringError::Field(f) => f.into(),
            WaringError::Residue(r) => r.into(),
            WaringError::Hilbert(h) => h.into(),
            WaringError::NotRepresentable => CliError::domain("not_representable", e.to_string()),
            WaringError::HilbertIdentityUnavailable { .. } => CliError::Resource(e.to_string()),
            WaringError::ZeroExponent | WaringError::MissingSquaresCertificate => CliError::Usage(e.to_string()),
            WaringError::ZeroTarget => CliError::domain("zero_target", e.to_string()),
            WaringError::CharacteristicTwo => CliError::domain("characteristic_two", e.to_string()),
            WaringError::NotCharacteristicZero => CliError::domain("not_characteristic_zero", e.to_string()),
            WaringError::InvalidCertificate(_) => CliError::domain("invalid_certificate", e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> CliError {
        match e {
            SolveError::Field(f) => f.into(),
            SolveError::Residue(r) => r.into(),
            SolveError::Waring(w) => w.into(),
            SolveError::NoSolution => CliError::domain("no_solution", e.to_string()),
            SolveError::BruteForceCapExceeded { .. } => CliError::Resource(e.to_string()),
            SolveError::LengthMismatch { .. }
            | SolveError::TooFewCoefficients
            | SolveError::InvalidVariableCount
            | SolveError::ZeroExponent => CliError::Usage(e.to_string()),
            SolveError::InvalidSolution(_) => CliError::domain("invalid_solution", e.to_string()),
        }
    }
}

impl From<PermError> for CliError {
    fn from(e: PermError) -> CliError {
        CliError::Usage(e.to_string())
    }
}
