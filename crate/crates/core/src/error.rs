use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A construction parameter is out of its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The vertices do not span a full-dimensional simplex.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The input is valid but not in a form the requested routine handles.
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient truncation: need degree {needed}, prefix only reaches {available}")]
    InsufficientTruncation { needed: usize, available: usize },

    /// Enumeration would visit more parallelepiped points than allowed.
    #[error("enumeration budget exceeded: determinant {required} is above the budget of {budget}")]
    BudgetExceeded { required: BigInt, budget: u64 },

    /// A free-sum h*-product was requested but the left summand is not reflexive.
    #[error("h*-product identity unavailable: {0}")]
    NotReflexive(String),

    /// A certified coefficient disagreed with a re-evaluation at a higher dimension.
    #[error("certificate violated at degree {degree}: {certified} at dimension {certified_dim}, {observed} at dimension {observed_dim}")]
    CertificateViolated {
        degree: usize,
        certified: BigInt,
        certified_dim: usize,
        observed: BigInt,
        observed_dim: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Status code for this error class, shared by the CLI and the C interface:
    /// 1 check failed, 2 usage, 3 unsupported form, 5 budget exceeded.
    pub fn code(&self) -> u8 {
        match self {
            Self::Parameter(_)
            | Self::Parse(_)
            | Self::Precondition(_)
            | Self::Degenerate(_)
            | Self::InsufficientTruncation { .. } => 2,
            Self::UnsupportedForm(_) | Self::NotReflexive(_) => 3,
            Self::BudgetExceeded { .. } => 5,
            Self::CertificateViolated { .. } => 1,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Self::Parameter(msg.into())
    }
}
