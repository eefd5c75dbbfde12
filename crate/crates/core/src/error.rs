use thiserror::Error;

/// Errors raised by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the requested formula is valid.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A power series was asked to sum outside its radius of convergence.
    #[error("divergent series in {func}: {detail}")]
    Divergence { func: &'static str, detail: String },

    /// The requested accuracy cannot be met at the working precision.
    #[error("precision exhausted in {func}: {detail}")]
    Precision { func: &'static str, detail: String },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    pub(crate) fn divergence(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Divergence { func, detail: detail.into() }
    }

    pub(crate) fn precision(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Precision { func, detail: detail.into() }
    }
}
