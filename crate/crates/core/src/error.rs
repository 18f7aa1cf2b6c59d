use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent caller input (dimension mismatch, invalid parameters).
    #[error("input error: {0}")]
    Input(String),
    /// A requested degree lies outside what the configured truncation supports.
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("assembly error: {0}")]
    Assembly(String),
    /// Solver breakdown, residual violations, singular factorizations.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Two independent computation routes disagreed beyond tolerance.
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Short lowercase name of the root variant.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::Input(_) => "input",
            Error::Capacity(_) => "capacity",
            Error::Assembly(_) => "assembly",
            Error::Numeric(_) => "numeric",
            Error::Consistency(_) => "consistency",
            Error::Context { .. } => unreachable!("root strips context"),
        }
    }

    /// The innermost error with any context layers stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub(crate) fn dim_check(what: &str, left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "{what}: dimension mismatch ({left} vs {right})"
        )))
    }
}
