use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cone is smooth (|det| = 1); there is no singularity to analyze")]
    SmoothCone,

    /// `q = n - 1`: the singularity is a hypersurface and has a single component.
    #[error("hypersurface case Y({n},{q}): versal base irreducible")]
    HypersurfaceCase { n: String, q: String },

    #[error("vector ({x}, {y}) is not primitive")]
    NonPrimitive { x: String, y: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A fan failed P-resolution validation.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Two routes that must agree disagreed. Carries both values and the offending chain.
    #[error("consistency failure in {what}: {left} != {right} (chain {chain})")]
    Consistency {
        what: String,
        left: String,
        right: String,
        chain: String,
    },

    #[error("resource guard: {0}")]
    ResourceGuard(String),
}

impl Error {
    pub(crate) fn consistency(
        what: impl Into<String>,
        left: impl ToString,
        right: impl ToString,
        chain: impl Into<String>,
    ) -> Self {
        Error::Consistency {
            what: what.into(),
            left: left.to_string(),
            right: right.to_string(),
            chain: chain.into(),
        }
    }

    /// Domain-type errors are the caller's fault; everything else is internal.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::SmoothCone
                | Error::HypersurfaceCase { .. }
                | Error::NonPrimitive { .. }
                | Error::Degenerate(_)
                | Error::ResourceGuard(_)
        )
    }
}
