use std::path::PathBuf;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input violates a precondition (non-positive modulus, force on the tip, ...).
    #[error("invalid {field}: {reason}")]
    Domain { field: &'static str, reason: String },

    /// Adaptive quadrature hit its refinement limit before reaching the tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    /// The gradient vector is only defined for point-force loads.
    #[error("distributed tractions are not supported when assembling the gradient vector")]
    UnsupportedTractions,

    /// The unperturbed stress intensity factor vanishes, so ratios are undefined.
    #[error("unperturbed stress intensity factor is zero")]
    ZeroSif,

    #[error("defect {index}: {source}")]
    Defect {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
