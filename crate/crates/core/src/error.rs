use thiserror::Error;

pub type Result<T> = std::result::Result<T, VoigtError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VoigtError {
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested accuracy could not be delivered. `attained` is the
    /// number of decimal digits the computation can vouch for.
    #[error("precision not achievable: requested {requested} digits, attained {attained:.1}")]
    Precision { requested: u32, attained: f64 },

    #[error("singular input: {0}")]
    Singular(String),

    #[error("unsupported order {order} (maximum supported is {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("quadrature did not converge: best estimate {estimate}, gap {gap:e}")]
    QuadratureNonConvergence { estimate: String, gap: f64 },

    #[error("invalid precision context: {0}")]
    InvalidContext(String),
}

impl VoigtError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        VoigtError::Domain(msg.into())
    }
}
