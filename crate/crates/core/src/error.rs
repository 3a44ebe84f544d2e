use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation exceeds a configured size cap.
    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    /// The kernel does not satisfy the zero-mean condition on the sphere,
    /// so its Fourier multiplier is not defined.
    #[error(
        "inadmissible kernel: {0} has a non-zero integral over the sphere \
         (the zero-mean condition ∫ f dθ = 0 requires at least one odd multiplicity)"
    )]
    InadmissibleKernel(String),

    #[error("sampler {kind} does not support dimension n = {n} (only n = 3)")]
    UnsupportedDimension { kind: &'static str, n: usize },

    #[error("invalid image: {0}")]
    Image(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeCap(_) => 3,
            Error::Io(_) | Error::Json(_) => 1,
            _ => 2,
        }
    }
}
