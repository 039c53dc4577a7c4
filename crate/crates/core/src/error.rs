use thiserror::Error;

/// Why a curve model was rejected at validation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    GcdViolation,
    Inseparable,
    SingularCurve,
    WeightViolation,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rejection::GcdViolation => "gcd-violation",
            Rejection::Inseparable => "inseparable",
            Rejection::SingularCurve => "singular-curve",
            Rejection::WeightViolation => "weight-violation",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("curve rejected ({reason}): {detail}")]
    Validation { reason: Rejection, detail: String },
    #[error("ramified place: derivative vanishes at the root")]
    RamifiedPlace,
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("rank failure: rank {rank} < {t}")]
    RankFailure { rank: usize, t: usize },
    #[error("order failure: product of invariant factors {product} outside ({lower}, {upper})")]
    OrderFailure {
        product: String,
        lower: f64,
        upper: f64,
    },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("planner error: {0}")]
    Planner(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub fn reject(reason: Rejection, detail: impl Into<String>) -> Self {
        Error::Validation {
            reason,
            detail: detail.into(),
        }
    }

    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Io(_) | Error::Json(_) | Error::Planner(_) => 2,
            Error::Validation { .. } | Error::Domain(_) | Error::RamifiedPlace => 3,
            Error::RankFailure { .. } => 4,
            Error::OrderFailure { .. } => 5,
            Error::Budget(_) | Error::Resource(_) => 6,
            Error::Integrity(_) => 7,
        }
    }

    /// Short machine-readable reason string.
    pub fn reason(&self) -> String {
        match self {
            Error::Domain(_) => "domain".into(),
            Error::Usage(_) => "usage".into(),
            Error::Validation { reason, .. } => reason.to_string(),
            Error::RamifiedPlace => "ramified-place".into(),
            Error::Resource(_) => "resource".into(),
            Error::Integrity(_) => "integrity".into(),
            Error::RankFailure { .. } => "rank-failure".into(),
            Error::OrderFailure { .. } => "order-failure".into(),
            Error::Budget(_) => "budget-exhausted".into(),
            Error::Planner(_) => "planner".into(),
            Error::Io(_) => "io".into(),
            Error::Json(_) => "json".into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
