use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("caustic time t={t}: |sin(omega t)| below guard")]
    Caustic { t: f64 },

    #[error("time t={t} outside the first caustic window for omega={omega}")]
    OutsideWindow { t: f64, omega: f64 },

    #[error("conjecture violation: {0}")]
    ConjectureViolation(String),

    #[error("degenerate sampling: rank {rank} < {unknowns} unknowns")]
    DegenerateSampling { rank: usize, unknowns: usize },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("invalid coefficient table: {0}")]
    InvalidTable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable tag, used for single-line machine-readable CLI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeLimit(_) => "size-limit",
            Error::Domain(_) => "domain",
            Error::Singularity(_) => "singularity",
            Error::Caustic { .. } => "caustic",
            Error::OutsideWindow { .. } => "outside-window",
            Error::ConjectureViolation(_) => "conjecture-violation",
            Error::DegenerateSampling { .. } => "degenerate-sampling",
            Error::NoSolution(_) => "no-solution",
            Error::InvalidTable(_) => "invalid-table",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
