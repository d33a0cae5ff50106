use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("negative coefficient {value} at ({row}, {column})")]
    NegativeCoefficient {
        row: String,
        column: String,
        value: f64,
    },

    #[error("column {column} sums to {sum}, outside the adding-up tolerance")]
    ColumnSumViolation { column: String, sum: f64 },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-positive price {value} at index {index}")]
    NonPositivePrice { index: usize, value: f64 },

    #[error("non-positive value {value} at index {index}")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("linear system is singular")]
    SingularSystem,

    #[error("no strictly positive price solution exists")]
    NoPositiveSolution,

    #[error("prices are not an equilibrium (relative residual {residual:e})")]
    NotAnEquilibrium { residual: f64 },

    #[error("all {count} samples were unviable")]
    AllSamplesUnviable { count: usize },

    #[error("too few samples: need at least {needed}, got {found}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("sample has zero variance")]
    DegenerateSample,

    #[error("series too short: need at least {needed}, got {found}")]
    SeriesTooShort { needed: usize, found: usize },

    #[error("entity {0} has fewer than two included observations")]
    SingletonEntity(String),

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("estimated coefficient {0:e} is too close to zero")]
    GammaNearZero(f64),

    #[error("unknown instrument `{0}`")]
    UnknownInstrument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI's JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedTable(_) => "MalformedTable",
            Error::NegativeCoefficient { .. } => "NegativeCoefficient",
            Error::ColumnSumViolation { .. } => "ColumnSumViolation",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NonPositivePrice { .. } => "NonPositivePrice",
            Error::NonPositiveValue { .. } => "NonPositiveValue",
            Error::SingularSystem => "SingularSystem",
            Error::NoPositiveSolution => "NoPositiveSolution",
            Error::NotAnEquilibrium { .. } => "NotAnEquilibrium",
            Error::AllSamplesUnviable { .. } => "AllSamplesUnviable",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::DegenerateSample => "DegenerateSample",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::SingletonEntity(_) => "SingletonEntity",
            Error::RankDeficient => "RankDeficient",
            Error::GammaNearZero(_) => "GammaNearZero",
            Error::UnknownInstrument(_) => "UnknownInstrument",
            Error::Io(_) => "Io",
            Error::Csv(_) => "Csv",
        }
    }
}
