use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} repeated in cycle notation")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("not a permutation: {0}")]
    NotBijective(String),
    #[error("enumeration cap {cap} exceeded after {partial} elements")]
    CapExceeded { cap: usize, partial: usize },
    #[error("group of order {order} exceeds the enumeration limit of {cap} elements")]
    TooLarge { order: u128, cap: usize },
    #[error("element is not a member of the group")]
    NotMember,
    #[error("subgroup is not contained in the ambient group")]
    NotSubgroup,
    #[error("element sets belong to different ambient groups")]
    AmbientMismatch,
    #[error("invalid recipe at `{path}`: {reason}")]
    InvalidRecipe { path: String, reason: String },
    #[error("certificate rejected: {0}")]
    BadCertificate(String),
    #[error("{0}")]
    Search(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn recipe(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidRecipe { path: path.into(), reason: reason.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
