use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {what}: {value}")]
    InvalidIndex { what: &'static str, value: i64 },

    #[error("`{0}` is not one of the eight unit quaternions ±1, ±i, ±j, ±k")]
    NotAUnit(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not tangent at the base point (normal component {residual:e})")]
    NotTangent { residual: f64 },

    #[error("wedge degree {k} out of range for a {n}x{n} matrix")]
    DegreeOutOfRange { k: usize, n: usize },

    #[error("matrix has no finite multiplicative order up to {bound}")]
    NotFiniteOrder { bound: u32 },

    #[error("negative coefficient {value} in degree {degree}")]
    NegativeCoefficient { degree: usize, value: i64 },

    #[error("the zero polynomial is not a Poincaré polynomial")]
    ZeroPolynomial,

    #[error("candidate list for the hyper-Kähler factor is empty")]
    EmptyCandidates,

    #[error("{0}")]
    InvalidParameter(String),
}
