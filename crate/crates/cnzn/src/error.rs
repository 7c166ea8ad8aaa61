use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("n must be at least 3, got {0}")]
    InvalidN(u32),
    #[error("genus must be at least 2 for the anomaly check, got {0}")]
    InvalidGenus(u32),
    #[error("cyclotomic orders {0} and {1} do not match")]
    OrderMismatch(u32, u32),
    #[error("requested precision {requested} exceeds available {available}")]
    Precision { requested: i64, available: i64 },
    #[error("division by a zero or non-invertible element")]
    DivisionByZero,
    #[error("series has no term of x-degree {0}; cannot fit")]
    FitFailed(String),
    #[error("integration constants are inconsistent at level {0}")]
    InconsistentConstants(usize),
    #[error("element is not in the ring: {0}")]
    NotInRing(String),
}
