use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("negative time interval {0}")]
    NegativeInterval(f64),
    #[error("phase {0} outside [0, 1]")]
    PhaseOutOfRange(f64),
    #[error("orientation is not a proper rotation (orthonormality error {orthonormality:e}, det {det})")]
    InvalidRotation { orthonormality: f64, det: f64 },
    #[error("innovation covariance is singular")]
    SingularInnovation,
    #[error("kick requested on the support foot")]
    KickOnSupportFoot,
    #[error("ball and kick target coincide")]
    CoincidentBallTarget,
    #[error("need at least 3 detections, got {0}")]
    TooFewDetections(usize),
    #[error("detection timestamps must be strictly increasing")]
    NonIncreasingTimestamps,
    #[error("ball track fit is rank deficient")]
    RankDeficient,
}

pub(crate) fn ensure_finite(value: f64, what: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
