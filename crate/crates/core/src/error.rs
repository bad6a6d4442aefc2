use thiserror::Error;

use crate::complex_gaussian::TailBranch;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Phi({re} + {im}i) is outside the supported region: exp(-z^2/2) overflows")]
    OutsideSupportedRegion { re: f64, im: f64 },

    #[error("asymptotic branch {branch:?} is not valid at arg z = {arg}")]
    SectorMismatch { branch: TailBranch, arg: f64 },

    #[error("|z| = {modulus} is below the asymptotic switch radius {radius}")]
    BelowSwitchRadius { modulus: f64, radius: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("curvature {kappa} is below the admissible bound kappa_0 = {kappa_min}")]
    CurvatureBelowBound { kappa: f64, kappa_min: f64 },

    #[error("curvature must be nonzero for the contour formula")]
    ZeroCurvature,

    #[error("z = {z} lies within {distance:e} of the excluded pole {pole}")]
    NearPole { z: f64, pole: f64, distance: f64 },

    #[error("side length undefined: arccosh argument {argument} < 1")]
    SideLengthDomain { argument: f64 },

    #[error("vertex realization is rank deficient")]
    RankDeficient,

    #[error("{0} exceeds the supported cost limit")]
    CostLimit(String),

    #[error("integral diverges along the chosen path: {0}")]
    Divergent(String),

    #[error("tolerance {requested:e} not met: best estimate {best_re} + {best_im}i, error estimate {estimate:e}")]
    ToleranceNotMet { best_re: f64, best_im: f64, estimate: f64, requested: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
