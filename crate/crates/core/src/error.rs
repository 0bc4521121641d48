use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside {allowed}")]
    Domain {
        what: &'static str,
        value: f64,
        allowed: &'static str,
    },
    #[error("theta = {0:e} vanishes to tolerance; no wave exists on this line")]
    ThetaZero(f64),
    #[error("interface height h + eta = {0} leaves (0, 1)")]
    DegenerateInterface(f64),
    #[error("coordinate map is not orientation preserving (y_Y = {0})")]
    DegenerateMap(f64),
    #[error("quadrature failed to converge: estimate {estimate}, change {change:e}")]
    Quadrature { estimate: f64, change: f64 },
    #[error("eigensolver failed for a {0}x{0} matrix")]
    Eigensolver(usize),
    #[error("trajectory diverged at x = {0}")]
    Divergence(f64),
    #[error("could not bracket a root: {0}")]
    Bracket(&'static str),
    #[error("{0}")]
    NotApplicable(&'static str),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DOMAIN",
            Error::ThetaZero(_) => "THETA_ZERO",
            Error::DegenerateInterface(_) => "DEGENERATE_INTERFACE",
            Error::DegenerateMap(_) => "DEGENERATE_MAP",
            Error::Quadrature { .. } => "QUADRATURE",
            Error::Eigensolver(_) => "EIGENSOLVER",
            Error::Divergence(_) => "DIVERGENCE",
            Error::Bracket(_) => "BRACKET",
            Error::NotApplicable(_) => "NOT_APPLICABLE",
        }
    }

    /// True for errors caused by bad input rather than by a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::ThetaZero(_)
                | Error::DegenerateInterface(_)
                | Error::NotApplicable(_)
        )
    }
}
