use core::fmt;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    InvalidInput(&'static str),
    /// A model was constructed with an empty oscillator list or table.
    EmptyModel(&'static str),
    /// Adaptive quadrature exhausted its subdivision budget.
    QuadratureBudget { estimate: f64, achieved_error: f64 },
    /// Matsubara summation hit the term cap before converging.
    MatsubaraCap { l_used: usize, partial: f64, tail: f64 },
    /// A root or threshold bracket could not be established.
    NoBracket(&'static str),
    /// A least-squares design matrix was singular.
    RankDeficient(&'static str),
    /// An iterative fit did not converge.
    NotConverged { iterations: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::EmptyModel(what) => write!(f, "empty model: {what}"),
            Error::QuadratureBudget {
                estimate,
                achieved_error,
            } => write!(
                f,
                "quadrature did not converge (estimate {estimate:e}, error {achieved_error:e})"
            ),
            Error::MatsubaraCap { l_used, partial, tail } => write!(
                f,
                "Matsubara sum not converged after {l_used} terms (partial {partial:e}, tail {tail:e})"
            ),
            Error::NoBracket(what) => write!(f, "no bracket found: {what}"),
            Error::RankDeficient(what) => write!(f, "rank-deficient design: {what}"),
            Error::NotConverged { iterations } => {
                write!(f, "fit did not converge after {iterations} iterations")
            }
        }
    }
}

impl Error {
    /// True for failures of numerical convergence rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureBudget { .. }
                | Error::MatsubaraCap { .. }
                | Error::NotConverged { .. }
                | Error::NoBracket(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_finite(x: f64, what: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidInput(what))
    }
}

impl core::error::Error for Error {}
