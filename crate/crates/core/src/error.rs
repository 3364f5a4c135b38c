use thiserror::Error;

/// Errors raised by the numerical kernels and bound evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("cubic has no positive root (coefficients outside the supported family)")]
    NoPositiveRoot,

    #[error("root polish did not converge: relative residual {residual:e}")]
    RootConvergence { residual: f64 },

    #[error("power constraint residual {residual:e} above tolerance")]
    ConstraintResidual { residual: f64 },

    #[error(
        "quadrature did not converge after {evals} nodes: estimate {estimate:e}, error {error:e}"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        evals: usize,
    },

    #[error("optimum of `{what}` sits on the search boundary at {at:e}")]
    Boundary { what: &'static str, at: f64 },

    #[error("Fourier series reached m_max = {m_max} before the truncation tolerance")]
    SeriesTruncation { m_max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    check_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be strictly positive",
        })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<f64> {
    check_finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative",
        })
    }
}
