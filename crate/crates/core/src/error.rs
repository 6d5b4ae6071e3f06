use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the domain of this operation ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(
        "truncation at dim {dim} is insufficient: boundary weight {weight:.3e} exceeds {tol:.3e}"
    )]
    Truncation { dim: usize, weight: f64, tol: f64 },

    #[error("detection probability never reaches 1/2 on (0, {g_max}]")]
    NoCrossing { g_max: f64 },

    #[error(
        "threshold is met at zero perturbation (p01 = {p01}); minimum perturbation is degenerate"
    )]
    DegenerateThreshold { p01: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
