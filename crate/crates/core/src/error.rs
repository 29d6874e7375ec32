use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("detunings has {detunings} entries but phases has {phases}")]
    DimensionMismatch { detunings: usize, phases: usize },

    #[error("emitter chain must contain at least one site")]
    EmptyChain,

    #[error("gamma must be positive, got {0}")]
    NonPositiveGamma(f64),

    #[error("gamma0 must be non-negative, got {0}")]
    NegativeGamma0(f64),

    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },

    #[error("site has zero scaled detuning (lossless resonant atom); use the perfect-mirror limit")]
    SingularSite,

    #[error("numerical degeneracy: {0}")]
    Degenerate(&'static str),

    #[error("phase of site {site} is {theta}, not a multiple of pi")]
    NotCommensurate { site: usize, theta: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid detuning scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid cavity system: {0}")]
    InvalidCavity(String),

    #[error("atom {atom} is exactly resonant with the laser; transmission limit is 0")]
    CavityPole { atom: usize },

    #[error("reflection ratio undefined: r12 = {r12}, r21 = {r21}")]
    UndefinedRatio { r12: Complex64, r21: Complex64 },

    #[error("two-atom reflection denominator vanishes")]
    ReflectionPole,

    #[error("degenerate search region: {0}")]
    DegenerateRegion(String),

    #[error("spectrum is not a Lorentzian dip: {0}")]
    Shape(String),
}
