use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constants document: {0}")]
    Constants(String),

    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),

    /// The square root inside the coupling function is not real (or is
    /// too close to zero to be meaningful).
    #[error(
        "supercritical coupling: (angular + (1-eps)/2)^2 - alpha^2 = {argument:e} \
         (alpha = {alpha}, need alpha < {alpha_bound})"
    )]
    Supercritical {
        argument: f64,
        alpha: f64,
        alpha_bound: f64,
    },

    #[error("no bound state: effective denominator D = {0:e} is not positive")]
    NonPositiveDenominator(f64),

    #[error("state is unbound (E/mc^2 = 1); length scale is infinite")]
    Unbound,

    #[error("degenerate indicial factor k + 2 - 2*eta = 0 at k = {0}")]
    IndicialClash(usize),

    #[error("series does not terminate: relative residual {residual:e} exceeds {tolerance:e}")]
    NonTerminating { residual: f64, tolerance: f64 },

    #[error("radius must be positive, got {0}")]
    Radius(f64),

    #[error("wavefunction is not square integrable at the origin (r^2 R^2 ~ r^{0})")]
    NotIntegrable(f64),

    #[error("node count: {0}")]
    Nodes(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("integrator: {0}")]
    Integrator(String),

    #[error("bracket failure: {0}")]
    Bracket(String),

    #[error("finite-difference grid: {0}")]
    Grid(String),

    #[error("degenerate transition: both states have E/mc^2 = {0}")]
    DegenerateTransition(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}
