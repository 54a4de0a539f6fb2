use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("no bracket: {0}")]
    NoBracket(String),
    #[error("degenerate level c = {c}: F'(x) = {slope:.3e} at x = {x:.6e}")]
    DegenerateLevel { c: f64, x: f64, slope: f64 },
    #[error("incompatible geometry: {0}")]
    IncompatibleGeometry(String),
    #[error("invalid window [{t0}, {t1}]")]
    InvalidWindow { t0: f64, t1: f64 },
    #[error("blow-up at t = {t:.6e} (y = {y:.6e})")]
    BlowUp { t: f64, y: f64 },
    #[error("trajectory passes through the origin at t = {t:.6e}")]
    OriginCrossing { t: f64 },
    #[error("tangential zero of {component} at t = {t:.6e}")]
    TangentialZero { component: char, t: f64 },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("sign violation: {0}")]
    SignViolation(String),
    #[error("missing certificate for hump {0}")]
    MissingCertificate(usize),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("quadrature did not converge: estimate {value:.6e}, error {error:.3e}")]
    Quadrature { value: f64, error: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
