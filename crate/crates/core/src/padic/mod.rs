//! Exact arithmetic over Q_p: canonical-form numbers, norms, balls, and the
//! exponential/logarithm pair on E_p.

mod ball;
mod elementary;
mod norm;
mod number;

pub use ball::Ball;
pub use elementary::{exp_p, in_ep, log_p};
pub use norm::PNorm;
pub use number::{check_prime, is_prime, PadicError, PadicNumber, PadicResult, DEFAULT_PRECISION};

pub(crate) use number::p_pow;
