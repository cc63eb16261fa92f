//! Exact p-adic arithmetic and a dynamics analyzer for the Potts-Bethe map
//!
//! ```text
//! f_theta(x) = ((theta*x + q - 1) / (x + theta + q - 2))^k
//! ```
//!
//! over Q_p with p >= 3 and p not dividing q. The library certifies, by
//! finite-precision exact computation, when f_theta restricted to its Julia
//! set is topologically conjugate to the full shift on kappa_p symbols, and
//! verifies the supporting machinery: the covering by disjoint balls, the
//! exact local scaling law, inverse branches, itinerary coding, and the
//! Cayley-tree Gibbs-measure recursion the map arises from.
//!
//! Every verdict rests on exact norm identities (norm values are discrete
//! powers of p); computations that cannot be decided at the carried precision
//! fail loudly instead of rounding.

pub mod gibbs;
pub mod padic;
pub mod potts;
pub mod repeller;
pub mod roots;
pub mod sample;
pub mod subshift;

pub use padic::{exp_p, in_ep, log_p, Ball, PNorm, PadicError, PadicNumber, DEFAULT_PRECISION};
pub use potts::MapParams;
pub use repeller::{CoveringX, RepellerCertificate, Verdict};
