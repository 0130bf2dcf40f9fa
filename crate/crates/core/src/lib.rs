//! Minimal boxes holding two points of the modular hyperbola `xy = c (mod p)`,
//! short sums of the quadratic character, and the least quadratic nonresidue.
//!
//! Every fast path has an exhaustive counterpart: [`hyperbola::min_box_fast`]
//! against [`hyperbola::min_box_oracle`], the prefix table in [`charsum`]
//! against direct Legendre sums, and so on. The `examples/` directory walks
//! through each capability; the `modhyp` binary drives prime sweeps.

pub mod charsum;
pub mod error;
pub mod hyperbola;
pub mod modarith;
pub mod nqr;
pub mod sweep;

pub use error::{Error, Result};
pub use modarith::Modulus;
