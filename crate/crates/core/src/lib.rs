//! Exact-arithmetic workbench for the p-adic Jaynes-Cummings model.
//!
//! The crate is organized around the phase space `S^2_p x (Q_p)^2`:
//!
//! - [`scalar`], [`hensel`], [`series`]: exact and truncated p-adic
//!   scalars, square predicates, Hensel lifting, and the exp/sin/cos
//!   series with their exact domains;
//! - [`quadratic`]: the oscillator level sets `x^2 + y^2 = k`, rotation
//!   orbits and their counts, and the circle-group embedding;
//! - [`spin`]: the spin system `mu(x,y,z) = z` on the sphere;
//! - [`jc`]: the coupled system `F = (J,H)`, its critical points,
//!   fibers and image;
//! - [`normal_forms`]: exact verification of the local normal forms at
//!   the critical points;
//! - [`flows`]: formal power-series flows of the oscillator;
//! - [`oracle`]: independent brute-force censuses over residue rings;
//! - [`viz`]: the real/complex plotting maps and figure-data export.

pub mod error;
pub mod flows;
pub mod hensel;
pub mod jc;
pub mod normal_forms;
pub mod oracle;
pub mod poly;
pub mod prime;
pub mod quadratic;
pub mod ratmat;
pub mod sampling;
pub mod scalar;
pub mod series;
pub mod spin;
pub mod verify;
pub mod viz;

pub use error::{PadicError, Result};
pub use prime::Prime;
pub use scalar::{PadicScalar, SeriesTruncation, Valuation};
