//! Entropy of the mean-field Ising model as a Hamilton-Jacobi principal
//! function on the thermodynamic state space `(U, M)`.
//!
//! The crate is organised around one closed-form object and several ways of
//! checking it:
//!
//! - [`curve`]: the solution curve `m ↦ (β(m), ξ(m), U(m), S(m))`, whose
//!   projection onto `(β, ξ)` has a cusp at the critical point.
//! - [`surface`]: the entropy `S(U, M)`, its gradient, and the residual of the
//!   Hamilton-Jacobi equation it solves.
//! - [`selfconsistent`]: all roots of `m = tanh(β·Jz·m − ξ)` with stability
//!   and equilibrium selection, plus the zero-field branch.
//! - [`oracle`]: exact finite-N grand-canonical sums used as ground truth.
//! - [`criticality`]: susceptibility, specific heat, exponent fits and the
//!   Jacobian norm that vanishes at the cusp.
//! - [`ideal_gas`]: the ideal gas treated the same way.
//! - [`verify`]: the aggregated self-check run by the `verify` command.
//!
//! ```
//! use ising_hj::{curve, ModelParams};
//!
//! let p = ModelParams::default(); // k = J = z = 1
//! let beta = curve::beta_of_m(0.5, &p)?;
//! let xi = curve::xi_of_m(0.5, &p)?;
//! // Every curve point solves the self-consistent equation.
//! assert!((0.5f64 - (beta * 0.5 - xi).tanh()).abs() < 1e-15);
//! # Ok::<(), ising_hj::Error>(())
//! ```

pub mod criticality;
pub mod curve;
pub mod error;
pub mod ideal_gas;
pub mod numeric;
pub mod oracle;
pub mod params;
pub mod selfconsistent;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::Spacing;
pub use params::{ConjugateCoords, FieldCoords, ModelParams, OrderParameter};
