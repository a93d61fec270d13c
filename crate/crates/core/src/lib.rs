//! Representation-graded Bredon homology rings `H(A,★)` of elementary abelian
//! 2-groups `A = C^r` with mod-2 constant coefficients.
//!
//! The ring is modelled as the quotient of `F₂[a_λ, t_λ : λ ∈ A°]` by the
//! ideal generated by the relation polynomials `r(T)` of all minimally
//! dependent character sets `T`. Every graded piece is finite-dimensional and
//! is computed two ways: by linear algebra in the presented ring
//! ([`presentation`]) and by the exact-sequence recursion ([`oracle`]).

pub mod characters;
pub mod circuits;
pub mod error;
pub mod gf2;
pub mod localization;
pub mod oracle;
pub mod presentation;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
