//! Flat knot tabulation and invariants.
//!
//! The central type is [`GaussDiagram`]. Minimal diagrams are found by
//! monotone reduction ([`moves`]), knots are enumerated by [`tabulator`],
//! and the invariant battery lives in [`based_matrix`], [`polynomials`],
//! [`surface`] and [`slice`].

pub mod error;
pub mod gauss;
pub mod gf2;
pub mod surface;
pub mod moves;
pub mod polynomials;
pub mod based_matrix;
pub mod slice;

pub use error::{Error, Result};
pub use gauss::{Arrow, Endpoint, GaussDiagram, OuMatching, Position, Symmetry, UPolynomial};
pub use moves::{CanonicalKey, MoveKind, MoveSite, SymmetryType};
pub mod tabulator;
