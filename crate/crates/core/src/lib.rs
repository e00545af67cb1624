//! Exact enumeration of (k,r)- and (k,S)-Fuss-Schroder lattice paths by
//! type.
//!
//! The crate provides, over arbitrary-precision integers and with no
//! floating point anywhere:
//!
//! * [`partitions`] — integer partitions, |lambda|, ell(lambda), and the
//!   multiplicity factor m_lambda;
//! * [`paths`] — the lattice-path model with validation, classification,
//!   type extraction, and an exhaustive brute-force enumerator;
//! * [`bijections`] — the bijection chain path <-> height sequence <->
//!   valid rooted plane forest;
//! * [`formulas`] — the closed-form type-counting formulas with
//!   asserted-exact division;
//! * [`series`] — truncated power series over partition monomials, the
//!   A/B/C fixed-point system, and Lagrange inversion;
//! * [`verify`] — cross-checking drivers tying all of the above together.

pub mod bijections;
pub mod error;
pub mod formulas;
pub mod partitions;
pub mod paths;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use partitions::{MultiplicityFactor, Partition};
pub use paths::{Bounds, FamilySpec, LatticePath, SizeClass, Step, TypeCensus, ValidationReport};
