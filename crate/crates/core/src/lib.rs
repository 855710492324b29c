//! Pseudodiagrams of classical, virtual and über-virtual knots.
//!
//! Diagrams are stored as decorated chord (Gauss) diagrams. The crate
//! computes trivializing, knotting, classicalizing and virtualizing numbers,
//! the invariants used to certify them, and diagram-level bounds on
//! unknotting number, virtual unknotting number and genus.

pub mod bounds;
pub mod census;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod invariants;
pub mod moves;
pub mod numbers;
pub mod oracle;
pub mod parallel;
pub mod polynomial;

pub use diagram::{Chord, ChordState, InterlacementGraph, PseudoDiagram, Resolution, ResolutionMode, Sign, Transform};
pub use error::{DiagramError, ParseError};
pub use polynomial::{IntPolynomial, LaurentPolynomial};
