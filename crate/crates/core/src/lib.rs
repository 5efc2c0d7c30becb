//! Exact combinatorics of monotone (smooth reflexive) lattice polytopes:
//! Delzant and monotone blow-ups, unimodular canonical forms, and the
//! complete catalog of monotone polytopes in dimensions one to three.

pub mod blowup;
pub mod catalog;
pub mod enumerate;
pub mod equivalence;
pub mod error;
pub mod io;
pub mod lattice;
pub mod polytope;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{Int, IntMatrix, Rat};
pub use polytope::{Edge, FaceRef, Facet, Polytope};
