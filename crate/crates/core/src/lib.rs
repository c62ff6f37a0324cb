//! Exact polyhedral toolkit for set covering polyhedra.
//!
//! Builds the covering polyhedra of a binary matrix, converts between
//! inequality and generator form by double description, computes vertex
//! adjacency (1-skeletons) by three independent exact methods, and checks
//! the vertex and adjacency relations between an up-monotone polyhedron and
//! its truncation by the unit hypercube.

pub mod cli;
pub mod covering;
pub mod error;
pub mod lp;
pub mod numeric;
pub mod polyhedron;
pub mod skeleton;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::{QMatrix, QVector, Rational};
