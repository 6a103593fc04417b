//! gemkit: a toolkit for edge-colored graphs encoding piecewise-linear
//! manifolds (gems and crystallizations).
//!
//! A gem of dimension `d` is a `(d+1)`-regular multigraph with a proper edge
//! coloring by `0..=d`; it encodes a compact `d`-pseudomanifold through its
//! colored residues.  The crate computes regular genus, Gurau degree, Euler
//! characteristic and fundamental-group data, applies dipole moves, builds
//! standard families (spheres, lens spaces, handlebodies, products, connected
//! sums), enumerates small censuses, and classifies dimension-4 examples by
//! genus and degree.

pub mod algebra;
pub mod catalog;
pub mod census;
pub mod classify;
pub mod constructions;
pub mod graph;
pub mod invariants;
pub mod moves;
