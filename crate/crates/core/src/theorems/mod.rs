//! Constructive content built on the piece-table algebra: the commutator
//! machinery, incompatibility radii, the finite generating family and its
//! synthesis across radii, decomposition of 3-cycle elements, and reduction
//! of arbitrary shift triples to axis-aligned ones.

pub mod altgen;
pub mod axisreduce;
pub mod decompose;
pub mod fiveset;
pub mod generators;
pub mod incompat;
pub mod perm;
pub mod synthesize;
