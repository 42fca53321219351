//! Exact lattice computations for curves on K3 surfaces.
//!
//! A K3 surface is replaced by its Picard lattice (an even lattice of
//! signature `(1, ρ-1)`), a declared ample class fixing the chamber, and a
//! polarization `L`. From these the crate computes the genus, Clifford index
//! and gonality of the smooth curves in `|L|`, detects the two exceptional
//! configurations, and normalizes decompositions `L = M + N`.
//!
//! Everything is integer or rational arithmetic; every search is finite with
//! an explicit bound and a candidate budget.
#![allow(clippy::needless_range_loop)]

pub mod classifier;
pub mod decomposition;
pub mod enumeration;
pub mod lattice;
pub mod linear_system;
pub mod oracle;
