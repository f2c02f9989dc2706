//! Centro-affine geometry of smooth convex bodies.
//!
//! A convex body K containing the origin is represented by nodal values of
//! its support function h_K on a spherical grid (S^1 or S^2). From h the
//! crate computes curvature, centro-affine curvature, the one-parameter
//! family of p-affine surface areas and their second-order refinements,
//! polar bodies and volume products, centro-affine curvature flows, and
//! (in the plane) weighted floating bodies. A randomized verification
//! harness cross-checks the classical inequalities relating all of these.

pub mod body;
pub mod error;
pub mod floating;
pub mod flow;
pub mod harness;
pub mod invariants;
pub mod jsonio;
pub mod spherical;

pub use error::{Error, Result};
