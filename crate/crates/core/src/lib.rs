//! Exact-arithmetic toolkit for Gauss maps of projective hypersurfaces over
//! small finite fields of odd characteristic.
//!
//! The crate computes, for a homogeneous f defining X = V(f) in P^N:
//! the Gauss map (gradient map) and its value at rational points, embedded
//! tangent spaces, the differential of the Gauss map through the Hessian
//! with its rank, the degeneracy plane spanned by the kernel directions,
//! strange loci, cone-vertex tests, separability verdicts, and brute-force
//! fiber enumeration over extension towers GF(p^k) <= GF(p^(k*m)).
//!
//! Layers:
//! - [`gf`]: GF(p^k) scalars, Frobenius, root extraction, tower embeddings.
//! - [`poly`]: sparse homogeneous multivariate polynomials.
//! - [`linproj`]: projective points, linear subvarieties in echelon form,
//!   exact matrices, Pluecker coordinates.
//! - [`gaussmap`]: per-point Gauss map data (image, tangent, Hessian, rank,
//!   degeneracy plane) and generic-rank sampling.
//! - [`analysis`]: whole-variety analyses (strange locus, cone tests, point
//!   enumeration, image-dimension estimation, separability, fibers, and the
//!   invariant-verification suite).

pub mod error;
pub mod gf;
pub mod poly;
pub mod linproj;
pub mod gaussmap;
pub mod analysis;

pub use error::{Error, Result};
