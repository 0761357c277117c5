//! Tilings of Z^n by translates of a finite cluster: lattice tilings via
//! group homomorphisms, polynomial obstructions at roots of unity, exhaustive
//! torus enumeration, and the semi-cross codeword census.
//!
//! Integer linear algebra and Laurent polynomials are generic over the
//! scalar ([`IntScalar`]); the aliases below fix the common choices.

pub mod error;
pub mod homsearch;
pub mod io;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod scalar;
pub mod semicross_stats;
pub mod tiles;
pub mod tiling;
pub mod torus_search;
pub mod vector;

pub use error::{Error, Result};
pub use homsearch::{AbelianGroup, GroupHom};
pub use lattice::{Lattice, Torus};
pub use laurent::{CycloElt, LaurentPoly, RootPoint, RootSearch};
pub use linalg::{hnf, snf, Hnf, IntMatrix};
pub use scalar::IntScalar;
pub use tiles::{SignedPerm, Symmetry, Tile};
pub use tiling::PeriodicTiling;
pub use vector::IntVec;

pub use num_bigint::BigInt;

pub type Matrix = IntMatrix<i64>;
pub type BigMatrix = IntMatrix<BigInt>;
pub type Poly = LaurentPoly<i64>;
pub type BigPoly = LaurentPoly<BigInt>;
pub type Cyclo = CycloElt<i64>;
