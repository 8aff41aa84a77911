pub mod bistellar;
pub mod bounds;
pub mod cli;
pub mod complex;
pub mod constructors;
pub mod gf2;
pub mod homology;
pub mod tightness;

pub use complex::{FVector, Simplex, SimplicialComplex, Vertex};

/// Arbitrary-precision integer used by the command line and the bound reports.
pub type Integer = num_bigint::BigInt;
pub type BigBoundsReport = bounds::BoundsReport<Integer>;
