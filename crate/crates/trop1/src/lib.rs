//! Realizability of genus-1 tropical stable maps, in exact rational
//! arithmetic.
//!
//! A genus-1 tropical stable map to `Q^r` is realizable exactly when it is
//! *well-spaced*: for every character projecting the target to a line, either
//! the circuit of the curve is not contracted, or among the flags of nonzero
//! slope based in the contracted neighborhood of the circuit, the minimal
//! distance to the circuit is attained at least three times. This crate
//! decides that condition, builds the moduli cones of combinatorial types,
//! their radial subdivisions and the well-spaced subcomplex, and cross-checks
//! the combinatorics against an independent exact oracle for the residue
//! descent condition at a Gorenstein genus-1 singularity.
//!
//! Modules:
//! - [`linalg`]: exact rational vectors, row reduction, canonical subspaces,
//!   primitive directions.
//! - [`lp`]: exact linear feasibility (phase-1 simplex with Bland's rule).
//! - [`cone`]: rational polyhedral cones, double description, face tests.
//! - [`curve`]: abstract tropical curves, genus, circuit, radial distance,
//!   radial alignments.
//! - [`tropmap`]: combinatorial types and tropical maps, balancing,
//!   stability, recession types, contraction radius.
//! - [`moduli`]: moduli cones, superabundance, radial subdivision, face
//!   arrows, cone complexes, type enumeration, the well-spaced subcomplex.
//! - [`wellspaced`]: the realizability decision procedure (character flats,
//!   line checks, Speyer comparison, exit-flag counts).
//! - [`descent`]: the residue descent oracle for genus-1 Gorenstein
//!   singularities.
//! - [`instance`]: instance file parsing, validation, and serialization.
//! - [`corpus`]: the bundled example instances.
//! - [`cli`]: subcommand entry points shared by the `trop1` binary.
//!
//! The `examples/` directory of this crate has one runnable example per major
//! capability; start with `cargo run --example check_figures`.

pub mod cli;
pub mod cone;
pub mod corpus;
pub mod curve;
pub mod descent;
pub mod error;
pub mod generator;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod moduli;
pub mod tropmap;
pub mod wellspaced;

pub use error::TropError;
pub use linalg::{Rat, RatVec, Subspace};
