//! Exact-arithmetic engine for weighted Rota-Baxter Lie and associative
//! algebras carrying derivations.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: arbitrary-precision rational scalars, dense matrices, and
//!   exact rank / kernel / solve kernels. Everything downstream is exact;
//!   there is no floating point anywhere.
//! - [`structures`]: finite-dimensional Lie and associative algebras given
//!   by structure constants, derivations, weighted Rota-Baxter operators,
//!   representations and bimodules, with eager axiom verification and the
//!   induced / semidirect / skew-symmetrized constructions.
//! - [`lie_cohomology`]: the Chevalley-Eilenberg side. Alternating cochains,
//!   the derivation operator, the twisting chain map, and the combined
//!   three-slot differential with matrix assembly and cohomology dimensions.
//! - [`ass_cohomology`]: the Hochschild side, plus the skew-symmetrization
//!   chain map relating the two complexes.
//! - [`deformation`]: truncated formal deformations of both flavors,
//!   order-by-order residual checks, equivalences, the cohomologous test and
//!   the rigidity probe.
//! - [`corpus`]: the bundled example algebras used throughout the test
//!   suites.

pub mod ass_cohomology;
pub mod corpus;
pub mod deformation;
pub mod lie_cohomology;
pub mod linalg;
pub mod structures;

pub use linalg::{Matrix, Rational};
