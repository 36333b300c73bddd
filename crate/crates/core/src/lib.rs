//! Exact combinatorics of tropical rational maps `TP¹ → TP¹`, with the
//! degree-3 moduli space worked out in full: the ten combinatorial types,
//! gap-length coordinates, automorphisms and symmetry strata, collisions of
//! break points, the Hurwitz fiber of the branch map, the cube
//! compactification, tropicalization of rational functions, and the bridge
//! to one-hidden-layer ReLU networks.
//!
//! All arithmetic is exact over arbitrary-precision rationals.

pub mod compact;
pub mod error;
pub mod hurwitz;
pub mod moduli;
pub mod pl;
pub mod rational;
pub mod relu;
pub mod tropical;
pub mod types;

pub use compact::{BoundaryStratum, CompactifiedPoint, ExtendedGap};
pub use error::{Error, Result};
pub use hurwitz::{BranchConfiguration, HurwitzFiber};
pub use moduli::{AutGroup, AutKind, ModuliPoint, StratumDescriptor, WeightedTropicalCurve};
pub use pl::{Sign, TropicalMap};
pub use rational::{Extended, Rational};
pub use relu::{ReluNetwork, ReluUnit};
pub use tropical::TropicalPolynomial;
pub use types::{CombinatorialType, Label, SlopeSequence};
