//! Exact computations in stable monomorphism categories over the Frobenius
//! category of finite-dimensional k[x]/(x^n)-modules, k = F_p.
//!
//! Layers, bottom up: [`linalg`] (dense F_p matrices), [`module`]
//! (Λ-modules, hulls, covers, pushouts), [`chain`] (chains of monics),
//! [`stable`] (stable homs, cones, triangles), [`functors`] (contraction,
//! expansion, decompositions, mutations, Θ), [`duality`] (representing
//! objects for dualized hom functors), and [`harness`] (seeded suites).

pub mod chain;
pub mod duality;
pub mod error;
pub mod functors;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod module;
pub mod stable;

pub use chain::{ChainMap, ChainObject, ChainSES};
pub use error::{FrobError, Result};
pub use linalg::Matrix;
pub use module::{LambdaModule, ModuleMap, ShortExactSeq};
