//! Exact Weil-Deligne representation calculus over Q(ζ_N, √q), local
//! epsilon signs of symplectic objects, de Rham cohomology numerology and
//! global parity bookkeeping.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod eps;
pub mod error;
pub mod field;
pub mod filtration;
pub mod global;
mod kpoly;
mod lll;
pub mod matrix;
pub mod numerology;
mod qpoly;
pub mod report;
mod roots;
pub mod sign;
pub mod symplectic;
pub mod wd;

pub use eps::{HodgeTateData, Part, PstLocalDatum};
pub use error::{Error, Result};
pub use field::{CwScalar, CycloWeilField};
pub use filtration::MonodromyFiltration;
pub use global::{GlobalPointDatum, ParityReport, Place, PlaceKind, PlaceSign};
pub use matrix::Matrix;
pub use numerology::{DeRhamNumerology, FormularyOutput, PanchishkinSequence};
pub use report::{CheckItem, IdentityCheck};
pub use sign::Sign;
pub use symplectic::{BlockKind, LagrangianSplit, SnakeForm, SympPairing, SymplecticBlock};
pub use wd::{InertiaSplit, Purity, SemisimpleKind, WdRep, WeightPieces};
