//! Square-free modules over Stanley-Reisner rings of simplicial graphs.
//!
//! Everything here is exact linear algebra over `Q` or `F_p`. The crate is
//! `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;

pub mod brill_noether;
pub mod complex;
pub mod decompose;
pub mod error;
pub mod field;
pub mod generators;
pub mod graph;
pub mod homology;
pub mod jacobian;
pub mod matrix;
pub mod module;
pub mod omega;
pub mod poly;

pub use complex::{Face, SimplicialComplex};
pub use decompose::{SearchOptions, Verdict};
pub use error::Error;
pub use field::{Field, Scalar};
pub use graph::Graph;
pub use matrix::Matrix;
pub use module::{ModuleHom, SquareFreeModule};
pub use omega::{CanonicalOmega, CycleVector, GeneratedSubmodule};
