//! Convex closures of poset embeddings into the Boolean lattice, and packings of
//! pairwise unrelated copies of a poset built from them.
//!
//! The crate is organised bottom-up:
//!
//! - [`poset`]: finite partial orders and the standard named examples.
//! - [`lattice`]: subsets of `[n]`, families, the closure operator, and exact
//!   counts of full chains meeting a family.
//! - [`embedding`]: weak and strong embeddings into `B_k` and the minimum
//!   closure size `c(P)` / `c*(P)` with a witness.
//! - [`packing`]: the layered construction of unrelated copies, its exact copy
//!   count, materialization and verification.
//! - [`oracle`]: exhaustive maximum packings at tiny sizes and closed forms.
//! - [`report`]: comparisons of construction counts with their targets.
//! - [`io`]: the JSON file formats.

pub mod clique;
pub mod config;
pub mod embedding;
pub mod error;
pub mod io;
pub mod lattice;
pub mod numbers;
pub mod oracle;
pub mod packing;
pub mod poset;
pub mod report;
pub mod selftest;

pub use config::Limits;
pub use embedding::{ClosureCertificate, Embedding, Mode};
pub use error::{Error, Result};
pub use lattice::{Family, Subset};
pub use numbers::BigNat;
pub use poset::{Poset, StandardPoset};
