//! Exact cochain computations for embedding obstructions of simplicial complexes.
//!
//! The crate builds simplicial deleted products, their equivariant cochain
//! complexes and staircase triangulations, and certifies obstruction classes
//! with re-verifiable integer certificates.

pub mod builtins;
pub mod chain;
pub mod deleted_product;
pub mod equivariant;
pub mod error;
pub mod o3;
pub mod plgeom;
pub mod simplicial;
pub mod staircase;
pub mod trees;
pub mod whitney;
pub mod vk;
pub mod zlinalg;

pub use error::{Error, Result, DEFAULT_SIZE_GUARD};
