//! Schur rings over finite abelian groups and Cayley-isomorphism checks
//! for colored Cayley graphs.

pub mod bits;
pub mod catalog;
pub mod ci;
pub mod error;
pub mod group;
pub mod perm;
pub mod ring;
pub mod schur;

pub use error::{Error, Result};
