//! Service rate regions of linear storage codes.
//!
//! A storage scheme places `n` linear combinations of `k` data objects on `n`
//! servers, each able to serve requests at rate `mu`. This crate enumerates the
//! recovery sets of such a scheme and characterizes the set of demand vectors it
//! can serve, three ways: an exact rational linear program, waterfilling
//! allocators for MDS and Pyramid-style LRC layouts, and matching/geometric
//! bounds. It also checks integral (batch-code) properties, evaluates coverage
//! and download-cost metrics, and runs a fork-join queueing simulator.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is off.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod codebook;
pub mod combin;
pub mod galois;
pub mod geometry;
pub mod hull;
pub mod lp;
pub mod metrics;
pub mod rational;
pub mod recovery;
pub mod region;
pub mod simq;
pub mod waterfill;

pub use codebook::{LrcProfile, StorageScheme};
pub use galois::{Fe, FieldSpec, GaloisField, Matrix};
pub use rational::Rational;
pub use recovery::{RecoveryCatalog, RecoverySet};
pub use region::{Allocation, DemandVector, HalfSpace, RegionPolytope};
