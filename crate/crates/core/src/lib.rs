//! Selberg zeta functions of Schottky surfaces through transfer operators,
//! their zeros (resonances and topological zeros), and explicit eigenfunctions
//! of the transfer operator at negative integers.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod linalg;
pub mod moebius;
pub mod resonances;
pub mod schottky;
pub mod theorems;
pub mod transfer;
pub mod zeta;

pub use error::{Error, Result};
pub use moebius::{BranchContext, Kind, MoebiusTransform, SpherePoint};
pub use resonances::{SearchBox, ZeroRecord};
pub use schottky::{Disk, GeodesicClass, SchottkyData, Word};
pub use transfer::{FunctionVector, TransferMatrix};
