//! Exact free-fermion solution of the XZX/YZY cluster chain in a transverse
//! field, with two-qubit correlation measures and an exact-diagonalization
//! cross-check for small chains.

pub mod correlators;
pub mod ed;
pub mod error;
pub mod measures;
pub mod model;
pub mod sweep;
pub mod validation;

pub use error::{Error, Result};
pub use model::{
    allowed_momenta, classify_degeneracy, couplings, ground_energy, ground_level, mode, modes,
    sector_level, DegeneracyKind, DegeneracyReport, GroundLevel, ModelParams, MomentumGrid,
    MomentumMode, Parameter, Sector, SectorLevel,
};
