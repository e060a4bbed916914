//! Thermodynamics of Hamiltonian anyons: `N` identical particles in a
//! one-dimensional harmonic trap whose auxiliary spin degree of freedom is
//! energetically biased towards the symmetric sector by an energy `ν`.
//!
//! The spatial state is a temperature-dependent mixture of a fermionic and a
//! bosonic thermal state. This crate evaluates the closed-form partition
//! functions, the fermionic weight `p_F`, internal energies and their first
//! and second derivatives, locates the fermion/boson transition, and runs the
//! ν-driven Stirling and ω-switched Otto cycles. The [`oracle`] module holds
//! brute-force enumerators used to cross-check all of the above.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod numeric;
pub mod system;
pub mod statmech;
pub mod transitions;
pub mod engines;
pub mod oracle;

pub use error::{Error, Result};
pub use system::{h_of, phi, subspace_dims, SubspaceDims, SystemParams, ThermoPoint};
pub use statmech::{
    capacities, fermionic_weight, internal_energy, internal_energy_branches, ln_partition_bose,
    ln_partition_fermi, ln_partition_total, statistical_anyon_props, thermo_props, BranchEnergies,
    CapacityReport, StatisticalAnyon, ThermoProps,
};
