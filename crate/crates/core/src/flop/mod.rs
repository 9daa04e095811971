//! Flop engine: the class map between the two small resolutions, the local flop
//! identity, and the Ruan ring of a compact orbifold with its isomorphism check.

pub mod correspondence;
pub mod global;
pub mod local_check;
pub mod ruan;
pub mod synthetic;

pub use correspondence::{check_pairing_compatibility, phi_map, FlopCorrespondence};
pub use global::{BasisEntry, GlobalRingData, GlobalRingWire, Ray, TwistedTag};
pub use local_check::{flop_difference, local_flop_check, phi_local, FlopDifference, LocalFlopReport};
pub use ruan::{
    associativity_report, basis_three_point, flop_ring, ruan_structure_constants,
    ruan_three_point, verify_ruan_isomorphism, IsomorphismReport, RuanValue, StructureConstants,
};
pub use synthetic::chart_ring;
