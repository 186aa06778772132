//! Exact tools for l1 filling norms and homological filling functions of
//! finite integer chain complexes.
//!
//! The crate provides sparse integer chains over named cell bases,
//! boundary maps and chain complexes ([`chain`]); the part-of /
//! intersection relations, connected decomposition of kernel elements and
//! enumeration of connected chains ([`connectivity`]); exact minimum-l1
//! integer fillings with Smith-normal-form feasibility certificates
//! ([`filling`]); filling-function tables and upper bounds ([`fv`]);
//! constructors for the standard test complexes, coned-off Cayley
//! complexes at finite radius and a circuit counter for fineness checks
//! ([`builders`]); and finite permutation actions with orbit-based
//! enumeration ([`equivariance`]).

pub mod builders;
pub mod chain;
pub mod connectivity;
pub mod equivariance;
pub mod error;
pub mod filling;
pub mod format;
pub mod fv;
pub mod matrix;

pub use chain::{augmentation, Basis, BasisId, Chain, ChainComplex, ModuleMap};
pub use connectivity::{
    d1_neighbors, decompose, enumerate_dn, enumerate_dn_up_to, is_rho_connected, rho_intersects,
    target_support, unit_parts, UnitChain,
};
pub use equivariance::{
    bn_via_orbits, check_equivariance, dn_orbit_representatives, orbits, stabilizer_order,
    PermutationAction, Side,
};
pub use error::{Error, Result};
pub use filling::{
    filling_norm, filling_norm_oracle, integer_feasible, smith_normal_form, Feasibility,
    FillingResult, FillingSolver, Obstruction, SnfDecomposition,
};
pub use format::{parse_complex, serialize_complex};
pub use fv::{
    cycle_diameter, enumerate_cycles, fv, fv0, fv0_with_budget, fv_table, fv_upper_bound,
    fv_with_budget, BnBound, BoundResult, Diameter, FvTable, FvValue,
};
