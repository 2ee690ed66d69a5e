//! Degrees of closed points on `X1(l^k)` from `l`-adic Galois image data.
//!
//! The crate is `no_std` with `alloc`. Everything runs single-threaded and
//! deterministically; callers that want parallel scans split work by isogeny
//! degree (see the `torsion-scope` crate).
//!
//! ```
//! use torsion_scope_core::{closure, closed_point_degrees, GMat, Modulus};
//!
//! let n = Modulus::new(7, 1).unwrap();
//! let gens = [
//!     GMat::new(n, [0, 1, 1, 0]).unwrap(),
//!     GMat::new(n, [2, 0, 0, 1]).unwrap(),
//! ];
//! let g = closure(&gens, n).unwrap();
//! assert_eq!(g.order(), 18);
//! assert_eq!(closed_point_degrees(&g, n).unwrap(), vec![6, 9, 9]);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod cmformulas;
pub mod error;
pub mod formulas;
pub mod group;
pub mod isogeny;
pub mod modmat;
pub mod orbits;

pub use catalog::{builtin, CatalogEntry, Source, BUILTIN_NAMES};
pub use cmformulas::{
    cm_class_number, cm_min_degree, kronecker, reduced_forms_count, splitting_type, CMOrder,
    CmMinDegree, Splitting,
};
pub use error::{Error, Result};
pub use formulas::{delta_lower_bound, map_degree, theorem_delta, CaseFlag, ClassDescriptor};
pub use group::{closure, closure_with_cap, full_preimage_gens, MatrixGroup, DEFAULT_CLOSURE_CAP};
pub use isogeny::{
    class_min_degree, class_min_odd_degree, isogeny_class_degrees, pushforward, KernelOrbitDegrees,
    ScanLimits, ScanReport, Witness, DEFAULT_AMBIENT_CAP,
};
pub use modmat::{gl2_order, Entries, GMat, Modulus};
pub use orbits::{
    closed_point_degrees, cyclic_subgroup_orbits, isogeny_character, torsion_classes,
    twisted_point_degree, CharacterImage, CyclicSubgroup, KernelOrbit, TorsionClass,
};
