//! Good semigroup ideals of `Z^r`: finite representation, axiom checks,
//! fibers and maximal points, duals and canonical ideals, and executable
//! checks of the duality theorems relating them.
//!
//! ```
//! use gsi_core::{canonical_ideal, numerical, Point};
//!
//! let s = numerical(&[3, 4, 5]).unwrap();
//! let k = canonical_ideal(&s).unwrap();
//! assert!(k.contains(&Point::from([1])).unwrap());
//! assert!(!s.equals(&k).unwrap());
//! ```

pub mod constructors;
pub mod duality;
pub mod error;
pub mod fiber;
pub mod good_ideal;
mod grid;
pub mod gsi_format;
pub mod lattice;
pub mod oracle;
pub mod report;
pub mod theorems;

pub use constructors::{
    from_small_elements, node, numerical, product, random_good, random_semigroup, RandomBounds,
};
pub use duality::{
    bidual, canonical_ideal, cd_difference, fiber_dual, is_canonical, is_gorenstein, FiberDual,
    SemigroupContext,
};
pub use error::{GsiError, Result};
pub use fiber::{fiber_empty, fiber_witness, is_maximal, maximals, MaximalInfo, MaximalKind};
pub use good_ideal::{validate, validate_semigroup, RegionSet, SmallRep};
pub use gsi_format::{emit_gsi, parse_gsi};
pub use lattice::{Comparison, IndexSet, IntBox, Point};
pub use report::{CheckReport, Evidence, ReportBundle};
