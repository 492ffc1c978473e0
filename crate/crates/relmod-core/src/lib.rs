//! Exact computation in free groups and their relation modules.
//!
//! The crate decides, up to configured bounds, whether the relation module of
//! a finite presentation stays torsion free along the mod-p filtration tower,
//! and verifies the supporting coinvariant and filtration facts by direct
//! computation. Everything is exact: integer linear algebra uses arbitrary
//! precision, coset tables are certified before use, and p-group quotients
//! are computed inside truncated Magnus algebras.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `relmod-cli` crate.

#![no_std]

extern crate alloc;

pub mod word;
pub mod presentation;
pub mod dsl;
pub mod intlinalg;
pub mod magnus;
pub mod enumerator;
pub mod coinvariants;
pub mod pgroup;
pub mod tower;

pub use presentation::{Mode, Presentation, PresentationLimits};
pub use word::{commutator, Letter, Word};
