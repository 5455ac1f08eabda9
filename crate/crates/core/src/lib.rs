//! Automorphism groups of even, large-type, NVB Coxeter groups.

pub mod automorphism;
pub mod diagram;
pub mod dihedral;
pub mod error;
pub mod free_products;
pub mod oracle;
pub mod outgroup;
pub mod structure;
pub mod verify;
pub mod word;

pub use diagram::{CoxeterDiagram, DiagramAutomorphism, Gen, ValidationReport};
pub use error::{Error, Result};
pub use oracle::{equal, relators, tits_reduce, Oracle, RelatorSet};
pub use word::Word;
