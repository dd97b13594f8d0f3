//! Tools for promise constraint satisfaction over finite relational
//! structures.
//!
//! * [`relstruct`]: structures, domain maps, the text format;
//! * [`homsearch`]: deciding and enumerating homomorphisms;
//! * [`polymorph`]: operation tables, polymorphism checks, closures,
//!   Schaefer classes, block-symmetric partitions;
//! * [`affine`]: affine closure over `ℤ_n`, coset presentations, linear
//!   solving over `ℤ_p`, symmetric and alternating polymorphisms;
//! * [`sandwich`]: certified sandwiches `A → C → B` and the bounded family
//!   searches;
//! * [`builtin`]: the embedded six-ary example and its end-to-end check.

pub mod affine;
pub mod builtin;
pub mod homsearch;
pub mod polymorph;
pub mod relstruct;
pub mod sandwich;

pub use relstruct::{DomainMap, Elem, ParseError, Relation, Signature, Structure, Tuple};
