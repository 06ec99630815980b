//! Finite Heyting algebras in dual (up-set) representation.
//!
//! Everything is built over finite posets: an algebra is the up-set algebra
//! of its dual poset, homomorphisms are inverse images of p-morphisms,
//! amalgamation is a fibered product of duals, and the witness constructions
//! (Boolean envelopes, regular-element splittings, order expansions,
//! isomorphism-type families) are executable at desk scale.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `heytica` binary for the scriptable JSON interface.

pub mod amalgam;
pub mod canon;
pub mod catalog;
pub mod envelope;
pub mod error;
pub mod heyting;
pub mod io;
pub mod limit;
pub mod order;
pub mod poset;
pub mod term;
pub mod witness;

pub use error::{Error, Result};
pub use heyting::{Heyting, Hom, Subalgebra, UpSet};
pub use poset::{PMorphism, Poset};
