//! Proof toolkit for the intuitionistic modal calculi Int, Int□, KM and the
//! KM-sublogics (e.g. mHC).
//!
//! The crate is `no_std` (it needs `alloc`). File formats, IO and the command
//! line live in the `km-tool` crate.
//!
//! * [`formula`]: the modal language, substitution, replacement and maximal
//!   □-subformulas.
//! * [`calculus`]: axioms, calculus modes, derivations and their verification.
//! * [`builder`]: derivation producers (deduction theorem, the auxiliary Int
//!   schemata, strong replacement, refinement and purification).
//! * [`eliminate`]: the rank-decreasing □-elimination step and extraction of
//!   pure Int derivations from KM derivations.
//! * [`algebra`]: finite Heyting algebras with □ tables, used as a refuter.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod builder;
pub mod calculus;
pub mod eliminate;
pub mod formula;

pub use calculus::{AxiomId, CalculusMode, Derivation, Justification, Step, VerificationReport};
pub use formula::{Formula, OccurrenceSet, Substitution};
