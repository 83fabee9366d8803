//! Spectra of Hecke operators of self-similar groups acting on rooted trees.
//!
//! The crate builds the generators of five automaton groups as tree
//! automorphisms, assembles their level-`n` Hecke operators by block
//! recursion, and computes the spectra twice: from the closed-form
//! factorisation of the operator pencils and with a dense symmetric
//! eigensolver. It also generates the Schreier graphs of the level actions,
//! both directly and by graph substitution.

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod level_ops;
pub mod limits;
pub mod numeric_spectra;
pub mod report;
pub mod schreier;
pub mod tree_groups;
pub mod verify;

pub use error::{Error, Result};
pub use tree_groups::GroupPreset;
