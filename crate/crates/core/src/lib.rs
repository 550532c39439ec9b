//! A finite-model workbench for representations of algebraic theories.
//!
//! A representation `⟨T, E, ⊨, ≤⟩` relates traces to the expressions they
//! satisfy and orders expressions soundly; it is exact when the order
//! captures all of semantic containment. Everything here is finite: sets
//! are labelled carriers, relations are bit matrices, and universally
//! quantified laws are certified over explicit probe universes.

pub mod bits;
pub mod error;
pub mod functor;
pub mod gen;
pub mod hor;
pub mod morphism;
pub mod natural;
pub mod reduction;
pub mod rel;
pub mod relcore;
pub mod report;
pub mod repr;
pub mod set;

pub use error::{Error, Result};
pub use rel::{Combine, FuncTable, FunctionProps, Inclusion, Rel};
pub use report::{CheckReport, LawCheck, Witness};
pub use set::{FiniteSet, Provenance, SetId};
