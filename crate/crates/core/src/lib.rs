//! Exact symbolic workbench for inverse semigroups acting on totally
//! disconnected spaces: validated multiplication tables, the canonical
//! cylinder algebra of the shift space, germ groupoids with their
//! subsemigroup/subgroupoid correspondence, polycyclic monoids, compact
//! bisections of finite groupoids, and semilattice character spectra.
//!
//! Everything is computed exactly, by enumeration on finite models and by
//! length-truncated symbolic computation on the shift model; bounded checks
//! record the bound they used.

pub mod action;
pub mod bisect;
pub mod bitset;
pub mod clopen;
pub mod germ;
pub mod isg;
pub mod polycyclic;
pub mod report;
pub mod selftest;
pub mod spectrum;
