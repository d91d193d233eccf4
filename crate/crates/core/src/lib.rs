//! Classification of unidimensional preference domains, construction of the
//! canonical strategy-proof rules on them, and exhaustive axiom checking.
//!
//! The crate is organised bottom-up:
//!
//! * [`pref`] and [`altset`]: alternatives, preferences, domains, profiles.
//! * [`tree`]: graphs and trees over alternatives.
//! * [`structure`]: adjacency graphs and the richness conditions.
//! * [`family`]: preference families, generators and domain certificates.
//! * [`rules`]: social choice functions and axiom checks.
//! * [`classify`]: the classification pipeline and critical spots.
//! * [`enumerate`]: brute-force enumeration of two-voter rules.
//! * [`report`]: JSON report bundles.

pub mod altset;
pub mod budget;
pub mod classify;
pub mod enumerate;
pub mod family;
pub mod fixtures;
pub mod pref;
pub mod report;
pub mod rules;
pub mod structure;
pub mod tree;

pub use altset::AltSet;
pub use budget::{Budget, BudgetExceeded};
pub use pref::{parse_domain, parse_domain_json, Alt, Domain, DomainError, Preference, Profile};
pub use tree::{Graph, Tree, TreeError};
