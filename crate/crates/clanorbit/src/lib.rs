//! Clans, K-orbit posets and equivariant classes on classical flag varieties.

pub mod clans;
pub mod formulas;
pub mod geometry;
pub mod orbits;
pub mod poly;
pub mod weyl;

pub use clans::{CaseId, CaseKind, Clan, RankTable, RootType, Symbol};
pub use poly::Polynomial;
pub use weyl::WeylElement;
