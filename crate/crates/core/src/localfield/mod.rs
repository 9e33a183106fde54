//! Concrete characteristic-`p` towers of Artin-Schreier extensions and
//! their Galois groups.

mod algebra;
mod galois;
mod tower;

pub use algebra::{AsAlgebra, TowerElement};
pub use galois::{
    compose, enumerate_group, map_pow, relation_report, GaloisMap, GroupElement, GroupTable, RelationReport,
};
pub use tower::{default_prec, Tower};
