//! Exact arithmetic for totally ramified extraspecial `p`-extensions of
//! local fields.
//!
//! The crate has two halves:
//!
//! * a *planner* that works purely with ramification numbers: it checks
//!   the inequality systems that guarantee a Galois scaffold for an
//!   `H(n)`- or `M(n)`-extension, computes the scaffold precision and
//!   reports what can be said about the Galois module structure of the
//!   ring of integers;
//! * an *oracle* that builds the corresponding Artin-Schreier tower over
//!   `F_q((pi))` explicitly, enumerates its Galois group and measures the
//!   ramification filtration by brute force, so the planner's predictions
//!   can be checked against the real extension.
//!
//! Module map:
//!
//! | module            | contents                                              |
//! |-------------------|-------------------------------------------------------|
//! | [`valuation`]     | extended rationals, `F_q`, truncated Laurent series   |
//! | [`ramification`]  | lower/upper conversion, shift tables                  |
//! | [`artin_schreier`]| `X^p - X`, the Witt polynomial `D`, constant checks   |
//! | [`detval`]        | Moore determinants and Frobenius-twist valuations     |
//! | [`planner`]       | scaffold certification and module-structure verdicts  |
//! | [`localfield`]    | the tower algebra, valuations via norms, Galois maps  |
//! | [`oracle`]        | end-to-end measurement of a constructed tower         |
//! | [`report`]        | JSON envelopes for command-line reports               |

pub mod artin_schreier;
pub mod detval;
mod error;
pub mod localfield;
pub mod oracle;
pub mod planner;
pub mod ramification;
pub mod report;
pub mod valuation;

pub use error::{Error, Result};
pub use valuation::{ExtRational, Fq, LaurentSeries, Rat, ResidueField};
pub use planner::{Cfrak, GmsVerdict, PlanMode, PlanReport, PlanVerdict, TowerParams, Variant};
pub use localfield::{AsAlgebra, GaloisMap, Tower, TowerElement};

/// Version of the JSON report layout emitted by this crate.
pub const SCHEMA_VERSION: u32 = 1;
