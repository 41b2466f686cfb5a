//! Numerics for the discrete-charge charged-drop model.
//!
//! A liquid drop of unit-ball volume carries `N` point charges, each wrapped in
//! a solvation ball of radius `ε` that must stay inside the drop. The energy is
//! the surface area plus `γ ε³ Σ 1/|xᵢ − xⱼ|`. This crate provides
//!
//! - [`elliptic`]: the elliptic integrals the geometry is written in;
//! - [`unduloid`]: constant-mean-curvature profiles, contact relations, areas
//!   and volumes;
//! - [`two_charge`]: the exact two-charge minimizer, its existence test against
//!   the split configuration and the existence threshold in `γ`;
//! - [`charges`]: many-charge configurations in a ball, evaporation margins and
//!   uniformity diagnostics;
//! - [`regime`]: the existence phase diagram in `(ε, γ, N)`.
//!
//! The `book/` directory of the repository explains the model and the
//! algorithms chapter by chapter; its code listings are compiled and run as
//! doc-tests of this crate.

pub mod charges;
pub mod elliptic;
mod error;
pub mod regime;
pub mod scalar;
pub mod two_charge;
pub mod unduloid;

pub use error::{Error, Result};

/// Chapters of the guide, compiled so their listings run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/elliptic.md")]
    mod elliptic {}
    #[doc = include_str!("../../../book/src/unduloid.md")]
    mod unduloid {}
    #[doc = include_str!("../../../book/src/two_charge.md")]
    mod two_charge {}
    #[doc = include_str!("../../../book/src/charges.md")]
    mod charges {}
    #[doc = include_str!("../../../book/src/regime.md")]
    mod regime {}
}
