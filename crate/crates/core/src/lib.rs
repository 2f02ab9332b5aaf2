//! # qextrap
//!
//! A dense-simulation toolkit for studying how random measurements hide
//! quantum information, for the canonical bit-commitment scheme built on
//! that hiding, and for classical→quantum and fully quantum extrapolation
//! tasks.
//!
//! Everything here works at desk scale (total dimensions up to a few
//! thousand) with explicit tolerances. The crate is organized as:
//!
//! - [`qcore`] — dense complex linear algebra and quantum-information
//!   primitives: register shapes, state vectors, density matrices,
//!   distance/fidelity metrics, Schmidt and Jordan–Hahn decompositions,
//!   seeded sampling.
//! - [`bases`] — keyed families of measurement bases: mutually unbiased
//!   bases, Clifford 2-designs, and the deliberately broken families used
//!   as counterexamples.
//! - [`hiding`] — expected post-measurement trace-distance experiments
//!   against the proven bounds, the Ivanovic decomposition, and the Haar
//!   baseline.
//! - [`commit`] — the random-measurement bit commitment: construction,
//!   hiding/binding games, XOR amplification, and the binding→extrapolation
//!   reduction.
//! - [`extrap`] — extrapolation tasks: canonical-purification targets,
//!   exact extrapolators, robustness, conjugation transport, and the
//!   commitment attack.

pub mod bases;
pub mod commit;
pub mod error;
pub mod extrap;
pub mod hiding;
pub mod qcore;

pub use error::{Error, Result};
