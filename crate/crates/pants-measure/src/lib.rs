//! Topological measures on surfaces over pants decompositions.
//!
//! This crate models compact subsurfaces of a closed orientable genus-g
//! surface (g >= 2) relative to a fixed pants decomposition, entirely in
//! exact arithmetic:
//!
//! * [`surface`] — pants graphs, multicurve scenes, regions, and subsurfaces
//!   with canonical presentations;
//! * [`normalize`] — the normalization map that discards disks and annuli and
//!   lands in normal isotopy classes, plus its exhaustive property audit;
//! * [`additive`] — additive functions on normal classes, including the ones
//!   induced by probability weights on pants and decomposition curves;
//! * [`measure`] — topological measures obtained by composing an additive
//!   function with normalization, their axiom audit, and affinity checks;
//! * [`quasistate`] — step filtrations, their measure profiles, quasi-state
//!   values, and essential spectra;
//! * [`enumerate`] — budgeted exhaustive enumeration of selections and small
//!   scene families backing the audits;
//! * [`io`] — the JSON wire formats used by the `pants-measure` binary.

pub mod additive;
pub mod enumerate;
pub mod io;
pub mod measure;
pub mod normalize;
pub mod quasistate;
pub mod rational;
pub mod surface;

pub use rational::Rational;
