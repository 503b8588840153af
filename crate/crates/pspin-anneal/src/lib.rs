//! Statics of the ferromagnetic p-spin model under inhomogeneous
//! transverse-field driving.
//!
//! The library answers one family of questions: when the transverse field is
//! removed site by site (a spatial "turn-off front" parameterized by τ)
//! instead of uniformly, what happens to the first-order transition that
//! plagues the uniformly driven p-spin quantum annealer? It provides:
//!
//! - [`model`] — Hamiltonian parameters, field schedules Γ(x; s, τ),
//!   longitudinal disorder, and anneal paths τ(s).
//! - [`meanfield`] — exact-in-the-thermodynamic-limit free energies f(m) at
//!   zero and finite temperature, closed forms for the step-like schedules,
//!   landscape scans, and first-order transition detection.
//! - [`semiclassical`] — leading 1/N spin-wave corrections on top of the
//!   mean-field ground state: excitation gaps and bipartite entanglement
//!   entropy between driven and undriven regions.
//! - [`exactdiag`] — finite-N spectra from the collective-spin block
//!   structure, gap curves along anneal paths, and gap-scaling fits.
//! - [`classical`] — simulated-annealing and spin-vector Monte Carlo
//!   mean-field baselines for the same drive, to separate quantum from
//!   classical effects.
//! - [`sweep`] — phase-diagram assembly: transition-line tracing in control
//!   planes, line endpoints, and scans along paths.
//! - [`config`] / [`output`] / [`runner`] — JSON run configuration, CSV/JSON
//!   writers, and the orchestration layer behind the CLI and examples.
//!
//! All results are deterministic: quadrature orders, grids, seeds, and
//! tolerances are fixed by [`model::defaults`] unless overridden.

pub mod error;
pub mod math;
pub mod classical;
pub mod config;
pub mod exactdiag;
pub mod meanfield;
pub mod model;
pub mod output;
pub mod runner;
pub mod semiclassical;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{Disorder, FieldSchedule, Model, ModelSpec, PathSpec};
