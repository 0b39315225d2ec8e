//! Continuous-variable teleportation of a single optical mode.
//!
//! The crate propagates quadrature linear forms exactly through beam
//! splitters, QND couplers, phase shifters, homodyne detectors and
//! feedforward displacements ([`engine`]), assembles the QND-entangled,
//! classical and squeezed-state teleportation protocols together with the
//! phase-scrambled verification that measures added noise ([`protocols`]),
//! cross-checks every number with a phase-space Monte Carlo sampler
//! ([`montecarlo`]), and exposes a small circuit language ([`dsl`]) plus the
//! command-line front end ([`cli`]).
//!
//! ```
//! use cvteleport::protocols::{run_qnd_teleport, ProtocolParams};
//!
//! let out = run_qnd_teleport(&ProtocolParams::matched(2.0)?)?;
//! assert!((out.n_add.unwrap() - 0.625).abs() < 1e-12);
//! assert_eq!(out.coefficient("in"), (1.0, 1.0));
//! # Ok::<(), cvteleport::protocols::ProtocolError>(())
//! ```

pub mod cli;
pub mod dsl;
pub mod engine;
pub mod montecarlo;
pub mod protocols;
