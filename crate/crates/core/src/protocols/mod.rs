//! Teleportation protocols, their verification, and closed-form noise metrics.

mod metrics;
mod teleport;
mod verify;

use thiserror::Error;

use crate::engine::{Beam, EngineError, ModeRegistry};

pub use metrics::{
    added_noise_classical, added_noise_qnd, added_noise_qnd_from_vc, added_noise_squeezed,
    classical_noise_bound, gain_from_conditional_variance, is_quantum_regime, matched_params,
    qnd_conditional_variance, MatchedParams, REGIME_TOL,
};
pub use teleport::{
    coefficient_table, run_classical_teleport, run_protocol, run_qnd_teleport,
    run_squeezed_teleport, ClassicalTeleporter, CoefficientEntry, ProtocolParams,
    SqueezedTeleporter, TeleportOutcome,
};
pub use verify::{
    check_mean_transport, teleported_quadrature, victor_verify, PhaseMode, TeleportedQuadrature,
    QUADRATURE_PHASES,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "means are not transported at phase {phase}: input gain ({}, {}), offset {mean_offset}",
        input_gain.0, input_gain.1
    )]
    MeanTransport {
        phase: f64,
        input_gain: (f64, f64),
        mean_offset: f64,
    },
    #[error("{0}")]
    Circuit(String),
}

/// A linear teleportation scheme: takes the sender's input beam, allocates
/// whatever ancillas it needs on `registry`, and returns the receiver's beam.
pub trait Teleporter {
    fn name(&self) -> String;
    fn teleport(&self, registry: &mut ModeRegistry, input: Beam) -> Result<Beam, ProtocolError>;
}

impl<T: Teleporter + ?Sized> Teleporter for &T {
    fn name(&self) -> String {
        (**self).name()
    }

    fn teleport(&self, registry: &mut ModeRegistry, input: Beam) -> Result<Beam, ProtocolError> {
        (**self).teleport(registry, input)
    }
}
