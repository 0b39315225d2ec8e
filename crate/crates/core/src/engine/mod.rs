//! Exact propagation of quadrature linear forms through linear optics.
//!
//! Every field in a circuit is a [`Beam`]: a pair of [`QuadratureForm`]s over
//! the basis quadratures of independent input modes kept in a
//! [`ModeRegistry`]. Elements act linearly on forms; Gaussian moments of any
//! form are evaluated exactly from the registered single-mode statistics.

mod beam;
mod form;
mod mode;

use thiserror::Error;

pub use beam::{
    beam_splitter, displace_reflect, homodyne_x, homodyne_y, phase_shift, qnd_couple, Beam,
};
pub use form::{symplectic_pairing, QuadratureForm};
pub use mode::{ModeId, ModeRegistry, ModeSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid mode spec: {0}")]
    InvalidSpec(String),
    #[error("transmittance {0} outside [0, 1]")]
    Transmittance(f64),
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("mode {0:?} is not registered here")]
    UnregisteredMode(ModeId),
    #[error("meter variance is zero")]
    ZeroMeterVariance,
    #[error("displacement forms are not jointly measurable (pairing {0:e})")]
    NotJointlyMeasurable(f64),
}
