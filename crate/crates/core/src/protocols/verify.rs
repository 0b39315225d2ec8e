//! Phase-scrambled verification of a teleporter.
//!
//! The verifier rotates its input by `φ`, hands it to the protocol, rotates
//! the result back by `−φ` and reads the `X` quadrature `X_T`. Added noise is
//! the excess of `Var(X_T)` over the directly measured `Var(X_0)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ProtocolError, Teleporter};
use crate::engine::{homodyne_x, phase_shift, ModeId, ModeRegistry, ModeSpec, QuadratureForm};

const TRANSPORT_TOL: f64 = 1e-9;

/// Four equispaced phases on `[0, π)`. For a protocol that transports means,
/// `Var(X_T(φ))` only contains harmonics 0 and 2 of `φ`, so averaging over
/// these points gives the exact uniform-phase average.
pub const QUADRATURE_PHASES: [f64; 4] = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseMode {
    /// Uniform phase on `[0, 2π)`, averaged exactly.
    Averaged,
    /// A single phase.
    Fixed(f64),
    /// Average of exact variances over `count` uniformly drawn phases.
    Sampled { count: usize, seed: u64 },
}

/// `X_T` for one phase, as a form over the verification registry.
#[derive(Debug)]
pub struct TeleportedQuadrature {
    pub registry: ModeRegistry,
    pub input_mode: ModeId,
    pub x_t: QuadratureForm,
}

impl TeleportedQuadrature {
    pub fn x_0(&self) -> QuadratureForm {
        QuadratureForm::basis_x(self.input_mode)
    }
}

pub fn teleported_quadrature<T: Teleporter + ?Sized>(
    protocol: &T,
    input: &ModeSpec,
    phi: f64,
) -> Result<TeleportedQuadrature, ProtocolError> {
    let mut registry = ModeRegistry::new();
    let (input_mode, beam) = registry.allocate_labeled("0", *input)?;
    let rotated = phase_shift(beam, phi)?;
    let out = protocol.teleport(&mut registry, rotated)?;
    let x_t = homodyne_x(phase_shift(out, -phi)?);
    Ok(TeleportedQuadrature {
        registry,
        input_mode,
        x_t,
    })
}

fn check_at(t: &TeleportedQuadrature, input: &ModeSpec, phi: f64) -> Result<(), ProtocolError> {
    let gain = t.x_t.coeff(t.input_mode);
    let offset = t.registry.mean(&t.x_t)? - input.mean_x;
    let gain_ok = (gain.0 - 1.0).abs() <= TRANSPORT_TOL && gain.1.abs() <= TRANSPORT_TOL;
    let offset_ok = offset.abs() <= TRANSPORT_TOL * (1.0 + input.mean_x.abs());
    if gain_ok && offset_ok {
        Ok(())
    } else {
        Err(ProtocolError::MeanTransport {
            phase: phi,
            input_gain: gain,
            mean_offset: offset,
        })
    }
}

/// Requires `⟨X_T⟩ = ⟨X_0⟩` for every phase and every input state: the input
/// must reach `X_T` with unit gain and the ancillas must contribute no mean.
///
/// The input gain is a second-harmonic trigonometric polynomial of `φ` and
/// the ancilla offset a first-harmonic one, so checking at
/// [`QUADRATURE_PHASES`] covers all phases.
pub fn check_mean_transport<T: Teleporter + ?Sized>(
    protocol: &T,
    input: &ModeSpec,
) -> Result<(), ProtocolError> {
    for phi in QUADRATURE_PHASES {
        let t = teleported_quadrature(protocol, input, phi)?;
        check_at(&t, input, phi)?;
    }
    Ok(())
}

fn excess_variance<T: Teleporter + ?Sized>(
    protocol: &T,
    input: &ModeSpec,
    phi: f64,
) -> Result<f64, ProtocolError> {
    let t = teleported_quadrature(protocol, input, phi)?;
    check_at(&t, input, phi)?;
    Ok(t.registry.variance(&t.x_t)? - t.registry.variance(&t.x_0())?)
}

/// Added noise `Var(X_T) − Var(X_0)` under the chosen phase treatment.
pub fn victor_verify<T: Teleporter + ?Sized>(
    protocol: &T,
    input: &ModeSpec,
    mode: &PhaseMode,
) -> Result<f64, ProtocolError> {
    check_mean_transport(protocol, input)?;
    match mode {
        PhaseMode::Averaged => average(protocol, input, QUADRATURE_PHASES.iter().copied()),
        PhaseMode::Fixed(phi) => excess_variance(protocol, input, *phi),
        PhaseMode::Sampled { count, seed } => {
            if *count == 0 {
                return Err(ProtocolError::InvalidParameter("zero phase samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let phases: Vec<f64> = (0..*count).map(|_| rng.random::<f64>() * TAU).collect();
            average(protocol, input, phases.into_iter())
        }
    }
}

fn average<T: Teleporter + ?Sized>(
    protocol: &T,
    input: &ModeSpec,
    phases: impl ExactSizeIterator<Item = f64>,
) -> Result<f64, ProtocolError> {
    let n = phases.len() as f64;
    let mut acc = 0.0;
    for phi in phases {
        acc += excess_variance(protocol, input, phi)?;
    }
    Ok(acc / n)
}
