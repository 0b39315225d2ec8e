use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use super::metrics::matched_params;
use super::verify::{victor_verify, PhaseMode};
use super::{ProtocolError, Teleporter};
use crate::engine::{
    beam_splitter, displace_reflect, homodyne_x, homodyne_y, phase_shift, qnd_couple, Beam, ModeId,
    ModeRegistry, ModeSpec,
};

/// Settings of the QND-entangled protocol.
///
/// `input` is only used by [`run_qnd_teleport`]; as a [`Teleporter`] the
/// params teleport whatever beam they are handed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolParams {
    /// QND coupling gain `g`.
    pub gain: f64,
    /// Transmittance `ε` of Alice's splitter.
    pub transmittance: f64,
    /// Electronic feedforward gain `G`.
    pub electronic_gain: f64,
    pub ancilla_a: ModeSpec,
    pub ancilla_b: ModeSpec,
    pub input: ModeSpec,
}

impl ProtocolParams {
    /// Matched `(ε, G)` for gain `g`, coherent ancillas and a vacuum input.
    pub fn matched(g: f64) -> Result<Self, ProtocolError> {
        let m = matched_params(g)?;
        Ok(ProtocolParams {
            gain: g,
            transmittance: m.transmittance,
            electronic_gain: m.electronic_gain,
            ancilla_a: ModeSpec::vacuum(),
            ancilla_b: ModeSpec::vacuum(),
            input: ModeSpec::vacuum(),
        })
    }

    pub fn with_ancillas(mut self, a: ModeSpec, b: ModeSpec) -> Self {
        self.ancilla_a = a;
        self.ancilla_b = b;
        self
    }

    pub fn with_input(mut self, input: ModeSpec) -> Self {
        self.input = input;
        self
    }

    fn validate(&self) -> Result<(), ProtocolError> {
        let finite = [self.gain, self.transmittance, self.electronic_gain]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(ProtocolError::InvalidParameter(
                "non-finite protocol parameter".into(),
            ));
        }
        self.ancilla_a.validate()?;
        self.ancilla_b.validate()?;
        self.input.validate()?;
        Ok(())
    }
}

impl Teleporter for ProtocolParams {
    fn name(&self) -> String {
        "qnd".into()
    }

    fn teleport(&self, registry: &mut ModeRegistry, input: Beam) -> Result<Beam, ProtocolError> {
        self.validate()?;
        let (_, a) = registry.allocate_labeled("a", self.ancilla_a)?;
        let (_, b) = registry.allocate_labeled("b", self.ancilla_b)?;
        let (alice, bob) = qnd_couple(a, b, self.gain)?;
        let (out1, out2) = beam_splitter(alice, input, self.transmittance)?;
        let x = homodyne_x(out1);
        let y = homodyne_y(out2);
        let g = self.electronic_gain;
        Ok(displace_reflect(bob, &(&x * g), &(&y * (g * self.gain)))?)
    }
}

/// Measure-and-prepare teleportation without shared entanglement. The
/// default uses vacuum for both fields.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassicalTeleporter {
    /// Field entering the unused port of the 50:50 splitter.
    pub v: ModeSpec,
    /// Field added during reconstruction.
    pub w: ModeSpec,
}

impl Teleporter for ClassicalTeleporter {
    fn name(&self) -> String {
        "classical".into()
    }

    fn teleport(&self, registry: &mut ModeRegistry, input: Beam) -> Result<Beam, ProtocolError> {
        let (_, v) = registry.allocate_labeled("v", self.v)?;
        let (_, w) = registry.allocate_labeled("w", self.w)?;
        // Bob's modulator flips w so that it enters the output with a plus sign.
        let w_reflected = phase_shift(w, PI)?;
        measure_and_rebuild(input, v, w_reflected)
    }
}

/// Classical pipeline fed by two squeezed fields mixed on a 50:50 splitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezedTeleporter {
    v1: f64,
    v2: f64,
}

impl SqueezedTeleporter {
    /// `v1` is the `X` variance of the first squeezer and `v2` the `Y`
    /// variance of the second; both are minimum-uncertainty states.
    pub fn new(v1: f64, v2: f64) -> Result<Self, ProtocolError> {
        for (name, v) in [("V_1", v1), ("V_2", v2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ProtocolError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(SqueezedTeleporter { v1, v2 })
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }
}

impl Teleporter for SqueezedTeleporter {
    fn name(&self) -> String {
        "squeezed".into()
    }

    fn teleport(&self, registry: &mut ModeRegistry, input: Beam) -> Result<Beam, ProtocolError> {
        let (_, e1) = registry.allocate_labeled("1", ModeSpec::squeezed_x(self.v1)?)?;
        let (_, e2) = registry.allocate_labeled("2", ModeSpec::squeezed_y(self.v2)?)?;
        // out1 = (E1 + E2)/√2 is E_v; out2 = (E2 − E1)/√2 is −E_w, which is
        // exactly what the reflecting reconstruction stage expects.
        let (v, w_reflected) = beam_splitter(e1, e2, 0.5)?;
        measure_and_rebuild(input, v, w_reflected)
    }
}

/// Alice splits `input` against `v` at 50:50, reads `X` and `Y` on the two
/// ports, and Bob displaces `w_reflected` by `√2·(x, y)`.
fn measure_and_rebuild(input: Beam, v: Beam, w_reflected: Beam) -> Result<Beam, ProtocolError> {
    let (out1, out2) = beam_splitter(v, input, 0.5)?;
    let x = homodyne_x(out1);
    let y = homodyne_y(out2);
    Ok(displace_reflect(
        w_reflected,
        &(&x * SQRT_2),
        &(&y * SQRT_2),
    )?)
}

/// One row of an output coefficient table: the `X` coefficient of a mode in
/// the output `X` quadrature and its `Y` coefficient in the output `Y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientEntry {
    #[serde(skip)]
    pub id: ModeId,
    #[serde(rename = "mode")]
    pub label: String,
    pub cx: f64,
    pub cy: f64,
}

pub fn coefficient_table(registry: &ModeRegistry, beam: &Beam) -> Vec<CoefficientEntry> {
    registry
        .modes()
        .map(|(id, label, _)| CoefficientEntry {
            id,
            label: label.to_string(),
            cx: beam.x().coeff(id).0,
            cy: beam.y().coeff(id).1,
        })
        .collect()
}

/// Result of teleporting one input through a protocol.
#[derive(Debug)]
pub struct TeleportOutcome {
    pub protocol: String,
    pub registry: ModeRegistry,
    pub input_mode: ModeId,
    pub output: Beam,
    /// Phase-averaged added noise; `None` when the protocol does not
    /// transport means for every phase (the verification is then invalid).
    pub n_add: Option<f64>,
    pub mean_error_x: f64,
    pub mean_error_y: f64,
    pub coefficients: Vec<CoefficientEntry>,
}

impl TeleportOutcome {
    /// `(cx, cy)` of the mode labelled `label`, or zeros.
    pub fn coefficient(&self, label: &str) -> (f64, f64) {
        self.coefficients
            .iter()
            .find(|e| e.label == label)
            .map_or((0.0, 0.0), |e| (e.cx, e.cy))
    }
}

/// Teleports a fresh mode with statistics `input` and evaluates the outcome.
pub fn run_protocol<T: Teleporter + ?Sized>(
    protocol: &T,
    input: &ModeSpec,
) -> Result<TeleportOutcome, ProtocolError> {
    let mut registry = ModeRegistry::new();
    let (input_mode, beam) = registry.allocate_labeled("in", *input)?;
    let output = protocol.teleport(&mut registry, beam)?;
    let mean_error_x = registry.mean(output.x())? - input.mean_x;
    let mean_error_y = registry.mean(output.y())? - input.mean_y;
    let n_add = match victor_verify(protocol, input, &PhaseMode::Averaged) {
        Ok(v) => Some(v),
        Err(ProtocolError::MeanTransport { .. }) => None,
        Err(e) => return Err(e),
    };
    let coefficients = coefficient_table(&registry, &output);
    Ok(TeleportOutcome {
        protocol: protocol.name(),
        registry,
        input_mode,
        output,
        n_add,
        mean_error_x,
        mean_error_y,
        coefficients,
    })
}

pub fn run_qnd_teleport(params: &ProtocolParams) -> Result<TeleportOutcome, ProtocolError> {
    run_protocol(params, &params.input)
}

pub fn run_classical_teleport(
    input: &ModeSpec,
    v: &ModeSpec,
    w: &ModeSpec,
) -> Result<TeleportOutcome, ProtocolError> {
    run_protocol(&ClassicalTeleporter { v: *v, w: *w }, input)
}

pub fn run_squeezed_teleport(
    input: &ModeSpec,
    v1: f64,
    v2: f64,
) -> Result<TeleportOutcome, ProtocolError> {
    run_protocol(&SqueezedTeleporter::new(v1, v2)?, input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::metrics::{added_noise_classical, added_noise_qnd};

    const TOL: f64 = 1e-12;

    #[test]
    fn matched_output_is_input_plus_two_noises() {
        for g in [0.6, 1.0, 2.0, 5.0] {
            let out = run_qnd_teleport(&ProtocolParams::matched(g).unwrap()).unwrap();
            let reg = &out.registry;
            let (m_in, m_a, m_b) = (
                reg.find("in").unwrap(),
                reg.find("a").unwrap(),
                reg.find("b").unwrap(),
            );
            let x = crate::engine::QuadratureForm::from_terms(
                0.0,
                [(m_in, 1.0, 0.0), (m_a, 1.0 / g, 0.0)],
            );
            let y = crate::engine::QuadratureForm::from_terms(
                0.0,
                [(m_in, 0.0, 1.0), (m_b, 0.0, -1.0)],
            );
            assert!(
                out.output.x().max_abs_diff(&x) < TOL,
                "g={g}: {}",
                out.output.x()
            );
            assert!(
                out.output.y().max_abs_diff(&y) < TOL,
                "g={g}: {}",
                out.output.y()
            );
        }
    }

    #[test]
    fn unit_gain_noise_and_means() {
        let p = ProtocolParams::matched(1.0)
            .unwrap()
            .with_input(ModeSpec::coherent(1.5, -0.7));
        let out = run_qnd_teleport(&p).unwrap();
        assert!((out.n_add.unwrap() - 1.0).abs() < TOL);
        assert!(out.mean_error_x.abs() < TOL);
        assert!(out.mean_error_y.abs() < TOL);
        assert!((out.output.pairing() - 1.0).abs() < TOL);
    }

    /// Bright ancillas are allowed as long as their amplitudes sit on the
    /// QND variables (imaginary for `a`, real for `b`).
    #[test]
    fn bright_ancillas_on_qnd_variables_still_transport_means() {
        let p = ProtocolParams::matched(1.3)
            .unwrap()
            .with_ancillas(ModeSpec::coherent(0.0, 40.0), ModeSpec::coherent(25.0, 0.0))
            .with_input(ModeSpec::coherent(0.3, 0.2));
        let out = run_qnd_teleport(&p).unwrap();
        assert!(out.mean_error_x.abs() < 1e-9);
        assert!(out.mean_error_y.abs() < 1e-9);
        let expect = added_noise_qnd(1.3, 1.0, 1.0).unwrap();
        assert!((out.n_add.unwrap() - expect).abs() < TOL);
    }

    #[test]
    fn displaced_ancilla_fails_transport() {
        let p = ProtocolParams::matched(1.0)
            .unwrap()
            .with_ancillas(ModeSpec::coherent(1.0, 0.0), ModeSpec::vacuum());
        let out = run_qnd_teleport(&p).unwrap();
        assert!(out.n_add.is_none());
        assert!((out.mean_error_x - 1.0).abs() < TOL);
    }

    #[test]
    fn unmatched_parameters_follow_general_expansion() {
        let (g, eps, gg) = (0.8, 0.3, 1.7);
        let p = ProtocolParams {
            gain: g,
            transmittance: eps,
            electronic_gain: gg,
            ..ProtocolParams::matched(1.0).unwrap()
        };
        let out = run_qnd_teleport(&p).unwrap();
        let s = eps.sqrt();
        let r = (1.0 - eps).sqrt();
        assert!((out.coefficient("a").0 - gg * s).abs() < TOL);
        assert!((out.coefficient("b").0 - (gg * g * s - 1.0)).abs() < TOL);
        assert!((out.coefficient("in").0 - gg * r).abs() < TOL);
        assert!((out.coefficient("a").1 - g * (1.0 - gg * r)).abs() < TOL);
        assert!((out.coefficient("b").1 + 1.0).abs() < TOL);
        assert!((out.coefficient("in").1 - gg * g * s).abs() < TOL);
        assert!(out.n_add.is_none());
    }

    #[test]
    fn classical_vacuum_reproduces_reconstruction_table() {
        let out = run_classical_teleport(
            &ModeSpec::vacuum(),
            &ModeSpec::vacuum(),
            &ModeSpec::vacuum(),
        )
        .unwrap();
        assert!((out.coefficient("in").0 - 1.0).abs() < TOL);
        assert!((out.coefficient("in").1 - 1.0).abs() < TOL);
        assert!((out.coefficient("v").0 - 1.0).abs() < TOL);
        assert!((out.coefficient("v").1 + 1.0).abs() < TOL);
        assert!((out.coefficient("w").0 - 1.0).abs() < TOL);
        assert!((out.coefficient("w").1 - 1.0).abs() < TOL);
        assert!((out.n_add.unwrap() - 2.0).abs() < TOL);
    }

    #[test]
    fn classical_with_unbalanced_ancillas() {
        let s = ModeSpec::new(0.0, 0.0, 0.5, 2.0, 0.0).unwrap();
        let out = run_classical_teleport(&ModeSpec::vacuum(), &s, &s).unwrap();
        assert!((out.n_add.unwrap() - 2.5).abs() < TOL);
        assert!((added_noise_classical(&s, &s) - 2.5).abs() < TOL);
    }

    #[test]
    fn squeezed_noise_is_sum_of_variances() {
        for (v1, v2, expect) in [(1.0, 1.0, 2.0), (0.5, 0.5, 1.0), (0.1, 1.0, 1.1)] {
            let out = run_squeezed_teleport(&ModeSpec::vacuum(), v1, v2).unwrap();
            assert!((out.n_add.unwrap() - expect).abs() < TOL, "{v1} {v2}");
        }
        assert!(run_squeezed_teleport(&ModeSpec::vacuum(), 0.0, 1.0).is_err());
        assert!(SqueezedTeleporter::new(1.0, -2.0).is_err());
    }

    #[test]
    fn squeezed_output_combines_squeezed_quadratures() {
        let out = run_squeezed_teleport(&ModeSpec::vacuum(), 0.3, 0.4).unwrap();
        let reg = &out.registry;
        let m1 = reg.find("1").unwrap();
        let m2 = reg.find("2").unwrap();
        assert!((out.output.x().coeff(m1).0 - SQRT_2).abs() < TOL);
        assert!(out.output.x().coeff(m2).0.abs() < TOL);
        assert!((out.output.y().coeff(m2).1 + SQRT_2).abs() < TOL);
        assert!(out.output.y().coeff(m1).1.abs() < TOL);
    }
}
