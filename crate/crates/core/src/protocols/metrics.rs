//! Closed-form added-noise and conditional-variance expressions.

use serde::Serialize;

use super::ProtocolError;
use crate::engine::ModeSpec;

/// Slack used when classifying a run as beyond-classical. Values within this
/// distance of the bound count as classical, so the exact boundary point
/// `g = 1/√3` is never reported as quantum because of rounding.
pub const REGIME_TOL: f64 = 1e-9;

/// Transmittance and electronic gain that cancel the QND variables for a
/// given coupling gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchedParams {
    pub transmittance: f64,
    pub electronic_gain: f64,
}

/// Solves `G = (1 − ε)^{-1/2}`, `g = (1 − ε)^{1/2} ε^{-1/2}` for `(ε, G)`.
pub fn matched_params(g: f64) -> Result<MatchedParams, ProtocolError> {
    positive("QND gain", g)?;
    let g2 = g * g;
    Ok(MatchedParams {
        transmittance: 1.0 / (1.0 + g2),
        electronic_gain: (1.0 + g2).sqrt() / g,
    })
}

/// Conditional variance of the QND pair for coherent inputs, `1/(1 + g²)`.
pub fn qnd_conditional_variance(g: f64) -> f64 {
    1.0 / (1.0 + g * g)
}

/// Inverse of [`qnd_conditional_variance`].
pub fn gain_from_conditional_variance(v_c: f64) -> Result<f64, ProtocolError> {
    open_unit("conditional variance", v_c)?;
    Ok((1.0 / v_c - 1.0).sqrt())
}

/// `N_add = V_a / (2g²) + V_b / 2` for the QND protocol at matched gains.
pub fn added_noise_qnd(g: f64, v_a: f64, v_b: f64) -> Result<f64, ProtocolError> {
    positive("QND gain", g)?;
    positive("V_a", v_a)?;
    positive("V_b", v_b)?;
    Ok(v_a / (2.0 * g * g) + 0.5 * v_b)
}

/// The same quantity written through the conditional variance:
/// `½·V_c/(1 − V_c)·V_a + ½·V_b`.
pub fn added_noise_qnd_from_vc(v_c: f64, v_a: f64, v_b: f64) -> Result<f64, ProtocolError> {
    open_unit("conditional variance", v_c)?;
    positive("V_a", v_a)?;
    positive("V_b", v_b)?;
    Ok(0.5 * v_c / (1.0 - v_c) * v_a + 0.5 * v_b)
}

/// Squeezed-ancilla teleportation: `N_add = V_1 + V_2`.
pub fn added_noise_squeezed(v1: f64, v2: f64) -> Result<f64, ProtocolError> {
    positive("V_1", v1)?;
    positive("V_2", v2)?;
    Ok(v1 + v2)
}

/// Classical measure-and-prepare teleportation with ancillas `v` (unused
/// splitter port) and `w` (added at reconstruction).
pub fn added_noise_classical(v: &ModeSpec, w: &ModeSpec) -> f64 {
    0.5 * (v.var_x + v.var_y + w.var_x + w.var_y)
}

/// Lowest added noise reachable without shared entanglement.
pub const fn classical_noise_bound() -> f64 {
    2.0
}

pub fn is_quantum_regime(n_add: f64) -> bool {
    n_add < classical_noise_bound() - REGIME_TOL
}

fn positive(what: &str, v: f64) -> Result<(), ProtocolError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ProtocolError::InvalidParameter(format!(
            "{what} must be positive and finite, got {v}"
        )))
    }
}

fn open_unit(what: &str, v: f64) -> Result<(), ProtocolError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(ProtocolError::InvalidParameter(format!(
            "{what} must lie in (0, 1), got {v}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;
    const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

    #[test]
    fn matched_at_unit_gain() {
        let m = matched_params(1.0).unwrap();
        assert!((m.transmittance - 0.5).abs() < TOL);
        assert!((m.electronic_gain - 2f64.sqrt()).abs() < TOL);
    }

    #[test]
    fn matched_satisfies_both_relations() {
        for g in [0.05, 0.6, 1.0, 2.0, 5.0, 40.0] {
            let m = matched_params(g).unwrap();
            let e = m.transmittance;
            assert!((m.electronic_gain - (1.0 - e).powf(-0.5)).abs() < TOL * m.electronic_gain);
            assert!((g - ((1.0 - e) / e).sqrt()).abs() < TOL * g.max(1.0));
            assert!((e - qnd_conditional_variance(g)).abs() < TOL);
        }
    }

    #[test]
    fn matched_large_gain_limit() {
        let m = matched_params(1e6).unwrap();
        assert!(m.transmittance < 1e-11);
        assert!((m.electronic_gain - 1.0).abs() < 1e-11);
    }

    #[test]
    fn matched_rejects_nonpositive() {
        assert!(matched_params(0.0).is_err());
        assert!(matched_params(-1.0).is_err());
        assert!(added_noise_qnd(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn qnd_noise_values() {
        assert!((added_noise_qnd(INV_SQRT3, 1.0, 1.0).unwrap() - 2.0).abs() < TOL);
        assert!((added_noise_qnd(1.0, 1.0, 1.0).unwrap() - 1.0).abs() < TOL);
        let g = (11.0f64 / 9.0).sqrt();
        assert!((added_noise_qnd(g, 1.0, 1.0).unwrap() - 10.0 / 11.0).abs() < TOL);
    }

    #[test]
    fn vc_noise_values() {
        assert!((added_noise_qnd_from_vc(0.75, 1.0, 1.0).unwrap() - 2.0).abs() < TOL);
        assert!((added_noise_qnd_from_vc(0.5, 1.0, 1.0).unwrap() - 1.0).abs() < TOL);
        assert!((added_noise_qnd_from_vc(0.45, 1.0, 1.0).unwrap() - 10.0 / 11.0).abs() < TOL);
        assert!(added_noise_qnd_from_vc(1.0, 1.0, 1.0).is_err());
        assert!(added_noise_qnd_from_vc(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn bound_and_regime() {
        assert_eq!(classical_noise_bound(), 2.0);
        assert!(!is_quantum_regime(2.0));
        assert!(!is_quantum_regime(
            added_noise_qnd(INV_SQRT3, 1.0, 1.0).unwrap()
        ));
        assert!(!is_quantum_regime(
            added_noise_qnd_from_vc(0.75, 1.0, 1.0).unwrap()
        ));
        assert!(is_quantum_regime(1.9999));
    }

    #[test]
    fn squeezed_and_classical_sums() {
        assert_eq!(added_noise_squeezed(0.5, 0.5).unwrap(), 1.0);
        assert!((added_noise_squeezed(0.1, 1.0).unwrap() - 1.1).abs() < TOL);
        assert!(added_noise_squeezed(0.0, 1.0).is_err());
        let v = ModeSpec::new(0.0, 0.0, 0.5, 2.0, 0.0).unwrap();
        assert_eq!(added_noise_classical(&v, &v), 2.5);
        assert_eq!(
            added_noise_classical(&ModeSpec::vacuum(), &ModeSpec::vacuum()),
            2.0
        );
    }

    #[test]
    fn gain_from_vc_inverts() {
        for g in [0.2, 1.0, 3.0] {
            let back = gain_from_conditional_variance(qnd_conditional_variance(g)).unwrap();
            assert!((back - g).abs() < 1e-12);
        }
    }
}
