//! A user-defined protocol: QND teleportation with inefficient homodyne
//! detectors, verified by the same machinery as the built-in protocols.

use cvteleport::engine::{
    beam_splitter, displace_reflect, homodyne_x, homodyne_y, qnd_couple, Beam, ModeRegistry,
    ModeSpec,
};
use cvteleport::montecarlo::{estimate_added_noise, McConfig};
use cvteleport::protocols::{
    added_noise_qnd, matched_params, victor_verify, PhaseMode, ProtocolError, Teleporter,
};

/// Each detector sees its port through a splitter of transmittance `eta`;
/// Bob divides the records by `√eta` so means are still transported.
struct LossyDetectors {
    g: f64,
    eta: f64,
}

impl Teleporter for LossyDetectors {
    fn name(&self) -> String {
        format!("qnd, η={}", self.eta)
    }

    fn teleport(&self, reg: &mut ModeRegistry, input: Beam) -> Result<Beam, ProtocolError> {
        let m = matched_params(self.g)?;
        let (_, a) = reg.allocate_labeled("a", ModeSpec::vacuum())?;
        let (_, b) = reg.allocate_labeled("b", ModeSpec::vacuum())?;
        let (alice, bob) = qnd_couple(a, b, self.g)?;
        let (out1, out2) = beam_splitter(alice, input, m.transmittance)?;

        let (_, l1) = reg.allocate_labeled("loss1", ModeSpec::vacuum())?;
        let (_, l2) = reg.allocate_labeled("loss2", ModeSpec::vacuum())?;
        let (seen1, _) = beam_splitter(out1, l1, self.eta)?;
        let (seen2, _) = beam_splitter(out2, l2, self.eta)?;
        let k = m.electronic_gain / self.eta.sqrt();
        let x = homodyne_x(seen1) * k;
        let y = homodyne_y(seen2) * (k * self.g);
        Ok(displace_reflect(bob, &x, &y)?)
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input = ModeSpec::coherent(1.0, -2.0);
    let g = 1.0;
    let ideal = added_noise_qnd(g, 1.0, 1.0)?;
    println!(
        "{:<12} {:>10} {:>10} {:>18}",
        "protocol", "engine", "closed", "monte carlo"
    );
    for eta in [1.0, 0.95, 0.9, 0.8, 0.6] {
        let proto = LossyDetectors { g, eta };
        let exact = victor_verify(&proto, &input, &PhaseMode::Averaged)?;
        // Loss noise enters both records with weight G²(1 + g²)(1 − η)/(2η).
        let closed = ideal + 0.5 * (1.0 + g * g) * (1.0 + g * g) / (g * g) * (1.0 - eta) / eta;
        let mc = estimate_added_noise(&proto, &input, &McConfig::new(200_000, 1))?;
        println!(
            "{:<12} {exact:>10.6} {closed:>10.6} {:>10.4} ± {:.4}",
            proto.name(),
            mc.n_add_hat,
            mc.std_error
        );
    }
    Ok(())
}
