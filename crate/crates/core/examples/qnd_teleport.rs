//! QND-entangled teleportation at several coupling gains.

use cvteleport::engine::ModeSpec;
use cvteleport::protocols::{
    is_quantum_regime, matched_params, qnd_conditional_variance, run_qnd_teleport, ProtocolParams,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>8} {:>8} {:>8} {:>8} {:>10}  quantum",
        "g", "eps", "G", "V_c", "n_add"
    );
    for g in [0.3, 1.0 / 3f64.sqrt(), 0.8, 1.0, 2.0, 5.0] {
        let m = matched_params(g)?;
        let params = ProtocolParams::matched(g)?.with_input(ModeSpec::coherent(3.0, -1.0));
        let out = run_qnd_teleport(&params)?;
        let n = out.n_add.expect("matched gains transport means");
        println!(
            "{g:>8.4} {:>8.4} {:>8.4} {:>8.4} {n:>10.6}  {}",
            m.transmittance,
            m.electronic_gain,
            qnd_conditional_variance(g),
            is_quantum_regime(n)
        );
    }

    let out = run_qnd_teleport(&ProtocolParams::matched(2.0)?)?;
    println!("\noutput at g = 2");
    println!("  X_out = {:.6}", out.output.x());
    println!("  Y_out = {:.6}", out.output.y());
    for c in &out.coefficients {
        println!("  {:>3}: cx = {:+.6}, cy = {:+.6}", c.label, c.cx, c.cy);
    }
    println!(
        "  mean error = ({:.1e}, {:.1e})",
        out.mean_error_x, out.mean_error_y
    );
    Ok(())
}
