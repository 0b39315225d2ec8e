//! Added noise of the three protocols side by side.

use cvteleport::engine::ModeSpec;
use cvteleport::protocols::{
    gain_from_conditional_variance, run_classical_teleport, run_qnd_teleport,
    run_squeezed_teleport, ProtocolParams,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vac = ModeSpec::vacuum();
    let classical = run_classical_teleport(&vac, &vac, &vac)?.n_add.unwrap();
    println!("classical measure-and-prepare: n_add = {classical:.6}");

    let thermal = ModeSpec::new(0.0, 0.0, 1.5, 1.5, 0.0)?;
    let noisy = run_classical_teleport(&vac, &thermal, &vac)?.n_add.unwrap();
    println!("classical with a thermal splitter port: n_add = {noisy:.6}\n");

    println!("ancilla squeezing V, QND pair at V_c = 0.45 versus squeezed-state pair");
    println!("{:>6} {:>12} {:>12}", "V", "qnd", "squeezed");
    let g = gain_from_conditional_variance(0.45)?;
    for v in [1.0, 0.8, 0.5, 0.3, 0.1] {
        let params = ProtocolParams::matched(g)?
            .with_ancillas(ModeSpec::squeezed_x(v)?, ModeSpec::squeezed_y(v)?);
        let qnd = run_qnd_teleport(&params)?.n_add.unwrap();
        let sq = run_squeezed_teleport(&vac, v, v)?.n_add.unwrap();
        println!("{v:>6.2} {qnd:>12.6} {sq:>12.6}");
    }
    Ok(())
}
