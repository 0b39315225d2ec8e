//! Phase-scrambled verification: per-phase excess noise and its averages.

use std::f64::consts::PI;

use cvteleport::engine::ModeSpec;
use cvteleport::protocols::{
    check_mean_transport, teleported_quadrature, victor_verify, PhaseMode, ProtocolParams,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let proto = ProtocolParams::matched(1.0)?
        .with_ancillas(ModeSpec::squeezed_x(0.5)?, ModeSpec::squeezed_y(2.0)?);
    let input = ModeSpec::coherent(1.0, 2.0);
    check_mean_transport(&proto, &input)?;

    let t = teleported_quadrature(&proto, &input, PI / 3.0)?;
    println!("X_T at φ = π/3: {:.6}", t.x_t);

    println!("\n{:>8} {:>12}", "φ/π", "excess");
    for k in 0..=8 {
        let phi = PI * k as f64 / 8.0;
        let v = victor_verify(&proto, &input, &PhaseMode::Fixed(phi))?;
        println!("{:>8.3} {v:>12.6}", k as f64 / 8.0);
    }
    let exact = victor_verify(&proto, &input, &PhaseMode::Averaged)?;
    let sampled = victor_verify(
        &proto,
        &input,
        &PhaseMode::Sampled {
            count: 1000,
            seed: 7,
        },
    )?;
    println!("\nuniform phase average: {exact:.6}");
    println!("1000 sampled phases:   {sampled:.6}");

    let detuned = ProtocolParams {
        electronic_gain: 1.2,
        ..ProtocolParams::matched(1.0)?
    };
    match check_mean_transport(&detuned, &input) {
        Ok(()) => println!("detuned gain accepted"),
        Err(e) => println!("detuned gain rejected: {e}"),
    }
    Ok(())
}
