//! Monte Carlo estimates of added noise against the closed forms.

use cvteleport::engine::ModeSpec;
use cvteleport::montecarlo::{estimate_added_noise, McConfig, RNG_ALGORITHM};
use cvteleport::protocols::{
    added_noise_classical, added_noise_qnd, added_noise_squeezed, ClassicalTeleporter,
    ProtocolParams, SqueezedTeleporter, Teleporter,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cells: Vec<(Box<dyn Teleporter + Sync>, f64)> = vec![
        (
            Box::new(ProtocolParams::matched(1.0)?),
            added_noise_qnd(1.0, 1.0, 1.0)?,
        ),
        (
            Box::new(ProtocolParams::matched(0.5)?),
            added_noise_qnd(0.5, 1.0, 1.0)?,
        ),
        (
            Box::new(ClassicalTeleporter::default()),
            added_noise_classical(&ModeSpec::vacuum(), &ModeSpec::vacuum()),
        ),
        (
            Box::new(SqueezedTeleporter::new(0.5, 0.5)?),
            added_noise_squeezed(0.5, 0.5)?,
        ),
    ];
    let input = ModeSpec::coherent(2.0, 1.0);
    println!("rng: {RNG_ALGORITHM}");
    for trials in [10_000, 1_000_000] {
        println!("\n{trials} trials");
        for (proto, exact) in &cells {
            let est = estimate_added_noise(proto.as_ref(), &input, &McConfig::new(trials, 42))?;
            println!(
                "  {:<10} exact {exact:.4}  mc {:.4} ± {:.4}  z = {:+.2}",
                proto.name(),
                est.n_add_hat,
                est.std_error,
                est.z_score(*exact)
            );
        }
    }
    Ok(())
}
