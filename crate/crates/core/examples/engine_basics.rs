//! Linear-form propagation through the basic optical elements.

use cvteleport::engine::{
    beam_splitter, homodyne_x, phase_shift, qnd_couple, ModeRegistry, ModeSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut reg = ModeRegistry::new();
    let (_, a) = reg.allocate_labeled("a", ModeSpec::coherent(2.0, 0.0))?;
    let (_, b) = reg.allocate_labeled("b", ModeSpec::squeezed_x(0.25)?)?;

    let (a, b) = beam_splitter(a, b, 0.5)?;
    println!("after 50:50 splitter");
    println!("  a.x = {:.4}", a.x());
    println!("  b.x = {:.4}", b.x());
    println!(
        "  Var(a.x) = {:.4}, <a.x> = {:.4}",
        reg.variance(a.x())?,
        reg.mean(a.x())?
    );
    println!("  Ω(a) = {:.12}, Ω(b) = {:.12}", a.pairing(), b.pairing());

    let a = phase_shift(a, std::f64::consts::FRAC_PI_4)?;
    println!("after π/4 phase shift: a.x = {:.4}", a.x());

    let (a, b) = qnd_couple(a, b, 1.5)?;
    println!("after QND coupling, gain 1.5");
    println!(
        "  Var(b.x | a.x) = {:.4}",
        reg.conditional_variance(b.x(), a.x())?
    );
    println!("  Var(b.x)       = {:.4}", reg.variance(b.x())?);

    let record = homodyne_x(a);
    println!("homodyne record of a.x: {record:.4}");
    println!(
        "  commutes with b: Ω(record, b.y) = {:.1e}",
        record.pairing(b.y())
    );
    Ok(())
}
