//! Parsing, checking and executing circuit programs.

use cvteleport::dsl::{self, bundled, check, parse, Overrides};

const BROKEN: &str = "\
mode in vacuum input
mode a vacuum
mode b vacuum
measure x a -> p
measure y a -> q
displace b x=p*q y=0
output b
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let program = parse(bundled::QND_TELEPORT)?;
    println!("canonical form of qnd_teleport.cvc:\n{program}");

    for g in [1.0, 2.0] {
        let o: Overrides = [("g".to_string(), g)].into();
        let report = dsl::execute(&program, &o)?;
        println!(
            "g = {g}: n_add = {:.6}, v_c = {:.6}",
            report.n_add.unwrap(),
            report.v_c.unwrap()
        );
        for m in &report.metrics {
            let what = format!("{} {}", m.metric, m.target);
            println!("  line {:>2}: {} = {:.6}", m.line, what.trim_end(), m.value);
        }
    }

    println!("\ndiagnostics for a broken program:");
    if let Err(diags) = check(&parse(BROKEN)?) {
        for d in diags {
            println!("  {d}");
        }
    }
    match parse("mode a vacuum\nbs a b t=0.5\n") {
        Ok(_) => {}
        Err(e) => println!("  {e}"),
    }
    Ok(())
}
