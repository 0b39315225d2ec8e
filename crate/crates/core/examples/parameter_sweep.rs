//! Tabulating added noise over a parameter range, as the `sweep`
//! subcommand does.

use cvteleport::cli::{sweep_csv, sweep_points, sweep_rows, Selector};
use cvteleport::dsl::Overrides;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points = sweep_points(1.0 / 3f64.sqrt(), 5.0, 8, true)?;
    let rows = sweep_rows(&Selector::Qnd, None, "g", &points, &Overrides::new())?;
    println!(
        "QND gain sweep, unit ancillas, log spacing\n{}",
        sweep_csv(&rows)
    );

    let points = sweep_points(0.05, 0.95, 10, false)?;
    let fixed: Overrides = [("V_a".to_string(), 0.5)].into();
    let rows = sweep_rows(&Selector::QndVc, None, "V_c", &points, &fixed)?;
    println!(
        "conditional-variance sweep, V_a = 0.5\n{}",
        sweep_csv(&rows)
    );

    let points = sweep_points(0.1, 1.0, 4, false)?;
    let rows = sweep_rows(&Selector::Squeezed, None, "V", &points, &Overrides::new())?;
    println!("squeezed ancillas, V1 = V2 = V\n{}", sweep_csv(&rows));
    Ok(())
}
