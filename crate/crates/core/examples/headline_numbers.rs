//! The headline numbers, recomputed.

use cvteleport::cli::{format_number, headline_rows};
use cvteleport::protocols::{added_noise_qnd_from_vc, is_quantum_regime};

fn main() {
    for row in headline_rows() {
        println!(
            "{:<24} {:>16}  ({})",
            row.quantity,
            format_number(row.value),
            row.provenance
        );
    }
    println!();
    for vc in [0.45, 0.65, 0.70, 0.75, 0.80] {
        let n = added_noise_qnd_from_vc(vc, 1.0, 1.0).unwrap();
        println!(
            "V_c = {vc:.2}: n_add = {n:.6}, beyond classical: {}",
            is_quantum_regime(n)
        );
    }
}
