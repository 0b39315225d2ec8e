//! Circuit files shipped with the crate.

pub const QND_TELEPORT: &str = include_str!("../../examples/circuits/qnd_teleport.cvc");
pub const CLASSICAL: &str = include_str!("../../examples/circuits/classical.cvc");
pub const SQUEEZED: &str = include_str!("../../examples/circuits/squeezed.cvc");

/// `(file name, source)` for every bundled circuit.
pub const ALL: [(&str, &str); 3] = [
    ("qnd_teleport.cvc", QND_TELEPORT),
    ("classical.cvc", CLASSICAL),
    ("squeezed.cvc", SQUEEZED),
];
