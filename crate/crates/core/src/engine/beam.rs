use super::form::QuadratureForm;
use super::EngineError;

/// Relative slack when deciding that two forms have vanishing pairing.
const PAIRING_TOL: f64 = 1e-10;

/// One propagating optical field, held as the pair of forms for its `X`
/// and `Y` quadratures.
///
/// Beams are deliberately not `Clone`: a field cannot be copied, and a
/// homodyne measurement consumes it.
#[derive(Debug, PartialEq)]
pub struct Beam {
    x: QuadratureForm,
    y: QuadratureForm,
}

impl Beam {
    pub(crate) fn new(x: QuadratureForm, y: QuadratureForm) -> Self {
        Beam { x, y }
    }

    pub fn x(&self) -> &QuadratureForm {
        &self.x
    }

    pub fn y(&self) -> &QuadratureForm {
        &self.y
    }

    /// `Ω(x, y)`; equals 1 for every physical beam.
    pub fn pairing(&self) -> f64 {
        self.x.pairing(&self.y)
    }

    pub fn into_forms(self) -> (QuadratureForm, QuadratureForm) {
        (self.x, self.y)
    }

    fn combine(&self, a: f64, other: &Beam, b: f64) -> Beam {
        Beam::new(
            self.x.combine(a, &other.x, b),
            self.y.combine(a, &other.y, b),
        )
    }
}

/// Two-port beam splitter with transmittance `t`:
/// `out1 = √t·f1 + √(1−t)·f2`, `out2 = √t·f2 − √(1−t)·f1`.
pub fn beam_splitter(f1: Beam, f2: Beam, t: f64) -> Result<(Beam, Beam), EngineError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(EngineError::Transmittance(t));
    }
    let s = t.sqrt();
    let r = (1.0 - t).sqrt();
    let out1 = f1.combine(s, &f2, r);
    let out2 = f2.combine(s, &f1, -r);
    Ok((out1, out2))
}

/// QND coupling with gain `g`. `X_b` and `Y_a` pass through untouched:
/// `X_a' = X_a + g·X_b`, `Y_b' = Y_b − g·Y_a`.
pub fn qnd_couple(fa: Beam, fb: Beam, g: f64) -> Result<(Beam, Beam), EngineError> {
    if !g.is_finite() {
        return Err(EngineError::NonFinite("qnd gain"));
    }
    let ya = fa.y;
    let xb = fb.x;
    let xa = fa.x.combine(1.0, &xb, g);
    let yb = fb.y.combine(1.0, &ya, -g);
    Ok((Beam::new(xa, ya), Beam::new(xb, yb)))
}

/// Rotates the field by `E → e^{iφ}E`.
pub fn phase_shift(f: Beam, phi: f64) -> Result<Beam, EngineError> {
    if !phi.is_finite() {
        return Err(EngineError::NonFinite("phase"));
    }
    let (s, c) = phi.sin_cos();
    let x = f.x.combine(c, &f.y, -s);
    let y = f.x.combine(s, &f.y, c);
    Ok(Beam::new(x, y))
}

/// Ideal homodyne readout of the `X` quadrature. The beam is consumed.
pub fn homodyne_x(f: Beam) -> QuadratureForm {
    f.x
}

/// Ideal homodyne readout of the `Y` quadrature. The beam is consumed.
pub fn homodyne_y(f: Beam) -> QuadratureForm {
    f.y
}

/// Displaces the reflected beam by classical shifts: `out = shift − beam`,
/// applied per quadrature.
///
/// This is the strong-coherent-field, vanishing-transmittance limit of the
/// receiver's mixing stage, so no vacuum is admixed. The shifts must be
/// jointly measurable with each other and with the beam (pairwise pairing
/// zero), which holds for any combination of homodyne records taken on other
/// beams of the same circuit plus constants.
pub fn displace_reflect(
    beam: Beam,
    shift_x: &QuadratureForm,
    shift_y: &QuadratureForm,
) -> Result<Beam, EngineError> {
    if !shift_x.is_finite() || !shift_y.is_finite() {
        return Err(EngineError::NonFinite("displacement"));
    }
    let checks = [(shift_x, shift_y), (shift_x, &beam.y), (&beam.x, shift_y)];
    for (f, h) in checks {
        let p = f.pairing(h);
        let scale = 1.0 + f.l1_norm() * h.l1_norm();
        if p.abs() > PAIRING_TOL * scale {
            return Err(EngineError::NotJointlyMeasurable(p));
        }
    }
    Ok(Beam::new(shift_x - &beam.x, shift_y - &beam.y))
}
