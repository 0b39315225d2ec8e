use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ModeId;

/// Real affine form over the basis quadratures `{X_m, Y_m}` of a registry:
/// `constant + Σ_m (cx_m·X_m + cy_m·Y_m)`.
///
/// Every field quadrature and every homodyne record in a linear circuit is
/// one of these. Modes without an entry have zero coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadratureForm {
    constant: f64,
    coeffs: BTreeMap<ModeId, (f64, f64)>,
}

impl QuadratureForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        QuadratureForm {
            constant: value,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis_x(mode: ModeId) -> Self {
        Self::from_terms(0.0, [(mode, 1.0, 0.0)])
    }

    pub fn basis_y(mode: ModeId) -> Self {
        Self::from_terms(0.0, [(mode, 0.0, 1.0)])
    }

    /// Builds a form from explicit `(mode, cx, cy)` terms; repeated modes add up.
    pub fn from_terms(constant: f64, terms: impl IntoIterator<Item = (ModeId, f64, f64)>) -> Self {
        let mut form = Self::constant(constant);
        for (mode, cx, cy) in terms {
            let e = form.coeffs.entry(mode).or_insert((0.0, 0.0));
            e.0 += cx;
            e.1 += cy;
        }
        form.prune();
        form
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    /// `(cx, cy)` for `mode`, zero when absent.
    pub fn coeff(&self, mode: ModeId) -> (f64, f64) {
        self.coeffs.get(&mode).copied().unwrap_or((0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (ModeId, f64, f64)> + '_ {
        self.coeffs.iter().map(|(m, &(cx, cy))| (*m, cx, cy))
    }

    /// True when no basis quadrature appears, i.e. the form is a classical number.
    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.constant.is_finite()
            && self
                .coeffs
                .values()
                .all(|(cx, cy)| cx.is_finite() && cy.is_finite())
    }

    /// Sum of absolute coefficient values, constant excluded.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|(cx, cy)| cx.abs() + cy.abs())
            .sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.combine(k, &Self::zero(), 0.0)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (m, &(cx, cy)) in &self.coeffs {
            coeffs.insert(*m, (a * cx, a * cy));
        }
        for (m, &(cx, cy)) in &other.coeffs {
            let e = coeffs.entry(*m).or_insert((0.0, 0.0));
            e.0 += b * cx;
            e.1 += b * cy;
        }
        let mut out = QuadratureForm {
            constant: a * self.constant + b * other.constant,
            coeffs,
        };
        out.prune();
        out
    }

    /// Canonical pairing `Ω(f, h) = Σ_m (f.cx·h.cy − f.cy·h.cx)`.
    ///
    /// Equals the commutator `[f, h]` in units where `[X_m, Y_m]` pairs to 1.
    /// Zero pairing means the two observables can be read out jointly.
    pub fn pairing(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .map(|(m, &(fx, fy))| {
                let (hx, hy) = other.coeff(*m);
                fx * hy - fy * hx
            })
            .sum()
    }

    /// Largest absolute difference over the constant and every coefficient.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = self.combine(1.0, other, -1.0);
        diff.coeffs
            .values()
            .flat_map(|&(cx, cy)| [cx.abs(), cy.abs()])
            .fold(diff.constant.abs(), f64::max)
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, (cx, cy)| *cx != 0.0 || *cy != 0.0);
    }
}

/// Free function form of [`QuadratureForm::pairing`].
pub fn symplectic_pairing(f: &QuadratureForm, h: &QuadratureForm) -> f64 {
    f.pairing(h)
}

/// Writes `c + a·X0 − b·Y1 ...`, honouring a requested precision and
/// omitting a zero constant.
impl fmt::Display for QuadratureForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = |v: f64| match f.precision() {
            Some(p) => format!("{v:.p$}"),
            None => format!("{v}"),
        };
        let mut parts: Vec<(bool, String)> = Vec::new();
        if self.constant != 0.0 {
            parts.push((self.constant < 0.0, num(self.constant.abs())));
        }
        for (m, cx, cy) in self.terms() {
            for (c, q) in [(cx, 'X'), (cy, 'Y')] {
                if c != 0.0 {
                    parts.push((c < 0.0, format!("{}·{q}{}", num(c.abs()), m.index())));
                }
            }
        }
        if parts.is_empty() {
            return write!(f, "{}", num(0.0));
        }
        for (i, (neg, text)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, false) => write!(f, "{text}")?,
                (0, true) => write!(f, "−{text}")?,
                (_, false) => write!(f, " + {text}")?,
                (_, true) => write!(f, " − {text}")?,
            }
        }
        Ok(())
    }
}

impl Add<&QuadratureForm> for &QuadratureForm {
    type Output = QuadratureForm;
    fn add(self, rhs: &QuadratureForm) -> QuadratureForm {
        self.combine(1.0, rhs, 1.0)
    }
}

impl Sub<&QuadratureForm> for &QuadratureForm {
    type Output = QuadratureForm;
    fn sub(self, rhs: &QuadratureForm) -> QuadratureForm {
        self.combine(1.0, rhs, -1.0)
    }
}

impl Add for QuadratureForm {
    type Output = QuadratureForm;
    fn add(self, rhs: QuadratureForm) -> QuadratureForm {
        &self + &rhs
    }
}

impl Sub for QuadratureForm {
    type Output = QuadratureForm;
    fn sub(self, rhs: QuadratureForm) -> QuadratureForm {
        &self - &rhs
    }
}

impl Neg for &QuadratureForm {
    type Output = QuadratureForm;
    fn neg(self) -> QuadratureForm {
        self.scaled(-1.0)
    }
}

impl Neg for QuadratureForm {
    type Output = QuadratureForm;
    fn neg(self) -> QuadratureForm {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &QuadratureForm {
    type Output = QuadratureForm;
    fn mul(self, k: f64) -> QuadratureForm {
        self.scaled(k)
    }
}

impl Mul<f64> for QuadratureForm {
    type Output = QuadratureForm;
    fn mul(self, k: f64) -> QuadratureForm {
        self.scaled(k)
    }
}
