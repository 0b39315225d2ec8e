use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use super::form::QuadratureForm;
use super::{Beam, EngineError};

static NEXT_REGISTRY: AtomicU64 = AtomicU64::new(1);

/// Slack allowed on the uncertainty product, so that a minimum-uncertainty
/// spec built as `(v, 1/v)` is not rejected over a rounding ulp.
const HEISENBERG_SLACK: f64 = 1e-12;

/// Handle to one independent input mode of a [`ModeRegistry`].
///
/// A `ModeId` is only meaningful for the registry that issued it; statistics
/// queries against another registry fail with [`EngineError::UnregisteredMode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    registry: u64,
    index: u32,
}

impl ModeId {
    /// Position of the mode inside its registry.
    pub fn index(&self) -> usize {
        self.index as usize
    }
}

/// Gaussian statistics of one input mode, in units where the vacuum
/// quadrature variance is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSpec {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
}

impl ModeSpec {
    pub const fn vacuum() -> Self {
        Self::coherent(0.0, 0.0)
    }

    pub const fn coherent(mean_x: f64, mean_y: f64) -> Self {
        ModeSpec {
            mean_x,
            mean_y,
            var_x: 1.0,
            var_y: 1.0,
            cov_xy: 0.0,
        }
    }

    /// Minimum-uncertainty state with `var_x = v` and `var_y = 1/v`.
    pub fn squeezed_x(v: f64) -> Result<Self, EngineError> {
        Self::new(0.0, 0.0, v, 1.0 / v, 0.0)
    }

    /// Minimum-uncertainty state with `var_y = v` and `var_x = 1/v`.
    pub fn squeezed_y(v: f64) -> Result<Self, EngineError> {
        Self::new(0.0, 0.0, 1.0 / v, v, 0.0)
    }

    pub fn new(
        mean_x: f64,
        mean_y: f64,
        var_x: f64,
        var_y: f64,
        cov_xy: f64,
    ) -> Result<Self, EngineError> {
        let spec = ModeSpec {
            mean_x,
            mean_y,
            var_x,
            var_y,
            cov_xy,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_means(mut self, mean_x: f64, mean_y: f64) -> Self {
        self.mean_x = mean_x;
        self.mean_y = mean_y;
        self
    }

    /// Checks positivity and the uncertainty relation `var_x·var_y − cov² ≥ 1`.
    pub fn validate(&self) -> Result<(), EngineError> {
        let fields = [
            self.mean_x,
            self.mean_y,
            self.var_x,
            self.var_y,
            self.cov_xy,
        ];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(EngineError::InvalidSpec("non-finite entry".into()));
        }
        if self.var_x <= 0.0 || self.var_y <= 0.0 {
            return Err(EngineError::InvalidSpec(format!(
                "variances must be positive (var_x = {}, var_y = {})",
                self.var_x, self.var_y
            )));
        }
        let det = self.determinant();
        if det < 1.0 - HEISENBERG_SLACK {
            return Err(EngineError::InvalidSpec(format!(
                "uncertainty product var_x*var_y - cov_xy^2 = {det} is below 1"
            )));
        }
        Ok(())
    }

    pub fn determinant(&self) -> f64 {
        self.var_x * self.var_y - self.cov_xy * self.cov_xy
    }
}

impl Default for ModeSpec {
    fn default() -> Self {
        Self::vacuum()
    }
}

#[derive(Debug, Clone)]
struct ModeEntry {
    label: String,
    spec: ModeSpec,
}

/// Ordered set of mutually independent input modes.
///
/// All correlations between modes come from circuit elements; the registry
/// itself only stores single-mode statistics. Means and variances of any
/// [`QuadratureForm`] over these modes are evaluated here.
#[derive(Debug, Clone)]
pub struct ModeRegistry {
    id: u64,
    modes: Vec<ModeEntry>,
}

impl Default for ModeRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl ModeRegistry {
    pub fn new() -> Self {
        ModeRegistry {
            id: NEXT_REGISTRY.fetch_add(1, Ordering::Relaxed),
            modes: Vec::new(),
        }
    }

    /// Registers a mode and returns its basis beam `(X_m, Y_m)`.
    pub fn allocate_mode(&mut self, spec: ModeSpec) -> Result<(ModeId, Beam), EngineError> {
        let label = format!("m{}", self.modes.len());
        self.allocate_labeled(label, spec)
    }

    pub fn allocate_labeled(
        &mut self,
        label: impl Into<String>,
        spec: ModeSpec,
    ) -> Result<(ModeId, Beam), EngineError> {
        spec.validate()?;
        let id = ModeId {
            registry: self.id,
            index: self.modes.len() as u32,
        };
        self.modes.push(ModeEntry {
            label: label.into(),
            spec,
        });
        let beam = Beam::new(QuadratureForm::basis_x(id), QuadratureForm::basis_y(id));
        Ok((id, beam))
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn contains(&self, mode: ModeId) -> bool {
        mode.registry == self.id && mode.index() < self.modes.len()
    }

    pub fn spec(&self, mode: ModeId) -> Result<&ModeSpec, EngineError> {
        self.entry(mode).map(|e| &e.spec)
    }

    pub fn label(&self, mode: ModeId) -> Result<&str, EngineError> {
        self.entry(mode).map(|e| e.label.as_str())
    }

    /// First mode carrying `label`, if any.
    pub fn find(&self, label: &str) -> Option<ModeId> {
        self.modes
            .iter()
            .position(|e| e.label == label)
            .map(|index| ModeId {
                registry: self.id,
                index: index as u32,
            })
    }

    /// All registered modes in allocation order.
    pub fn modes(&self) -> impl Iterator<Item = (ModeId, &str, &ModeSpec)> + '_ {
        self.modes.iter().enumerate().map(move |(i, e)| {
            (
                ModeId {
                    registry: self.id,
                    index: i as u32,
                },
                e.label.as_str(),
                &e.spec,
            )
        })
    }

    fn entry(&self, mode: ModeId) -> Result<&ModeEntry, EngineError> {
        if mode.registry != self.id {
            return Err(EngineError::UnregisteredMode(mode));
        }
        self.modes
            .get(mode.index())
            .ok_or(EngineError::UnregisteredMode(mode))
    }

    /// `⟨form⟩ = constant + Σ (cx·⟨X_m⟩ + cy·⟨Y_m⟩)`.
    pub fn mean(&self, form: &QuadratureForm) -> Result<f64, EngineError> {
        let mut acc = form.constant_term();
        for (mode, cx, cy) in form.terms() {
            let s = self.spec(mode)?;
            acc += cx * s.mean_x + cy * s.mean_y;
        }
        Ok(acc)
    }

    /// Symmetric covariance of two forms. Input modes are independent, so only
    /// same-mode products contribute; constants never do.
    pub fn covariance(&self, f: &QuadratureForm, h: &QuadratureForm) -> Result<f64, EngineError> {
        for (mode, _, _) in h.terms() {
            self.spec(mode)?;
        }
        let mut acc = 0.0;
        for (mode, fx, fy) in f.terms() {
            let s = self.spec(mode)?;
            let (hx, hy) = h.coeff(mode);
            acc += fx * hx * s.var_x + fy * hy * s.var_y + (fx * hy + fy * hx) * s.cov_xy;
        }
        Ok(acc)
    }

    pub fn variance(&self, form: &QuadratureForm) -> Result<f64, EngineError> {
        self.covariance(form, form)
    }

    /// Residual variance of `signal` given an ideal readout of `meter`:
    /// `Var(s) − Cov(s, m)² / Var(m)`.
    pub fn conditional_variance(
        &self,
        signal: &QuadratureForm,
        meter: &QuadratureForm,
    ) -> Result<f64, EngineError> {
        let vm = self.variance(meter)?;
        if vm.is_nan() || vm <= 0.0 {
            return Err(EngineError::ZeroMeterVariance);
        }
        let vs = self.variance(signal)?;
        let c = self.covariance(signal, meter)?;
        Ok(vs - c * c / vm)
    }
}
