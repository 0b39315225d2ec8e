use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::ast::*;
use super::check::check_with;
use super::{Diagnostic, DslError, Rule};
use crate::engine::{
    beam_splitter, displace_reflect, homodyne_x, homodyne_y, phase_shift, qnd_couple, Beam,
    EngineError, ModeId, ModeRegistry, ModeSpec, QuadratureForm,
};
use crate::protocols::{
    coefficient_table, victor_verify, CoefficientEntry, PhaseMode, ProtocolError, Teleporter,
};

/// Parameter overrides keyed by `param` name.
pub type Overrides = BTreeMap<String, f64>;

enum Slot {
    Param(f64),
    Beam(Beam),
    Consumed(Span),
    Output(Beam),
    Record(QuadratureForm),
}

enum Value {
    Scalar(f64),
    Form(QuadratureForm),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RunMode {
    /// Optical statements only.
    Dry,
    /// Optical statements and reports.
    Full,
    /// Optical statements with the `input` mode replaced by a supplied beam.
    Teleport,
}

/// One evaluated `report` line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricValue {
    pub line: usize,
    pub metric: String,
    pub target: String,
    pub value: f64,
}

pub(crate) struct Machine<'r> {
    registry: &'r mut ModeRegistry,
    overrides: &'r Overrides,
    mode: RunMode,
    supplied_input: Option<Beam>,
    slots: HashMap<String, Slot>,
    params: BTreeMap<String, f64>,
    input: Option<(String, ModeSpec, Option<ModeId>)>,
    output: Option<String>,
    metrics: Vec<MetricValue>,
}

fn diag(span: Span, rule: Rule, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        span,
        rule,
        message: message.into(),
    }
}

fn engine_diag(span: Span, e: EngineError) -> Diagnostic {
    let rule = match e {
        EngineError::NotJointlyMeasurable(_) => Rule::JointMeasurability,
        _ => Rule::InvalidValue,
    };
    diag(span, rule, e.to_string())
}

impl<'r> Machine<'r> {
    fn new(registry: &'r mut ModeRegistry, overrides: &'r Overrides, mode: RunMode) -> Self {
        Machine {
            registry,
            overrides,
            mode,
            supplied_input: None,
            slots: HashMap::new(),
            params: BTreeMap::new(),
            input: None,
            output: None,
            metrics: Vec::new(),
        }
    }

    fn run(&mut self, program: &CircuitProgram) -> Result<(), Diagnostic> {
        for s in &program.statements {
            self.step(s)?;
        }
        Ok(())
    }

    fn eval(&self, e: &Expr) -> Result<Value, Diagnostic> {
        Ok(match e {
            Expr::Number { value, .. } => Value::Scalar(*value),
            Expr::Name(id) => match self.slots.get(&id.name) {
                Some(Slot::Param(v)) => Value::Scalar(*v),
                Some(Slot::Record(f)) => Value::Form(f.clone()),
                Some(_) => {
                    return Err(diag(
                        id.span,
                        Rule::KindMismatch,
                        format!(
                            "`{}` is a beam, not a number or measurement record",
                            id.name
                        ),
                    ))
                }
                None => {
                    return Err(diag(
                        id.span,
                        Rule::Undefined,
                        format!("`{}` is not defined", id.name),
                    ))
                }
            },
            Expr::Neg { operand, .. } => match self.eval(operand)? {
                Value::Scalar(v) => Value::Scalar(-v),
                Value::Form(f) => Value::Form(-f),
            },
            Expr::Sqrt { arg, span } => match self.eval(arg)? {
                Value::Scalar(v) if v >= 0.0 => Value::Scalar(v.sqrt()),
                Value::Scalar(v) => {
                    return Err(diag(
                        *span,
                        Rule::InvalidValue,
                        format!("sqrt of negative value {v}"),
                    ))
                }
                Value::Form(_) => {
                    return Err(diag(*span, Rule::Nonlinear, "sqrt of a measurement record"))
                }
            },
            Expr::Binary { op, lhs, rhs, span } => {
                let l = self.eval(lhs)?;
                let r = self.eval(rhs)?;
                binary(*op, l, r, *span)?
            }
        })
    }

    fn scalar(&self, e: &Expr) -> Result<f64, Diagnostic> {
        match self.eval(e)? {
            Value::Scalar(v) if v.is_finite() => Ok(v),
            Value::Scalar(v) => Err(diag(
                e.span(),
                Rule::InvalidValue,
                format!("non-finite value {v}"),
            )),
            Value::Form(_) => Err(diag(
                e.span(),
                Rule::NonConstant,
                "element parameters cannot depend on measurement records",
            )),
        }
    }

    fn form(&self, e: &Expr) -> Result<QuadratureForm, Diagnostic> {
        Ok(match self.eval(e)? {
            Value::Scalar(v) => QuadratureForm::constant(v),
            Value::Form(f) => f,
        })
    }

    fn take_beam(&mut self, id: &Ident) -> Result<Beam, Diagnostic> {
        match self.slots.remove(&id.name) {
            Some(Slot::Beam(b)) => Ok(b),
            Some(other) => {
                let err = match &other {
                    Slot::Consumed(at) => diag(
                        id.span,
                        Rule::ConsumedBeam,
                        format!(
                            "beam `{}` was already measured on line {}",
                            id.name, at.line
                        ),
                    ),
                    Slot::Output(_) => diag(
                        id.span,
                        Rule::ConsumedBeam,
                        format!("beam `{}` has been handed over as the output", id.name),
                    ),
                    _ => diag(
                        id.span,
                        Rule::KindMismatch,
                        format!("`{}` is not a beam", id.name),
                    ),
                };
                self.slots.insert(id.name.clone(), other);
                Err(err)
            }
            None => Err(diag(
                id.span,
                Rule::Undefined,
                format!("`{}` is not defined", id.name),
            )),
        }
    }

    fn take_pair(&mut self, a: &Ident, b: &Ident) -> Result<(Beam, Beam), Diagnostic> {
        if a.name == b.name {
            return Err(diag(
                b.span,
                Rule::SameBeam,
                "a two-port element needs two different beams",
            ));
        }
        let first = self.take_beam(a)?;
        match self.take_beam(b) {
            Ok(second) => Ok((first, second)),
            Err(e) => {
                self.slots.insert(a.name.clone(), Slot::Beam(first));
                Err(e)
            }
        }
    }

    fn read_beam(&self, id: &Ident) -> Result<&Beam, Diagnostic> {
        match self.slots.get(&id.name) {
            Some(Slot::Beam(b)) | Some(Slot::Output(b)) => Ok(b),
            Some(Slot::Consumed(at)) => Err(diag(
                id.span,
                Rule::ConsumedBeam,
                format!(
                    "beam `{}` was already measured on line {}",
                    id.name, at.line
                ),
            )),
            Some(_) => Err(diag(
                id.span,
                Rule::KindMismatch,
                format!("`{}` is not a beam", id.name),
            )),
            None => Err(diag(
                id.span,
                Rule::Undefined,
                format!("`{}` is not defined", id.name),
            )),
        }
    }

    fn mode_spec(&self, kind: ModeKind, params: &[Param]) -> Result<ModeSpec, Diagnostic> {
        let mut values = BTreeMap::new();
        for p in params {
            values.insert(p.key.name.as_str(), self.scalar(&p.value)?);
        }
        let get = |k: &str, default: f64| values.get(k).copied().unwrap_or(default);
        let (mx, my) = (get("mean_x", 0.0), get("mean_y", 0.0));
        let spec = match kind {
            ModeKind::Vacuum => Ok(ModeSpec::vacuum()),
            ModeKind::Coherent => Ok(ModeSpec::coherent(mx, my)),
            ModeKind::Squeezed => match (values.get("var_x"), values.get("var_y")) {
                (Some(&v), None) => ModeSpec::squeezed_x(v).map(|s| s.with_means(mx, my)),
                (None, Some(&v)) => ModeSpec::squeezed_y(v).map(|s| s.with_means(mx, my)),
                _ => Err(EngineError::InvalidSpec(
                    "squeezed mode needs exactly one of var_x, var_y".into(),
                )),
            },
            ModeKind::Custom => ModeSpec::new(
                mx,
                my,
                get("var_x", 1.0),
                get("var_y", 1.0),
                get("cov_xy", 0.0),
            ),
        };
        let span = params.first().map_or(Span::default(), |p| p.key.span);
        spec.map_err(|e| engine_diag(span, e))
    }

    fn step(&mut self, s: &Statement) -> Result<(), Diagnostic> {
        let at = s.span;
        match &s.stmt {
            Stmt::Param { name, value } => {
                let v = match self.overrides.get(&name.name) {
                    Some(v) => *v,
                    None => self.scalar(value)?,
                };
                self.params.insert(name.name.clone(), v);
                self.slots.insert(name.name.clone(), Slot::Param(v));
            }
            Stmt::Mode {
                name,
                kind,
                params,
                input,
            } => {
                let spec = self.mode_spec(*kind, params)?;
                let supplied = if *input {
                    self.supplied_input.take()
                } else {
                    None
                };
                let (id, beam) = match supplied {
                    Some(beam) => (None, beam),
                    None => {
                        let (id, beam) = self
                            .registry
                            .allocate_labeled(name.name.clone(), spec)
                            .map_err(|e| engine_diag(name.span, e))?;
                        (Some(id), beam)
                    }
                };
                if *input {
                    self.input = Some((name.name.clone(), spec, id));
                }
                self.slots.insert(name.name.clone(), Slot::Beam(beam));
            }
            Stmt::Splitter {
                first,
                second,
                transmittance,
            } => {
                let t = self.scalar(transmittance)?;
                let (a, b) = self.take_pair(first, second)?;
                let (o1, o2) =
                    beam_splitter(a, b, t).map_err(|e| engine_diag(transmittance.span(), e))?;
                self.slots.insert(first.name.clone(), Slot::Beam(o1));
                self.slots.insert(second.name.clone(), Slot::Beam(o2));
            }
            Stmt::Qnd {
                first,
                second,
                gain,
            } => {
                let g = self.scalar(gain)?;
                let (a, b) = self.take_pair(first, second)?;
                let (o1, o2) = qnd_couple(a, b, g).map_err(|e| engine_diag(gain.span(), e))?;
                self.slots.insert(first.name.clone(), Slot::Beam(o1));
                self.slots.insert(second.name.clone(), Slot::Beam(o2));
            }
            Stmt::Phase { beam, angle } => {
                let phi = self.scalar(angle)?;
                let b = self.take_beam(beam)?;
                let out = phase_shift(b, phi).map_err(|e| engine_diag(angle.span(), e))?;
                self.slots.insert(beam.name.clone(), Slot::Beam(out));
            }
            Stmt::Measure {
                quadrature,
                beam,
                binding,
            } => {
                let b = self.take_beam(beam)?;
                let record = match quadrature {
                    Quadrature::X => homodyne_x(b),
                    Quadrature::Y => homodyne_y(b),
                };
                self.slots.insert(beam.name.clone(), Slot::Consumed(at));
                self.slots
                    .insert(binding.name.clone(), Slot::Record(record));
            }
            Stmt::Displace { beam, x, y } => {
                let sx = self.form(x)?;
                let sy = self.form(y)?;
                let b = self.take_beam(beam)?;
                let out = displace_reflect(b, &sx, &sy).map_err(|e| engine_diag(at, e))?;
                self.slots.insert(beam.name.clone(), Slot::Beam(out));
            }
            Stmt::Output { beam } => {
                let b = self.take_beam(beam)?;
                self.output = Some(beam.name.clone());
                self.slots.insert(beam.name.clone(), Slot::Output(b));
            }
            Stmt::Report(r) => {
                if self.mode == RunMode::Full {
                    let m = self.report(r, at)?;
                    self.metrics.push(m);
                }
            }
        }
        Ok(())
    }

    fn report(&self, r: &Report, at: Span) -> Result<MetricValue, Diagnostic> {
        let reg = &*self.registry;
        let engine = |e: EngineError| engine_diag(at, e);
        let (metric, target, value) = match r {
            // Filled in by `execute`, which needs the whole program.
            Report::AddedNoise => ("n_add".to_string(), String::new(), f64::NAN),
            Report::ConditionalVariance { signal, meter } => {
                let s = self.read_beam(signal)?.x();
                let m = self.read_beam(meter)?.x();
                let v = reg.conditional_variance(s, m).map_err(engine)?;
                ("v_c".into(), format!("{} {}", signal.name, meter.name), v)
            }
            Report::Variance { quadrature, beam } => {
                let b = self.read_beam(beam)?;
                let f = if *quadrature == Quadrature::X {
                    b.x()
                } else {
                    b.y()
                };
                (
                    format!("var_{}", quadrature.keyword()),
                    beam.name.clone(),
                    reg.variance(f).map_err(engine)?,
                )
            }
            Report::Mean { quadrature, beam } => {
                let b = self.read_beam(beam)?;
                let f = if *quadrature == Quadrature::X {
                    b.x()
                } else {
                    b.y()
                };
                (
                    format!("mean_{}", quadrature.keyword()),
                    beam.name.clone(),
                    reg.mean(f).map_err(engine)?,
                )
            }
        };
        Ok(MetricValue {
            line: at.line,
            metric,
            target,
            value,
        })
    }

    fn output_beam(&mut self) -> Option<Beam> {
        let name = self.output.as_ref()?;
        match self.slots.remove(name) {
            Some(Slot::Output(b)) => Some(b),
            _ => None,
        }
    }
}

fn binary(op: BinOp, l: Value, r: Value, span: Span) -> Result<Value, Diagnostic> {
    use Value::{Form, Scalar};
    let nonlinear = || {
        diag(
            span,
            Rule::Nonlinear,
            "feedforward must be linear in measurement records",
        )
    };
    Ok(match (op, l, r) {
        (BinOp::Add, Scalar(a), Scalar(b)) => Scalar(a + b),
        (BinOp::Sub, Scalar(a), Scalar(b)) => Scalar(a - b),
        (BinOp::Mul, Scalar(a), Scalar(b)) => Scalar(a * b),
        (BinOp::Div, _, Scalar(0.0)) => {
            return Err(diag(span, Rule::InvalidValue, "division by zero"))
        }
        (BinOp::Div, Scalar(a), Scalar(b)) => Scalar(a / b),
        (BinOp::Div, Form(f), Scalar(b)) => Form(f.scaled(1.0 / b)),
        (BinOp::Mul, Scalar(a), Form(f)) | (BinOp::Mul, Form(f), Scalar(a)) => Form(f.scaled(a)),
        (BinOp::Add, a, b) => Form(as_form(a) + as_form(b)),
        (BinOp::Sub, a, b) => Form(as_form(a) - as_form(b)),
        _ => return Err(nonlinear()),
    })
}

fn as_form(v: Value) -> QuadratureForm {
    match v {
        Value::Scalar(c) => QuadratureForm::constant(c),
        Value::Form(f) => f,
    }
}

/// Runs the optical statements only; used by the checker.
pub(crate) fn dry_run(program: &CircuitProgram, overrides: &Overrides) -> Result<(), Diagnostic> {
    let mut registry = ModeRegistry::new();
    Machine::new(&mut registry, overrides, RunMode::Dry).run(program)
}

/// A checked program with `input` and `output` tags, usable as a
/// [`Teleporter`] by the verifier and the Monte Carlo sampler.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    program: CircuitProgram,
    overrides: Overrides,
    input: ModeSpec,
    name: String,
}

impl CompiledCircuit {
    pub fn new(program: CircuitProgram, overrides: Overrides) -> Result<Self, DslError> {
        check_with(&program, &overrides).map_err(DslError::Check)?;
        let mut registry = ModeRegistry::new();
        let mut m = Machine::new(&mut registry, &overrides, RunMode::Dry);
        m.run(&program).map_err(DslError::Runtime)?;
        let (name, input, _) = m.input.clone().ok_or(DslError::MissingTags)?;
        if m.output.is_none() {
            return Err(DslError::MissingTags);
        }
        Ok(CompiledCircuit {
            program,
            overrides,
            input,
            name: format!("circuit:{name}"),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Statistics of the mode tagged `input`.
    pub fn input_spec(&self) -> &ModeSpec {
        &self.input
    }

    pub fn program(&self) -> &CircuitProgram {
        &self.program
    }
}

impl Teleporter for CompiledCircuit {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn teleport(&self, registry: &mut ModeRegistry, input: Beam) -> Result<Beam, ProtocolError> {
        let mut m = Machine::new(registry, &self.overrides, RunMode::Teleport);
        m.supplied_input = Some(input);
        m.run(&self.program)
            .map_err(|d| ProtocolError::Circuit(d.to_string()))?;
        m.output_beam()
            .ok_or_else(|| ProtocolError::Circuit("program has no output beam".into()))
    }
}

/// Everything a program run produces.
#[derive(Debug, Clone, Serialize)]
pub struct ExecutionReport {
    /// Effective `param` values after overrides.
    pub params: BTreeMap<String, f64>,
    pub metrics: Vec<MetricValue>,
    pub n_add: Option<f64>,
    /// First `v_c` report, if any.
    pub v_c: Option<f64>,
    pub mean_error_x: Option<f64>,
    pub mean_error_y: Option<f64>,
    /// Output-beam coefficients, when an output is declared.
    pub coefficients: Vec<CoefficientEntry>,
}

impl ExecutionReport {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|m| m.metric == name)
            .map(|m| m.value)
    }
}

/// Checks and runs `program` on a fresh registry, evaluating every `report`.
pub fn execute(
    program: &CircuitProgram,
    overrides: &Overrides,
) -> Result<ExecutionReport, DslError> {
    check_with(program, overrides).map_err(DslError::Check)?;
    let mut registry = ModeRegistry::new();
    let mut m = Machine::new(&mut registry, overrides, RunMode::Full);
    m.run(program).map_err(DslError::Runtime)?;

    let needs_n_add = m.metrics.iter().any(|x| x.metric == "n_add");
    let mut n_add = None;
    if needs_n_add {
        let circuit = CompiledCircuit::new(program.clone(), overrides.clone())?;
        let line = m
            .metrics
            .iter()
            .find(|x| x.metric == "n_add")
            .map_or(0, |x| x.line);
        let value =
            victor_verify(&circuit, circuit.input_spec(), &PhaseMode::Averaged).map_err(|e| {
                DslError::Runtime(diag(Span::new(line, 1), Rule::Verification, e.to_string()))
            })?;
        for metric in m.metrics.iter_mut().filter(|x| x.metric == "n_add") {
            metric.value = value;
        }
        n_add = Some(value);
    }

    let v_c = m
        .metrics
        .iter()
        .find(|x| x.metric == "v_c")
        .map(|x| x.value);
    let input = m.input.clone();
    let params = m.params.clone();
    let metrics = m.metrics.clone();
    let out = m.output_beam();
    let (mut mean_error_x, mut mean_error_y, mut coefficients) = (None, None, Vec::new());
    if let Some(beam) = &out {
        coefficients = coefficient_table(&registry, beam);
        if let Some((_, spec, _)) = input {
            let mean = |f: &QuadratureForm| {
                registry
                    .mean(f)
                    .map_err(|e| DslError::Runtime(engine_diag(Span::default(), e)))
            };
            mean_error_x = Some(mean(beam.x())? - spec.mean_x);
            mean_error_y = Some(mean(beam.y())? - spec.mean_y);
        }
    }
    Ok(ExecutionReport {
        params,
        metrics,
        n_add,
        v_c,
        mean_error_x,
        mean_error_y,
        coefficients,
    })
}
