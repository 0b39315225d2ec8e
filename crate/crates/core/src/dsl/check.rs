use std::collections::{BTreeSet, HashMap};

use super::ast::*;
use super::exec::{dry_run, Overrides};
use super::{Diagnostic, Rule};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Sym {
    Param,
    Beam,
    Consumed(usize),
    Output,
    Record,
}

struct Checker {
    syms: HashMap<String, Sym>,
    diags: Vec<Diagnostic>,
}

impl Checker {
    fn push(&mut self, span: Span, rule: Rule, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            span,
            rule,
            message: message.into(),
        });
    }

    fn define(&mut self, id: &Ident, sym: Sym) {
        if self.syms.contains_key(&id.name) {
            self.push(
                id.span,
                Rule::Duplicate,
                format!("`{}` is already defined", id.name),
            );
        }
        self.syms.insert(id.name.clone(), sym);
    }

    /// Beam that an optical element will transform or consume.
    fn live_beam(&mut self, id: &Ident) -> bool {
        match self.syms.get(&id.name).copied() {
            Some(Sym::Beam) => true,
            Some(Sym::Consumed(line)) => {
                self.push(
                    id.span,
                    Rule::ConsumedBeam,
                    format!("beam `{}` was already measured on line {line}", id.name),
                );
                false
            }
            Some(Sym::Output) => {
                self.push(
                    id.span,
                    Rule::ConsumedBeam,
                    format!("beam `{}` has been handed over as the output", id.name),
                );
                false
            }
            Some(_) => {
                self.push(
                    id.span,
                    Rule::KindMismatch,
                    format!("`{}` is not a beam", id.name),
                );
                false
            }
            None => {
                self.push(
                    id.span,
                    Rule::Undefined,
                    format!("`{}` is not defined", id.name),
                );
                false
            }
        }
    }

    /// Beam read by a report; the output beam is readable.
    fn readable_beam(&mut self, id: &Ident) {
        if self.syms.get(&id.name) != Some(&Sym::Output) {
            self.live_beam(id);
        }
    }

    /// Degree of `e` in measurement records (0 = constant, 1 = linear).
    /// Returns `None` after reporting a problem.
    fn degree(&mut self, e: &Expr) -> Option<u32> {
        match e {
            Expr::Number { .. } => Some(0),
            Expr::Name(id) => match self.syms.get(&id.name) {
                Some(Sym::Param) => Some(0),
                Some(Sym::Record) => Some(1),
                Some(_) => {
                    self.push(
                        id.span,
                        Rule::KindMismatch,
                        format!(
                            "`{}` is a beam, not a number or measurement record",
                            id.name
                        ),
                    );
                    None
                }
                None => {
                    self.push(
                        id.span,
                        Rule::Undefined,
                        format!("`{}` is not defined", id.name),
                    );
                    None
                }
            },
            Expr::Neg { operand, .. } => self.degree(operand),
            Expr::Sqrt { arg, span } => {
                let d = self.degree(arg)?;
                if d > 0 {
                    self.push(
                        *span,
                        Rule::Nonlinear,
                        "sqrt of a measurement record is not linear",
                    );
                    return None;
                }
                Some(0)
            }
            Expr::Binary { op, lhs, rhs, span } => {
                let l = self.degree(lhs);
                let r = self.degree(rhs);
                let (l, r) = (l?, r?);
                let d = match op {
                    BinOp::Add | BinOp::Sub => l.max(r),
                    BinOp::Mul => l + r,
                    BinOp::Div if r > 0 => 2,
                    BinOp::Div => l,
                };
                if d > 1 {
                    self.push(
                        *span,
                        Rule::Nonlinear,
                        "feedforward must be linear in measurement records",
                    );
                    return None;
                }
                Some(d)
            }
        }
    }

    fn constant(&mut self, e: &Expr) {
        if self.degree(e) == Some(1) {
            self.push(
                e.span(),
                Rule::NonConstant,
                "element parameters cannot depend on measurement records",
            );
        }
    }

    fn statement(&mut self, s: &Statement) {
        match &s.stmt {
            Stmt::Param { name, value } => {
                self.constant(value);
                self.define(name, Sym::Param);
            }
            Stmt::Mode {
                name, kind, params, ..
            } => {
                let mut seen = BTreeSet::new();
                for p in params {
                    self.constant(&p.value);
                    if !kind.allowed_keys().contains(&p.key.name.as_str()) {
                        self.push(
                            p.key.span,
                            Rule::ModeParameter,
                            format!(
                                "`{}` is not a parameter of {} modes (allowed: {})",
                                p.key.name,
                                kind.keyword(),
                                kind.allowed_keys().join(", ")
                            ),
                        );
                    }
                    if !seen.insert(p.key.name.as_str()) {
                        self.push(
                            p.key.span,
                            Rule::ModeParameter,
                            format!("`{}` given twice", p.key.name),
                        );
                    }
                }
                if *kind == ModeKind::Squeezed && seen.contains("var_x") == seen.contains("var_y") {
                    self.push(
                        name.span,
                        Rule::ModeParameter,
                        "squeezed modes take exactly one of var_x, var_y",
                    );
                }
                self.define(name, Sym::Beam);
            }
            Stmt::Splitter {
                first,
                second,
                transmittance: e,
            }
            | Stmt::Qnd {
                first,
                second,
                gain: e,
            } => {
                self.constant(e);
                if first.name == second.name {
                    self.push(
                        second.span,
                        Rule::SameBeam,
                        "a two-port element needs two different beams",
                    );
                } else {
                    self.live_beam(first);
                    self.live_beam(second);
                }
            }
            Stmt::Phase { beam, angle } => {
                self.constant(angle);
                self.live_beam(beam);
            }
            Stmt::Measure { beam, binding, .. } => {
                if self.live_beam(beam) {
                    self.syms
                        .insert(beam.name.clone(), Sym::Consumed(s.span.line));
                }
                self.define(binding, Sym::Record);
            }
            Stmt::Displace { beam, x, y } => {
                self.degree(x);
                self.degree(y);
                self.live_beam(beam);
            }
            Stmt::Output { beam } => {
                if self.live_beam(beam) {
                    self.syms.insert(beam.name.clone(), Sym::Output);
                }
            }
            Stmt::Report(r) => match r {
                Report::AddedNoise => {}
                Report::ConditionalVariance { signal, meter } => {
                    self.readable_beam(signal);
                    self.readable_beam(meter);
                }
                Report::Variance { beam, .. } | Report::Mean { beam, .. } => {
                    self.readable_beam(beam)
                }
            },
        }
    }
}

/// Static and dry-run validation of a parsed program.
pub fn check(program: &CircuitProgram) -> Result<(), Vec<Diagnostic>> {
    check_with(program, &Overrides::new())
}

/// [`check`] with parameter overrides applied to the dry run.
pub fn check_with(program: &CircuitProgram, overrides: &Overrides) -> Result<(), Vec<Diagnostic>> {
    let mut c = Checker {
        syms: HashMap::new(),
        diags: Vec::new(),
    };
    for s in &program.statements {
        c.statement(s);
    }

    let inputs: Vec<&Statement> = program
        .statements
        .iter()
        .filter(|s| matches!(s.stmt, Stmt::Mode { input: true, .. }))
        .collect();
    let outputs: Vec<&Statement> = program
        .statements
        .iter()
        .filter(|s| matches!(s.stmt, Stmt::Output { .. }))
        .collect();
    for extra in inputs.iter().skip(1) {
        c.push(
            extra.span,
            Rule::Tags,
            "only one mode may be tagged `input`",
        );
    }
    for extra in outputs.iter().skip(1) {
        c.push(
            extra.span,
            Rule::Tags,
            "only one `output` statement is allowed",
        );
    }
    for s in &program.statements {
        if matches!(s.stmt, Stmt::Report(Report::AddedNoise))
            && (inputs.is_empty() || outputs.is_empty())
        {
            c.push(
                s.span,
                Rule::Tags,
                "`report n_add` needs a mode tagged `input` and an `output` statement",
            );
        }
    }

    let params: BTreeSet<&str> = program.params().map(|(n, _)| n.name.as_str()).collect();
    for name in overrides.keys() {
        if !params.contains(name.as_str()) {
            c.push(
                Span::default(),
                Rule::UnknownOverride,
                format!("override `{name}` does not match any `param`"),
            );
        }
    }

    if c.diags.is_empty() {
        if let Err(d) = dry_run(program, overrides) {
            c.diags.push(d);
        }
    }
    if c.diags.is_empty() {
        Ok(())
    } else {
        c.diags.sort_by_key(|d| d.span);
        Err(c.diags)
    }
}
