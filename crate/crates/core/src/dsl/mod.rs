//! A line-oriented language for linear optical circuits.
//!
//! ```text
//! param g = 1.0
//! mode in coherent input          # the state to teleport
//! mode a vacuum
//! mode b vacuum
//! qnd a b gain=g
//! bs a in t=1 / (1 + g * g)
//! measure x a -> xm
//! measure y in -> ym
//! displace b x=sqrt(1 + g * g) / g * xm y=sqrt(1 + g * g) * ym
//! output b
//! report n_add
//! ```
//!
//! Statements: `param NAME = EXPR`, `mode NAME KIND [key=EXPR]... [input]`
//! with KIND one of `vacuum`, `coherent`, `squeezed`, `custom`;
//! `bs A B t=EXPR`, `qnd A B gain=EXPR`, `phase A EXPR`,
//! `measure x|y A -> NAME`, `displace A x=EXPR y=EXPR`, `output A`, and
//! `report n_add | v_c SIGNAL METER | var x|y A | mean x|y A`.
//! Two-port elements rebind both operand names to their outputs.
//! Expressions use `+ - * /`, unary minus, parentheses and `sqrt(...)` over
//! numbers, parameters and measurement records; feedforward must stay linear
//! in the records.

mod ast;
pub mod bundled;
mod check;
mod exec;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

use thiserror::Error;

pub use ast::*;
pub use check::{check, check_with};
pub use exec::{execute, CompiledCircuit, ExecutionReport, MetricValue, Overrides};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        span: Span,
        expected: Vec<String>,
        found: String,
    },
    #[error("{span}: duplicate identifier `{name}` (first defined at {previous})")]
    Duplicate {
        name: String,
        span: Span,
        previous: Span,
    },
    #[error("{span}: `{name}` used before it is defined")]
    Undefined { name: String, span: Span },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::Duplicate { span, .. }
            | ParseError::Undefined { span, .. } => *span,
        }
    }
}

/// Name of the rule a diagnostic enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Undefined,
    Duplicate,
    KindMismatch,
    ConsumedBeam,
    SameBeam,
    Nonlinear,
    NonConstant,
    ModeParameter,
    Tags,
    UnknownOverride,
    JointMeasurability,
    InvalidValue,
    Verification,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Undefined => "define-before-use",
            Rule::Duplicate => "duplicate-identifier",
            Rule::KindMismatch => "kind-mismatch",
            Rule::ConsumedBeam => "single-consumption",
            Rule::SameBeam => "distinct-operands",
            Rule::Nonlinear => "linear-feedforward",
            Rule::NonConstant => "constant-parameter",
            Rule::ModeParameter => "mode-parameter",
            Rule::Tags => "input-output-tags",
            Rule::UnknownOverride => "unknown-override",
            Rule::JointMeasurability => "joint-measurability",
            Rule::InvalidValue => "invalid-value",
            Rule::Verification => "verification",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub span: Span,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.span, self.rule.name(), self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Check(Vec<Diagnostic>),
    #[error("{0}")]
    Runtime(Diagnostic),
    #[error("the program needs a mode tagged `input` and an `output` statement")]
    MissingTags,
}

/// Parses, checks and executes `source` in one go.
pub fn run_source(source: &str, overrides: &Overrides) -> Result<ExecutionReport, DslError> {
    let program = parse(source)?;
    execute(&program, overrides)
}
