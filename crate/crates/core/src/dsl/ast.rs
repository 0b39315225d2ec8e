use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl Span {
    pub fn new(line: usize, column: usize) -> Self {
        Span { line, column }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: Span) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

/// Arithmetic over literals, parameters and measurement records.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number {
        value: f64,
        span: Span,
    },
    Name(Ident),
    Neg {
        operand: Box<Expr>,
        span: Span,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        span: Span,
    },
    Sqrt {
        arg: Box<Expr>,
        span: Span,
    },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Number { span, .. }
            | Expr::Neg { span, .. }
            | Expr::Binary { span, .. }
            | Expr::Sqrt { span, .. } => *span,
            Expr::Name(id) => id.span,
        }
    }

    /// Every name referenced, in source order.
    pub fn names(&self) -> Vec<&Ident> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a Ident>) {
        match self {
            Expr::Number { .. } => {}
            Expr::Name(id) => out.push(id),
            Expr::Neg { operand, .. } => operand.collect_names(out),
            Expr::Sqrt { arg, .. } => arg.collect_names(out),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_names(out);
                rhs.collect_names(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub key: Ident,
    pub value: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Vacuum,
    Coherent,
    Squeezed,
    Custom,
}

impl ModeKind {
    pub const ALL: [ModeKind; 4] = [
        ModeKind::Vacuum,
        ModeKind::Coherent,
        ModeKind::Squeezed,
        ModeKind::Custom,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ModeKind::Vacuum => "vacuum",
            ModeKind::Coherent => "coherent",
            ModeKind::Squeezed => "squeezed",
            ModeKind::Custom => "custom",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }

    /// Parameter keys this kind accepts.
    pub fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            ModeKind::Vacuum => &[],
            ModeKind::Coherent => &["mean_x", "mean_y"],
            ModeKind::Squeezed => &["mean_x", "mean_y", "var_x", "var_y"],
            ModeKind::Custom => &["mean_x", "mean_y", "var_x", "var_y", "cov_xy"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    Y,
}

impl Quadrature {
    pub fn keyword(self) -> &'static str {
        match self {
            Quadrature::X => "x",
            Quadrature::Y => "y",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    /// Phase-averaged added noise between the `input` mode and the `output` beam.
    AddedNoise,
    /// Conditional variance of `signal.x` given `meter.x`.
    ConditionalVariance {
        signal: Ident,
        meter: Ident,
    },
    Variance {
        quadrature: Quadrature,
        beam: Ident,
    },
    Mean {
        quadrature: Quadrature,
        beam: Ident,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Param {
        name: Ident,
        value: Expr,
    },
    Mode {
        name: Ident,
        kind: ModeKind,
        params: Vec<Param>,
        input: bool,
    },
    Splitter {
        first: Ident,
        second: Ident,
        transmittance: Expr,
    },
    Qnd {
        first: Ident,
        second: Ident,
        gain: Expr,
    },
    Phase {
        beam: Ident,
        angle: Expr,
    },
    Measure {
        quadrature: Quadrature,
        beam: Ident,
        binding: Ident,
    },
    Displace {
        beam: Ident,
        x: Expr,
        y: Expr,
    },
    Output {
        beam: Ident,
    },
    Report(Report),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub span: Span,
    pub stmt: Stmt,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CircuitProgram {
    pub statements: Vec<Statement>,
}

impl CircuitProgram {
    /// Copy with every source position reset, for structural comparison.
    pub fn without_spans(&self) -> CircuitProgram {
        let mut p = self.clone();
        for s in &mut p.statements {
            s.span = Span::default();
            erase_stmt(&mut s.stmt);
        }
        p
    }

    /// Names of all `param` statements with their default expressions.
    pub fn params(&self) -> impl Iterator<Item = (&Ident, &Expr)> {
        self.statements.iter().filter_map(|s| match &s.stmt {
            Stmt::Param { name, value } => Some((name, value)),
            _ => None,
        })
    }
}

fn erase_ident(id: &mut Ident) {
    id.span = Span::default();
}

fn erase_expr(e: &mut Expr) {
    match e {
        Expr::Number { span, .. } => *span = Span::default(),
        Expr::Name(id) => erase_ident(id),
        Expr::Neg { operand, span } => {
            *span = Span::default();
            erase_expr(operand);
        }
        Expr::Sqrt { arg, span } => {
            *span = Span::default();
            erase_expr(arg);
        }
        Expr::Binary { lhs, rhs, span, .. } => {
            *span = Span::default();
            erase_expr(lhs);
            erase_expr(rhs);
        }
    }
}

fn erase_stmt(s: &mut Stmt) {
    match s {
        Stmt::Param { name, value } => {
            erase_ident(name);
            erase_expr(value);
        }
        Stmt::Mode { name, params, .. } => {
            erase_ident(name);
            for p in params {
                erase_ident(&mut p.key);
                erase_expr(&mut p.value);
            }
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
            erase_ident(first);
            erase_ident(second);
            erase_expr(e);
        }
        Stmt::Phase { beam, angle } => {
            erase_ident(beam);
            erase_expr(angle);
        }
        Stmt::Measure { beam, binding, .. } => {
            erase_ident(beam);
            erase_ident(binding);
        }
        Stmt::Displace { beam, x, y } => {
            erase_ident(beam);
            erase_expr(x);
            erase_expr(y);
        }
        Stmt::Output { beam } => erase_ident(beam),
        Stmt::Report(r) => match r {
            Report::AddedNoise => {}
            Report::ConditionalVariance { signal, meter } => {
                erase_ident(signal);
                erase_ident(meter);
            }
            Report::Variance { beam, .. } | Report::Mean { beam, .. } => erase_ident(beam),
        },
    }
}
