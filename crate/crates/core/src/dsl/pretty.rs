//! Canonical text form of a program. Parsing the output yields the same AST
//! up to source positions.

use std::fmt;

use super::ast::*;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number { value, .. } => write!(f, "{value}"),
            Expr::Name(id) => f.write_str(&id.name),
            Expr::Neg { operand, .. } => {
                f.write_str("-")?;
                nested(f, operand)
            }
            Expr::Sqrt { arg, .. } => write!(f, "sqrt({arg})"),
            Expr::Binary { op, lhs, rhs, .. } => {
                nested(f, lhs)?;
                write!(f, " {} ", op.symbol())?;
                nested(f, rhs)
            }
        }
    }
}

/// Sub-expressions that are binary get explicit parentheses.
fn nested(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    if matches!(e, Expr::Binary { .. }) {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Param { name, value } => write!(f, "param {} = {value}", name.name),
            Stmt::Mode {
                name,
                kind,
                params,
                input,
            } => {
                write!(f, "mode {} {}", name.name, kind.keyword())?;
                for p in params {
                    write!(f, " {}={}", p.key.name, p.value)?;
                }
                if *input {
                    f.write_str(" input")?;
                }
                Ok(())
            }
            Stmt::Splitter {
                first,
                second,
                transmittance,
            } => write!(f, "bs {} {} t={transmittance}", first.name, second.name),
            Stmt::Qnd {
                first,
                second,
                gain,
            } => {
                write!(f, "qnd {} {} gain={gain}", first.name, second.name)
            }
            Stmt::Phase { beam, angle } => write!(f, "phase {} {angle}", beam.name),
            Stmt::Measure {
                quadrature,
                beam,
                binding,
            } => write!(
                f,
                "measure {} {} -> {}",
                quadrature.keyword(),
                beam.name,
                binding.name
            ),
            Stmt::Displace { beam, x, y } => write!(f, "displace {} x={x} y={y}", beam.name),
            Stmt::Output { beam } => write!(f, "output {}", beam.name),
            Stmt::Report(r) => match r {
                Report::AddedNoise => f.write_str("report n_add"),
                Report::ConditionalVariance { signal, meter } => {
                    write!(f, "report v_c {} {}", signal.name, meter.name)
                }
                Report::Variance { quadrature, beam } => {
                    write!(f, "report var {} {}", quadrature.keyword(), beam.name)
                }
                Report::Mean { quadrature, beam } => {
                    write!(f, "report mean {} {}", quadrature.keyword(), beam.name)
                }
            },
        }
    }
}

impl fmt::Display for CircuitProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.stmt)?;
        }
        Ok(())
    }
}
