use std::collections::HashMap;

use super::ast::*;
use super::lexer::{lex_line, Tok, Token};
use super::ParseError;

const STATEMENT_KEYWORDS: [&str; 9] = [
    "param", "mode", "bs", "qnd", "phase", "measure", "displace", "output", "report",
];

/// Parses circuit source text. Besides syntax, rejects duplicate
/// definitions and names used before they are defined.
pub fn parse(source: &str) -> Result<CircuitProgram, ParseError> {
    let mut defined: HashMap<String, Span> = HashMap::new();
    let mut statements = Vec::new();
    for (i, text) in source.lines().enumerate() {
        let line_no = i + 1;
        let tokens = lex_line(line_no, text)?;
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            tokens,
            pos: 0,
            eol: Span::new(line_no, text.chars().count() + 1),
        };
        let statement = p.statement()?;
        p.expect_end()?;
        resolve(&statement, &mut defined)?;
        statements.push(statement);
    }
    Ok(CircuitProgram { statements })
}

fn use_name(id: &Ident, defined: &HashMap<String, Span>) -> Result<(), ParseError> {
    if defined.contains_key(&id.name) {
        Ok(())
    } else {
        Err(ParseError::Undefined {
            name: id.name.clone(),
            span: id.span,
        })
    }
}

fn use_expr(e: &Expr, defined: &HashMap<String, Span>) -> Result<(), ParseError> {
    e.names()
        .into_iter()
        .try_for_each(|id| use_name(id, defined))
}

fn define(id: &Ident, defined: &mut HashMap<String, Span>) -> Result<(), ParseError> {
    match defined.get(&id.name) {
        Some(prev) => Err(ParseError::Duplicate {
            name: id.name.clone(),
            span: id.span,
            previous: *prev,
        }),
        None => {
            defined.insert(id.name.clone(), id.span);
            Ok(())
        }
    }
}

fn resolve(s: &Statement, defined: &mut HashMap<String, Span>) -> Result<(), ParseError> {
    match &s.stmt {
        Stmt::Param { name, value } => {
            use_expr(value, defined)?;
            define(name, defined)
        }
        Stmt::Mode { name, params, .. } => {
            for p in params {
                use_expr(&p.value, defined)?;
            }
            define(name, defined)
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
            use_name(first, defined)?;
            use_name(second, defined)?;
            use_expr(e, defined)
        }
        Stmt::Phase { beam, angle } => {
            use_name(beam, defined)?;
            use_expr(angle, defined)
        }
        Stmt::Measure { beam, binding, .. } => {
            use_name(beam, defined)?;
            define(binding, defined)
        }
        Stmt::Displace { beam, x, y } => {
            use_name(beam, defined)?;
            use_expr(x, defined)?;
            use_expr(y, defined)
        }
        Stmt::Output { beam } => use_name(beam, defined),
        Stmt::Report(r) => match r {
            Report::AddedNoise => Ok(()),
            Report::ConditionalVariance { signal, meter } => {
                use_name(signal, defined)?;
                use_name(meter, defined)
            }
            Report::Variance { beam, .. } | Report::Mean { beam, .. } => use_name(beam, defined),
        },
    }
}

struct LineParser {
    tokens: Vec<Token>,
    pos: usize,
    eol: Span,
}

impl LineParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        self.peek().map_or(self.eol, |t| t.span)
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.here(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self
                .peek()
                .map_or_else(|| "end of line".to_string(), |t| t.tok.describe()),
        })
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            self.error(&["end of line"])
        } else {
            Ok(())
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident, ParseError> {
        match self.peek_tok(0) {
            Some(Tok::Ident(_)) => {
                let t = self.bump();
                match t.tok {
                    Tok::Ident(name) => Ok(Ident::new(name, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => self.error(&[what]),
        }
    }

    fn keyword(&mut self, options: &[&str]) -> Result<Ident, ParseError> {
        match self.peek_tok(0) {
            Some(Tok::Ident(w)) if options.contains(&w.as_str()) => self.ident("keyword"),
            _ => self.error(options),
        }
    }

    fn punct(&mut self, tok: Tok, shown: &str) -> Result<Span, ParseError> {
        if self.peek_tok(0) == Some(&tok) {
            Ok(self.bump().span)
        } else {
            self.error(&[shown])
        }
    }

    /// `key = EXPR` with a fixed key.
    fn keyed(&mut self, key: &str) -> Result<Expr, ParseError> {
        self.keyword(&[key])?;
        self.punct(Tok::Eq, "`=`")?;
        self.expr()
    }

    fn quadrature(&mut self) -> Result<Quadrature, ParseError> {
        let k = self.keyword(&["x", "y"])?;
        Ok(if k.name == "x" {
            Quadrature::X
        } else {
            Quadrature::Y
        })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let span = self.here();
        let kw = self.keyword(&STATEMENT_KEYWORDS)?;
        let stmt = match kw.name.as_str() {
            "param" => {
                let name = self.ident("parameter name")?;
                self.punct(Tok::Eq, "`=`")?;
                Stmt::Param {
                    name,
                    value: self.expr()?,
                }
            }
            "mode" => self.mode()?,
            "bs" => {
                let first = self.ident("beam name")?;
                let second = self.ident("beam name")?;
                Stmt::Splitter {
                    first,
                    second,
                    transmittance: self.keyed("t")?,
                }
            }
            "qnd" => {
                let first = self.ident("beam name")?;
                let second = self.ident("beam name")?;
                Stmt::Qnd {
                    first,
                    second,
                    gain: self.keyed("gain")?,
                }
            }
            "phase" => {
                let beam = self.ident("beam name")?;
                Stmt::Phase {
                    beam,
                    angle: self.expr()?,
                }
            }
            "measure" => {
                let quadrature = self.quadrature()?;
                let beam = self.ident("beam name")?;
                self.punct(Tok::Arrow, "`->`")?;
                let binding = self.ident("record name")?;
                Stmt::Measure {
                    quadrature,
                    beam,
                    binding,
                }
            }
            "displace" => {
                let beam = self.ident("beam name")?;
                let x = self.keyed("x")?;
                let y = self.keyed("y")?;
                Stmt::Displace { beam, x, y }
            }
            "output" => Stmt::Output {
                beam: self.ident("beam name")?,
            },
            "report" => Stmt::Report(self.report()?),
            _ => unreachable!(),
        };
        Ok(Statement { span, stmt })
    }

    fn mode(&mut self) -> Result<Stmt, ParseError> {
        let name = self.ident("mode name")?;
        let kinds: Vec<&str> = ModeKind::ALL.iter().map(|k| k.keyword()).collect();
        let kind_kw = self.keyword(&kinds)?;
        let kind = ModeKind::from_keyword(&kind_kw.name).expect("keyword checked");
        let mut params = Vec::new();
        let mut input = false;
        while let Some(Tok::Ident(word)) = self.peek_tok(0) {
            if self.peek_tok(1) == Some(&Tok::Eq) {
                let key = self.ident("parameter")?;
                self.bump();
                params.push(Param {
                    key,
                    value: self.expr()?,
                });
            } else if word == "input" && !input {
                self.bump();
                input = true;
            } else {
                return self.error(&["`key=value`", "`input`", "end of line"]);
            }
        }
        Ok(Stmt::Mode {
            name,
            kind,
            params,
            input,
        })
    }

    fn report(&mut self) -> Result<Report, ParseError> {
        let metric = self.keyword(&["n_add", "v_c", "var", "mean"])?;
        Ok(match metric.name.as_str() {
            "n_add" => Report::AddedNoise,
            "v_c" => {
                let signal = self.ident("beam name")?;
                let meter = self.ident("beam name")?;
                Report::ConditionalVariance { signal, meter }
            }
            "var" => {
                let quadrature = self.quadrature()?;
                Report::Variance {
                    quadrature,
                    beam: self.ident("beam name")?,
                }
            }
            _ => {
                let quadrature = self.quadrature()?;
                Report::Mean {
                    quadrature,
                    beam: self.ident("beam name")?,
                }
            }
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_tok(0) {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_tok(0) {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_tok(0) == Some(&Tok::Minus) {
            let span = self.bump().span;
            let operand = Box::new(self.unary()?);
            return Ok(Expr::Neg { operand, span });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        const EXPECTED: [&str; 4] = ["number", "name", "`(`", "`-`"];
        match self.peek_tok(0) {
            Some(Tok::Number(_)) => {
                let t = self.bump();
                let Tok::Number(value) = t.tok else {
                    unreachable!()
                };
                Ok(Expr::Number {
                    value,
                    span: t.span,
                })
            }
            Some(Tok::Ident(w)) if w == "sqrt" && self.peek_tok(1) == Some(&Tok::LParen) => {
                let span = self.bump().span;
                self.bump();
                let arg = Box::new(self.expr()?);
                self.punct(Tok::RParen, "`)`")?;
                Ok(Expr::Sqrt { arg, span })
            }
            Some(Tok::Ident(_)) => Ok(Expr::Name(self.ident("name")?)),
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                self.punct(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.error(&EXPECTED),
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span();
    Expr::Binary {
        op,
        lhs: Box::new(lhs),
        rhs: Box::new(rhs),
        span,
    }
}
