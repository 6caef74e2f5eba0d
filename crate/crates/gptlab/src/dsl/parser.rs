//! Recursive-descent parser for the circuit grammar.

use super::ast::{Arg, BoolAst, CircuitAst, Ctor, Stmt, StmtKind};
use super::lexer::{lex, Spanned, Tok};
use super::DslError;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        let t = self.peek();
        Err(DslError::Parse {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: &Tok) -> Result<Spanned, DslError> {
        if std::mem::discriminant(&self.peek().tok) == std::mem::discriminant(want) {
            Ok(self.next())
        } else {
            self.error(format!("expected {want}, found {}", self.peek().tok))
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        match &self.peek().tok {
            Tok::Ident(_) => match self.next().tok {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            other => self.error(format!("expected identifier, found {other}")),
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek().tok, Tok::Newline | Tok::Semi) {
            self.next();
        }
    }

    fn end_of_statement(&mut self) -> Result<(), DslError> {
        match self.peek().tok {
            Tok::Newline | Tok::Semi | Tok::Eof => {
                self.skip_separators();
                Ok(())
            }
            _ => self.error(format!(
                "expected end of statement, found {}",
                self.peek().tok
            )),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<String>, DslError> {
        let mut out = vec![self.ident()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn arg(&mut self) -> Result<Arg, DslError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.next();
                if self.peek().tok == Tok::Slash {
                    self.next();
                    match self.peek().tok {
                        Tok::Int(d) if d != 0 => {
                            self.next();
                            Ok(Arg::Ratio(n, d))
                        }
                        Tok::Int(_) => self.error("zero denominator"),
                        _ => self.error("expected denominator after `/`"),
                    }
                } else {
                    Ok(Arg::Int(n))
                }
            }
            _ => self.error(format!("expected number, found {}", self.peek().tok)),
        }
    }

    fn ctor(&mut self) -> Result<Ctor, DslError> {
        let name = self.ident()?;
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.peek().tok != Tok::RParen {
            args.push(self.arg()?);
            while self.peek().tok == Tok::Comma {
                self.next();
                args.push(self.arg()?);
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(Ctor { name, args })
    }

    // Precedence, loosest first: == , or, and, xor, not, atom.
    fn bool_expr(&mut self) -> Result<BoolAst, DslError> {
        let left = self.or_expr()?;
        if self.peek().tok == Tok::EqEq {
            self.next();
            let right = self.or_expr()?;
            return Ok(BoolAst::Eq(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or_expr(&mut self) -> Result<BoolAst, DslError> {
        let mut left = self.and_expr()?;
        while self.word("or") {
            let right = self.and_expr()?;
            left = BoolAst::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<BoolAst, DslError> {
        let mut left = self.xor_expr()?;
        while self.word("and") {
            let right = self.xor_expr()?;
            left = BoolAst::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn xor_expr(&mut self) -> Result<BoolAst, DslError> {
        let mut left = self.unary_expr()?;
        while self.word("xor") {
            let right = self.unary_expr()?;
            left = BoolAst::Xor(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary_expr(&mut self) -> Result<BoolAst, DslError> {
        if self.word("not") {
            return Ok(BoolAst::Not(Box::new(self.unary_expr()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<BoolAst, DslError> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = *n;
                self.next();
                Ok(BoolAst::Int(n))
            }
            Tok::Ident(_) => Ok(BoolAst::Var(self.ident()?)),
            Tok::LParen => {
                self.next();
                let e = self.bool_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            other => self.error(format!("expected expression, found {other}")),
        }
    }

    /// Consumes the word operator `w` if it is next.
    fn word(&mut self, w: &str) -> bool {
        if let Tok::Ident(s) = &self.peek().tok {
            if s == w {
                self.next();
                return true;
            }
        }
        false
    }

    fn statement(&mut self) -> Result<Option<Stmt>, DslError> {
        let line = self.peek().line;
        let kind = match self.peek().tok {
            Tok::KwSystem => {
                self.next();
                let name = self.ident()?;
                self.expect(&Tok::Colon)?;
                let ty = self.ident()?;
                StmtKind::System { name, ty }
            }
            Tok::KwAux => {
                self.next();
                let name = self.ident()?;
                self.expect(&Tok::Colon)?;
                let ty = self.ident()?;
                StmtKind::Aux { name, ty }
            }
            Tok::KwPrepare => {
                self.next();
                let ctor = self.ctor()?;
                self.expect(&Tok::Arrow)?;
                let wires = self.ident_list()?;
                StmtKind::Prepare { ctor, wires }
            }
            Tok::KwApply => {
                self.next();
                let gate = self.ident()?;
                let inputs = self.ident_list()?;
                self.expect(&Tok::Arrow)?;
                let outputs = self.ident_list()?;
                StmtKind::Apply {
                    gate,
                    inputs,
                    outputs,
                }
            }
            Tok::KwMeasure => {
                self.next();
                let ctor = self.ctor()?;
                let wires = self.ident_list()?;
                self.expect(&Tok::Arrow)?;
                let vars = self.ident_list()?;
                StmtKind::Measure { ctor, wires, vars }
            }
            Tok::KwPostSelect => {
                self.next();
                let expr = self.bool_expr()?;
                StmtKind::PostSelect { expr }
            }
            Tok::KwAccept => return Ok(None),
            _ => {
                return self.error(format!(
                    "expected a statement or `accept`, found {}",
                    self.peek().tok
                ))
            }
        };
        self.end_of_statement()?;
        Ok(Some(Stmt { kind, line }))
    }
}

/// Parses a complete `.gpc` file.
pub fn parse(text: &str) -> Result<CircuitAst, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    p.skip_separators();
    p.expect(&Tok::KwTheory)?;
    let theory = p.ident()?;
    p.end_of_statement()?;
    let mut statements = Vec::new();
    loop {
        p.skip_separators();
        if matches!(p.peek().tok, Tok::KwAccept | Tok::Eof) {
            break;
        }
        match p.statement()? {
            Some(s) => statements.push(s),
            None => break,
        }
    }
    let accept_line = p.peek().line;
    p.expect(&Tok::KwAccept)?;
    if matches!(p.peek().tok, Tok::Newline | Tok::Semi | Tok::Eof) {
        return p.error("empty accept clause");
    }
    let accept = p.bool_expr()?;
    p.skip_separators();
    if p.peek().tok != Tok::Eof {
        return p.error(format!("trailing input after accept: {}", p.peek().tok));
    }
    Ok(CircuitAst {
        theory,
        statements,
        accept,
        accept_line,
    })
}

/// Parses a single constructor call such as `pr()` or `rhof(0,1,1,0)`,
/// as used by command-line auxiliary-state arguments.
pub fn parse_ctor(text: &str) -> Result<Ctor, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let c = p.ctor()?;
    p.skip_separators();
    if p.peek().tok != Tok::Eof {
        return p.error("trailing input after constructor");
    }
    Ok(c)
}
