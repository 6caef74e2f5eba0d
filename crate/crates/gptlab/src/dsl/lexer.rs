//! Tokenizer for `.gpc` files.

use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Arrow,
    Colon,
    Comma,
    Semi,
    Newline,
    LParen,
    RParen,
    Slash,
    EqEq,
    KwTheory,
    KwSystem,
    KwPrepare,
    KwApply,
    KwMeasure,
    KwAux,
    KwAccept,
    KwPostSelect,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::EqEq => write!(f, "`==`"),
            Tok::KwTheory => write!(f, "`theory`"),
            Tok::KwSystem => write!(f, "`system`"),
            Tok::KwPrepare => write!(f, "`prepare`"),
            Tok::KwApply => write!(f, "`apply`"),
            Tok::KwMeasure => write!(f, "`measure`"),
            Tok::KwAux => write!(f, "`aux`"),
            Tok::KwAccept => write!(f, "`accept`"),
            Tok::KwPostSelect => write!(f, "`post-select`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    macro_rules! push {
        ($tok:expr, $c:expr) => {
            out.push(Spanned {
                tok: $tok,
                line,
                col: $c,
            })
        };
    }
    while let Some(&c) = chars.peek() {
        let start_col = col;
        match c {
            '\n' => {
                chars.next();
                push!(Tok::Newline, start_col);
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            ';' => {
                chars.next();
                col += 1;
                push!(Tok::Semi, start_col);
            }
            ':' => {
                chars.next();
                col += 1;
                push!(Tok::Colon, start_col);
            }
            ',' => {
                chars.next();
                col += 1;
                push!(Tok::Comma, start_col);
            }
            '(' => {
                chars.next();
                col += 1;
                push!(Tok::LParen, start_col);
            }
            ')' => {
                chars.next();
                col += 1;
                push!(Tok::RParen, start_col);
            }
            '/' => {
                chars.next();
                col += 1;
                push!(Tok::Slash, start_col);
            }
            '=' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::EqEq, start_col);
                } else {
                    return Err(DslError::Lex {
                        line,
                        col: start_col,
                        msg: "expected `==`".into(),
                    });
                }
            }
            '-' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        col += 1;
                        push!(Tok::Arrow, start_col);
                    }
                    Some(d) if d.is_ascii_digit() => {
                        let n = lex_int(&mut chars, &mut col, true, line, start_col)?;
                        push!(Tok::Int(n), start_col);
                    }
                    _ => {
                        return Err(DslError::Lex {
                            line,
                            col: start_col,
                            msg: "expected `->` or a number after `-`".into(),
                        })
                    }
                }
            }
            d if d.is_ascii_digit() => {
                let n = lex_int(&mut chars, &mut col, false, line, start_col)?;
                push!(Tok::Int(n), start_col);
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                // `post-select` is the one hyphenated keyword.
                if ident == "post" && chars.peek() == Some(&'-') {
                    let mut look = chars.clone();
                    look.next();
                    let rest: String = look.clone().take(6).collect();
                    if rest == "select" {
                        chars.next();
                        for _ in 0..6 {
                            chars.next();
                        }
                        col += 7;
                        push!(Tok::KwPostSelect, start_col);
                        continue;
                    }
                }
                let tok = match ident.as_str() {
                    "theory" => Tok::KwTheory,
                    "system" => Tok::KwSystem,
                    "prepare" => Tok::KwPrepare,
                    "apply" => Tok::KwApply,
                    "measure" => Tok::KwMeasure,
                    "aux" => Tok::KwAux,
                    "accept" => Tok::KwAccept,
                    _ => Tok::Ident(ident),
                };
                push!(tok, start_col);
            }
            other => {
                return Err(DslError::Lex {
                    line,
                    col: start_col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

fn lex_int(
    chars: &mut std::iter::Peekable<std::str::Chars<'_>>,
    col: &mut usize,
    negative: bool,
    line: usize,
    start_col: usize,
) -> Result<i64, DslError> {
    let mut digits = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_digit() {
            digits.push(c);
            chars.next();
            *col += 1;
        } else {
            break;
        }
    }
    let n: i64 = digits.parse().map_err(|_| DslError::Lex {
        line,
        col: start_col,
        msg: format!("integer `{digits}` out of range"),
    })?;
    Ok(if negative { -n } else { n })
}
