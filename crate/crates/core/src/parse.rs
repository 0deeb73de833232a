//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') ['-'] term)*
//! term   := factor ('*'? factor)*        adjacent factors multiply
//! factor := base ('^' INT)?
//! base   := RATIONAL | IDENT | '(' expr ')'
//! RATIONAL := INT ('/' INT)?
//! ```
//! Whitespace is ignored between tokens. Identifiers are `[A-Za-z_][A-Za-z0-9_]*`
//! and must be one of the declared variables, so `xy` is a single (unknown)
//! identifier, not `x*y`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{Coeff, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at byte {offset} is not a positive integer")]
    BadExponent { offset: usize },
    #[error("division by zero at byte {offset}")]
    ZeroDenominator { offset: usize },
    #[error("invalid variable list: {0}")]
    BadVariables(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (off, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, off));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = bytes[start..i].iter().map(|b| b.1).collect();
            out.push((Tok::Int(text.parse().unwrap()), off));
        } else if is_ident_start(c) {
            let start = i;
            while i < bytes.len() && is_ident_char(bytes[i].1) {
                i += 1;
            }
            let text: String = bytes[start..i].iter().map(|b| b.1).collect();
            out.push((Tok::Ident(text), off));
        } else {
            return Err(ParseError::Syntax {
                offset: off,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let nvars = self.vars.len();
        let mut acc = Polynomial::zero(nvars);
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
            if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                negate = !negate;
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let offset = self.offset();
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = k.to_u32().filter(|&k| k >= 1);
                self.pos += 1;
                match k {
                    Some(k) => Ok(base.pow(k)),
                    None => Err(ParseError::BadExponent { offset }),
                }
            }
            _ => Err(ParseError::BadExponent { offset }),
        }
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let nvars = self.vars.len();
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.pos += 1;
                let mut value = Coeff::from_integer(num);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let den_off = self.offset();
                    match self.peek().cloned() {
                        Some(Tok::Int(den)) => {
                            self.pos += 1;
                            if den.is_zero() {
                                return Err(ParseError::ZeroDenominator { offset: den_off });
                            }
                            value /= Coeff::from_integer(den);
                        }
                        _ => return self.syntax("expected integer denominator after `/`"),
                    }
                }
                Ok(Polynomial::constant(nvars, value))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::var(nvars, i)),
                    None => Err(ParseError::UnknownIdentifier { name, offset }),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.syntax("expected a number, variable or `(`"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

/// Checks a variable list: nonempty, valid identifiers, no repeats.
pub fn validate_vars(vars: &[String]) -> Result<(), ParseError> {
    if vars.is_empty() {
        return Err(ParseError::BadVariables("no variables".into()));
    }
    for (i, v) in vars.iter().enumerate() {
        let mut chars = v.chars();
        let ok = chars.next().is_some_and(is_ident_start) && chars.all(is_ident_char);
        if !ok {
            return Err(ParseError::BadVariables(format!(
                "`{v}` is not an identifier"
            )));
        }
        if vars[..i].contains(v) {
            return Err(ParseError::BadVariables(format!("`{v}` repeated")));
        }
    }
    Ok(())
}

/// Splits a comma-separated variable list such as `"x,y,z"`.
pub fn parse_vars(list: &str) -> Result<Vec<String>, ParseError> {
    let vars: Vec<String> = list
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    validate_vars(&vars)?;
    Ok(vars)
}

pub fn parse_polynomial(src: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    validate_vars(vars)?;
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        vars,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}
