//! Tokenizer and expression grammar shared by ring descriptors, ring
//! elements, skew polynomials and the definition language.

use num_bigint::BigInt;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(&'static str),
    Newline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {msg}")]
pub struct SyntaxError {
    pub span: Span,
    pub msg: String,
}

pub fn err<T>(span: Span, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { span, msg: msg.into() })
}

const SYMS: &[&str] = &[
    "->", "^+-", "+", "-", "*", "/", "^", "(", ")", "{", "}", "[", "]", "=", ",", ":", ";",
];

/// Split text into tokens. `#` starts a comment; `−` is read as `-`.
pub fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c == '\n' {
            out.push((Tok::Newline, span));
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '−' {
            out.push((Tok::Sym("-"), span));
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Num(s.parse().unwrap()), span));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(s), span));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match SYMS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), span));
                i += s.chars().count();
                col += s.chars().count();
            }
            None => return err(span, format!("unexpected character '{c}'")),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Ident(String, Span),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Span),
    Pow(Box<Expr>, i64, Span),
}

/// A cursor over a token slice.
pub struct Cursor<'a> {
    pub toks: &'a [(Tok, Span)],
    pub pos: usize,
    depth: usize,
}

const MAX_DEPTH: usize = 256;

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [(Tok, Span)]) -> Self {
        Cursor { toks, pos: 0, depth: 0 }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    pub fn span(&self) -> Span {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| t.1)
            .unwrap_or_default()
    }

    pub fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.0);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.eat(s) {
            Ok(())
        } else {
            err(self.span(), format!("expected '{s}'"))
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => err(self.span(), "expected identifier"),
        }
    }

    pub fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline)) {
            self.pos += 1;
        }
    }

    /// Parse an expression; stops at the first token that cannot continue it.
    pub fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("+") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat("-") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let sp = self.span();
            if self.eat("*") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat("/") {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), sp);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.depth > MAX_DEPTH {
            return err(self.span(), "expression nested too deeply");
        }
        self.depth += 1;
        let r = if self.eat("-") {
            self.unary().map(|e| Expr::Neg(Box::new(e)))
        } else if self.eat("+") {
            self.unary()
        } else {
            self.power()
        };
        self.depth -= 1;
        r
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        let sp = self.span();
        if self.eat("^") {
            let neg = self.eat("-");
            match self.next() {
                Some(Tok::Num(n)) => {
                    let k: i64 = n
                        .try_into()
                        .map_err(|_| SyntaxError { span: sp, msg: "exponent too large".into() })?;
                    if k > 10_000 {
                        return err(sp, "exponent too large");
                    }
                    Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }, sp))
                }
                _ => err(sp, "expected integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let sp = self.span();
        match self.next() {
            Some(Tok::Num(n)) => Ok(Expr::Num(n.clone())),
            Some(Tok::Ident(s)) => Ok(Expr::Ident(s.clone(), sp)),
            Some(Tok::Sym("(")) => {
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(t) => err(sp, format!("unexpected token {}", show_tok(t))),
            None => err(sp, "unexpected end of input"),
        }
    }
}

pub fn show_tok(t: &Tok) -> String {
    match t {
        Tok::Num(n) => n.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Sym(s) => format!("'{s}'"),
        Tok::Newline => "end of line".into(),
    }
}

/// Parse a complete standalone expression.
pub fn parse_expr_text(src: &str) -> Result<Expr, SyntaxError> {
    let toks: Vec<_> = tokenize(src)?.into_iter().filter(|t| t.0 != Tok::Newline).collect();
    let mut c = Cursor::new(&toks);
    let e = c.expr()?;
    if !c.at_end() {
        return err(c.span(), format!("unexpected token {}", show_tok(c.peek().unwrap())));
    }
    Ok(e)
}

/// Values an expression can be evaluated into.
pub trait Algebra {
    type V: Clone;
    fn num(&self, n: &BigInt) -> Self::V;
    fn ident(&self, name: &str, span: Span) -> Result<Self::V, SyntaxError>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V, span: Span) -> Result<Self::V, SyntaxError>;
    fn pow(&self, a: &Self::V, k: i64, span: Span) -> Result<Self::V, SyntaxError>;
}

pub fn eval<A: Algebra>(alg: &A, e: &Expr) -> Result<A::V, SyntaxError> {
    Ok(match e {
        Expr::Num(n) => alg.num(n),
        Expr::Ident(s, sp) => alg.ident(s, *sp)?,
        Expr::Neg(a) => alg.neg(&eval(alg, a)?),
        Expr::Add(a, b) => alg.add(&eval(alg, a)?, &eval(alg, b)?),
        Expr::Sub(a, b) => {
            let b = eval(alg, b)?;
            alg.add(&eval(alg, a)?, &alg.neg(&b))
        }
        Expr::Mul(a, b) => alg.mul(&eval(alg, a)?, &eval(alg, b)?),
        Expr::Div(a, b, sp) => alg.div(&eval(alg, a)?, &eval(alg, b)?, *sp)?,
        Expr::Pow(a, k, sp) => alg.pow(&eval(alg, a)?, *k, *sp)?,
    })
}
