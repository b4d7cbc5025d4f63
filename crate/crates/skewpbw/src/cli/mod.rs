//! Text front end: the definition language, element parsing and the
//! command-line driver.

pub mod commands;
pub mod dsl;

use num_bigint::BigInt;

use crate::coeff::text::{self, err, Algebra, Span, SyntaxError};
use crate::poly::SkewPoly;
pub use dsl::{emit, emit_presentation, parse_definition, parse_document, Definition};

struct Elems<'a> {
    def: &'a Definition,
}

type Val = Result<SkewPoly, String>;

impl Elems<'_> {
    fn times(&self, a: &SkewPoly, b: &SkewPoly) -> Val {
        match self.def {
            Definition::Plain(_) => Ok(a * b),
            Definition::Quantum(q) => q.qmul(a, b).map_err(|e| e.to_string()),
        }
    }
}

impl Algebra for Elems<'_> {
    type V = Val;
    fn num(&self, n: &BigInt) -> Val {
        let p = self.def.presentation();
        Ok(SkewPoly::constant(p, &p.ring.num(n)))
    }
    fn ident(&self, name: &str, span: Span) -> Result<Val, SyntaxError> {
        let p = self.def.presentation();
        if let Ok(i) = p.var_index(name) {
            return Ok(Ok(SkewPoly::var(p, i)));
        }
        match p.ring.gen(name) {
            Ok(g) => Ok(Ok(SkewPoly::constant(p, &g))),
            Err(_) => err(span, format!("unknown identifier '{name}'")),
        }
    }
    fn add(&self, a: &Val, b: &Val) -> Val {
        Ok(a.clone()?.add(b.as_ref().map_err(Clone::clone)?))
    }
    fn neg(&self, a: &Val) -> Val {
        Ok(a.clone()?.neg())
    }
    fn mul(&self, a: &Val, b: &Val) -> Val {
        self.times(a.as_ref().map_err(Clone::clone)?, b.as_ref().map_err(Clone::clone)?)
    }
    fn div(&self, a: &Val, b: &Val, span: Span) -> Result<Val, SyntaxError> {
        let Ok(b) = b else { return Ok(b.clone()) };
        let Some(k) = b.as_constant() else {
            return err(span, "division by an expression involving variables");
        };
        match k.try_invert() {
            Some(i) => Ok(a.clone().map(|a| a.scale_right(&i))),
            None => err(span, format!("division by non-unit {k}")),
        }
    }
    fn pow(&self, a: &Val, k: i64, span: Span) -> Result<Val, SyntaxError> {
        let Ok(a) = a else { return Ok(a.clone()) };
        let p = self.def.presentation();
        if k < 0 {
            if let Some(c) = a.as_constant() {
                return match c.pow(k) {
                    Some(v) => Ok(Ok(SkewPoly::constant(p, &v))),
                    None => err(span, format!("negative power of non-unit {c}")),
                };
            }
            let Definition::Quantum(q) = self.def else {
                return err(span, "negative power of a non-invertible element");
            };
            let single = a.terms().iter().next().filter(|_| a.len() == 1);
            let Some((e, c)) = single else {
                return err(span, "negative power of a sum");
            };
            let inv = q.invert_term(c, e).or_else(|e| err(span, e.to_string()))?;
            let mut acc = Ok(SkewPoly::one(p));
            for _ in 0..k.unsigned_abs() {
                acc = self.times(acc.as_ref().unwrap(), &inv);
                if acc.is_err() {
                    break;
                }
            }
            return Ok(acc);
        }
        let mut acc: Val = Ok(SkewPoly::one(p));
        for _ in 0..k {
            acc = match acc {
                Ok(x) => self.times(&x, a),
                e => return Ok(e),
            };
        }
        Ok(acc)
    }
}

/// Parse an element of the algebra, e.g. `x*y - y*x`.
pub fn parse_expr(src: &str, def: &Definition) -> Result<SkewPoly, SyntaxError> {
    let e = text::parse_expr_text(src)?;
    text::eval(&Elems { def }, &e)?.or_else(|m| err(Span { line: 1, col: 1 }, m))
}
