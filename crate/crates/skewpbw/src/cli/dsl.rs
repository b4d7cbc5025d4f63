//! The definition language for presentations.
//!
//! ```text
//! ring QQ(q)[z^+-]
//! algebra uq-sl2 {
//!   vars x, y
//!   sigma x { z -> q^-2*z }
//!   sigma_inv x { z -> q^2*z }
//!   sigma y { z -> q^2*z }
//!   sigma_inv y { z -> q^-2*z }
//!   rel y*x = x*y − (z − z^-1)/(q − q^-1)
//! }
//! ```
//!
//! Every further `vars` line opens a new level whose coefficient algebra is
//! everything declared before it. A relation `x*t = …` with `t` a ring
//! generator defines `σ_x(t)` and `δ_x(t)`; a relation between two
//! variables is solved for the out-of-order word.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::text::{self, err, show_tok, Algebra, Cursor, Expr, Span, SyntaxError, Tok};
use crate::coeff::{Ring, RingDesc, RingElem};
use crate::engine::mul_terms;
use crate::poly::{constant_terms, render_terms, terms_add, terms_add_all, unit_exp, Terms};
use crate::presentation::{Presentation, Var};
use crate::quantum::QuantumPresentation;

/// A parsed algebra: either a plain presentation or a localized one.
#[derive(Clone, Debug, PartialEq)]
pub enum Definition {
    Plain(Arc<Presentation>),
    Quantum(QuantumPresentation),
}

impl Definition {
    pub fn presentation(&self) -> &Arc<Presentation> {
        match self {
            Definition::Plain(p) => p,
            Definition::Quantum(q) => &q.core,
        }
    }

    pub fn name(&self) -> &str {
        &self.presentation().name
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MapKind {
    Sigma,
    SigmaInv,
    Delta,
}

#[derive(Debug)]
enum Stmt {
    Vars(Vec<(String, Span)>),
    Invertible(Vec<(String, Span)>),
    Map { kind: MapKind, var: (String, Span), entries: Vec<(String, Span, Expr)> },
    Rel { lhs: Expr, rhs: Expr, span: Span },
}

struct Block {
    name: String,
    ring: RingDesc,
    span: Span,
    stmts: Vec<Stmt>,
}

fn end_of_line(c: &mut Cursor) -> Result<(), SyntaxError> {
    match c.peek() {
        None | Some(Tok::Newline) | Some(Tok::Sym("}")) => Ok(()),
        Some(t) => err(c.span(), format!("unexpected token {} at end of statement", show_tok(t))),
    }
}

fn name_list(c: &mut Cursor) -> Result<Vec<(String, Span)>, SyntaxError> {
    let mut v = vec![];
    loop {
        let sp = c.span();
        v.push((c.ident()?, sp));
        if !c.eat(",") {
            return Ok(v);
        }
    }
}

fn parse_map(c: &mut Cursor) -> Result<Vec<(String, Span, Expr)>, SyntaxError> {
    c.expect("{")?;
    let mut entries = vec![];
    loop {
        c.skip_newlines();
        if c.eat("}") {
            return Ok(entries);
        }
        let sp = c.span();
        let g = c.ident()?;
        c.expect("->")?;
        let e = c.expr()?;
        entries.push((g, sp, e));
        c.skip_newlines();
        if !c.eat(",") && !c.eat(";") {
            c.skip_newlines();
            c.expect("}")?;
            return Ok(entries);
        }
    }
}

fn parse_block(c: &mut Cursor, ring: &RingDesc) -> Result<Block, SyntaxError> {
    let span = c.span();
    let mut name = String::new();
    while !matches!(c.peek(), Some(Tok::Sym("{")) | None | Some(Tok::Newline)) {
        name.push_str(&match c.next().unwrap() {
            Tok::Num(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Sym(s) => s.to_string(),
            Tok::Newline => unreachable!(),
        });
    }
    if name.is_empty() {
        return err(span, "algebra name expected");
    }
    c.expect("{")?;
    let mut stmts = vec![];
    loop {
        c.skip_newlines();
        if c.eat("}") {
            break;
        }
        let sp = c.span();
        let kw = match c.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            None => return err(sp, "unterminated algebra block"),
            Some(t) => return err(sp, format!("unexpected token {}", show_tok(t))),
        };
        c.next();
        let st = match kw.as_str() {
            "vars" => Stmt::Vars(name_list(c)?),
            "invertible" => Stmt::Invertible(name_list(c)?),
            "sigma" | "sigma_inv" | "delta" => {
                let vsp = c.span();
                let v = c.ident()?;
                let kind = match kw.as_str() {
                    "sigma" => MapKind::Sigma,
                    "sigma_inv" => MapKind::SigmaInv,
                    _ => MapKind::Delta,
                };
                Stmt::Map { kind, var: (v, vsp), entries: parse_map(c)? }
            }
            "rel" => {
                let lhs = c.expr()?;
                c.expect("=")?;
                let rhs = c.expr()?;
                Stmt::Rel { lhs, rhs, span: sp }
            }
            other => return err(sp, format!("unknown statement '{other}'")),
        };
        end_of_line(c)?;
        stmts.push(st);
    }
    Ok(Block { name, ring: ring.clone(), span, stmts })
}

/// Parse every algebra block of a document.
pub fn parse_document(src: &str) -> Result<Vec<Definition>, SyntaxError> {
    let toks = text::tokenize(src)?;
    let mut c = Cursor::new(&toks);
    let mut ring: Option<RingDesc> = None;
    let mut out = vec![];
    loop {
        c.skip_newlines();
        if c.at_end() {
            break;
        }
        let sp = c.span();
        match c.ident() {
            Ok(k) if k == "ring" => {
                ring = Some(RingDesc::parse_from(&mut c)?);
                end_of_line(&mut c)?;
            }
            Ok(k) if k == "algebra" => {
                let Some(r) = &ring else {
                    return err(sp, "a ring declaration must precede the algebra");
                };
                let b = parse_block(&mut c, r)?;
                out.push(build(&b)?);
            }
            _ => return err(sp, "expected 'ring' or 'algebra'"),
        }
    }
    Ok(out)
}

/// Parse a document holding exactly one algebra.
pub fn parse_definition(src: &str) -> Result<Definition, SyntaxError> {
    let mut v = parse_document(src)?;
    match v.len() {
        1 => Ok(v.pop().unwrap()),
        0 => err(Span { line: 1, col: 1 }, "no algebra block found"),
        _ => err(Span { line: 1, col: 1 }, "expected a single algebra block"),
    }
}

// ---- formal words ----

#[derive(Clone, Debug)]
enum Atom {
    Var(usize),
    Coef(RingElem),
}

/// `Σ k · w` with `k` a left coefficient and `w` a word of atoms.
type Formal = Vec<(RingElem, Vec<Atom>)>;

fn is_rational(k: &RingElem) -> bool {
    k.terms().len() <= 1
        && k.terms().iter().all(|(e, c)| e.iter().all(|&x| x == 0) && c.as_constant().is_some())
}

struct Words<'a> {
    p: &'a Presentation,
}

impl Words<'_> {
    fn times(&self, a: &(RingElem, Vec<Atom>), b: &(RingElem, Vec<Atom>)) -> (RingElem, Vec<Atom>) {
        if a.1.is_empty() || is_rational(&b.0) {
            let mut w = a.1.clone();
            w.extend(b.1.iter().cloned());
            return (a.0.mul(&b.0), w);
        }
        let mut w = a.1.clone();
        match w.last_mut() {
            Some(Atom::Coef(c)) => *c = c.mul(&b.0),
            _ => w.push(Atom::Coef(b.0.clone())),
        }
        for at in &b.1 {
            match (w.last_mut(), at) {
                (Some(Atom::Coef(c)), Atom::Coef(d)) => *c = c.mul(d),
                _ => w.push(at.clone()),
            }
        }
        (a.0.clone(), w)
    }
}

impl Algebra for Words<'_> {
    type V = Result<Formal, String>;
    fn num(&self, n: &BigInt) -> Self::V {
        Ok(vec![(self.p.ring.num(n), vec![])])
    }
    fn ident(&self, name: &str, span: Span) -> Result<Self::V, SyntaxError> {
        if let Ok(i) = self.p.var_index(name) {
            return Ok(Ok(vec![(self.p.ring.one(), vec![Atom::Var(i)])]));
        }
        match self.p.ring.gen(name) {
            Ok(g) => Ok(Ok(vec![(g, vec![])])),
            Err(_) => err(span, format!("unknown identifier '{name}'")),
        }
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        let mut v = a.clone()?;
        v.extend(b.clone()?);
        Ok(v)
    }
    fn neg(&self, a: &Self::V) -> Self::V {
        Ok(a.clone()?.into_iter().map(|(k, w)| (k.neg(), w)).collect())
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        let (a, b) = (a.clone()?, b.clone()?);
        Ok(a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).map(|(x, y)| self.times(x, y)).collect())
    }
    fn div(&self, a: &Self::V, b: &Self::V, span: Span) -> Result<Self::V, SyntaxError> {
        let b = match b {
            Ok(b) => b,
            Err(e) => return Ok(Err(e.clone())),
        };
        let mut k = self.p.ring.zero();
        for (c, w) in b {
            if !w.is_empty() {
                return err(span, "division by an expression involving variables");
            }
            k = k.add(c);
        }
        match k.try_invert() {
            Some(i) => Ok(self.mul(a, &Ok(vec![(i, vec![])]))),
            None => err(span, format!("division by non-unit {k}")),
        }
    }
    fn pow(&self, a: &Self::V, k: i64, span: Span) -> Result<Self::V, SyntaxError> {
        let a = match a {
            Ok(a) => a,
            Err(e) => return Ok(Err(e.clone())),
        };
        if k < 0 {
            let mut c = self.p.ring.zero();
            for (x, w) in a {
                if !w.is_empty() {
                    return err(span, "negative power of an expression involving variables");
                }
                c = c.add(x);
            }
            return match c.pow(k) {
                Some(v) => Ok(Ok(vec![(v, vec![])])),
                None => err(span, format!("negative power of non-unit {c}")),
            };
        }
        let mut acc: Self::V = Ok(vec![(self.p.ring.one(), vec![])]);
        for _ in 0..k {
            acc = self.mul(&acc, &Ok(a.clone()));
        }
        Ok(acc)
    }
}

fn formal(p: &Presentation, e: &Expr, span: Span) -> Result<Formal, SyntaxError> {
    text::eval(&Words { p }, e)?.or_else(|m| err(span, m))
}

/// Multiply out a formal sum with the rules known so far.
fn normalize(p: &Arc<Presentation>, f: &Formal) -> Terms {
    let n = p.nvars();
    let mut out = Terms::new();
    for (k, w) in f {
        let mut t = constant_terms(k, n);
        for a in w {
            t = match a {
                Atom::Var(i) => {
                    let mut x = Terms::new();
                    terms_add(&mut x, unit_exp(n, *i), p.ring.one());
                    mul_terms(p, &t, &x)
                }
                Atom::Coef(c) => p.right_mul_coeff(&t, c),
            };
        }
        terms_add_all(&mut out, &t);
    }
    out
}

fn ring_value(ring: &Ring, e: &Expr) -> Result<RingElem, SyntaxError> {
    text::eval(ring, e)
}

fn stmt_level(p: &Presentation, s: &Stmt) -> Option<(usize, u8)> {
    match s {
        Stmt::Map { var, .. } => p.var_index(&var.0).ok().map(|i| (p.vars[i].level, 0)),
        Stmt::Rel { lhs, .. } => {
            if let Expr::Mul(a, b) = lhs {
                if let (Expr::Ident(x, _), Expr::Ident(t, _)) = (&**a, &**b) {
                    if let (Ok(i), Ok(_)) = (p.var_index(x), p.gen_index(t)) {
                        return Some((p.vars[i].level, 1));
                    }
                }
            }
            let mut lv = 0;
            collect_idents(lhs, &mut |s| {
                if let Ok(i) = p.var_index(s) {
                    lv = lv.max(p.vars[i].level)
                }
            });
            Some((lv, 2))
        }
        _ => None,
    }
}

fn collect_idents(e: &Expr, f: &mut impl FnMut(&str)) {
    match e {
        Expr::Num(_) => {}
        Expr::Ident(s, _) => f(s),
        Expr::Neg(a) | Expr::Pow(a, _, _) => collect_idents(a, f),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            collect_idents(a, f);
            collect_idents(b, f)
        }
    }
}

fn build(b: &Block) -> Result<Definition, SyntaxError> {
    let ring = Ring::new(b.ring.clone());
    let gens = ring.generators();
    let mut vars: Vec<Var> = vec![];
    let mut level = 0;
    for s in &b.stmts {
        if let Stmt::Vars(names) = s {
            for (nm, sp) in names {
                if vars.iter().any(|v| &v.name == nm) || gens.contains(nm) {
                    return err(*sp, format!("name '{nm}' declared twice"));
                }
                vars.push(Var { name: nm.clone(), level, invertible: false });
            }
            level += 1;
        }
    }
    if vars.is_empty() {
        return err(b.span, "an algebra needs at least one variable");
    }
    for s in &b.stmts {
        if let Stmt::Invertible(names) = s {
            for (nm, sp) in names {
                match vars.iter_mut().find(|v| &v.name == nm) {
                    Some(v) => v.invertible = true,
                    None => return err(*sp, format!("unknown variable '{nm}'")),
                }
            }
        }
    }
    let mut p = Presentation::new(ring.clone(), vars);
    p.name = b.name.clone();
    let mut order: Vec<((usize, u8), usize)> = b
        .stmts
        .iter()
        .enumerate()
        .filter_map(|(k, s)| stmt_level(&p, s).map(|l| (l, k)))
        .collect();
    order.sort();
    for (_, k) in order {
        apply_stmt(&mut p, &b.stmts[k])?;
    }
    for i in 0..p.nvars() {
        if p.sigma[i].is_identity(&ring) && p.sigma[i].inverse_images.is_some() {
            p.sigma[i].inverse_images = None;
        }
    }
    let p = p.clone();
    if p.vars.iter().any(|v| v.invertible) {
        QuantumPresentation::new(p).map(Definition::Quantum).or_else(|e| err(b.span, e.to_string()))
    } else {
        Ok(Definition::Plain(Arc::new(p)))
    }
}

fn apply_stmt(p: &mut Presentation, s: &Stmt) -> Result<(), SyntaxError> {
    match s {
        Stmt::Map { kind, var, entries } => {
            let i = p.var_index(&var.0).or_else(|e| err(var.1, e.to_string()))?;
            for (g, sp, e) in entries {
                p.gen_index(g).or_else(|e| err(*sp, e.to_string()))?;
                match kind {
                    MapKind::Sigma => {
                        let v = ring_value(&p.ring, e)?;
                        p.set_sigma(i, g, v).unwrap();
                    }
                    MapKind::SigmaInv => {
                        let v = ring_value(&p.ring, e)?;
                        p.set_sigma_inverse(i, g, v).unwrap();
                    }
                    MapKind::Delta => {
                        let snap = Arc::new(p.clone());
                        let t = normalize(&snap, &formal(p, e, *sp)?);
                        p.set_delta(i, g, t).unwrap();
                    }
                }
            }
            if *kind == MapKind::SigmaInv {
                p.declare_sigma_invertible(i);
            }
            Ok(())
        }
        Stmt::Rel { lhs, rhs, span } => apply_rel(p, lhs, rhs, *span),
        _ => Ok(()),
    }
}

fn apply_rel(p: &mut Presentation, lhs: &Expr, rhs: &Expr, span: Span) -> Result<(), SyntaxError> {
    let n = p.nvars();
    if let Expr::Mul(a, b) = lhs {
        if let (Expr::Ident(x, _), Expr::Ident(t, _)) = (&**a, &**b) {
            if let (Ok(j), Ok(_)) = (p.var_index(x), p.gen_index(t)) {
                let snap = Arc::new(p.clone());
                let r = normalize(&snap, &formal(p, rhs, span)?);
                let ej = unit_exp(n, j);
                let lv = p.vars[j].level;
                let mut sig = p.ring.zero();
                let mut del = Terms::new();
                for (e, k) in r {
                    if e == ej {
                        sig = k;
                    } else if e.iter().zip(&p.vars).all(|(&x, v)| x == 0 || v.level < lv) {
                        terms_add(&mut del, e, k);
                    } else {
                        return err(span, format!("right-hand side must have the form σ({t})*{x} + δ({t})"));
                    }
                }
                p.set_sigma(j, t, sig).unwrap();
                p.set_delta(j, t, del).unwrap();
                return Ok(());
            }
        }
    }
    let mut f = formal(p, lhs, span)?;
    f.extend(formal(p, rhs, span)?.into_iter().map(|(k, w)| (k.neg(), w)));
    // the rule being defined is the largest out-of-order pair; any smaller
    // one is rewritten with the rules already in place
    let pair = f
        .iter()
        .filter_map(|(_, w)| match w.as_slice() {
            [Atom::Var(a), Atom::Var(b)] if a > b => Some((*a, *b)),
            _ => None,
        })
        .max();
    let Some((j, i)) = pair else {
        return err(span, "relation must contain a pair of variables out of order");
    };
    let mut u = p.ring.zero();
    let mut rest: Formal = vec![];
    for (k, w) in f {
        if matches!(w.as_slice(), [Atom::Var(a), Atom::Var(b)] if (*a, *b) == (j, i)) {
            u = u.add(&k);
        } else {
            rest.push((k, w));
        }
    }
    for (_, w) in &rest {
        let pos = |x: usize| w.iter().position(|a| matches!(a, Atom::Var(v) if *v == x));
        if let (Some(pj), Some(pi)) = (pos(j), pos(i)) {
            if pj < pi {
                return err(span, "relation must be linear in the out-of-order word");
            }
        }
    }
    let ui = match u.try_invert() {
        Some(x) => x.neg(),
        None => {
            return err(
                span,
                format!("coefficient {u} of the out-of-order word is not a unit"),
            )
        }
    };
    let snap = Arc::new(p.clone());
    let r = normalize(&snap, &rest);
    let mut eij = unit_exp(n, i);
    eij[j] = 1;
    let mut c = p.ring.zero();
    let mut tail = Terms::new();
    for (e, k) in r {
        let k = ui.mul(&k);
        if e == eij {
            c = k;
        } else {
            terms_add(&mut tail, e, k);
        }
    }
    p.set_rule(i, j, c, tail);
    Ok(())
}

// ---- emission ----

fn gen_map(p: &Presentation, imgs: &[RingElem]) -> String {
    p.ring
        .generators()
        .iter()
        .zip(imgs)
        .filter(|(g, im)| **im != p.ring.gen(g).unwrap())
        .map(|(g, im)| format!("{g} -> {im}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical text of a presentation.
pub fn emit_presentation(p: &Presentation) -> String {
    let names = p.var_names();
    let lv = p.levels();
    let mut s = format!("ring {}\nalgebra {} {{\n", p.ring.desc(), p.name);
    for l in 0..=p.top_level() {
        let vs: Vec<&str> = p.vars.iter().filter(|v| v.level == l).map(|v| v.name.as_str()).collect();
        s.push_str(&format!("  vars {}\n", vs.join(", ")));
    }
    let inv: Vec<&str> = p.vars.iter().filter(|v| v.invertible).map(|v| v.name.as_str()).collect();
    if !inv.is_empty() {
        s.push_str(&format!("  invertible {}\n", inv.join(", ")));
    }
    for (i, v) in p.vars.iter().enumerate() {
        if !p.sigma[i].is_identity(&p.ring) {
            s.push_str(&format!("  sigma {} {{ {} }}\n", v.name, gen_map(p, &p.sigma[i].images)));
            if let Some(inv) = &p.sigma[i].inverse_images {
                let body = gen_map(p, inv);
                if body.is_empty() {
                    s.push_str(&format!("  sigma_inv {} {{ }}\n", v.name));
                } else {
                    s.push_str(&format!("  sigma_inv {} {{ {} }}\n", v.name, body));
                }
            }
        }
        if !p.delta[i].is_zero() {
            let body: Vec<String> = p
                .ring
                .generators()
                .iter()
                .zip(&p.delta[i].images)
                .filter(|(_, t)| !t.is_empty())
                .map(|(g, t)| format!("{g} -> {}", render_terms(t, &names, &lv)))
                .collect();
            s.push_str(&format!("  delta {} {{ {} }}\n", v.name, body.join(", ")));
        }
    }
    for j in 0..p.nvars() {
        for i in 0..j {
            if p.c.contains_key(&(i, j)) || p.tails.contains_key(&(i, j)) {
                let mut t = p.tail_of(i, j);
                let mut e = unit_exp(p.nvars(), i);
                e[j] = 1;
                terms_add(&mut t, e, p.c_of(i, j));
                s.push_str(&format!(
                    "  rel {}*{} = {}\n",
                    names[j],
                    names[i],
                    render_terms(&t, &names, &lv)
                ));
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn emit(d: &Definition) -> String {
    emit_presentation(d.presentation())
}
