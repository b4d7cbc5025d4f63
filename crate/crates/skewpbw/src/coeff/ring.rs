use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::frac::Frac;
use super::mpoly::{MPoly, Q};
use super::text::{self, err, Algebra, Cursor, Span, SyntaxError, Tok};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Rationals,
    RationalFunctions,
    Poly,
    Laurent,
}

/// Descriptor of a coefficient ring: `QQ`, `QQ(q,h)`, `B[t1,t2]`, `B[z^+-]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingDesc {
    pub kind: RingKind,
    pub base: Option<Box<RingDesc>>,
    pub generators: Vec<String>,
}

impl RingDesc {
    pub fn rationals() -> Self {
        RingDesc { kind: RingKind::Rationals, base: None, generators: vec![] }
    }

    pub fn rational_functions(gens: &[&str]) -> Self {
        if gens.is_empty() {
            return Self::rationals();
        }
        RingDesc {
            kind: RingKind::RationalFunctions,
            base: None,
            generators: gens.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn poly(self, gens: &[&str]) -> Self {
        if gens.is_empty() {
            return self;
        }
        RingDesc {
            kind: RingKind::Poly,
            base: Some(Box::new(self)),
            generators: gens.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn laurent(self, gens: &[&str]) -> Self {
        if gens.is_empty() {
            return self;
        }
        RingDesc {
            kind: RingKind::Laurent,
            base: Some(Box::new(self)),
            generators: gens.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, RingKind::Rationals | RingKind::RationalFunctions)
    }

    pub fn is_domain(&self) -> bool {
        true
    }

    /// Layers from the innermost field outwards.
    fn layers(&self) -> Vec<&RingDesc> {
        let mut v = vec![self];
        let mut cur = self;
        while let Some(b) = &cur.base {
            v.push(b);
            cur = b;
        }
        v.reverse();
        v
    }

    pub fn parse(src: &str) -> Result<RingDesc, SyntaxError> {
        let toks: Vec<_> =
            text::tokenize(src)?.into_iter().filter(|t| t.0 != Tok::Newline).collect();
        let mut c = Cursor::new(&toks);
        let d = Self::parse_from(&mut c)?;
        if !c.at_end() {
            return err(c.span(), "trailing input after ring descriptor");
        }
        Ok(d)
    }

    pub fn parse_from(c: &mut Cursor) -> Result<RingDesc, SyntaxError> {
        let sp = c.span();
        if c.ident()? != "QQ" {
            return err(sp, "ring descriptor must start with QQ");
        }
        let mut d = RingDesc::rationals();
        if c.eat("(") {
            let mut gens = vec![c.ident()?];
            while c.eat(",") {
                gens.push(c.ident()?);
            }
            c.expect(")")?;
            d = RingDesc { kind: RingKind::RationalFunctions, base: None, generators: gens };
        }
        while c.eat("[") {
            let sp = c.span();
            let mut gens = Vec::new();
            let mut marks = Vec::new();
            loop {
                gens.push(c.ident()?);
                marks.push(c.eat("^+-"));
                if !c.eat(",") {
                    break;
                }
            }
            c.expect("]")?;
            let lau = marks[0];
            if marks.iter().any(|&m| m != lau) {
                return err(sp, "mix of polynomial and Laurent generators in one bracket");
            }
            d = RingDesc {
                kind: if lau { RingKind::Laurent } else { RingKind::Poly },
                base: Some(Box::new(d)),
                generators: gens,
            };
        }
        let all: Vec<&String> = d.layers().iter().flat_map(|l| l.generators.iter()).collect();
        for (i, g) in all.iter().enumerate() {
            if all[..i].contains(g) {
                return err(sp, format!("generator '{g}' declared twice"));
            }
        }
        Ok(d)
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Rationals => write!(f, "QQ"),
            RingKind::RationalFunctions => write!(f, "QQ({})", self.generators.join(",")),
            RingKind::Poly => {
                write!(f, "{}[{}]", self.base.as_ref().unwrap(), self.generators.join(","))
            }
            RingKind::Laurent => {
                let g: Vec<String> = self.generators.iter().map(|g| format!("{g}^+-")).collect();
                write!(f, "{}[{}]", self.base.as_ref().unwrap(), g.join(","))
            }
        }
    }
}

#[derive(Debug)]
pub struct RingData {
    pub desc: RingDesc,
    /// generators of the rational-function field at the bottom of the tower
    pub fgens: Vec<String>,
    /// polynomial and Laurent generators of all upper layers, in order
    pub pgens: Vec<String>,
    pub laurent: Vec<bool>,
}

/// A handle to a coefficient ring; cheap to clone.
///
/// Elements are stored flattened: a map from exponent vectors over all
/// polynomial/Laurent generators to coefficients in the bottom field.
#[derive(Clone, Debug)]
pub struct Ring(pub Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, o: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.desc == o.0.desc
    }
}
impl Eq for Ring {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
}

impl Ring {
    pub fn new(desc: RingDesc) -> Ring {
        let mut fgens = Vec::new();
        let mut pgens = Vec::new();
        let mut laurent = Vec::new();
        for l in desc.layers() {
            match l.kind {
                RingKind::Rationals => {}
                RingKind::RationalFunctions => fgens.extend(l.generators.iter().cloned()),
                RingKind::Poly | RingKind::Laurent => {
                    for g in &l.generators {
                        pgens.push(g.clone());
                        laurent.push(l.kind == RingKind::Laurent);
                    }
                }
            }
        }
        Ring(Arc::new(RingData { desc, fgens, pgens, laurent }))
    }

    pub fn parse(src: &str) -> Result<Ring, SyntaxError> {
        Ok(Ring::new(RingDesc::parse(src)?))
    }

    pub fn qq() -> Ring {
        Ring::new(RingDesc::rationals())
    }

    pub fn desc(&self) -> &RingDesc {
        &self.0.desc
    }

    pub fn nf(&self) -> usize {
        self.0.fgens.len()
    }

    pub fn np(&self) -> usize {
        self.0.pgens.len()
    }

    pub fn is_field(&self) -> bool {
        self.0.pgens.is_empty()
    }

    /// All generator names, field generators first.
    pub fn generators(&self) -> Vec<String> {
        self.0.fgens.iter().chain(self.0.pgens.iter()).cloned().collect()
    }

    pub fn is_laurent_gen(&self, name: &str) -> bool {
        self.0.pgens.iter().position(|g| g == name).is_some_and(|i| self.0.laurent[i])
    }

    pub fn is_field_gen(&self, name: &str) -> bool {
        self.0.fgens.iter().any(|g| g == name)
    }

    pub fn zero(&self) -> RingElem {
        RingElem { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn from_frac(&self, c: Frac) -> RingElem {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; self.np()], c);
        }
        RingElem { ring: self.clone(), terms }
    }

    pub fn one(&self) -> RingElem {
        self.from_frac(Frac::one(self.nf()))
    }

    pub fn rational(&self, c: Q) -> RingElem {
        self.from_frac(Frac::from_q(self.nf(), c))
    }

    pub fn int(&self, n: i64) -> RingElem {
        self.rational(Q::from_integer(BigInt::from(n)))
    }

    pub fn gen(&self, name: &str) -> Result<RingElem, CoeffError> {
        if let Some(i) = self.0.fgens.iter().position(|g| g == name) {
            return Ok(self.from_frac(Frac::var(self.nf(), i)));
        }
        if let Some(i) = self.0.pgens.iter().position(|g| g == name) {
            let mut e = vec![0; self.np()];
            e[i] = 1;
            return Ok(self.monomial(e, Frac::one(self.nf())));
        }
        Err(CoeffError::UnknownGenerator(name.to_string()))
    }

    pub fn monomial(&self, e: Vec<i32>, c: Frac) -> RingElem {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        RingElem { ring: self.clone(), terms }
    }

    pub fn arith(&self, a: &RingElem, b: &RingElem, op: ArithOp) -> Result<RingElem, CoeffError> {
        for x in [a, b] {
            if x.ring != *self {
                return Err(CoeffError::RingMismatch(
                    x.ring.desc().to_string(),
                    self.desc().to_string(),
                ));
            }
        }
        Ok(match op {
            ArithOp::Add => a.add(b),
            ArithOp::Sub => a.sub(b),
            ArithOp::Mul => a.mul(b),
        })
    }

    pub fn parse_elem(&self, src: &str) -> Result<RingElem, SyntaxError> {
        let e = text::parse_expr_text(src)?;
        text::eval(self, &e)
    }
}

impl Algebra for Ring {
    type V = RingElem;
    fn num(&self, n: &BigInt) -> RingElem {
        self.rational(Q::from_integer(n.clone()))
    }
    fn ident(&self, name: &str, span: Span) -> Result<RingElem, SyntaxError> {
        self.gen(name).or_else(|e| err(span, e.to_string()))
    }
    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        a.add(b)
    }
    fn neg(&self, a: &RingElem) -> RingElem {
        a.neg()
    }
    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        a.mul(b)
    }
    fn div(&self, a: &RingElem, b: &RingElem, span: Span) -> Result<RingElem, SyntaxError> {
        match b.try_invert() {
            Some(i) => Ok(a.mul(&i)),
            None => err(span, format!("division by non-unit {b}")),
        }
    }
    fn pow(&self, a: &RingElem, k: i64, span: Span) -> Result<RingElem, SyntaxError> {
        match a.pow(k) {
            Some(p) => Ok(p),
            None => err(span, format!("negative power of non-unit {a}")),
        }
    }
}

/// An element of a coefficient ring in canonical form.
#[derive(Clone, Debug)]
pub struct RingElem {
    ring: Ring,
    terms: BTreeMap<Vec<i32>, Frac>,
}

impl PartialEq for RingElem {
    fn eq(&self, o: &RingElem) -> bool {
        self.terms == o.terms && self.ring == o.ring
    }
}
impl Eq for RingElem {}

impl std::hash::Hash for RingElem {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h)
    }
}

fn add_into(m: &mut BTreeMap<Vec<i32>, Frac>, e: Vec<i32>, c: Frac) {
    if c.is_zero() {
        return;
    }
    match m.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl RingElem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, Frac> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// The field coefficient if the element has no polynomial part.
    pub fn as_field(&self) -> Option<Frac> {
        match self.terms.len() {
            0 => Some(Frac::zero(self.ring.nf())),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check(&self, o: &RingElem) {
        assert!(
            self.ring == o.ring,
            "ring mismatch: {} vs {}",
            self.ring.desc(),
            o.ring.desc()
        );
    }

    pub fn add(&self, o: &RingElem) -> RingElem {
        self.check(o);
        let mut t = self.terms.clone();
        for (e, c) in &o.terms {
            add_into(&mut t, e.clone(), c.clone());
        }
        RingElem { ring: self.ring.clone(), terms: t }
    }

    pub fn neg(&self) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &RingElem) -> RingElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RingElem) -> RingElem {
        self.check(o);
        let mut t = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                add_into(&mut t, e, ca.mul(cb));
            }
        }
        RingElem { ring: self.ring.clone(), terms: t }
    }

    pub fn scale(&self, c: &Frac) -> RingElem {
        if c.is_zero() {
            return self.ring.zero();
        }
        RingElem {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect(),
        }
    }

    /// Units are nonzero field multiples of a monomial in the Laurent generators.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && {
            let (e, _) = self.terms.iter().next().unwrap();
            e.iter().zip(&self.ring.0.laurent).all(|(&x, &l)| x == 0 || l)
        }
    }

    pub fn try_invert(&self) -> Option<RingElem> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let ne: Vec<i32> = e.iter().map(|x| -x).collect();
        Some(self.ring.monomial(ne, c.inv()?))
    }

    pub fn pow(&self, k: i64) -> Option<RingElem> {
        let base = if k < 0 { self.try_invert()? } else { self.clone() };
        let mut n = k.unsigned_abs();
        let mut acc = self.ring.one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        Some(acc)
    }

    /// Apply the ring map sending field generators to `fimg` and
    /// polynomial generators to `pimg`. `None` if a negative power of a
    /// non-unit image is needed.
    pub fn substitute(&self, fimg: &[Frac], pimg: &[RingElem]) -> Option<RingElem> {
        let identity_field = fimg
            .iter()
            .enumerate()
            .all(|(i, f)| *f == Frac::var(self.ring.nf(), i));
        let mut acc = self.ring.zero();
        let mut cache: Vec<BTreeMap<i32, RingElem>> = vec![BTreeMap::new(); pimg.len()];
        for (e, c) in &self.terms {
            let c2 = if identity_field { c.clone() } else { c.substitute(fimg)? };
            let mut t = self.ring.from_frac(c2);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !cache[i].contains_key(&k) {
                    let p = pimg[i].pow(k as i64)?;
                    cache[i].insert(k, p);
                }
                t = t.mul(&cache[i][&k]);
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    /// Total degree in the polynomial generators (max over terms), `None` for zero.
    pub fn poly_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Render in canonical text, wrapped in parentheses when it is not a
    /// single product factor.
    pub fn render_factor(&self) -> (String, bool) {
        let s = self.to_string();
        let simple = self.is_simple();
        (if simple { s } else { format!("({s})") }, simple)
    }

    /// A single positive product like `3*q*t^2` (no sum, no quotient).
    fn is_simple(&self) -> bool {
        if self.terms.len() != 1 {
            return false;
        }
        let c = self.terms.values().next().unwrap();
        c.den.is_one() && c.num.terms.len() == 1 && {
            let q = c.num.terms.values().next().unwrap();
            q.is_positive() && q.denom().is_one()
        }
    }

    /// True when the canonical text starts with a minus sign and the rest is simple.
    pub fn is_negated_simple(&self) -> bool {
        self.neg().is_simple()
    }
}

impl std::ops::Add for &RingElem {
    type Output = RingElem;
    fn add(self, o: &RingElem) -> RingElem {
        RingElem::add(self, o)
    }
}
impl std::ops::Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, o: &RingElem) -> RingElem {
        RingElem::sub(self, o)
    }
}
impl std::ops::Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, o: &RingElem) -> RingElem {
        RingElem::mul(self, o)
    }
}
impl std::ops::Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

// ---- canonical text ----

fn deg(e: &[i32]) -> i32 {
    e.iter().sum()
}

/// Order used for display: descending total degree, then lexicographic.
fn display_cmp(a: &[i32], b: &[i32]) -> Ordering {
    deg(b).cmp(&deg(a)).then_with(|| b.cmp(a))
}

fn render_monomial(e: &[i32], names: &[&str]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(&k, _)| k != 0)
        .map(|(&k, n)| if k == 1 { n.to_string() } else { format!("{n}^{k}") })
        .collect();
    parts.join("*")
}

fn render_q(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Render `Σ c·x^e` with terms keyed by (primary, secondary) exponent blocks.
pub fn render_sum(mut terms: Vec<(Vec<i32>, Vec<i32>, Q)>, pnames: &[&str], fnames: &[&str]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by(|a, b| display_cmp(&a.0, &b.0).then_with(|| display_cmp(&a.1, &b.1)));
    let mut out = String::new();
    for (i, (pe, fe, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let fm = render_monomial(fe, fnames);
        let pm = render_monomial(pe, pnames);
        let mono = match (fm.is_empty(), pm.is_empty()) {
            (true, true) => String::new(),
            (false, true) => fm,
            (true, false) => pm,
            (false, false) => format!("{fm}*{pm}"),
        };
        let body = if mono.is_empty() {
            render_q(&a)
        } else if a.is_one() {
            mono
        } else {
            format!("{}*{}", render_q(&a), mono)
        };
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('−');
                out.push_str(&body)
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body)
            }
            (_, true) => {
                out.push_str(" − ");
                out.push_str(&body)
            }
        }
    }
    out
}

fn mixed_signs(p: &BTreeMap<Vec<i32>, Q>) -> bool {
    let n = p.keys().next().map_or(0, |e| e.len());
    (0..n).any(|i| p.keys().any(|e| e[i] > 0) && p.keys().any(|e| e[i] < 0))
}

fn shift(p: &MPoly, k: &[i32]) -> BTreeMap<Vec<i32>, Q> {
    p.terms
        .iter()
        .map(|(e, c)| (e.iter().zip(k).map(|(&a, &b)| a as i32 - b).collect(), c.clone()))
        .collect()
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let data = &self.ring.0;
        let pn: Vec<&str> = data.pgens.iter().map(|s| s.as_str()).collect();
        let fname: Vec<&str> = data.fgens.iter().map(|s| s.as_str()).collect();
        let nf = fname.len();
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // common denominator of all field coefficients
        let mut den = MPoly::one(nf);
        for c in self.terms.values() {
            if !c.den.is_one() {
                let g = den.gcd(&c.den);
                den = den.mul(&c.den.div_exact(&g).unwrap());
            }
        }
        let mut num: Vec<(Vec<i32>, MPoly)> = Vec::new();
        for (e, c) in &self.terms {
            let scale = den.div_exact(&c.den).unwrap();
            num.push((e.clone(), c.num.mul(&scale)));
        }
        if den.is_one() {
            let terms = num
                .iter()
                .flat_map(|(pe, p)| {
                    p.terms.iter().map(move |(fe, c)| {
                        (pe.clone(), fe.iter().map(|&x| x as i32).collect(), c.clone())
                    })
                })
                .collect();
            return write!(f, "{}", render_sum(terms, &pn, &fname));
        }
        // pull out the largest monomial in the field generators dividing
        // the numerator when that balances the denominator
        let mut k = vec![u32::MAX; nf];
        for (_, p) in &num {
            for e in p.terms.keys() {
                for i in 0..nf {
                    k[i] = k[i].min(e[i]);
                }
            }
        }
        let k: Vec<i32> = k.iter().map(|&x| if x == u32::MAX { 0 } else { x as i32 }).collect();
        let shifted_den = shift(&den, &k);
        let use_shift = k.iter().any(|&x| x != 0) && mixed_signs(&shifted_den);
        let zero = vec![0; nf];
        let kk = if use_shift { &k } else { &zero };
        let nterms: Vec<(Vec<i32>, Vec<i32>, Q)> = num
            .iter()
            .flat_map(|(pe, p)| {
                shift(p, kk).into_iter().map(move |(fe, c)| (pe.clone(), fe, c))
            })
            .collect();
        let dterms: Vec<(Vec<i32>, Vec<i32>, Q)> =
            shift(&den, kk).into_iter().map(|(fe, c)| (vec![], fe, c)).collect();
        let nlen = nterms.len();
        let ns = render_sum(nterms, &pn, &fname);
        let ds = render_sum(dterms.clone(), &[], &fname);
        let ns = if nlen > 1 { format!("({ns})") } else { ns };
        let ds = if dterms.len() > 1 || ds.contains('*') { format!("({ds})") } else { ds };
        write!(f, "{ns}/{ds}")
    }
}
