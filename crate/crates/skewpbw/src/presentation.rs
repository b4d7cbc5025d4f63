//! Presentations of skew PBW extensions and their validation.
//!
//! A presentation lists the variables `x_1 < … < x_n`, and for each
//! variable a twist `σ_i` and a σ-derivation `δ_i` on the coefficient ring
//! generators. For each pair `i < j` it gives the rule
//! `x_j x_i → c_ij x_i x_j + d_ij`.
//!
//! Extensions of extensions are stored flattened. Each variable carries a
//! level, and the variables of lower levels form the inner algebra `B` that
//! serves as the coefficient ring of the outer ones. Tails must be affine
//! in the variables of their own level. When both variables of a rule sit
//! on the same level, the tail is an element of `B + Σ B·x_k`. When `x_i`
//! is inner, the tail is `(σ_j(x_i) − c_ij x_i)·x_j + δ_j(x_i)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::coeff::{Frac, Ring, RingElem};
use crate::poly::{
    cmp_levels, constant_terms, render_terms, terms_add, terms_add_all, terms_scale, unit_exp,
    Exp, SkewPoly, Terms,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub level: usize,
    pub invertible: bool,
}

/// Images of the coefficient ring generators (field generators first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoSpec {
    pub images: Vec<RingElem>,
    pub inverse_images: Option<Vec<RingElem>>,
}

impl EndoSpec {
    pub fn identity(ring: &Ring) -> EndoSpec {
        let images = ring.generators().iter().map(|g| ring.gen(g).unwrap()).collect();
        EndoSpec { images, inverse_images: None }
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        self.images
            .iter()
            .zip(ring.generators())
            .all(|(im, g)| *im == ring.gen(&g).unwrap())
    }
}

/// Images of the coefficient ring generators under a σ-derivation. The
/// values live in the inner algebra, so they are stored as terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivSpec {
    pub images: Vec<Terms>,
}

impl DerivSpec {
    pub fn zero(ring: &Ring) -> DerivSpec {
        DerivSpec { images: vec![Terms::new(); ring.generators().len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|t| t.is_empty())
    }
}

/// The lower-order part `d_ij` of a commutation rule.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tail {
    pub terms: Terms,
}

impl Tail {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant part (for single-level presentations).
    pub fn constant(&self, ring: &Ring) -> RingElem {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| ring.zero())
    }

    /// Coefficients of the degree-one monomials.
    pub fn linear(&self) -> BTreeMap<usize, RingElem> {
        self.terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<i32>() == 1 && e.iter().all(|&x| x >= 0))
            .map(|(e, c)| (e.iter().position(|&x| x == 1).unwrap(), c.clone()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub findings: Vec<Finding>,
    pub confluence_degree: Option<usize>,
}

impl ValidationReport {
    fn new() -> Self {
        ValidationReport { ok: true, findings: vec![], confluence_degree: None }
    }

    fn push(&mut self, severity: Severity, location: impl Into<String>, message: impl Into<String>) {
        if severity == Severity::Error {
            self.ok = false;
        }
        self.findings.push(Finding { severity, location: location.into(), message: message.into() });
    }

    pub fn merge(&mut self, o: ValidationReport) {
        self.ok &= o.ok;
        self.findings.extend(o.findings);
        if o.confluence_degree.is_some() {
            self.confluence_degree = o.confluence_degree;
        }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for f in &self.findings {
            s.push_str(&format!("{}: {}: {}\n", f.severity, f.location, f.message));
        }
        match self.confluence_degree {
            Some(d) => s.push_str(&format!(
                "{} (overlaps checked up to degree {d})\n",
                if self.ok { "ok" } else { "FAILED" }
            )),
            None => s.push_str(if self.ok { "ok\n" } else { "FAILED\n" }),
        }
        s
    }

    pub fn render_records(&self) -> String {
        let mut s = String::new();
        for f in &self.findings {
            s.push_str(&format!(
                "severity={} location={} message={}\n",
                f.severity,
                f.location.replace(' ', "_"),
                f.message
            ));
        }
        s.push_str(&format!(
            "ok={} confluence_degree={}\n",
            self.ok,
            self.confluence_degree.map_or("none".to_string(), |d| d.to_string())
        ));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("unknown variable '{0}'")]
    UnknownVar(String),
    #[error("unknown ring generator '{0}'")]
    UnknownGenerator(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported nesting: {0}")]
    UnsupportedNesting(String),
    #[error("presentation is not bijective: {0}")]
    NotBijective(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
}

/// Per-variable data derived from the specs.
#[derive(Debug)]
pub(crate) struct Derived {
    pub fimg: Vec<Vec<Frac>>,
    pub pimg: Vec<Vec<RingElem>>,
    pub finv: Vec<Option<Vec<Frac>>>,
    pub pinv: Vec<Option<Vec<RingElem>>>,
    pub sigma_id: Vec<bool>,
    pub delta_zero: Vec<bool>,
    pub levels: Vec<usize>,
}

#[derive(Debug, Default)]
pub(crate) struct Memo {
    pub var_mon: HashMap<(usize, Exp), Terms>,
    pub mon_mon: HashMap<(Exp, Exp), Terms>,
}

/// A skew PBW extension `σ(R)⟨x_1,…,x_n⟩`.
pub struct Presentation {
    pub name: String,
    pub ring: Ring,
    pub vars: Vec<Var>,
    pub sigma: Vec<EndoSpec>,
    pub delta: Vec<DerivSpec>,
    /// `c[(i, j)]` for `i < j`; absent pairs mean 1.
    pub c: BTreeMap<(usize, usize), RingElem>,
    /// `tails[(i, j)]` for `i < j`; absent pairs mean 0.
    pub tails: BTreeMap<(usize, usize), Tail>,
    pub(crate) derived: OnceLock<Derived>,
    pub(crate) memo: Mutex<Memo>,
    pub(crate) memo_enabled: bool,
}

impl Clone for Presentation {
    fn clone(&self) -> Self {
        Presentation {
            name: self.name.clone(),
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            sigma: self.sigma.clone(),
            delta: self.delta.clone(),
            c: self.c.clone(),
            tails: self.tails.clone(),
            derived: OnceLock::new(),
            memo: Mutex::new(Memo::default()),
            memo_enabled: self.memo_enabled,
        }
    }
}

impl PartialEq for Presentation {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring
            && self.vars == o.vars
            && self.sigma == o.sigma
            && self.delta == o.delta
            && self.c == o.c
            && self.tails == o.tails
    }
}
impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({} over {})", self.name, self.ring.desc())
    }
}

impl Presentation {
    /// All twists identity, derivations zero, `c_ij = 1`, tails zero.
    pub fn new(ring: Ring, vars: Vec<Var>) -> Presentation {
        let n = vars.len();
        Presentation {
            name: String::new(),
            sigma: vec![EndoSpec::identity(&ring); n],
            delta: vec![DerivSpec::zero(&ring); n],
            ring,
            vars,
            c: BTreeMap::new(),
            tails: BTreeMap::new(),
            derived: OnceLock::new(),
            memo: Mutex::new(Memo::default()),
            memo_enabled: true,
        }
    }

    /// Single-level presentation with the given variable names.
    pub fn with_vars(ring: Ring, names: &[&str]) -> Presentation {
        let vars = names
            .iter()
            .map(|n| Var { name: n.to_string(), level: 0, invertible: false })
            .collect();
        Presentation::new(ring, vars)
    }

    fn touch(&mut self) {
        self.derived = OnceLock::new();
        *self.memo.get_mut().unwrap() = Memo::default();
    }

    pub fn set_memo(&mut self, on: bool) {
        self.memo_enabled = on;
        self.touch();
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PresentationError> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| PresentationError::UnknownVar(name.to_string()))
    }

    pub fn gen_index(&self, name: &str) -> Result<usize, PresentationError> {
        self.ring
            .generators()
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))
    }

    pub fn levels(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.level).collect()
    }

    pub fn top_level(&self) -> usize {
        self.vars.iter().map(|v| v.level).max().unwrap_or(0)
    }

    pub fn is_nested(&self) -> bool {
        self.top_level() > 0
    }

    /// Indices of the outermost variables.
    pub fn top_vars(&self) -> Vec<usize> {
        let t = self.top_level();
        (0..self.nvars()).filter(|&i| self.vars[i].level == t).collect()
    }

    pub fn inner_vars(&self) -> Vec<usize> {
        let t = self.top_level();
        (0..self.nvars()).filter(|&i| self.vars[i].level < t).collect()
    }

    /// Restriction of an exponent to the outermost variables.
    pub fn top_part(&self, e: &[i32]) -> Exp {
        let t = self.top_level();
        e.iter().zip(&self.vars).map(|(&x, v)| if v.level == t { x } else { 0 }).collect()
    }

    pub fn inner_part(&self, e: &[i32]) -> Exp {
        let t = self.top_level();
        e.iter().zip(&self.vars).map(|(&x, v)| if v.level < t { x } else { 0 }).collect()
    }

    pub fn cmp_mon(&self, a: &[i32], b: &[i32]) -> std::cmp::Ordering {
        cmp_levels(a, b, &self.derived().levels)
    }

    pub fn c_of(&self, i: usize, j: usize) -> RingElem {
        self.c.get(&(i, j)).cloned().unwrap_or_else(|| self.ring.one())
    }

    pub fn tail_of(&self, i: usize, j: usize) -> Terms {
        self.tails.get(&(i, j)).map(|t| t.terms.clone()).unwrap_or_default()
    }

    // ---- construction ----

    pub fn set_sigma(&mut self, var: usize, gen: &str, image: RingElem) -> Result<(), PresentationError> {
        let g = self.gen_index(gen)?;
        self.sigma[var].images[g] = image;
        self.touch();
        Ok(())
    }

    pub fn set_sigma_inverse(&mut self, var: usize, gen: &str, image: RingElem) -> Result<(), PresentationError> {
        let g = self.gen_index(gen)?;
        let n = self.ring.generators().len();
        let ring = self.ring.clone();
        let inv = self.sigma[var].inverse_images.get_or_insert_with(|| {
            ring.generators().iter().map(|g| ring.gen(g).unwrap()).collect::<Vec<_>>()
        });
        debug_assert_eq!(inv.len(), n);
        inv[g] = image;
        self.touch();
        Ok(())
    }

    /// Declare that `σ_var` is an automorphism whose inverse fixes every
    /// generator not set explicitly.
    pub fn declare_sigma_invertible(&mut self, var: usize) {
        let ring = self.ring.clone();
        self.sigma[var].inverse_images.get_or_insert_with(|| {
            ring.generators().iter().map(|g| ring.gen(g).unwrap()).collect::<Vec<_>>()
        });
        self.touch();
    }

    pub fn set_delta(&mut self, var: usize, gen: &str, image: Terms) -> Result<(), PresentationError> {
        let g = self.gen_index(gen)?;
        self.delta[var].images[g] = image;
        self.touch();
        Ok(())
    }

    /// Set the rule `x_j x_i → c x_i x_j + tail` (`i < j`).
    pub fn set_rule(&mut self, i: usize, j: usize, c: RingElem, tail: Terms) {
        assert!(i < j, "rules are stored for i < j");
        if c.is_one() {
            self.c.remove(&(i, j));
        } else {
            self.c.insert((i, j), c);
        }
        if tail.is_empty() {
            self.tails.remove(&(i, j));
        } else {
            self.tails.insert((i, j), Tail { terms: tail });
        }
        self.touch();
    }

    pub(crate) fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| {
            let nf = self.ring.nf();
            let split = |imgs: &Vec<RingElem>| -> (Vec<Frac>, Vec<RingElem>) {
                let f = imgs[..nf]
                    .iter()
                    .map(|r| r.as_field().unwrap_or_else(|| Frac::zero(nf)))
                    .collect();
                (f, imgs[nf..].to_vec())
            };
            let mut d = Derived {
                fimg: vec![],
                pimg: vec![],
                finv: vec![],
                pinv: vec![],
                sigma_id: vec![],
                delta_zero: vec![],
                levels: self.levels(),
            };
            for i in 0..self.nvars() {
                let (f, p) = split(&self.sigma[i].images);
                d.fimg.push(f);
                d.pimg.push(p);
                match &self.sigma[i].inverse_images {
                    Some(inv) => {
                        let (f, p) = split(inv);
                        d.finv.push(Some(f));
                        d.pinv.push(Some(p));
                    }
                    None => {
                        d.finv.push(None);
                        d.pinv.push(None);
                    }
                }
                d.sigma_id.push(self.sigma[i].is_identity(&self.ring));
                d.delta_zero.push(self.delta[i].is_zero());
            }
            d
        })
    }

    // ---- twists and derivations on coefficients ----

    /// `σ_i(r)` for a coefficient `r`.
    pub fn sigma_apply(&self, i: usize, r: &RingElem) -> RingElem {
        let d = self.derived();
        if d.sigma_id[i] || r.is_zero() {
            return r.clone();
        }
        r.substitute(&d.fimg[i], &d.pimg[i])
            .expect("twist image of a Laurent generator must be a unit")
    }

    /// `σ_i^{-1}(r)` via the declared inverse spec.
    pub fn sigma_inv_apply(&self, i: usize, r: &RingElem) -> Result<RingElem, PresentationError> {
        let d = self.derived();
        if d.sigma_id[i] || r.is_zero() {
            return Ok(r.clone());
        }
        match (&d.finv[i], &d.pinv[i]) {
            (Some(f), Some(p)) => r
                .substitute(f, p)
                .ok_or_else(|| PresentationError::InvalidSpec("inverse image not a unit".into())),
            _ => Err(PresentationError::NotBijective(format!(
                "no inverse declared for the twist of {}",
                self.vars[i].name
            ))),
        }
    }

    /// `δ_i(r)` for a coefficient `r`, as an element of the inner algebra.
    pub fn delta_apply(&self, i: usize, r: &RingElem) -> Terms {
        let d = self.derived();
        if d.delta_zero[i] || r.is_zero() {
            return Terms::new();
        }
        let ring = &self.ring;
        let nf = ring.nf();
        let gens = ring.generators();
        let mut total = Terms::new();
        for (e, c) in r.terms() {
            // walk the factors c, t_1^{e_1}, … keeping (P, σ(P), δ(P))
            let p0 = ring.from_frac(c.clone());
            let dp0 = self.delta_field(i, c);
            let mut sp = self.sigma_apply(i, &p0);
            let mut dp = dp0;
            for (k, &ek) in e.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                let g = &gens[nf + k];
                let t = ring.gen(g).unwrap();
                let (f, sf, df) = if ek > 0 {
                    (t.clone(), self.sigma_apply(i, &t), self.delta[i].images[nf + k].clone())
                } else {
                    let ti = t.try_invert().unwrap();
                    let st = self.sigma_apply(i, &t);
                    let sti = st.try_invert().expect("twist of a Laurent generator must be a unit");
                    // δ(t^{-1}) = −σ(t)^{-1} δ(t) t^{-1}
                    let dt = &self.delta[i].images[nf + k];
                    let left = terms_scale(dt, &sti.neg());
                    let dti = self.right_mul_coeff(&left, &ti);
                    (ti, sti, dti)
                };
                for _ in 0..ek.unsigned_abs() {
                    // δ(P f) = σ(P) δ(f) + δ(P) f
                    let mut nd = terms_scale(&df, &sp);
                    terms_add_all(&mut nd, &self.right_mul_coeff(&dp, &f));
                    dp = nd;
                    sp = sp.mul(&sf);
                }
            }
            terms_add_all(&mut total, &dp);
        }
        total
    }

    /// δ_i on an element of the bottom field, via the quotient rule
    /// δ(n/d) = (δ(n) − σ(n/d) δ(d)) d^{-1}.
    fn delta_field(&self, i: usize, c: &Frac) -> Terms {
        let nf = self.ring.nf();
        if self.delta[i].images[..nf].iter().all(|t| t.is_empty()) {
            return Terms::new();
        }
        let ring = &self.ring;
        let poly_delta = |p: &crate::coeff::MPoly| -> Terms {
            let mut total = Terms::new();
            for (e, q) in &p.terms {
                let mut scur = ring.rational(q.clone());
                let mut dcur = Terms::new();
                for (k, &ek) in e.iter().enumerate() {
                    let t = ring.from_frac(Frac::var(nf, k));
                    let st = self.sigma_apply(i, &t);
                    for _ in 0..ek {
                        let mut nd = terms_scale(&self.delta[i].images[k], &scur);
                        terms_add_all(&mut nd, &self.right_mul_coeff(&dcur, &t));
                        dcur = nd;
                        scur = scur.mul(&st);
                    }
                }
                terms_add_all(&mut total, &dcur);
            }
            total
        };
        let dn = poly_delta(&c.num);
        if c.den.is_one() {
            return dn;
        }
        let dd = poly_delta(&c.den);
        let sc = self.sigma_apply(i, &ring.from_frac(c.clone()));
        let mut t = dn;
        terms_add_all(&mut t, &terms_scale(&dd, &sc.neg()));
        let dinv = ring.from_frac(Frac::from_poly(c.den.clone())).try_invert().unwrap();
        self.right_mul_coeff(&t, &dinv)
    }

    /// `b · r` for `b` in the inner algebra and a coefficient `r`.
    pub fn right_mul_coeff(&self, b: &Terms, r: &RingElem) -> Terms {
        if b.is_empty() || r.is_zero() {
            return Terms::new();
        }
        if b.keys().all(|e| e.iter().all(|&x| x == 0)) {
            return b.iter().map(|(e, c)| (e.clone(), c.mul(r))).filter(|(_, c)| !c.is_zero()).collect();
        }
        let rc = constant_terms(r, self.nvars());
        crate::engine::mul_terms(self, b, &rc)
    }

    // ---- predicates ----

    /// All derivations and tails vanish on the outermost level.
    pub fn is_quasi_commutative(&self) -> bool {
        let top = self.top_level();
        let tv = self.top_vars();
        tv.iter().all(|&j| self.delta[j].is_zero())
            && self.tails.iter().all(|(&(i, j), t)| {
                if self.vars[j].level != top {
                    return true;
                }
                if self.vars[i].level == top {
                    return t.is_zero();
                }
                // cross-level rule: only the σ-part (terms containing x_j) may remain
                t.terms.keys().all(|e| e[j] == 1)
            })
    }

    /// Every twist has a verified inverse and every `c_ij` is a unit.
    pub fn is_bijective(&self) -> bool {
        self.bijectivity_findings().is_empty()
    }

    fn bijectivity_findings(&self) -> Vec<(String, String)> {
        let mut out = vec![];
        for i in 0..self.nvars() {
            let name = &self.vars[i].name;
            if self.derived().sigma_id[i] {
                continue;
            }
            if self.sigma[i].inverse_images.is_none() {
                out.push((format!("sigma {name}"), "no inverse declared".to_string()));
                continue;
            }
            for g in self.ring.generators() {
                let t = self.ring.gen(&g).unwrap();
                let ok = self
                    .sigma_inv_apply(i, &t)
                    .ok()
                    .map(|s| self.sigma_apply(i, &s) == t)
                    .unwrap_or(false)
                    && self
                        .sigma_inv_apply(i, &self.sigma_apply(i, &t))
                        .map(|s| s == t)
                        .unwrap_or(false);
                if !ok {
                    out.push((format!("sigma {name}"), format!("inverse does not round-trip on {g}")));
                }
            }
        }
        for (&(i, j), c) in &self.c {
            if !c.is_unit() {
                out.push((self.pair_label(i, j), format!("constant {c} is not a unit")));
            }
        }
        out
    }

    pub fn pair_label(&self, i: usize, j: usize) -> String {
        format!("rel {}*{}", self.vars[j].name, self.vars[i].name)
    }

    /// Element of the inner algebra below `level`?
    fn below_level(&self, t: &Terms, level: usize) -> bool {
        t.keys().all(|e| e.iter().zip(&self.vars).all(|(&x, v)| x == 0 || v.level < level))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let n = self.nvars();
        if n == 0 {
            rep.push(Severity::Error, "vars", "at least one variable is required");
            return rep;
        }
        for w in self.vars.windows(2) {
            if w[1].level < w[0].level {
                rep.push(Severity::Error, "vars", "inner variables must precede outer ones");
            }
        }
        let gens = self.ring.generators();
        for i in 0..n {
            let name = &self.vars[i].name;
            for (g, im) in gens.iter().zip(&self.sigma[i].images) {
                if self.ring.is_field_gen(g) {
                    match im.as_field() {
                        Some(f) if !f.is_zero() => {}
                        _ => rep.push(
                            Severity::Error,
                            format!("sigma {name}"),
                            format!("image of field generator {g} must be a nonzero field element"),
                        ),
                    }
                } else if self.ring.is_laurent_gen(g) && !im.is_unit() {
                    rep.push(
                        Severity::Error,
                        format!("sigma {name}"),
                        format!("image of invertible generator {g} must be a unit"),
                    );
                }
            }
            for (g, im) in gens.iter().zip(&self.delta[i].images) {
                if !self.below_level(im, self.vars[i].level) {
                    rep.push(
                        Severity::Error,
                        format!("delta {name}"),
                        format!("image of {g} must lie in the coefficient algebra of {name}"),
                    );
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let loc = self.pair_label(i, j);
                if self.c_of(i, j).is_zero() {
                    rep.push(Severity::Error, &loc, "constant c must be nonzero");
                }
                let tail = self.tail_of(i, j);
                let (li, lj) = (self.vars[i].level, self.vars[j].level);
                for e in tail.keys() {
                    if e.iter().zip(&self.vars).any(|(&x, v)| x != 0 && v.level > lj) {
                        rep.push(Severity::Error, &loc, "tail uses a variable of an outer level");
                    }
                    if e.iter().any(|&x| x < 0) {
                        rep.push(Severity::Error, &loc, "tail has a negative exponent");
                    }
                }
                let level_deg = |e: &Exp| -> i32 {
                    e.iter().zip(&self.vars).filter(|(_, v)| v.level == lj).map(|(&x, _)| x).sum()
                };
                if li == lj {
                    if tail.keys().any(|e| level_deg(e) >= 2) {
                        rep.push(
                            Severity::Error,
                            &loc,
                            "quadratic tail: the lower-order part of a commutation rule must be affine in the variables (constant plus linear terms)",
                        );
                    }
                } else {
                    for e in tail.keys() {
                        let d = level_deg(e);
                        if d > 1 || (d == 1 && e[j] != 1) {
                            rep.push(
                                Severity::Error,
                                &loc,
                                format!(
                                    "tail of a rule against an inner variable may only contain {} to the first power",
                                    self.vars[j].name
                                ),
                            );
                        }
                    }
                    // σ_j(x_i) = c x_i + b with b below x_i
                    let xi = unit_exp(n, i);
                    for e in tail.keys().filter(|e| e[j] == 1) {
                        let mut inner = e.clone();
                        inner[j] = 0;
                        if self.cmp_mon(&inner, &xi) != std::cmp::Ordering::Less {
                            rep.push(
                                Severity::Error,
                                &loc,
                                format!(
                                    "twist of {} must have leading monomial {}",
                                    self.vars[i].name, self.vars[i].name
                                ),
                            );
                        }
                    }
                }
            }
        }
        let bij = self.bijectivity_findings();
        let claims = self.sigma.iter().any(|s| s.inverse_images.is_some());
        if claims {
            for (loc, msg) in &bij {
                rep.push(Severity::Error, loc, msg);
            }
        }
        rep.push(
            Severity::Info,
            "presentation",
            format!(
                "{} variables over {}; quasi-commutative: {}; bijective: {}",
                n,
                self.ring.desc(),
                self.is_quasi_commutative(),
                bij.is_empty()
            ),
        );
        rep
    }

    /// Normal form of the word `x_j x_i` (`i < j`) after one rewrite.
    fn rule_terms(&self, i: usize, j: usize) -> Terms {
        let mut t = self.tail_of(i, j);
        let mut e = unit_exp(self.nvars(), i);
        e[j] = 1;
        terms_add(&mut t, e, self.c_of(i, j));
        t
    }

    /// Normal form of `x_i · r` after one rewrite.
    fn push_rule(&self, i: usize, r: &RingElem) -> Terms {
        let mut t = self.delta_apply(i, r);
        terms_add(&mut t, unit_exp(self.nvars(), i), self.sigma_apply(i, r));
        t
    }

    fn mon(&self, e: Exp) -> Terms {
        let mut t = Terms::new();
        terms_add(&mut t, e, self.ring.one());
        t
    }

    /// Resolve the overlaps of the rewriting system. Degree-3 overlaps
    /// `x_k x_j x_i`, `x_j x_i t` and `x_j t s` are always checked; for a
    /// bound above 3 the bracketings of every decreasing word up to that
    /// length are compared as well. Passing is evidence, not a proof, that
    /// the standard monomials form a basis.
    pub fn check_confluence(&self, degree_bound: usize) -> ValidationReport {
        use crate::engine::mul_terms;
        let mut rep = ValidationReport::new();
        let bound = degree_bound.max(3);
        rep.confluence_degree = Some(bound);
        let n = self.nvars();
        let names = self.var_names();
        let lv = self.levels();
        let show = |t: &Terms| render_terms(t, &names, &lv);
        let mismatch = |rep: &mut ValidationReport, loc: String, a: &Terms, b: &Terms| {
            if a != b {
                rep.push(Severity::Error, loc, format!("overlap does not resolve: {} ≠ {}", show(a), show(b)));
            }
        };
        let x = |i: usize| self.mon(unit_exp(n, i));
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let l = mul_terms(self, &x(k), &self.rule_terms(i, j));
                    let r = mul_terms(self, &self.rule_terms(j, k), &x(i));
                    mismatch(
                        &mut rep,
                        format!("overlap {}*{}*{}", names[k], names[j], names[i]),
                        &l,
                        &r,
                    );
                }
            }
        }
        let gens = self.ring.generators();
        let gen_elems: Vec<(String, RingElem)> =
            gens.iter().map(|g| (g.clone(), self.ring.gen(g).unwrap())).collect();
        for j in 0..n {
            for i in 0..j {
                for (g, t) in &gen_elems {
                    let l = mul_terms(self, &x(j), &self.push_rule(i, t));
                    let r = mul_terms(self, &self.rule_terms(i, j), &constant_terms(t, n));
                    mismatch(&mut rep, format!("overlap {}*{}*{}", names[j], names[i], g), &l, &r);
                }
            }
        }
        for j in 0..n {
            if self.delta[j].is_zero() && !self.is_nested() {
                continue;
            }
            for (a, (g, t)) in gen_elems.iter().enumerate() {
                for (h, s) in &gen_elems[a..] {
                    let l = mul_terms(self, &self.push_rule(j, t), &constant_terms(s, n));
                    let r = mul_terms(self, &self.push_rule(j, s), &constant_terms(t, n));
                    mismatch(&mut rep, format!("overlap {}*{}*{}", names[j], g, h), &l, &r);
                }
                if let Some(ti) = t.try_invert().filter(|_| self.ring.is_laurent_gen(g)) {
                    let l = mul_terms(self, &self.push_rule(j, t), &constant_terms(&ti, n));
                    mismatch(&mut rep, format!("overlap {}*{}*{}^-1", names[j], g, g), &l, &x(j));
                }
            }
        }
        for len in 4..=bound {
            for word in decreasing_words(n, len) {
                let fact: Vec<Terms> = word.iter().map(|&i| x(i)).collect();
                let left = fact[1..].iter().fold(fact[0].clone(), |acc, f| mul_terms(self, &acc, f));
                let right = fact[..len - 1]
                    .iter()
                    .rev()
                    .fold(fact[len - 1].clone(), |acc, f| mul_terms(self, f, &acc));
                let h = len / 2;
                let lo = fact[1..h].iter().fold(fact[0].clone(), |acc, f| mul_terms(self, &acc, f));
                let hi = fact[h + 1..].iter().fold(fact[h].clone(), |acc, f| mul_terms(self, &acc, f));
                let mid = mul_terms(self, &lo, &hi);
                let loc = format!(
                    "word {}",
                    word.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join("*")
                );
                mismatch(&mut rep, loc.clone(), &left, &right);
                mismatch(&mut rep, loc, &left, &mid);
            }
        }
        rep
    }

    /// Re-express a nested presentation on a single level when the result
    /// stays affine.
    pub fn flatten(&self) -> Result<Presentation, PresentationError> {
        if !self.is_nested() {
            return Ok(self.clone());
        }
        let mut p = self.clone();
        for v in &mut p.vars {
            v.level = 0;
        }
        p.touch();
        for (&(i, j), t) in &p.tails {
            if t.terms.keys().any(|e| e.iter().sum::<i32>() >= 2) {
                return Err(PresentationError::UnsupportedNesting(format!(
                    "{} has a tail of degree ≥ 2 once levels are merged",
                    p.pair_label(i, j)
                )));
            }
        }
        for (i, d) in p.delta.iter().enumerate() {
            if d.images.iter().any(|t| t.keys().any(|e| e.iter().any(|&x| x != 0))) {
                return Err(PresentationError::UnsupportedNesting(format!(
                    "delta of {} takes values outside the coefficient ring",
                    p.vars[i].name
                )));
            }
        }
        Ok(p)
    }

    /// The presentation of the inner algebra (all but the outermost level).
    pub fn nested_base(&self) -> Option<Presentation> {
        if !self.is_nested() {
            return None;
        }
        let inner = self.inner_vars();
        let m = inner.len();
        let mut p = Presentation::new(self.ring.clone(), inner.iter().map(|&i| self.vars[i].clone()).collect());
        p.name = format!("{}/base", self.name);
        let cut = |t: &Terms| -> Terms { t.iter().map(|(e, c)| (e[..m].to_vec(), c.clone())).collect() };
        for &i in &inner {
            p.sigma[i] = self.sigma[i].clone();
            p.delta[i] = DerivSpec { images: self.delta[i].images.iter().map(cut).collect() };
        }
        for (&(i, j), c) in &self.c {
            if j < m {
                p.c.insert((i, j), c.clone());
            }
        }
        for (&(i, j), t) in &self.tails {
            if j < m {
                p.tails.insert((i, j), Tail { terms: cut(&t.terms) });
            }
        }
        Some(p)
    }

    /// Human-readable relation table.
    pub fn describe(&self) -> String {
        let names = self.var_names();
        let lv = self.levels();
        let mut s = format!("ring {}\n", self.ring.desc());
        for (i, v) in self.vars.iter().enumerate() {
            for (g, im) in self.ring.generators().iter().zip(&self.sigma[i].images) {
                let t = self.ring.gen(g).unwrap();
                let dl = &self.delta[i].images[self.gen_index(g).unwrap()];
                if *im != t || !dl.is_empty() {
                    let mut rhs = Terms::new();
                    terms_add(&mut rhs, unit_exp(self.nvars(), i), im.clone());
                    terms_add_all(&mut rhs, dl);
                    s.push_str(&format!("{}*{} = {}\n", v.name, g, render_terms(&rhs, &names, &lv)));
                }
            }
        }
        for j in 0..self.nvars() {
            for i in 0..j {
                let mut rhs = self.tail_of(i, j);
                let mut e = unit_exp(self.nvars(), i);
                e[j] = 1;
                terms_add(&mut rhs, e, self.c_of(i, j));
                s.push_str(&format!(
                    "{}*{} = {}\n",
                    self.vars[j].name,
                    self.vars[i].name,
                    render_terms(&rhs, &names, &lv)
                ));
            }
        }
        s
    }

    pub fn arc(self) -> Arc<Presentation> {
        Arc::new(self)
    }
}

/// Apply a twist spec to a coefficient.
pub fn apply_endo(ring: &Ring, s: &EndoSpec, r: &RingElem) -> Result<RingElem, PresentationError> {
    let nf = ring.nf();
    let mut f = Vec::with_capacity(nf);
    for im in &s.images[..nf] {
        match im.as_field() {
            Some(x) if !x.is_zero() => f.push(x),
            _ => {
                return Err(PresentationError::InvalidSpec(format!(
                    "image {im} of a field generator is not a unit"
                )))
            }
        }
    }
    r.substitute(&f, &s.images[nf..])
        .ok_or_else(|| PresentationError::InvalidSpec("negative power of a non-unit image".into()))
}

/// Apply the σ-derivation of variable `var` to a coefficient.
pub fn apply_deriv(p: &Presentation, var: usize, r: &RingElem) -> SkewPoly {
    let arc = Arc::new(p.clone());
    SkewPoly::from_terms(&arc, p.delta_apply(var, r))
}

/// Words `x_{w_1} ⋯ x_{w_len}` with nonincreasing indices and at least one
/// descent.
fn decreasing_words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut w = vec![0usize; len];
    fn rec(n: usize, pos: usize, max: usize, w: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == w.len() {
            if w.first() != w.last() {
                out.push(w.clone());
            }
            return;
        }
        for v in 0..=max.min(n - 1) {
            w[pos] = v;
            rec(n, pos + 1, v, w, out);
        }
    }
    if n > 0 {
        rec(n, 0, n - 1, &mut w, &mut out);
    }
    out
}
