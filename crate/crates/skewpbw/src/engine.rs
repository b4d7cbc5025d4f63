//! Normal forms of products, twisted coefficients and right expansions.
//!
//! Products of monomials are normalized by peeling the rightmost variable of
//! the left factor and sorting it into the right factor with the rules
//! `x_j x_i → c_ij x_i x_j + d_ij`. Coefficients are pushed left with
//! `x_i r → σ_i(r) x_i + δ_i(r)`. Results for monomial pairs are memoized
//! on the presentation.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::RingElem;
use crate::poly::{
    add_exp, terms_add, terms_add_all, terms_add_scaled, terms_sub, Exp, PolyError, SkewPoly,
    Terms,
};
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("negative exponent at {0} without a declared inverse twist")]
    NegativeExponent(String),
    #[error("operation needs a bijective presentation: {0}")]
    NotBijective(String),
    #[error("exponent must involve only the outermost variables")]
    InnerExponent,
    #[error("coefficient {0} is not in the inner algebra")]
    NotInner(String),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("elimination did not terminate")]
    NoProgress,
}

fn single(e: Exp, c: RingElem) -> Terms {
    let mut t = Terms::new();
    terms_add(&mut t, e, c);
    t
}

fn is_zero_exp(e: &[i32]) -> bool {
    e.iter().all(|&x| x == 0)
}

/// `x_m · x^γ` in normal form.
fn var_times_mon(p: &Presentation, m: usize, g: &[i32]) -> Terms {
    let first = g.iter().position(|&x| x != 0);
    let i = match first {
        Some(i) if i < m => i,
        _ => {
            let mut e = g.to_vec();
            e[m] += 1;
            return single(e, p.ring.one());
        }
    };
    if p.memo_enabled {
        if let Some(t) = p.memo.lock().unwrap().var_mon.get(&(m, g.to_vec())) {
            return t.clone();
        }
    }
    // x_m x_i x^rest = c_im x_i (x_m x^rest) + d_im x^rest
    let mut rest = g.to_vec();
    rest[i] -= 1;
    let inner = var_times_mon(p, m, &rest);
    let mut out = Terms::new();
    let c = p.c_of(i, m);
    terms_add_scaled(&mut out, &var_times_terms(p, i, &inner), &c);
    if let Some(tail) = p.tails.get(&(i, m)) {
        for (e, k) in &tail.terms {
            terms_add_scaled(&mut out, &mon_times_mon(p, e, &rest), k);
        }
    }
    if p.memo_enabled {
        p.memo.lock().unwrap().var_mon.insert((m, g.to_vec()), out.clone());
    }
    out
}

/// `x_i · T` for a normal-form element `T`.
fn var_times_terms(p: &Presentation, i: usize, t: &Terms) -> Terms {
    let mut out = Terms::new();
    for (e, k) in t {
        let s = p.sigma_apply(i, k);
        terms_add_scaled(&mut out, &var_times_mon(p, i, e), &s);
        for (e2, k2) in p.delta_apply(i, k) {
            terms_add_scaled(&mut out, &mon_times_mon(p, &e2, e), &k2);
        }
    }
    out
}

/// `x^α · x^β` in normal form.
pub(crate) fn mon_times_mon(p: &Presentation, a: &[i32], b: &[i32]) -> Terms {
    let last = a.iter().rposition(|&x| x != 0);
    let first = b.iter().position(|&x| x != 0);
    let (m, f) = match (last, first) {
        (Some(m), Some(f)) => (m, f),
        _ => return single(add_exp(a, b), p.ring.one()),
    };
    if m <= f {
        return single(add_exp(a, b), p.ring.one());
    }
    let key = (a.to_vec(), b.to_vec());
    if p.memo_enabled {
        if let Some(t) = p.memo.lock().unwrap().mon_mon.get(&key) {
            return t.clone();
        }
    }
    let mut a1 = a.to_vec();
    a1[m] -= 1;
    let t = var_times_mon(p, m, b);
    let out = mon_times_terms(p, &a1, &t);
    if p.memo_enabled {
        p.memo.lock().unwrap().mon_mon.insert(key, out.clone());
    }
    out
}

/// `x^α · T`.
fn mon_times_terms(p: &Presentation, a: &[i32], t: &Terms) -> Terms {
    if is_zero_exp(a) {
        return t.clone();
    }
    let mut out = Terms::new();
    for (e, k) in t {
        for (e2, k2) in mon_times_coeff(p, a, k) {
            terms_add_scaled(&mut out, &mon_times_mon(p, &e2, e), &k2);
        }
    }
    out
}

fn is_prime_constant(k: &RingElem) -> bool {
    k.terms().len() == 1 && {
        let (e, c) = k.terms().iter().next().unwrap();
        is_zero_exp(e) && c.as_constant().is_some()
    }
}

/// `x^α · k` for a coefficient `k`.
fn mon_times_coeff(p: &Presentation, a: &[i32], k: &RingElem) -> Terms {
    if is_zero_exp(a) || is_prime_constant(k) {
        return single(a.to_vec(), k.clone());
    }
    let d = p.derived();
    let support: Vec<usize> = (0..a.len()).filter(|&i| a[i] != 0).collect();
    if support.iter().all(|&i| d.delta_zero[i]) {
        let mut r = k.clone();
        for &i in support.iter().rev() {
            for _ in 0..a[i] {
                r = p.sigma_apply(i, &r);
            }
        }
        return single(a.to_vec(), r);
    }
    // x^α' x_m k = x^α' σ_m(k) x_m + x^α' δ_m(k)
    let m = *support.last().unwrap();
    let mut a1 = a.to_vec();
    a1[m] -= 1;
    let mut em = vec![0; a.len()];
    em[m] = 1;
    let mut out = Terms::new();
    for (e2, k2) in mon_times_coeff(p, &a1, &p.sigma_apply(m, k)) {
        terms_add_scaled(&mut out, &mon_times_mon(p, &e2, &em), &k2);
    }
    terms_add_all(&mut out, &mon_times_terms(p, &a1, &p.delta_apply(m, k)));
    out
}

/// Product of two normal-form elements.
pub fn mul_terms(p: &Presentation, a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (e, k) in a {
        let mut part = Terms::new();
        for (f, l) in b {
            for (e2, k2) in mon_times_coeff(p, e, l) {
                terms_add_scaled(&mut part, &mon_times_mon(p, &e2, f), &k2);
            }
        }
        terms_add_scaled(&mut out, &part, k);
    }
    out
}

fn check_same(f: &SkewPoly, g: &SkewPoly) -> Result<(), PolyError> {
    let (a, b) = (f.presentation(), g.presentation());
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(PolyError::PresentationMismatch)
    }
}

/// The normal form of `f·g`.
pub fn mul(f: &SkewPoly, g: &SkewPoly) -> Result<SkewPoly, PolyError> {
    check_same(f, g)?;
    let p = f.presentation();
    Ok(SkewPoly::from_terms(p, mul_terms(p, f.terms(), g.terms())))
}

impl std::ops::Mul for &SkewPoly {
    type Output = SkewPoly;
    fn mul(self, o: &SkewPoly) -> SkewPoly {
        mul(self, o).expect("polynomials over different presentations")
    }
}

impl SkewPoly {
    pub fn pow(&self, k: u32) -> SkewPoly {
        let mut acc = SkewPoly::one(self.presentation());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Right multiplication by a coefficient.
    pub fn scale_right(&self, r: &RingElem) -> SkewPoly {
        let p = self.presentation();
        SkewPoly::from_terms(p, p.right_mul_coeff(self.terms(), r))
    }
}

// ---- twists ----

/// `σ^α(r) = σ_1^{α_1}∘⋯∘σ_n^{α_n}(r)` on the coefficient ring; negative
/// entries use the declared inverse twists.
pub fn sigma_power(p: &Presentation, alpha: &[i32], r: &RingElem) -> Result<RingElem, EngineError> {
    let mut r = r.clone();
    for i in (0..alpha.len()).rev() {
        for _ in 0..alpha[i].unsigned_abs() {
            r = if alpha[i] > 0 {
                p.sigma_apply(i, &r)
            } else {
                p.sigma_inv_apply(i, &r)
                    .map_err(|_| EngineError::NegativeExponent(p.vars[i].name.clone()))?
            };
        }
    }
    Ok(r)
}

/// Split `x_j·b` into `σ_j(b)` and `δ_j(b)` for `b` below the level of `x_j`.
pub fn sigma_delta_inner(p: &Presentation, j: usize, b: &Terms) -> (Terms, Terms) {
    let prod = var_times_terms(p, j, b);
    let mut s = Terms::new();
    let mut d = Terms::new();
    for (e, k) in prod {
        if e[j] == 1 {
            let mut e2 = e;
            e2[j] = 0;
            terms_add(&mut s, e2, k);
        } else {
            terms_add(&mut d, e, k);
        }
    }
    (s, d)
}

fn below(p: &Presentation, b: &Terms, level: usize) -> bool {
    b.keys().all(|e| e.iter().zip(&p.vars).all(|(&x, v)| x == 0 || v.level < level))
}

/// `σ_j` applied to an element of the algebra below `x_j`.
pub fn sigma_inner(p: &Presentation, j: usize, b: &Terms) -> Result<Terms, EngineError> {
    if !below(p, b, p.vars[j].level) {
        return Err(EngineError::NotInner(crate::poly::render_terms(b, &p.var_names(), &p.levels())));
    }
    if b.keys().all(|e| is_zero_exp(e)) {
        let mut t = Terms::new();
        for (e, k) in b {
            terms_add(&mut t, e.clone(), p.sigma_apply(j, k));
        }
        return Ok(t);
    }
    Ok(sigma_delta_inner(p, j, b).0)
}

/// `σ_j^{-1}` on the algebra below `x_j`, by leading-term elimination.
pub fn sigma_inv_inner(p: &Presentation, j: usize, b: &Terms) -> Result<Terms, EngineError> {
    if !below(p, b, p.vars[j].level) {
        return Err(EngineError::NotInner(crate::poly::render_terms(b, &p.var_names(), &p.levels())));
    }
    let inv = |k: &RingElem| {
        p.sigma_inv_apply(j, k).map_err(|e| EngineError::NotBijective(e.to_string()))
    };
    if b.keys().all(|e| is_zero_exp(e)) {
        let mut t = Terms::new();
        for (e, k) in b {
            terms_add(&mut t, e.clone(), inv(k)?);
        }
        return Ok(t);
    }
    let mut g = b.clone();
    let mut out = Terms::new();
    for _ in 0..100_000 {
        let Some((eps, k)) = g.iter().max_by(|x, y| p.cmp_mon(x.0, y.0)).map(|(e, c)| (e.clone(), c.clone()))
        else {
            return Ok(out);
        };
        let img = sigma_inner(p, j, &single(eps.clone(), p.ring.one()))?;
        let lead = img.iter().max_by(|x, y| p.cmp_mon(x.0, y.0)).unwrap();
        if *lead.0 != eps {
            return Err(EngineError::NotBijective(format!(
                "twist of {} does not preserve leading monomials",
                p.vars[j].name
            )));
        }
        let ce = lead.1.try_invert().ok_or_else(|| EngineError::NotAUnit(lead.1.to_string()))?;
        let k1 = inv(&k.mul(&ce))?;
        terms_add(&mut out, eps, k1.clone());
        let s = p.sigma_apply(j, &k1);
        let mut sub = Terms::new();
        terms_add_scaled(&mut sub, &img, &s);
        g = terms_sub(&g, &sub);
    }
    Err(EngineError::NoProgress)
}

/// `σ^α` on the inner algebra (`B = R` for single-level presentations).
pub fn sigma_power_inner(p: &Presentation, alpha: &[i32], b: &Terms) -> Result<Terms, EngineError> {
    let mut r = b.clone();
    for i in (0..alpha.len()).rev() {
        for _ in 0..alpha[i].unsigned_abs() {
            r = if alpha[i] > 0 { sigma_inner(p, i, &r)? } else { sigma_inv_inner(p, i, &r)? };
        }
    }
    Ok(r)
}

/// `(σ^α)^{-1}` on the inner algebra: `σ_1^{-1}` is applied first.
pub fn sigma_power_inv_inner(p: &Presentation, alpha: &[i32], b: &Terms) -> Result<Terms, EngineError> {
    let mut r = b.clone();
    for i in 0..alpha.len() {
        for _ in 0..alpha[i] {
            r = sigma_inv_inner(p, i, &r)?;
        }
    }
    Ok(r)
}

// ---- decompositions ----

/// `x^α r = σ^α(r) x^α + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushResult {
    pub sigma_alpha_r: SkewPoly,
    pub remainder: SkewPoly,
}

/// `x^α x^β = c_ab x^{α+β} + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReorderResult {
    pub c_ab: RingElem,
    pub remainder: SkewPoly,
}

fn check_outer(p: &Presentation, alpha: &[i32]) -> Result<(), EngineError> {
    if alpha.len() != p.nvars() {
        return Err(PolyError::LengthMismatch(alpha.len(), p.nvars()).into());
    }
    if alpha.iter().any(|&x| x < 0) {
        return Err(EngineError::NegativeExponent("exponent".into()));
    }
    if p.inner_part(alpha).iter().any(|&x| x != 0) {
        return Err(EngineError::InnerExponent);
    }
    Ok(())
}

/// Split `t` into the part on top monomial `alpha` (returned with the top
/// exponent removed) and the rest.
fn split_top(p: &Presentation, t: Terms, alpha: &[i32]) -> (Terms, Terms) {
    let mut on = Terms::new();
    let mut rest = Terms::new();
    for (e, k) in t {
        if p.top_part(&e) == alpha {
            terms_add(&mut on, p.inner_part(&e), k);
        } else {
            terms_add(&mut rest, e, k);
        }
    }
    (on, rest)
}

/// Push an inner-algebra element `r` left through `x^α`.
pub fn push_coeff(pres: &Arc<Presentation>, alpha: &[i32], r: &SkewPoly) -> Result<PushResult, EngineError> {
    let p = &**pres;
    check_outer(p, alpha)?;
    if !below(p, r.terms(), p.top_level()) {
        return Err(EngineError::NotInner(r.to_string()));
    }
    let prod = mul_terms(p, &single(alpha.to_vec(), p.ring.one()), r.terms());
    let (on, rest) = split_top(p, prod, alpha);
    Ok(PushResult {
        sigma_alpha_r: SkewPoly::from_terms(pres, on),
        remainder: SkewPoly::from_terms(pres, rest),
    })
}

pub fn push_scalar(pres: &Arc<Presentation>, alpha: &[i32], r: &RingElem) -> Result<PushResult, EngineError> {
    push_coeff(pres, alpha, &SkewPoly::constant(pres, r))
}

/// `c_{α,β}` and `p_{α,β}`.
pub fn reorder(pres: &Arc<Presentation>, alpha: &[i32], beta: &[i32]) -> Result<ReorderResult, EngineError> {
    let p = &**pres;
    check_outer(p, alpha)?;
    check_outer(p, beta)?;
    let ab = add_exp(alpha, beta);
    let prod = mon_times_mon(p, alpha, beta);
    let (on, rest) = split_top(p, prod, &ab);
    let c = SkewPoly::from_terms(pres, on);
    let c_ab = c.as_constant().ok_or_else(|| EngineError::NotInner(c.to_string()))?;
    Ok(ReorderResult { c_ab, remainder: SkewPoly::from_terms(pres, rest) })
}

pub fn c_alpha_beta(pres: &Arc<Presentation>, alpha: &[i32], beta: &[i32]) -> Result<RingElem, EngineError> {
    Ok(reorder(pres, alpha, beta)?.c_ab)
}

/// Check `σ^θ(c_{γ,β}) c_{θ,γ+β} = c_{θ,γ} c_{θ+γ,β}` and
/// `σ^θ(σ^γ(c)) c_{θ,γ} = c_{θ,γ} σ^{θ+γ}(c)`.
pub fn verify_identities(
    pres: &Arc<Presentation>,
    theta: &[i32],
    gamma: &[i32],
    beta: &[i32],
    c: &RingElem,
) -> Result<bool, EngineError> {
    if !pres.is_bijective() {
        return Err(EngineError::NotBijective(pres.name.clone()));
    }
    let p = &**pres;
    let cc = |a: &[i32], b: &[i32]| c_alpha_beta(pres, a, b);
    let tg = add_exp(theta, gamma);
    let lhs1 = sigma_power(p, theta, &cc(gamma, beta)?)?.mul(&cc(theta, &add_exp(gamma, beta))?);
    let rhs1 = cc(theta, gamma)?.mul(&cc(&tg, beta)?);
    let ctg = cc(theta, gamma)?;
    let lhs2 = sigma_power(p, theta, &sigma_power(p, gamma, c)?)?.mul(&ctg);
    let rhs2 = ctg.mul(&sigma_power(p, &tg, c)?);
    Ok(lhs1 == rhs1 && lhs2 == rhs2)
}

/// An element written with coefficients on the right: `Σ x^β · s_β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightForm {
    pub pres: Arc<Presentation>,
    pub terms: BTreeMap<Exp, SkewPoly>,
}

impl RightForm {
    /// Multiply out and return the left normal form.
    pub fn left_normalize(&self) -> SkewPoly {
        let p = &*self.pres;
        let mut out = Terms::new();
        for (b, s) in &self.terms {
            terms_add_all(&mut out, &mul_terms(p, &single(b.clone(), p.ring.one()), s.terms()));
        }
        SkewPoly::from_terms(&self.pres, out)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.pres.var_names();
        let lv = self.pres.levels();
        let mut keys: Vec<&Exp> = self.terms.keys().collect();
        keys.sort_by(|a, b| self.pres.cmp_mon(b, a));
        keys.iter()
            .map(|b| {
                let mon = crate::poly::render_terms(&single((*b).clone(), self.pres.ring.one()), &names, &lv);
                format!("{mon}·({})", self.terms[*b])
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Rewrite a left normal form with coefficients on the right.
pub fn right_form(f: &SkewPoly) -> Result<RightForm, EngineError> {
    let pres = f.presentation().clone();
    let p = &*pres;
    if !p.is_bijective() {
        return Err(EngineError::NotBijective(p.name.clone()));
    }
    let mut g = f.terms().clone();
    let mut out: BTreeMap<Exp, SkewPoly> = BTreeMap::new();
    let mut guard = 0usize;
    while !g.is_empty() {
        guard += 1;
        if guard > 1_000_000 {
            return Err(EngineError::NoProgress);
        }
        let cur = SkewPoly::from_terms(&pres, g.clone());
        let (gamma, b) = cur.leading_outer()?;
        let s = sigma_power_inv_inner(p, &gamma, b.terms())?;
        let prod = mul_terms(p, &single(gamma.clone(), p.ring.one()), &s);
        g = terms_sub(&g, &prod);
        let sp = SkewPoly::from_terms(&pres, s);
        let e = out.entry(gamma).or_insert_with(|| SkewPoly::zero(&pres));
        *e = e.add(&sp);
        out.retain(|_, v| !v.is_zero());
    }
    Ok(RightForm { pres, terms: out })
}

/// `r·x^α` with right coefficients.
pub fn right_expand(pres: &Arc<Presentation>, r: &SkewPoly, alpha: &[i32]) -> Result<RightForm, EngineError> {
    check_outer(pres, alpha)?;
    let f = mul(r, &SkewPoly::monomial(pres, alpha.to_vec(), pres.ring.one()))?;
    right_form(&f)
}
