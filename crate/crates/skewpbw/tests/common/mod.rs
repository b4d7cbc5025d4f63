//! Shared test helpers: seeded random elements and a word-rewriting
//! multiplier that shares no code with the engine.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skewpbw::catalog;
use skewpbw::cli::Definition;
use skewpbw::coeff::{Frac, RingElem};
use skewpbw::poly::{terms_add, Exp, SkewPoly, Terms};
use skewpbw::presentation::Presentation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every catalog entry at its default parameters.
pub fn all_entries() -> Vec<(&'static str, Definition)> {
    catalog::list_catalog()
        .into_iter()
        .map(|e| (e.key, catalog::instantiate(e.key, &[]).unwrap_or_else(|x| panic!("{}: {x}", e.key))))
        .collect()
}

fn small_rational<R: Rng>(rng: &mut R) -> i64 {
    let v = rng.gen_range(1..=3);
    if rng.gen_bool(0.3) {
        -v
    } else {
        v
    }
}

/// A nonzero coefficient with at most two terms of low degree.
pub fn rand_coeff<R: Rng>(p: &Presentation, rng: &mut R) -> RingElem {
    let ring = &p.ring;
    let gens = ring.generators();
    loop {
        let mut acc = ring.zero();
        for _ in 0..rng.gen_range(1..=2) {
            let mut t = ring.int(small_rational(rng));
            for g in &gens {
                let lo = if ring.is_laurent_gen(g) { -1 } else { 0 };
                let k = rng.gen_range(lo..=1);
                if k != 0 {
                    t = t.mul(&ring.gen(g).unwrap().pow(k as i64).unwrap());
                }
            }
            acc = acc.add(&t);
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

/// Random exponent on the outermost variables with total degree ≤ `max`.
pub fn rand_top_exp<R: Rng>(p: &Presentation, rng: &mut R, max: i32) -> Exp {
    let mut e = vec![0; p.nvars()];
    let top = p.top_vars();
    let d = rng.gen_range(0..=max);
    for _ in 0..d {
        e[*top.choose(rng).unwrap()] += 1;
    }
    e
}

/// Random exponent of exact degree `d` on the outermost variables.
pub fn rand_top_exp_exact<R: Rng>(p: &Presentation, rng: &mut R, d: i32) -> Exp {
    let mut e = vec![0; p.nvars()];
    let top = p.top_vars();
    for _ in 0..d {
        e[*top.choose(rng).unwrap()] += 1;
    }
    e
}

/// A nonzero element of the coefficient algebra: a scalar, or for nested
/// presentations a small polynomial in the inner variables.
pub fn rand_inner<R: Rng>(p: &Arc<Presentation>, rng: &mut R) -> SkewPoly {
    let inner = p.inner_vars();
    let mut t = Terms::new();
    loop {
        for _ in 0..rng.gen_range(1..=2) {
            let mut e = vec![0; p.nvars()];
            if !inner.is_empty() {
                for _ in 0..rng.gen_range(0..=2) {
                    e[*inner.choose(rng).unwrap()] += 1;
                }
            }
            terms_add(&mut t, e, rand_coeff(p, rng));
        }
        if !t.is_empty() {
            return SkewPoly::from_terms(p, t);
        }
    }
}

/// A nonzero element with up to `nterms` terms of top degree ≤ `max`.
pub fn rand_elem<R: Rng>(p: &Arc<Presentation>, rng: &mut R, max: i32, nterms: usize) -> SkewPoly {
    loop {
        let mut t = Terms::new();
        for _ in 0..rng.gen_range(1..=nterms) {
            let top = rand_top_exp(p, rng, max);
            for (e, c) in rand_inner(p, rng).terms() {
                let mut e = e.clone();
                for (a, b) in e.iter_mut().zip(&top) {
                    *a += b;
                }
                terms_add(&mut t, e, c.clone());
            }
        }
        if !t.is_empty() {
            return SkewPoly::from_terms(p, t);
        }
    }
}

/// A nonzero element homogeneous of top degree `d`.
pub fn rand_homogeneous<R: Rng>(p: &Arc<Presentation>, rng: &mut R, d: i32, nterms: usize) -> SkewPoly {
    loop {
        let mut t = Terms::new();
        for _ in 0..rng.gen_range(1..=nterms) {
            let top = rand_top_exp_exact(p, rng, d);
            for (e, c) in rand_inner(p, rng).terms() {
                let e: Exp = e.iter().zip(&top).map(|(a, b)| a + b).collect();
                terms_add(&mut t, e, c.clone());
            }
        }
        if !t.is_empty() {
            return SkewPoly::from_terms(p, t);
        }
    }
}

pub fn top_degree(p: &Presentation, e: &[i32]) -> i64 {
    p.top_vars().iter().map(|&i| e[i] as i64).sum()
}

/// Top degree of an element, `None` for zero.
pub fn degree(f: &SkewPoly) -> Option<i64> {
    let p = f.presentation();
    f.terms().keys().map(|e| top_degree(p, e)).max()
}

/// `σ^α(r) = σ_1^{α_1}(⋯σ_n^{α_n}(r))` on a scalar, from the twist data alone.
pub fn sigma_pow(p: &Presentation, alpha: &[i32], r: &RingElem) -> RingElem {
    let mut x = r.clone();
    for i in (0..alpha.len()).rev() {
        for _ in 0..alpha[i] {
            x = p.sigma_apply(i, &x);
        }
    }
    x
}

// ---- word rewriting ----

#[derive(Clone, Debug)]
enum Atom {
    /// Element of the bottom field.
    F(Frac),
    /// Polynomial generator of the coefficient ring, or its inverse.
    G(usize, bool),
    V(usize),
}

fn scalar_atoms(p: &Presentation, r: &RingElem) -> Vec<Vec<Atom>> {
    let nf = p.ring.nf();
    r.terms()
        .iter()
        .map(|(e, c)| {
            let mut w = vec![Atom::F(c.clone())];
            for (k, &x) in e.iter().enumerate() {
                for _ in 0..x.unsigned_abs() {
                    w.push(Atom::G(nf + k, x < 0));
                }
            }
            w
        })
        .collect()
}

fn terms_words(p: &Presentation, t: &Terms) -> Vec<Vec<Atom>> {
    let mut out = vec![];
    for (e, c) in t {
        for mut w in scalar_atoms(p, c) {
            for (i, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    w.push(Atom::V(i));
                }
            }
            out.push(w);
        }
    }
    out
}

fn atom_scalar(p: &Presentation, a: &Atom) -> Option<RingElem> {
    let ring = &p.ring;
    match a {
        Atom::F(f) => Some(ring.from_frac(f.clone())),
        Atom::G(k, inv) => {
            let g = ring.gen(&ring.generators()[*k]).unwrap();
            Some(if *inv { g.try_invert().unwrap() } else { g })
        }
        Atom::V(_) => None,
    }
}

/// Normal form of a product of terms by repeatedly rewriting the leftmost
/// reducible pair of letters.
pub fn naive_mul(p: &Presentation, a: &Terms, b: &Terms) -> Terms {
    let mut stack: Vec<(RingElem, Vec<Atom>)> = vec![];
    for wa in terms_words(p, a) {
        for wb in terms_words(p, b) {
            let mut w = wa.clone();
            w.extend(wb);
            stack.push((p.ring.one(), w));
        }
    }
    let mut out = Terms::new();
    let nf = p.ring.nf();
    while let Some((coef, mut w)) = stack.pop() {
        if coef.is_zero() {
            continue;
        }
        // scalars at the front are absorbed
        if let Some(s) = w.first().and_then(|a| atom_scalar(p, a)) {
            w.remove(0);
            stack.push((coef.mul(&s), w));
            continue;
        }
        let pos = (0..w.len().saturating_sub(1)).find(|&k| match (&w[k], &w[k + 1]) {
            (Atom::V(_), Atom::F(_) | Atom::G(..)) => true,
            (Atom::V(j), Atom::V(i)) => j > i,
            _ => false,
        });
        let Some(k) = pos else {
            let mut e = vec![0; p.nvars()];
            for a in &w {
                if let Atom::V(i) = a {
                    e[*i] += 1;
                }
            }
            terms_add(&mut out, e, coef);
            continue;
        };
        let (left, right) = (w[..k].to_vec(), w[k + 2..].to_vec());
        let splice = |mid: Vec<Atom>| {
            let mut v = left.clone();
            v.extend(mid);
            v.extend(right.iter().cloned());
            v
        };
        match (&w[k], &w[k + 1]) {
            (Atom::V(j), Atom::V(i)) => {
                let (i, j) = (*i, *j);
                for mut sw in scalar_atoms(p, &p.c_of(i, j)) {
                    sw.push(Atom::V(i));
                    sw.push(Atom::V(j));
                    stack.push((coef.clone(), splice(sw)));
                }
                for tw in terms_words(p, &p.tail_of(i, j)) {
                    stack.push((coef.clone(), splice(tw)));
                }
            }
            (Atom::V(i), Atom::G(g, inv)) => {
                let i = *i;
                let t = p.ring.gen(&p.ring.generators()[*g]).unwrap();
                let st = p.sigma_apply(i, &t);
                let dt = &p.delta[i].images[*g];
                if !*inv {
                    // x t = σ(t) x + δ(t)
                    for mut sw in scalar_atoms(p, &st) {
                        sw.push(Atom::V(i));
                        stack.push((coef.clone(), splice(sw)));
                    }
                    for tw in terms_words(p, dt) {
                        stack.push((coef.clone(), splice(tw)));
                    }
                } else {
                    // x t^{-1} = σ(t)^{-1} x − σ(t)^{-1} δ(t) t^{-1}
                    let sti = st.try_invert().unwrap();
                    for mut sw in scalar_atoms(p, &sti) {
                        sw.push(Atom::V(i));
                        stack.push((coef.clone(), splice(sw)));
                    }
                    for sw in scalar_atoms(p, &sti.neg()) {
                        for tw in terms_words(p, dt) {
                            let mut m = sw.clone();
                            m.extend(tw);
                            m.push(Atom::G(*g, true));
                            stack.push((coef.clone(), splice(m)));
                        }
                    }
                }
            }
            (Atom::V(i), Atom::F(f)) => {
                let r = p.ring.from_frac(f.clone());
                let field_delta = p.delta[*i].images[..nf].iter().any(|t| !t.is_empty());
                for mut sw in scalar_atoms(p, &p.sigma_apply(*i, &r)) {
                    sw.push(Atom::V(*i));
                    stack.push((coef.clone(), splice(sw)));
                }
                if field_delta {
                    for tw in terms_words(p, &p.delta_apply(*i, &r)) {
                        stack.push((coef.clone(), splice(tw)));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn naive(f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
    let p = f.presentation();
    SkewPoly::from_terms(p, naive_mul(p, f.terms(), g.terms()))
}

pub fn mono(p: &Arc<Presentation>, e: &[i32]) -> SkewPoly {
    SkewPoly::monomial(p, e.to_vec(), p.ring.one())
}

/// `∂/∂t_k` on a polynomial coefficient, computed on exponents.
pub fn partial(r: &RingElem, k: usize) -> RingElem {
    let ring = r.ring();
    let mut acc = ring.zero();
    for (e, c) in r.terms() {
        if e[k] == 0 {
            continue;
        }
        let mut e2 = e.clone();
        e2[k] -= 1;
        let q = skewpbw::coeff::mpoly::q_from_int(e[k] as i64);
        acc = acc.add(&ring.monomial(e2, c.scale_q(&q)));
    }
    acc
}

/// Apply `Σ c_α(t) ∂^α` to a polynomial in `t`, reading the element as a
/// differential operator.
pub fn apply_operator(f: &SkewPoly, poly: &RingElem) -> RingElem {
    let mut acc = f.ring().zero();
    for (alpha, c) in f.terms() {
        let mut v = poly.clone();
        for (k, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                v = partial(&v, k);
            }
        }
        acc = acc.add(&c.mul(&v));
    }
    acc
}

/// All monomials `t^β` with `|β| ≤ d` in `n` polynomial generators.
pub fn monomials_up_to(p: &Presentation, n: usize, d: i32) -> Vec<RingElem> {
    let mut exps: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..n {
        let mut next = vec![];
        for e in &exps {
            let s: i32 = e.iter().sum();
            for k in 0..=(d - s) {
                let mut e2 = e.clone();
                e2.push(k);
                next.push(e2);
            }
        }
        exps = next;
    }
    exps.into_iter().map(|e| p.ring.monomial(e, Frac::one(p.ring.nf()))).collect()
}

// ---- letter-by-letter multiplication ----

/// Normal forms built by multiplying one variable at a time from the left,
/// memoizing `x_i · x^e`. Exponential word blow-up is avoided because like
/// terms are merged after every letter. Shares no code with the engine.
pub struct Oracle {
    p: Arc<Presentation>,
    memo: RefCell<HashMap<(usize, Exp), Terms>>,
}

impl Oracle {
    pub fn new(p: &Arc<Presentation>) -> Oracle {
        Oracle { p: p.clone(), memo: RefCell::new(HashMap::new()) }
    }

    fn scale_left(&self, c: &RingElem, f: &Terms) -> Terms {
        let mut out = Terms::new();
        for (e, d) in f {
            terms_add(&mut out, e.clone(), c.mul(d));
        }
        out
    }

    /// `x_i · Σ c_e x^e`, using `x_i c = σ_i(c) x_i + δ_i(c)`.
    fn var_times(&self, i: usize, f: &Terms) -> Terms {
        let p = &self.p;
        let mut out = Terms::new();
        for (e, c) in f {
            let s = p.sigma_apply(i, c);
            for (e2, c2) in self.var_times_mono(i, e) {
                terms_add(&mut out, e2, s.mul(&c2));
            }
            let d = p.delta_apply(i, c);
            if !d.is_empty() {
                let mut m = Terms::new();
                terms_add(&mut m, e.clone(), p.ring.one());
                for (e2, c2) in self.mul(&d, &m) {
                    terms_add(&mut out, e2, c2);
                }
            }
        }
        out
    }

    /// `x_i · x^e`: pass `x_i` over the first letter of `x^e` when it is
    /// out of order.
    fn var_times_mono(&self, i: usize, e: &Exp) -> Terms {
        if let Some(t) = self.memo.borrow().get(&(i, e.clone())) {
            return t.clone();
        }
        let p = &self.p;
        let out = match e.iter().position(|&x| x != 0) {
            Some(k) if k < i => {
                let mut rest = e.clone();
                rest[k] -= 1;
                let moved = self.var_times(k, &self.var_times_mono(i, &rest));
                let mut out = self.scale_left(&p.c_of(k, i), &moved);
                let mut m = Terms::new();
                terms_add(&mut m, rest, p.ring.one());
                for (e2, c2) in self.mul(&p.tail_of(k, i), &m) {
                    terms_add(&mut out, e2, c2);
                }
                out
            }
            _ => {
                let mut e2 = e.clone();
                e2[i] += 1;
                let mut t = Terms::new();
                terms_add(&mut t, e2, p.ring.one());
                t
            }
        };
        self.memo.borrow_mut().insert((i, e.clone()), out.clone());
        out
    }

    pub fn mul(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (e, c) in a {
            let mut acc = b.clone();
            for idx in (0..e.len()).rev() {
                for _ in 0..e[idx] {
                    acc = self.var_times(idx, &acc);
                }
            }
            for (e2, c2) in self.scale_left(c, &acc) {
                terms_add(&mut out, e2, c2);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn prod(&self, f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
        SkewPoly::from_terms(&self.p, self.mul(f.terms(), g.terms()))
    }
}
