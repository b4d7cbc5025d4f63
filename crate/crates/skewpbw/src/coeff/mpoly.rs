//! Multivariate polynomials over ℚ with exact division and gcd.
//!
//! These back the numerators and denominators of rational functions.
//! Exponent keys all have the same length (the number of field generators).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Q::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// The constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &Q)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub fn scale(&self, k: &Q) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(e, ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, mut n: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.nvars);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scale so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (de, dc) = {
            let (e, c) = d.leading().unwrap();
            (e.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let mut t = MPoly::zero(self.nvars);
            t.terms.insert(e.clone(), c.clone());
            rem = rem.sub(&t.mul(d));
            q.add_term(e, c);
        }
        Some(q)
    }

    /// The largest monomial dividing every term, and the cofactor.
    fn split_monomial_content(&self) -> (Vec<u32>, MPoly) {
        let mut m = vec![u32::MAX; self.nvars];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        if m.iter().all(|&k| k == 0) {
            return (m, self.clone());
        }
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.terms.insert(e.iter().zip(&m).map(|(a, b)| a - b).collect(), c.clone());
        }
        (m, r)
    }

    /// Split along variable 0: coefficients of x0^k as polynomials in the remaining variables.
    fn split_first(&self) -> Vec<MPoly> {
        let deg = self.terms.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(self.nvars - 1); deg + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize].terms.insert(e[1..].to_vec(), c.clone());
        }
        out
    }

    fn join_first(nvars: usize, coeffs: &[MPoly]) -> MPoly {
        let mut r = MPoly::zero(nvars);
        for (k, p) in coeffs.iter().enumerate() {
            for (e, c) in &p.terms {
                let mut full = Vec::with_capacity(nvars);
                full.push(k as u32);
                full.extend_from_slice(e);
                r.terms.insert(full, c.clone());
            }
        }
        r
    }

    /// Greatest common divisor, normalized so that its leading coefficient is 1.
    pub fn gcd(&self, o: &MPoly) -> MPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.nvars == 0 {
            return MPoly::one(0);
        }
        if self.as_constant().is_some() || o.as_constant().is_some() {
            return MPoly::one(self.nvars);
        }
        // pull out the monomial part of the gcd first; this settles the
        // common case of a monomial denominator without any division
        let (ma, a0) = self.split_monomial_content();
        let (mb, b0) = o.split_monomial_content();
        let m: Vec<u32> = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
        if m.iter().any(|&k| k > 0) || a0.terms.len() == 1 || b0.terms.len() == 1 {
            let mut mono = MPoly::zero(self.nvars);
            mono.terms.insert(m, Q::one());
            if a0.terms.len() == 1 || b0.terms.len() == 1 {
                return mono;
            }
            return a0.gcd(&b0).mul(&mono);
        }
        if self.nvars == 1 {
            return univariate_gcd(self, o);
        }
        let a = self.split_first();
        let b = o.split_first();
        let ca = content(&a);
        let cb = content(&b);
        let g_cont = ca.gcd(&cb);
        let mut pa = trim(a.iter().map(|p| p.div_exact(&ca).unwrap()).collect());
        let mut pb = trim(b.iter().map(|p| p.div_exact(&cb).unwrap()).collect());
        if pa.len() < pb.len() {
            std::mem::swap(&mut pa, &mut pb);
        }
        while !(pb.len() == 1 && pb[0].is_zero()) && !pb.is_empty() {
            if pb.len() == 1 {
                // pb is a nonzero constant in x0 and primitive, hence a unit
                pa = vec![MPoly::one(self.nvars - 1)];
                break;
            }
            let r = trim(prem(&pa, &pb));
            pa = pb;
            if r.iter().all(|p| p.is_zero()) {
                break;
            }
            let cr = content(&r);
            pb = trim(r.iter().map(|p| p.div_exact(&cr).unwrap()).collect());
            pb = normalize_lc(pb);
        }
        let cp = content(&pa);
        let pp: Vec<MPoly> = pa.iter().map(|p| p.div_exact(&cp).unwrap()).collect();
        let res = MPoly::join_first(self.nvars, &pp);
        let gc = MPoly::join_first(self.nvars, &[g_cont]);
        res.mul(&gc).monic()
    }
}

fn trim(mut v: Vec<MPoly>) -> Vec<MPoly> {
    while v.len() > 1 && v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
    v
}

fn normalize_lc(v: Vec<MPoly>) -> Vec<MPoly> {
    let c = match v.last().and_then(|p| p.leading()) {
        Some((_, c)) => c.recip(),
        None => return v,
    };
    v.into_iter().map(|p| p.scale(&c)).collect()
}

fn content(coeffs: &[MPoly]) -> MPoly {
    let nv = coeffs[0].nvars;
    let mut g = MPoly::zero(nv);
    for p in coeffs {
        if p.is_zero() {
            continue;
        }
        g = g.gcd(p);
        if g.as_constant().is_some() {
            return MPoly::one(nv);
        }
    }
    if g.is_zero() {
        MPoly::one(nv)
    } else {
        g
    }
}

/// Pseudo-remainder of `a` by `b` as polynomials in the split variable.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<MPoly> = a.to_vec();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<MPoly> = r.iter().map(|p| p.mul(lb)).collect();
        for (k, bk) in b.iter().enumerate() {
            next[k + shift] = next[k + shift].sub(&bk.mul(&lr));
        }
        next.pop();
        r = trim(next);
        if r.iter().all(|p| p.is_zero()) {
            return vec![MPoly::zero(lb.nvars)];
        }
    }
    r
}

fn univariate_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let to_dense = |p: &MPoly| -> Vec<Q> {
        let deg = p.terms.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
        let mut v = vec![Q::zero(); deg + 1];
        for (e, c) in &p.terms {
            v[e[0] as usize] = c.clone();
        }
        v
    };
    let mut x = to_dense(a);
    let mut y = to_dense(b);
    while !(y.len() == 1 && y[0].is_zero()) {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    let lc = x.last().unwrap().clone();
    let mut out = MPoly::zero(1);
    for (k, c) in x.into_iter().enumerate() {
        if !c.is_zero() {
            out.terms.insert(vec![k as u32], c / &lc);
        }
    }
    out
}

fn dense_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let f = &r[dr] / lb;
        for (k, bk) in b.iter().enumerate() {
            r[k + dr - db] -= &f * bk;
        }
        r.pop();
        while r.len() > 1 && r.last().unwrap().is_zero() {
            r.pop();
        }
    }
    if r.is_empty() {
        r.push(Q::zero());
    }
    r
}

pub fn q_from_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }
    fn k(n: usize, c: i64) -> MPoly {
        MPoly::constant(n, q_from_int(c))
    }

    #[test]
    fn univariate_gcd_of_shared_factor() {
        let t = x(1, 0);
        let a = t.sub(&k(1, 1)).mul(&t.add(&k(1, 2)));
        let b = t.sub(&k(1, 1)).mul(&t.add(&k(1, 3)));
        assert_eq!(a.gcd(&b), t.sub(&k(1, 1)));
    }

    #[test]
    fn bivariate_gcd() {
        let (p, q) = (x(2, 0), x(2, 1));
        let f = p.sub(&q);
        let a = f.mul(&p.add(&k(2, 1)));
        let b = f.mul(&f).mul(&q.add(&k(2, 5)));
        assert_eq!(a.gcd(&b), f.monic());
        let c = p.mul(&q).add(&k(2, 1));
        assert!(a.gcd(&c).is_one());
    }

    #[test]
    fn trivariate_gcd_recovers_factor() {
        let (a, b, c) = (x(3, 0), x(3, 1), x(3, 2));
        let g = a.mul(&b).sub(&c.scale(&q_from_int(3)));
        let u = g.mul(&a.add(&c)).mul(&b);
        let v = g.mul(&b.sub(&k(3, 2))).mul(&g);
        assert_eq!(u.gcd(&v), g.monic());
    }

    #[test]
    fn exact_division() {
        let (p, q) = (x(2, 0), x(2, 1));
        let f = p.add(&q).mul(&p.sub(&q));
        assert_eq!(f.div_exact(&p.add(&q)), Some(p.sub(&q)));
        assert_eq!(f.div_exact(&p), None);
    }
}
