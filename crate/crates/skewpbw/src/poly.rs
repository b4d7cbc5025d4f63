//! Elements of a skew PBW extension in the standard-monomial basis.
//!
//! Exponent vectors are plain `Vec<i32>`; negative entries only occur in
//! the quantum module. Variables carry a nesting level, and monomials are
//! compared level by level from the outermost one. Within a level the
//! order is: higher degree wins, then the first differing entry decides.
//! With one level this is exactly the usual degree-then-position order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coeff::{Ring, RingElem};
use crate::presentation::Presentation;

pub type Exp = Vec<i32>;
pub type Terms = BTreeMap<Exp, RingElem>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("exponent vectors of different length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("the zero polynomial has no leading term")]
    NoLeadingTerm,
    #[error("polynomials over different presentations")]
    PresentationMismatch,
}

/// `|α|`, using absolute values for signed exponents.
pub fn abs_degree(e: &[i32]) -> i64 {
    e.iter().map(|&x| (x as i64).abs()).sum()
}

/// Degree-then-position comparison of two exponent vectors.
pub fn cmp_mon(a: &[i32], b: &[i32]) -> Result<Ordering, PolyError> {
    if a.len() != b.len() {
        return Err(PolyError::LengthMismatch(a.len(), b.len()));
    }
    Ok(cmp_flat(a, b))
}

fn cmp_flat(a: &[i32], b: &[i32]) -> Ordering {
    abs_degree(a).cmp(&abs_degree(b)).then_with(|| {
        a.iter().zip(b).map(|(x, y)| x.cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    })
}

/// Block comparison: the outermost level decides first.
pub fn cmp_levels(a: &[i32], b: &[i32], levels: &[usize]) -> Ordering {
    let top = levels.iter().copied().max().unwrap_or(0);
    if top == 0 {
        return cmp_flat(a, b);
    }
    for l in (0..=top).rev() {
        let pick = |e: &[i32]| -> Vec<i32> {
            e.iter().zip(levels).filter(|(_, &lv)| lv == l).map(|(&x, _)| x).collect()
        };
        let o = cmp_flat(&pick(a), &pick(b));
        if o.is_ne() {
            return o;
        }
    }
    Ordering::Equal
}

pub fn terms_add(t: &mut Terms, e: Exp, c: RingElem) {
    if c.is_zero() {
        return;
    }
    match t.entry(e) {
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

pub fn terms_add_all(t: &mut Terms, o: &Terms) {
    for (e, c) in o {
        terms_add(t, e.clone(), c.clone());
    }
}

pub fn terms_add_scaled(t: &mut Terms, o: &Terms, k: &RingElem) {
    if k.is_zero() {
        return;
    }
    let one = k.is_one();
    for (e, c) in o {
        terms_add(t, e.clone(), if one { c.clone() } else { k.mul(c) });
    }
}

pub fn terms_scale(o: &Terms, k: &RingElem) -> Terms {
    let mut t = Terms::new();
    terms_add_scaled(&mut t, o, k);
    t
}

pub fn terms_neg(o: &Terms) -> Terms {
    o.iter().map(|(e, c)| (e.clone(), c.neg())).collect()
}

pub fn terms_sub(a: &Terms, b: &Terms) -> Terms {
    let mut t = a.clone();
    for (e, c) in b {
        terms_add(&mut t, e.clone(), c.neg());
    }
    t
}

pub fn constant_terms(r: &RingElem, n: usize) -> Terms {
    let mut t = Terms::new();
    terms_add(&mut t, vec![0; n], r.clone());
    t
}

pub fn add_exp(a: &[i32], b: &[i32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn unit_exp(n: usize, i: usize) -> Exp {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Render `Σ c·x^e` with coefficients on the left.
pub fn render_terms(t: &Terms, names: &[String], levels: &[usize]) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut v: Vec<(&Exp, &RingElem)> = t.iter().collect();
    v.sort_by(|a, b| cmp_levels(b.0, a.0, levels));
    let mut out = String::new();
    for (i, (e, c)) in v.into_iter().enumerate() {
        let mono: Vec<String> = e
            .iter()
            .zip(names)
            .filter(|(&k, _)| k != 0)
            .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        let mono = mono.join("*");
        let (neg, body) = if mono.is_empty() {
            let s = c.to_string();
            match s.strip_prefix('−') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        } else if c.is_one() {
            (false, mono)
        } else if c.neg().is_one() {
            (true, mono)
        } else if c.is_negated_simple() {
            (true, format!("{}*{}", c.neg(), mono))
        } else {
            (false, format!("{}*{}", c.render_factor().0, mono))
        };
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('−');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" − ");
                out.push_str(&body);
            }
        }
    }
    out
}

/// An element `Σ c_α x^α` of a presented algebra.
#[derive(Clone)]
pub struct SkewPoly {
    pres: Arc<Presentation>,
    terms: Terms,
}

impl PartialEq for SkewPoly {
    fn eq(&self, o: &SkewPoly) -> bool {
        self.terms == o.terms && (Arc::ptr_eq(&self.pres, &o.pres) || *self.pres == *o.pres)
    }
}
impl Eq for SkewPoly {}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly({self})")
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_terms(&self.terms, &self.pres.var_names(), &self.pres.levels()))
    }
}

impl SkewPoly {
    pub fn from_terms(pres: &Arc<Presentation>, terms: Terms) -> SkewPoly {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        SkewPoly { pres: pres.clone(), terms }
    }

    pub fn zero(pres: &Arc<Presentation>) -> SkewPoly {
        Self::from_terms(pres, Terms::new())
    }

    pub fn constant(pres: &Arc<Presentation>, r: &RingElem) -> SkewPoly {
        Self::from_terms(pres, constant_terms(r, pres.nvars()))
    }

    pub fn one(pres: &Arc<Presentation>) -> SkewPoly {
        Self::constant(pres, &pres.ring.one())
    }

    pub fn monomial(pres: &Arc<Presentation>, e: Exp, c: RingElem) -> SkewPoly {
        let mut t = Terms::new();
        terms_add(&mut t, e, c);
        Self::from_terms(pres, t)
    }

    pub fn var(pres: &Arc<Presentation>, i: usize) -> SkewPoly {
        Self::monomial(pres, unit_exp(pres.nvars(), i), pres.ring.one())
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn ring(&self) -> &Ring {
        &self.pres.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient ring element if `self` has no variable part.
    pub fn as_constant(&self) -> Option<RingElem> {
        match self.terms.len() {
            0 => Some(self.pres.ring.zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Terms in descending monomial order.
    pub fn terms_desc(&self) -> Vec<(&Exp, &RingElem)> {
        let lv = self.pres.levels();
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| cmp_levels(b.0, a.0, &lv));
        v
    }

    /// Degree in the outermost variables; `None` stands for minus infinity.
    pub fn degree(&self) -> Option<i64> {
        let top = self.pres.top_vars();
        self.terms
            .keys()
            .map(|e| top.iter().map(|&i| (e[i] as i64).abs()).sum())
            .max()
    }

    /// The largest term under the monomial order.
    pub fn leading(&self) -> Result<(Exp, RingElem), PolyError> {
        let lv = self.pres.levels();
        self.terms
            .iter()
            .max_by(|a, b| cmp_levels(a.0, b.0, &lv))
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or(PolyError::NoLeadingTerm)
    }

    /// Leading monomial in the outermost variables and its coefficient in the
    /// inner algebra (a ring element when there is a single level).
    pub fn leading_outer(&self) -> Result<(Exp, SkewPoly), PolyError> {
        let (lm, _) = self.leading()?;
        let top = self.pres.top_vars();
        let alpha = self.pres.top_part(&lm);
        let mut coeff = Terms::new();
        for (e, c) in &self.terms {
            if self.pres.top_part(e) == alpha {
                let mut inner = e.clone();
                for &i in &top {
                    inner[i] = 0;
                }
                terms_add(&mut coeff, inner, c.clone());
            }
        }
        Ok((alpha, SkewPoly::from_terms(&self.pres, coeff)))
    }

    fn same(&self, o: &SkewPoly) {
        assert!(
            Arc::ptr_eq(&self.pres, &o.pres) || *self.pres == *o.pres,
            "{}",
            PolyError::PresentationMismatch
        );
    }

    pub fn add(&self, o: &SkewPoly) -> SkewPoly {
        self.same(o);
        let mut t = self.terms.clone();
        terms_add_all(&mut t, &o.terms);
        SkewPoly::from_terms(&self.pres, t)
    }

    pub fn try_add(&self, o: &SkewPoly) -> Result<SkewPoly, PolyError> {
        if !(Arc::ptr_eq(&self.pres, &o.pres) || *self.pres == *o.pres) {
            return Err(PolyError::PresentationMismatch);
        }
        Ok(self.add(o))
    }

    pub fn neg(&self) -> SkewPoly {
        SkewPoly::from_terms(&self.pres, terms_neg(&self.terms))
    }

    pub fn sub(&self, o: &SkewPoly) -> SkewPoly {
        self.add(&o.neg())
    }

    /// Left multiplication by a coefficient.
    pub fn scale(&self, r: &RingElem) -> SkewPoly {
        SkewPoly::from_terms(&self.pres, terms_scale(&self.terms, r))
    }

    /// Same terms viewed over another (compatible) presentation.
    pub fn rebase(&self, pres: &Arc<Presentation>) -> SkewPoly {
        SkewPoly::from_terms(pres, self.terms.clone())
    }
}

impl std::ops::Add for &SkewPoly {
    type Output = SkewPoly;
    fn add(self, o: &SkewPoly) -> SkewPoly {
        SkewPoly::add(self, o)
    }
}
impl std::ops::Sub for &SkewPoly {
    type Output = SkewPoly;
    fn sub(self, o: &SkewPoly) -> SkewPoly {
        SkewPoly::sub(self, o)
    }
}
impl std::ops::Neg for &SkewPoly {
    type Output = SkewPoly;
    fn neg(self) -> SkewPoly {
        SkewPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_then_position() {
        assert_eq!(cmp_mon(&[2, 0], &[1, 1]).unwrap(), Ordering::Greater);
        assert_eq!(cmp_mon(&[0, 3], &[1, 1]).unwrap(), Ordering::Greater);
        assert_eq!(cmp_mon(&[1, 2], &[1, 2]).unwrap(), Ordering::Equal);
        assert!(cmp_mon(&[1], &[1, 0]).is_err());
    }

    #[test]
    fn outer_level_decides_first() {
        let lv = [0, 0, 1];
        assert_eq!(cmp_levels(&[0, 0, 1], &[3, 3, 0], &lv), Ordering::Greater);
        assert_eq!(cmp_levels(&[2, 0, 1], &[1, 1, 1], &lv), Ordering::Greater);
    }
}
