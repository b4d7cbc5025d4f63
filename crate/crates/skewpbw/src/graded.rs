//! The associated quasi-commutative extension, top homogeneous components
//! and the iterated-tower data of a quasi-commutative presentation.
//!
//! Degrees count the outermost variables only, so for a nested
//! presentation the inner algebra plays the role of the coefficient ring and
//! its rules are kept as they are.

use std::sync::Arc;

use crate::coeff::RingElem;
use crate::engine::{sigma_inner, sigma_inv_inner, EngineError};
use crate::poly::{render_terms, unit_exp, SkewPoly, Terms};
use crate::presentation::{EndoSpec, Presentation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("the zero element has no top component")]
    Zero,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("presentation is not quasi-commutative; take the associated algebra first")]
    NotQuasiCommutative,
    #[error("{0}")]
    Engine(String),
}

fn top_degree(p: &Presentation, e: &[i32]) -> i64 {
    let top = p.top_level();
    e.iter().zip(&p.vars).filter(|(_, v)| v.level == top).map(|(&x, _)| x as i64).sum()
}

fn keep_degree(p: &Presentation, t: &Terms, d: i64) -> Terms {
    t.iter().filter(|(e, _)| top_degree(p, e) == d).map(|(e, c)| (e.clone(), c.clone())).collect()
}

/// `A^σ`: same twists and constants, with every part of a rule that lowers
/// the degree removed.
pub fn assoc_algebra(p: &Presentation) -> Presentation {
    let top = p.top_level();
    let mut g = Presentation::new(p.ring.clone(), p.vars.clone());
    g.name = format!("gr-{}", p.name);
    g.sigma = p.sigma.clone();
    for i in 0..p.nvars() {
        if p.vars[i].level != top {
            g.delta[i] = p.delta[i].clone();
        }
    }
    let mut pairs: Vec<(usize, usize)> = p.c.keys().chain(p.tails.keys()).copied().collect();
    pairs.sort();
    pairs.dedup();
    for (i, j) in pairs {
        let d = [i, j].iter().filter(|&&k| p.vars[k].level == top).count() as i64;
        let tail = keep_degree(p, &p.tail_of(i, j), d);
        g.set_rule(i, j, p.c_of(i, j), tail);
    }
    g
}

/// A presentation together with its associated quasi-commutative algebra.
pub struct Graded {
    pub base: Arc<Presentation>,
    pub gr: Arc<Presentation>,
}

impl Graded {
    pub fn new(base: &Arc<Presentation>) -> Graded {
        Graded { base: base.clone(), gr: Arc::new(assoc_algebra(base)) }
    }

    pub fn degree_of(&self, e: &[i32]) -> i64 {
        top_degree(&self.base, e)
    }

    fn homogeneous_degree(&self, f: &SkewPoly) -> Option<i64> {
        let mut ds = f.terms().keys().map(|e| self.degree_of(e));
        let d = ds.next()?;
        ds.all(|x| x == d).then_some(d)
    }

    /// The top-degree part of `f`, read in `A^σ`.
    pub fn top_component(&self, f: &SkewPoly) -> Result<(i64, SkewPoly), GradedError> {
        let m = f.terms().keys().map(|e| self.degree_of(e)).max().ok_or(GradedError::Zero)?;
        let t: Terms = keep_degree(&self.base, f.terms(), m);
        Ok((m, SkewPoly::from_terms(&self.gr, t)))
    }

    /// φ(a)φ(b) = φ(ab) for homogeneous `a`, `b`, where a product that
    /// drops in degree maps to zero.
    pub fn check_gr_mult(&self, a: &SkewPoly, b: &SkewPoly) -> Result<bool, GradedError> {
        if a.is_zero() || b.is_zero() {
            return Ok(true);
        }
        let l = self.homogeneous_degree(a).ok_or(GradedError::NotHomogeneous)?;
        let m = self.homogeneous_degree(b).ok_or(GradedError::NotHomogeneous)?;
        let ab = a * b;
        let ga = a.rebase(&self.gr);
        let gb = b.rebase(&self.gr);
        let gab = &ga * &gb;
        if ab.is_zero() {
            return Ok(gab.is_zero());
        }
        let (d, top) = self.top_component(&ab)?;
        if d == l + m {
            Ok(top == gab)
        } else {
            Ok(gab.is_zero())
        }
    }
}

/// `θ_j` on `R[z_1;θ_1]⋯[z_{j-1};θ_{j-1}]`: `σ_j` on R and
/// `x_i ↦ c_ij x_i` on the earlier variables. For a nested presentation R is
/// the inner algebra, so `σ_j` is also recorded on the inner variables.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerStep {
    pub index: usize,
    pub theta_on_ring: EndoSpec,
    pub theta_on_inner: Vec<(usize, Terms)>,
    pub theta_on_vars: Vec<(usize, RingElem)>,
    /// `σ_j^{-1}` on the inner variables, present when the presentation is bijective.
    pub inverse_on_inner: Option<Vec<(usize, Terms)>>,
    /// `x_i ↦ σ_j^{-1}(c_ij^{-1}) x_i`, present when the presentation is bijective.
    pub inverse_on_vars: Option<Vec<(usize, RingElem)>>,
}

fn var_terms(p: &Presentation, i: usize) -> Terms {
    Terms::from([(unit_exp(p.nvars(), i), p.ring.one())])
}

impl TowerStep {
    /// `θ_j θ_j^{-1} = id = θ_j^{-1} θ_j` on the generators of the ring, the
    /// inner variables and the earlier variables.
    pub fn round_trips(&self, p: &Presentation) -> bool {
        let j = self.index;
        let (Some(inv), Some(inv_inner)) = (&self.inverse_on_vars, &self.inverse_on_inner) else { return false };
        for g in p.ring.generators() {
            let t = p.ring.gen(&g).unwrap();
            let Ok(back) = p.sigma_inv_apply(j, &t) else { return false };
            if p.sigma_apply(j, &back) != t {
                return false;
            }
            match p.sigma_inv_apply(j, &p.sigma_apply(j, &t)) {
                Ok(x) if x == t => {}
                _ => return false,
            }
        }
        for ((i, img), (_, pre)) in self.theta_on_inner.iter().zip(inv_inner) {
            let x = var_terms(p, *i);
            match (sigma_inner(p, j, pre), sigma_inv_inner(p, j, img)) {
                (Ok(a), Ok(b)) if a == x && b == x => {}
                _ => return false,
            }
        }
        for ((_, c), (_, ci)) in self.theta_on_vars.iter().zip(inv) {
            // θ(θ^{-1}(x_i)) = σ_j(ci)·c and θ^{-1}(θ(x_i)) = σ_j^{-1}(c)·ci
            if !p.sigma_apply(j, ci).mul(c).is_one() {
                return false;
            }
            match p.sigma_inv_apply(j, c) {
                Ok(x) if x.mul(ci).is_one() => {}
                _ => return false,
            }
        }
        true
    }

    pub fn render(&self, p: &Presentation) -> String {
        let names = p.var_names();
        let lv = p.levels();
        let ring_part = |imgs: &[RingElem], out: &mut Vec<String>| {
            for (g, im) in p.ring.generators().iter().zip(imgs) {
                if *im != p.ring.gen(g).unwrap() {
                    out.push(format!("{g} -> {im}"));
                }
            }
        };
        let mut parts = vec![];
        ring_part(&self.theta_on_ring.images, &mut parts);
        for (i, t) in &self.theta_on_inner {
            if *t != var_terms(p, *i) {
                parts.push(format!("{} -> {}", names[*i], render_terms(t, &names, &lv)));
            }
        }
        for (i, c) in self.theta_on_vars.iter().filter(|(_, c)| !c.is_one()) {
            parts.push(format!("{} -> {}", names[*i], scaled(c, &names[*i])));
        }
        let body = if parts.is_empty() { "identity".to_string() } else { parts.join(", ") };
        let mut s = format!("theta_{}: {body}", names[self.index]);
        if let (Some(inv), Some(inv_inner)) = (&self.inverse_on_vars, &self.inverse_on_inner) {
            let mut ip = vec![];
            if let Some(ring_inv) = &self.theta_on_ring.inverse_images {
                ring_part(ring_inv, &mut ip);
            }
            for (i, t) in inv_inner {
                if *t != var_terms(p, *i) {
                    ip.push(format!("{} -> {}", names[*i], render_terms(t, &names, &lv)));
                }
            }
            for (i, c) in inv.iter().filter(|(_, c)| !c.is_one()) {
                ip.push(format!("{} -> {}", names[*i], scaled(c, &names[*i])));
            }
            if !ip.is_empty() {
                s.push_str(&format!("\n  inverse: {}", ip.join(", ")));
            }
        }
        s
    }
}

fn scaled(c: &RingElem, v: &str) -> String {
    if c.is_one() {
        return v.to_string();
    }
    let (f, _) = c.render_factor();
    format!("{f}*{v}")
}

/// The steps `R[z_1;θ_1][z_2;θ_2]⋯[z_n;θ_n]` of a quasi-commutative
/// presentation, one per outermost variable.
pub fn tower(p: &Presentation) -> Result<Vec<TowerStep>, GradedError> {
    if !p.is_quasi_commutative() {
        return Err(GradedError::NotQuasiCommutative);
    }
    let bij = p.is_bijective();
    let top = p.top_vars();
    let inner = p.inner_vars();
    let mut out = vec![];
    for (pos, &j) in top.iter().enumerate() {
        let on_vars: Vec<(usize, RingElem)> = top[..pos].iter().map(|&i| (i, p.c_of(i, j))).collect();
        let on_inner = inner
            .iter()
            .map(|&i| Ok((i, sigma_inner(p, j, &var_terms(p, i))?)))
            .collect::<Result<Vec<_>, EngineError>>()
            .map_err(|e| GradedError::Engine(e.to_string()))?;
        let (inverse_on_vars, inverse_on_inner) = if bij {
            let vars = on_vars
                .iter()
                .map(|(i, c)| {
                    let ci = c.try_invert().ok_or_else(|| GradedError::Engine(format!("{c} is not a unit")))?;
                    let im = p.sigma_inv_apply(j, &ci).map_err(|e| GradedError::Engine(e.to_string()))?;
                    Ok((*i, im))
                })
                .collect::<Result<Vec<_>, GradedError>>()?;
            let inn = inner
                .iter()
                .map(|&i| Ok((i, sigma_inv_inner(p, j, &var_terms(p, i))?)))
                .collect::<Result<Vec<_>, EngineError>>()
                .map_err(|e| GradedError::Engine(e.to_string()))?;
            (Some(vars), Some(inn))
        } else {
            (None, None)
        };
        out.push(TowerStep {
            index: j,
            theta_on_ring: p.sigma[j].clone(),
            theta_on_inner: on_inner,
            theta_on_vars: on_vars,
            inverse_on_inner,
            inverse_on_vars,
        });
    }
    Ok(out)
}
