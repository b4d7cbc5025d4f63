//! Skew quantum polynomials: the first `r` variables of a quasi-commutative
//! bijective presentation are made invertible, and elements are written in
//! the monomials `x^α` with `α_1,…,α_r ∈ ℤ`.
//!
//! Over a quasi-commutative core every product of two terms is again a
//! single term, so everything reduces to the scalar `κ` in
//! `x^α x^β = κ x^{α+β}`, built from unit swaps such as
//! `x_k^{-1} x_j = σ_k^{-1}(c_jk)^{-1} x_j x_k^{-1}`.

use std::sync::Arc;

use crate::coeff::RingElem;
use crate::poly::{add_exp, terms_add, Exp, SkewPoly, Terms};
use crate::presentation::{Presentation, PresentationError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QuantumError {
    #[error("the core presentation must be quasi-commutative")]
    NotQuasiCommutative,
    #[error("the core presentation must be bijective: {0}")]
    NotBijective(String),
    #[error("invertible variables must come first in the variable order")]
    InvertibleOrder,
    #[error("nested presentations cannot be localized")]
    Nested,
    #[error("negative exponent on the non-invertible variable {0}")]
    NegativeExponent(String),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("element is not in the multiplicative set: {0}")]
    NotInS(String),
    #[error("polynomials over different presentations")]
    Mismatch,
    #[error("witness failed verification")]
    WitnessFailed,
}

impl From<PresentationError> for QuantumError {
    fn from(e: PresentationError) -> Self {
        QuantumError::NotBijective(e.to_string())
    }
}

/// `R_{q,σ}[x_1^{±1},…,x_r^{±1},x_{r+1},…,x_n]`.
#[derive(Clone, Debug)]
pub struct QuantumPresentation {
    pub core: Arc<Presentation>,
    pub r: usize,
    /// `q[i][j]` with `x_j x_i = q_ij x_i x_j`, `q_ii = 1` and `q_ji = q_ij^{-1}`.
    pub q: Vec<Vec<RingElem>>,
}

impl PartialEq for QuantumPresentation {
    fn eq(&self, o: &Self) -> bool {
        self.r == o.r && *self.core == *o.core
    }
}

impl QuantumPresentation {
    /// The invertible variables are the ones flagged `invertible` in `core`.
    pub fn new(core: Presentation) -> Result<QuantumPresentation, QuantumError> {
        if core.is_nested() {
            return Err(QuantumError::Nested);
        }
        if !core.is_quasi_commutative() {
            return Err(QuantumError::NotQuasiCommutative);
        }
        if !core.is_bijective() {
            return Err(QuantumError::NotBijective(core.name.clone()));
        }
        let r = core.vars.iter().take_while(|v| v.invertible).count();
        if core.vars[r..].iter().any(|v| v.invertible) {
            return Err(QuantumError::InvertibleOrder);
        }
        let n = core.nvars();
        let one = core.ring.one();
        let mut q = vec![vec![one.clone(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = core.c_of(i, j);
                q[j][i] = c.try_invert().ok_or_else(|| QuantumError::NotAUnit(c.to_string()))?;
                q[i][j] = c;
            }
        }
        Ok(QuantumPresentation { core: Arc::new(core), r, q })
    }

    pub fn nvars(&self) -> usize {
        self.core.nvars()
    }

    fn sigma(&self, i: usize, s: i32, x: &RingElem) -> RingElem {
        if s > 0 {
            self.core.sigma_apply(i, x)
        } else {
            self.core.sigma_inv_apply(i, x).expect("core twists are certified bijective")
        }
    }

    /// `σ^α` with signed entries; `σ_n^{α_n}` acts first.
    pub fn sigma_power(&self, alpha: &[i32], x: &RingElem) -> RingElem {
        let mut x = x.clone();
        for i in (0..alpha.len()).rev() {
            for _ in 0..alpha[i].unsigned_abs() {
                x = self.sigma(i, alpha[i].signum(), &x);
            }
        }
        x
    }

    /// `(σ^α)^{-1}`.
    pub fn sigma_power_inv(&self, alpha: &[i32], x: &RingElem) -> RingElem {
        let mut x = x.clone();
        for i in 0..alpha.len() {
            for _ in 0..alpha[i].unsigned_abs() {
                x = self.sigma(i, -alpha[i].signum(), &x);
            }
        }
        x
    }

    fn inv(&self, x: &RingElem) -> RingElem {
        x.try_invert().expect("structure constants are units")
    }

    /// `x_k^s x_j^t = κ x_j^t x_k^s` for `k > j` and `s, t = ±1`.
    fn swap(&self, k: usize, s: i32, j: usize, t: i32) -> RingElem {
        let c = &self.q[j][k];
        match (s > 0, t > 0) {
            (true, true) => c.clone(),
            (false, true) => self.inv(&self.sigma(k, -1, c)),
            (true, false) => self.inv(&self.sigma(j, -1, c)),
            (false, false) => self.sigma(j, -1, &self.sigma(k, -1, c)),
        }
    }

    /// `x_k^a x_j^t = κ x_j^t x_k^a` for `k > j`, `t = ±1`.
    fn swap_power(&self, k: usize, a: i32, j: usize, t: i32) -> RingElem {
        let s = a.signum();
        let unit = self.swap(k, s, j, t);
        let mut acc = self.core.ring.one();
        for _ in 0..a.unsigned_abs() {
            acc = self.sigma(k, s, &acc).mul(&unit);
        }
        acc
    }

    /// `κ` with `x^α x^β = κ x^{α+β}`.
    pub fn c_alpha_beta(&self, alpha: &[i32], beta: &[i32]) -> RingElem {
        let n = self.nvars();
        let mut coef = self.core.ring.one();
        let mut g = alpha.to_vec();
        for j in 0..n {
            let t = beta[j].signum();
            for _ in 0..beta[j].unsigned_abs() {
                // c x^γ · x_j^t: move x_j^t left past x_n^{γ_n}, …, x_{j+1}^{γ_{j+1}}
                let mut k_acc = self.core.ring.one();
                for k in (j + 1..n).rev() {
                    if g[k] != 0 {
                        let mut tw = k_acc;
                        for _ in 0..g[k].unsigned_abs() {
                            tw = self.sigma(k, g[k].signum(), &tw);
                        }
                        k_acc = tw.mul(&self.swap_power(k, g[k], j, t));
                    }
                }
                let mut prefix = g.clone();
                for x in prefix.iter_mut().skip(j + 1) {
                    *x = 0;
                }
                coef = coef.mul(&self.sigma_power(&prefix, &k_acc));
                g[j] += t;
            }
        }
        coef
    }

    fn check(&self, e: &[i32]) -> Result<(), QuantumError> {
        for (i, &x) in e.iter().enumerate().skip(self.r) {
            if x < 0 {
                return Err(QuantumError::NegativeExponent(self.core.vars[i].name.clone()));
            }
        }
        Ok(())
    }

    pub fn element(&self, terms: Terms) -> Result<SkewPoly, QuantumError> {
        for e in terms.keys() {
            self.check(e)?;
        }
        Ok(SkewPoly::from_terms(&self.core, terms))
    }

    pub fn monomial(&self, e: Exp, c: RingElem) -> Result<SkewPoly, QuantumError> {
        let mut t = Terms::new();
        terms_add(&mut t, e, c);
        self.element(t)
    }

    pub fn var_power(&self, i: usize, k: i32) -> Result<SkewPoly, QuantumError> {
        let mut e = vec![0; self.nvars()];
        e[i] = k;
        self.monomial(e, self.core.ring.one())
    }

    /// Product in the localized ring.
    pub fn qmul(&self, f: &SkewPoly, g: &SkewPoly) -> Result<SkewPoly, QuantumError> {
        for h in [f, g] {
            if !Arc::ptr_eq(h.presentation(), &self.core) && **h.presentation() != *self.core {
                return Err(QuantumError::Mismatch);
            }
            for e in h.terms().keys() {
                self.check(e)?;
            }
        }
        let mut out = Terms::new();
        for (a, x) in f.terms() {
            for (b, y) in g.terms() {
                let c = x.mul(&self.sigma_power(a, y)).mul(&self.c_alpha_beta(a, b));
                terms_add(&mut out, add_exp(a, b), c);
            }
        }
        Ok(SkewPoly::from_terms(&self.core, out))
    }

    fn in_s(&self, r: &RingElem, alpha: &[i32]) -> Result<RingElem, QuantumError> {
        let ri = r.try_invert().ok_or_else(|| QuantumError::NotAUnit(r.to_string()))?;
        if alpha.iter().enumerate().any(|(i, &x)| x < 0 || (x != 0 && i >= self.r)) {
            return Err(QuantumError::NotInS(format!("{alpha:?}")));
        }
        Ok(ri)
    }

    /// `(r x^α)^{-1} = (σ^α)^{-1}(r^{-1}) (x^α)^{-1}`.
    pub fn invert_term(&self, r: &RingElem, alpha: &[i32]) -> Result<SkewPoly, QuantumError> {
        let ri = r.try_invert().ok_or_else(|| QuantumError::NotAUnit(r.to_string()))?;
        if alpha.iter().enumerate().any(|(i, &x)| x != 0 && i >= self.r) {
            return Err(QuantumError::NotInS(format!("{alpha:?}")));
        }
        let n = self.nvars();
        let mut inv_mon = SkewPoly::one(&self.core);
        for i in (0..n).rev() {
            if alpha[i] != 0 {
                inv_mon = self.qmul(&inv_mon, &self.var_power(i, -alpha[i])?)?;
            }
        }
        Ok(inv_mon.scale(&self.sigma_power_inv(alpha, &ri)))
    }

    /// `g` with `g·(r x^α) = x^α·f`.
    pub fn ore_left_witness(&self, f: &SkewPoly, r: &RingElem, alpha: &[i32]) -> Result<SkewPoly, QuantumError> {
        let ri = self.in_s(r, alpha)?;
        let mut out = Terms::new();
        for (b, c) in f.terms() {
            self.check(b)?;
            let d = self
                .sigma_power(alpha, c)
                .mul(&self.c_alpha_beta(alpha, b))
                .mul(&self.inv(&self.c_alpha_beta(b, alpha)))
                .mul(&self.sigma_power(b, &ri));
            terms_add(&mut out, b.clone(), d);
        }
        let g = SkewPoly::from_terms(&self.core, out);
        let s = self.monomial(alpha.to_vec(), r.clone())?;
        let xa = self.var_mon(alpha)?;
        if self.qmul(&g, &s)? != self.qmul(&xa, f)? {
            return Err(QuantumError::WitnessFailed);
        }
        Ok(g)
    }

    /// `g'` with `(r x^α)·g' = f·x^α`, solved term by term.
    pub fn ore_right_witness(&self, f: &SkewPoly, r: &RingElem, alpha: &[i32]) -> Result<SkewPoly, QuantumError> {
        let ri = self.in_s(r, alpha)?;
        let mut out = Terms::new();
        for (b, c) in f.terms() {
            self.check(b)?;
            let target = ri
                .mul(c)
                .mul(&self.c_alpha_beta(b, alpha))
                .mul(&self.inv(&self.c_alpha_beta(alpha, b)));
            terms_add(&mut out, b.clone(), self.sigma_power_inv(alpha, &target));
        }
        let g = SkewPoly::from_terms(&self.core, out);
        let s = self.monomial(alpha.to_vec(), r.clone())?;
        let xa = self.var_mon(alpha)?;
        if self.qmul(&s, &g)? != self.qmul(f, &xa)? {
            return Err(QuantumError::WitnessFailed);
        }
        Ok(g)
    }

    fn var_mon(&self, alpha: &[i32]) -> Result<SkewPoly, QuantumError> {
        self.monomial(alpha.to_vec(), self.core.ring.one())
    }
}
