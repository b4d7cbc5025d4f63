//! Elements of ℚ(q_1,…,q_s) as reduced fractions of polynomials.

use num_traits::Zero;

use super::mpoly::{MPoly, Q};

/// A reduced fraction `num/den` with `gcd(num, den) = 1` and the
/// graded-lex leading coefficient of `den` equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac {
    pub num: MPoly,
    pub den: MPoly,
}

impl Frac {
    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn zero(nvars: usize) -> Self {
        Frac { num: MPoly::zero(nvars), den: MPoly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        Frac { num: MPoly::one(nvars), den: MPoly::one(nvars) }
    }

    pub fn from_q(nvars: usize, c: Q) -> Self {
        Frac { num: MPoly::constant(nvars, c), den: MPoly::one(nvars) }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars;
        Frac { num: p, den: MPoly::one(n) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Frac::from_poly(MPoly::var(nvars, i))
    }

    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let n = num.nvars;
        if num.is_zero() {
            return Frac::zero(n);
        }
        if let Some(d) = den.as_constant() {
            let inv = d.recip();
            return Frac { num: num.scale(&inv), den: MPoly::one(n) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading().unwrap().1.recip();
        Frac { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, o: &Frac) -> Frac {
        if self.den == o.den {
            if self.den.is_one() {
                return Frac { num: self.num.add(&o.num), den: self.den.clone() };
            }
            return Frac::new(self.num.add(&o.num), self.den.clone());
        }
        Frac::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero(self.nvars());
        }
        if self.den.is_one() && o.den.is_one() {
            return Frac { num: self.num.mul(&o.num), den: self.den.clone() };
        }
        // cross-cancel before multiplying to keep the gcds small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading().unwrap().1.recip();
        Frac { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn inv(&self) -> Option<Frac> {
        if self.is_zero() {
            return None;
        }
        Some(Frac::new(self.den.clone(), self.num.clone()))
    }

    pub fn scale_q(&self, c: &Q) -> Frac {
        if c.is_zero() {
            return Frac::zero(self.nvars());
        }
        Frac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, n: i64) -> Option<Frac> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Some(Frac { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Substitute field generators by the given images.
    pub fn substitute(&self, images: &[Frac]) -> Option<Frac> {
        let n = self.nvars();
        let ev = |p: &MPoly| -> Frac {
            let mut acc = Frac::zero(n);
            for (e, c) in &p.terms {
                let mut t = Frac::from_q(n, c.clone());
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        t = t.mul(&images[i].pow(k as i64).unwrap());
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        let num = ev(&self.num);
        let den = ev(&self.den);
        Some(num.mul(&den.inv()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mpoly::q_from_int;
    use num_traits::One;

    #[test]
    fn field_inverse_cancels() {
        let q = Frac::var(1, 0);
        assert!(q.mul(&q.inv().unwrap()).is_one());
    }

    #[test]
    fn fraction_sum_is_reduced() {
        let q = Frac::var(1, 0);
        let one = Frac::one(1);
        // 1/(q-1) - 1/(q+1) = 2/(q^2-1)
        let a = q.sub(&one).inv().unwrap();
        let b = q.add(&one).inv().unwrap();
        let lhs = a.sub(&b);
        let rhs = Frac::from_q(1, q_from_int(2)).mul(&q.mul(&q).sub(&one).inv().unwrap());
        assert_eq!(lhs, rhs);
        assert!(lhs.den.leading().unwrap().1.is_one());
    }
}
