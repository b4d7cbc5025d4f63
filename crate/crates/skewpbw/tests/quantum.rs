mod common;

use common::*;
use rand::Rng;
use skewpbw::catalog::instantiate;
use skewpbw::cli::{parse_expr, Definition};
use skewpbw::poly::{SkewPoly, Terms};
use skewpbw::quantum::{QuantumError, QuantumPresentation};

fn kv(k: &str, v: &str) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn quantum(key: &str, params: &[(String, String)]) -> QuantumPresentation {
    match instantiate(key, params).unwrap() {
        Definition::Quantum(q) => q,
        Definition::Plain(_) => panic!("{key} has no invertible variables"),
    }
}

fn rand_laurent<R: Rng>(q: &QuantumPresentation, rng: &mut R, nterms: usize) -> SkewPoly {
    let p = &q.core;
    let mut t = Terms::new();
    for _ in 0..rng.gen_range(1..=nterms) {
        let e: Vec<i32> = (0..q.nvars()).map(|i| if i < q.r { rng.gen_range(-2..=2) } else { rng.gen_range(0..=2) }).collect();
        skewpbw::poly::terms_add(&mut t, e, rand_coeff(p, rng));
    }
    q.element(t).unwrap()
}

fn rand_s<R: Rng>(q: &QuantumPresentation, rng: &mut R) -> Vec<i32> {
    (0..q.nvars()).map(|i| if i < q.r { rng.gen_range(0..=2) } else { 0 }).collect()
}

/// A unit of the coefficient ring: a nonzero rational times field and
/// Laurent generators.
fn rand_unit<R: Rng>(q: &QuantumPresentation, rng: &mut R) -> skewpbw::coeff::RingElem {
    let ring = &q.core.ring;
    let mut u = ring.int(rng.gen_range(1..=4));
    for g in ring.generators() {
        if ring.is_field_gen(&g) || ring.is_laurent_gen(&g) {
            u = u.mul(&ring.gen(&g).unwrap().pow(rng.gen_range(-1..=1)).unwrap());
        }
    }
    u
}

#[test]
fn torus_relations() {
    let q = quantum("quantum-torus", &[]);
    let d = Definition::Quantum(q.clone());
    let e = |s: &str| parse_expr(s, &d).unwrap().to_string();
    assert_eq!(e("x2*x1"), "q*x1*x2");
    assert_eq!(e("x1*x1^-1"), "1");
    assert_eq!(e("x2^-1*x1"), "(1/q)*x1*x2^-1");
    assert_eq!(e("x1^-1*x2^-1"), "x1^-1*x2^-1");
    // (x1 x2)^-1 = (q^-1 x2 x1)^-1
    assert_eq!(e("x2^-1*x1^-1"), "q*x1^-1*x2^-1");
}

#[test]
fn ore_witnesses_in_tori() {
    let mut rng = rng(4);
    for n in ["2", "3"] {
        let q = quantum("quantum-torus", &[kv("n", n)]);
        for _ in 0..30 {
            let f = rand_laurent(&q, &mut rng, 3);
            let r = rand_unit(&q, &mut rng);
            let alpha = rand_s(&q, &mut rng);
            let s = q.monomial(alpha.clone(), r.clone()).unwrap();
            let xa = q.monomial(alpha.clone(), q.core.ring.one()).unwrap();
            let g = q.ore_left_witness(&f, &r, &alpha).unwrap();
            assert_eq!(q.qmul(&g, &s).unwrap(), q.qmul(&xa, &f).unwrap());
            let g2 = q.ore_right_witness(&f, &r, &alpha).unwrap();
            assert_eq!(q.qmul(&s, &g2).unwrap(), q.qmul(&f, &xa).unwrap());
        }
    }
}

#[test]
fn ore_witnesses_with_twisted_coefficients() {
    let mut rng = rng(9);
    let q = quantum("skew-quantum-polynomials", &[kv("n", "3"), kv("r", "2")]);
    for _ in 0..30 {
        let f = rand_laurent(&q, &mut rng, 3);
        let r = rand_unit(&q, &mut rng);
        let alpha = rand_s(&q, &mut rng);
        let s = q.monomial(alpha.clone(), r.clone()).unwrap();
        let xa = q.monomial(alpha.clone(), q.core.ring.one()).unwrap();
        let g = q.ore_left_witness(&f, &r, &alpha).unwrap();
        assert_eq!(q.qmul(&g, &s).unwrap(), q.qmul(&xa, &f).unwrap());
    }
}

#[test]
fn term_inverses_are_two_sided() {
    let mut rng = rng(12);
    for (key, params) in [
        ("quantum-torus", vec![kv("n", "3")]),
        ("skew-quantum-polynomials", vec![kv("n", "3"), kv("r", "3")]),
    ] {
        let q = quantum(key, &params);
        let one = SkewPoly::one(&q.core);
        for _ in 0..30 {
            let r = rand_unit(&q, &mut rng);
            let alpha: Vec<i32> = (0..q.nvars()).map(|i| if i < q.r { rng.gen_range(-2..=2) } else { 0 }).collect();
            let t = q.monomial(alpha.clone(), r.clone()).unwrap();
            let inv = q.invert_term(&r, &alpha).unwrap();
            assert_eq!(q.qmul(&t, &inv).unwrap(), one, "{key}");
            assert_eq!(q.qmul(&inv, &t).unwrap(), one, "{key}");
        }
    }
}

#[test]
fn localized_product_is_associative() {
    let mut rng = rng(31);
    let q = quantum("skew-quantum-polynomials", &[kv("n", "3"), kv("r", "2")]);
    for _ in 0..20 {
        let a = rand_laurent(&q, &mut rng, 2);
        let b = rand_laurent(&q, &mut rng, 2);
        let c = rand_laurent(&q, &mut rng, 2);
        let l = q.qmul(&q.qmul(&a, &b).unwrap(), &c).unwrap();
        let r = q.qmul(&a, &q.qmul(&b, &c).unwrap()).unwrap();
        assert_eq!(l, r);
    }
}

#[test]
fn polynomial_part_agrees_with_engine() {
    let mut rng = rng(2);
    let q = quantum("skew-quantum-polynomials", &[kv("n", "3"), kv("r", "1")]);
    for _ in 0..20 {
        let a = rand_elem(&q.core, &mut rng, 2, 2);
        let b = rand_elem(&q.core, &mut rng, 2, 2);
        assert_eq!(q.qmul(&a, &b).unwrap(), naive(&a, &b));
    }
}

#[test]
fn invalid_inputs() {
    let q = quantum("skew-quantum-polynomials", &[kv("n", "2"), kv("r", "1")]);
    let one = q.core.ring.one();
    assert!(matches!(q.invert_term(&one, &[0, 1]), Err(QuantumError::NotInS(_))));
    assert!(matches!(q.var_power(1, -1), Err(QuantumError::NegativeExponent(_))));
    let f = SkewPoly::one(&q.core);
    assert!(matches!(q.ore_left_witness(&f, &q.core.ring.zero(), &[1, 0]), Err(QuantumError::NotAUnit(_))));
    let d = Definition::Quantum(q);
    assert!(parse_expr("x2^-1", &d).is_err());
}
