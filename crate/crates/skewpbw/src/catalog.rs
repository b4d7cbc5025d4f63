//! Built-in parameterized presentations.
//!
//! Each entry renders a definition-language document from its parameters and
//! parses it, so every catalog algebra goes through the same normalization as
//! user input.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use crate::cli::{parse_definition, parse_expr, Definition};
use crate::poly::SkewPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Any,
    Nonzero,
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// A count such as the number of variable pairs.
    Size { min: usize, max: usize },
    /// An element of the coefficient ring.
    Scalar(Constraint),
    /// Free text spliced into the definition.
    Text,
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub kind: ParamKind,
}

pub struct CatalogEntry {
    pub key: &'static str,
    pub family: &'static str,
    pub params: &'static [ParamSpec],
    pub quasi_commutative: bool,
    pub bijective: bool,
    pub note: &'static str,
    build: fn(&Args) -> String,
}

impl CatalogEntry {
    pub fn signature(&self) -> String {
        self.params
            .iter()
            .map(|p| format!("{}={}", p.name, p.default))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry '{0}'")]
    UnknownKey(String),
    #[error("entry '{0}' has no parameter '{1}'")]
    UnknownParam(String, String),
    #[error("parameter {0}: {1}")]
    Param(String, String),
    #[error("definition does not parse: {0}")]
    Build(String),
}

pub struct Args {
    vals: BTreeMap<&'static str, String>,
}

impl Args {
    fn n(&self, k: &str) -> usize {
        self.vals[k].trim().parse().unwrap()
    }

    /// The value wrapped so that it can be spliced into a product.
    fn s(&self, k: &str) -> String {
        let v = self.vals[k].trim();
        if v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            v.to_string()
        } else {
            format!("({v})")
        }
    }

    fn raw(&self, k: &str) -> &str {
        self.vals[k].trim()
    }
}

/// `x` for a single index, `x1, …, xn` otherwise.
fn idx(base: &str, i: usize, n: usize) -> String {
    if n == 1 {
        base.to_string()
    } else {
        format!("{base}{i}")
    }
}

fn names(base: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| idx(base, i, n)).collect()
}

fn pair_gens(base: &str, n: usize) -> Vec<String> {
    let mut v = vec![];
    for i in 1..=n {
        for j in i + 1..=n {
            v.push(format!("{base}{i}{j}"));
        }
    }
    v
}

fn doc(ring: &str, name: &str, body: &str) -> String {
    format!("ring {ring}\nalgebra {name} {{\n{body}}}\n")
}

fn field(gens: &[String]) -> String {
    if gens.is_empty() {
        "QQ".into()
    } else {
        format!("QQ({})", gens.join(","))
    }
}

fn over(base: String, gens: &[String]) -> String {
    if gens.is_empty() {
        base
    } else {
        format!("{base}[{}]", gens.join(","))
    }
}

const fn size(name: &'static str, default: &'static str, max: usize) -> ParamSpec {
    ParamSpec { name, default, kind: ParamKind::Size { min: 1, max } }
}

const fn unit(name: &'static str, default: &'static str) -> ParamSpec {
    ParamSpec { name, default, kind: ParamKind::Scalar(Constraint::Unit) }
}

const fn any(name: &'static str, default: &'static str) -> ParamSpec {
    ParamSpec { name, default, kind: ParamKind::Scalar(Constraint::Any) }
}

// ---- builders ----

fn b_polynomial(a: &Args) -> String {
    let n = a.n("n");
    doc("QQ", "polynomial", &format!("  vars {}\n", names("t", n).join(", ")))
}

fn b_ore_derivation(a: &Args) -> String {
    doc("QQ[t]", "ore-derivation", &format!("  vars x\n  delta x {{ t -> {} }}\n", a.raw("d")))
}

fn weyl_body(n: usize) -> String {
    let (t, d) = (names("t", n), names("d", n));
    let mut s = format!("  vars {}\n", d.join(", "));
    for i in 0..n {
        writeln!(s, "  delta {} {{ {} -> 1 }}", d[i], t[i]).unwrap();
    }
    s
}

fn b_weyl(a: &Args) -> String {
    let n = a.n("n");
    doc(&over("QQ".into(), &names("t", n)), "weyl", &weyl_body(n))
}

fn b_weyl_extended(a: &Args) -> String {
    let n = a.n("n");
    doc(&field(&names("t", n)), "weyl-extended", &weyl_body(n))
}

fn b_enveloping(a: &Args) -> String {
    let basis: Vec<String> = a.raw("basis").split(',').map(|s| s.trim().to_string()).collect();
    let mut s = format!("  vars {}\n", basis.join(", "));
    for item in a.raw("brackets").split(';').filter(|x| !x.trim().is_empty()) {
        let (lhs, rhs) = item.split_once(':').unwrap_or((item, "0"));
        let (u, v) = lhs.split_once(',').unwrap_or((lhs, ""));
        writeln!(s, "  rel {}*{} - {}*{} = {}", u.trim(), v.trim(), v.trim(), u.trim(), rhs.trim()).unwrap();
    }
    doc("QQ", "enveloping", &s)
}

fn b_dqh(a: &Args) -> String {
    doc(
        "QQ(q,h)[y]",
        "dqh",
        &format!(
            "  vars x\n  sigma_inv x {{ y -> {q}^-1*y }}\n  rel x*y = {q}*y*x + {}\n",
            a.s("h"),
            q = a.s("q")
        ),
    )
}

fn b_shift(a: &Args) -> String {
    let h = a.s("h");
    doc(
        "QQ(h)[t]",
        "shift",
        &format!("  vars xh\n  sigma xh {{ t -> t - {h} }}\n  sigma_inv xh {{ t -> t + {h} }}\n"),
    )
}

fn b_mixed(a: &Args) -> String {
    let h = a.s("h");
    doc(
        "QQ(h)[t]",
        "mixed",
        &format!(
            "  vars x, xh\n  delta x {{ t -> 1 }}\n  sigma xh {{ t -> t - {h} }}\n  sigma_inv xh {{ t -> t + {h} }}\n"
        ),
    )
}

/// Operators `v_i` on `𝕜[t_1..t_n]` with `v_i t_i = σ(t_i) v_i + δ(t_i)`.
fn operator(a: &Args, ring_field: &[String], name: &str, v: &str, sig: &str, inv: &str, del: &str) -> String {
    let n = a.n("n");
    let m = a.vals.get("m").map_or(n, |_| a.n("m").min(n));
    let t = names("t", n);
    let vs: Vec<String> = (1..=m).map(|i| idx(v, i, n)).collect();
    let mut s = format!("  vars {}\n", vs.join(", "));
    for i in 0..m {
        let ti = &t[i];
        if !sig.is_empty() {
            writeln!(s, "  sigma {} {{ {ti} -> {} }}", vs[i], sig.replace('T', ti)).unwrap();
            writeln!(s, "  sigma_inv {} {{ {ti} -> {} }}", vs[i], inv.replace('T', ti)).unwrap();
        }
        if !del.is_empty() {
            writeln!(s, "  delta {} {{ {ti} -> {del} }}", vs[i]).unwrap();
        }
    }
    doc(&over(field(ring_field), &t), name, &s)
}

fn b_discrete(a: &Args) -> String {
    operator(a, &[], "discrete-systems", "x", "T + 1", "T - 1", "")
}

fn b_partial_shift(a: &Args) -> String {
    operator(a, &[], "partial-shift", "E", "T + 1", "T - 1", "")
}

fn b_partial_difference(a: &Args) -> String {
    operator(a, &[], "partial-difference", "D", "T + 1", "T - 1", "1")
}

fn b_q_dilation(a: &Args) -> String {
    let q = a.s("q");
    operator(a, &["q".into()], "q-dilation", "H", &format!("{q}*T"), &format!("{q}^-1*T"), "")
}

fn b_q_differential(a: &Args) -> String {
    let q = a.s("q");
    operator(a, &["q".into()], "q-differential", "D", &format!("{q}*T"), &format!("{q}^-1*T"), "1")
}

fn b_diffusion(a: &Args) -> String {
    let n = a.n("n");
    let (x, d) = (names("x", n), names("D", n));
    let mut s = format!("  vars {}\n", d.join(", "));
    let c = a.s("c");
    for i in 0..n {
        for j in i + 1..n {
            writeln!(
                s,
                "  rel {c}*{}*{} - {c}*{}*{} = {}*{} - {}*{}",
                d[i], d[j], d[j], d[i], x[j], d[i], x[i], d[j]
            )
            .unwrap();
        }
    }
    doc(&over(field(&["c".into()]), &x), "diffusion", &s)
}

fn b_additive_weyl(a: &Args) -> String {
    let n = a.n("n");
    let (x, y, q) = (names("x", n), names("y", n), names("q", n));
    let mut s = format!("  vars {}, {}\n", x.join(", "), y.join(", "));
    for i in 0..n {
        writeln!(s, "  rel {}*{} = {}*{}*{} + 1", y[i], x[i], q[i], x[i], y[i]).unwrap();
    }
    doc(&field(&q), "additive-weyl", &s)
}

fn b_multiplicative_weyl(a: &Args) -> String {
    let n = a.n("n");
    let x = names("x", n);
    let mut s = format!("  vars {}\n", x.join(", "));
    let mut gens = vec![];
    for i in 0..n {
        for j in i + 1..n {
            let l = format!("l{}{}", j + 1, i + 1);
            writeln!(s, "  rel {}*{} = {l}*{}*{}", x[j], x[i], x[i], x[j]).unwrap();
            gens.push(l);
        }
    }
    doc(&field(&gens), "multiplicative-weyl", &s)
}

fn b_uso3(_: &Args) -> String {
    doc(
        "QQ(s)",
        "uso3",
        "  vars I1, I2, I3\n  rel I2*I1 - s^2*I1*I2 = -s*I3\n  rel I3*I1 - s^-2*I1*I3 = s^-1*I2\n  rel I3*I2 - s^2*I2*I3 = -s*I1\n",
    )
}

fn b_skew3(a: &Args) -> String {
    let (al, be, ga) = (a.s("alpha"), a.s("beta"), a.s("gamma"));
    let (la, mu, nu) = (a.s("lambda"), a.s("mu"), a.s("nu"));
    doc(
        "QQ(alpha,beta,gamma)",
        "skew-poly-3d",
        &format!(
            "  vars x, y, z\n  rel y*z - {al}*z*y = {la}\n  rel z*x - {be}*x*z = {mu}\n  rel x*y - {ga}*y*x = {nu}\n"
        ),
    )
}

fn b_dispin(_: &Args) -> String {
    doc(
        "QQ",
        "dispin",
        "  vars x, y, z\n  rel y*z - z*y = z\n  rel z*x + x*z = y\n  rel x*y - y*x = x\n",
    )
}

fn b_woronowicz(a: &Args) -> String {
    let v = a.s("nu");
    doc(
        "QQ(nu)",
        "woronowicz",
        &format!(
            "  vars x, y, z\n  rel x*z - {v}^4*z*x = (1 + {v}^2)*x\n  rel x*y - {v}^2*y*x = {v}*z\n  rel z*y - {v}^4*y*z = (1 + {v}^2)*y\n"
        ),
    )
}

fn b_vq_sl3(_: &Args) -> String {
    let body = "  vars e12, e13, e23, f12, f13, f23
  sigma e12 { l1 -> q^2*l1, l2 -> q^-1*l2, k1 -> q^-2*k1, k2 -> q*k2 }
  sigma_inv e12 { l1 -> q^-2*l1, l2 -> q*l2, k1 -> q^2*k1, k2 -> q^-1*k2 }
  sigma e13 { l1 -> q*l1, l2 -> q*l2, k1 -> q^-1*k1, k2 -> q^-1*k2 }
  sigma_inv e13 { l1 -> q^-1*l1, l2 -> q^-1*l2, k1 -> q*k1, k2 -> q*k2 }
  sigma e23 { l1 -> q^-1*l1, l2 -> q^2*l2, k1 -> q*k1, k2 -> q^-2*k2 }
  sigma_inv e23 { l1 -> q*l1, l2 -> q^-2*l2, k1 -> q^-1*k1, k2 -> q^2*k2 }
  sigma f12 { l1 -> q^-2*l1, l2 -> q*l2, k1 -> q^2*k1, k2 -> q^-1*k2 }
  sigma_inv f12 { l1 -> q^2*l1, l2 -> q^-1*l2, k1 -> q^-2*k1, k2 -> q*k2 }
  sigma f13 { l1 -> q^-1*l1, l2 -> q^-1*l2, k1 -> q*k1, k2 -> q*k2 }
  sigma_inv f13 { l1 -> q*l1, l2 -> q*l2, k1 -> q^-1*k1, k2 -> q^-1*k2 }
  sigma f23 { l1 -> q*l1, l2 -> q^-2*l2, k1 -> q^-1*k1, k2 -> q^2*k2 }
  sigma_inv f23 { l1 -> q^-1*l1, l2 -> q^2*l2, k1 -> q*k1, k2 -> q^-2*k2 }
  rel e13*e12 = q^-2*e12*e13
  rel e23*e12 = q^2*e12*e23 - q*e13
  rel e23*e13 = q^-2*e13*e23
  rel f13*f12 = q^-2*f12*f13
  rel f23*f12 = q^2*f12*f23 - q*f13
  rel f23*f13 = q^-2*f13*f23
  rel e12*f12 = f12*e12 + (k1^2 - l1^2)/(q^2 - q^-2)
  rel e12*f13 = f13*e12 + q*f23*k1^2
  rel e12*f23 = f23*e12
  rel e13*f12 = f12*e13 - q^-1*l1^2*e23
  rel e13*f13 = f13*e13 - (k1^2*k2^2 - l1^2*l2^2)/(q^2 - q^-2)
  rel e13*f23 = f23*e13 + q*k2^2*e12
  rel e23*f12 = f12*e23
  rel e23*f13 = f13*e23 - q^-1*f12*l2^2
  rel e23*f23 = f23*e23 + (k2^2 - l2^2)/(q^2 - q^-2)
";
    doc("QQ(q)[l1,l2,k1,k2]", "vq-sl3", body)
}

fn b_algebra_u(a: &Args) -> String {
    let n = a.n("n");
    let (x, y, z) = (names("x", n), names("y", n), names("z", n));
    let mut s = format!("  vars {}, {}\n", y.join(", "), z.join(", "));
    for i in 0..n {
        let xi = &x[i];
        writeln!(s, "  sigma {} {{ {xi} -> q*{xi} }}\n  sigma_inv {} {{ {xi} -> q^-1*{xi} }}", y[i], y[i]).unwrap();
        writeln!(s, "  sigma {} {{ {xi} -> q^-1*{xi} }}\n  sigma_inv {} {{ {xi} -> q*{xi} }}", z[i], z[i]).unwrap();
        writeln!(s, "  rel {}*{} = q^2*{}*{} - q^2*{xi}^2", z[i], y[i], y[i], z[i]).unwrap();
    }
    doc(&over("QQ(q)".into(), &x), "algebra-u", &s)
}

fn b_quantum_matrices(_: &Args) -> String {
    doc(
        "QQ(q)[u]",
        "quantum-matrices",
        "  vars x, y, v
  sigma x { u -> q*u }
  sigma_inv x { u -> q^-1*u }
  sigma y { u -> q^-1*u }
  sigma_inv y { u -> q*u }
  rel y*x - x*y = -(q - q^-1)*u*v
  rel x*v = q*v*x
  rel v*y = q*y*v
",
    )
}

fn b_q_heisenberg(a: &Args) -> String {
    let n = a.n("n");
    let (x, y, z) = (names("x", n), names("y", n), names("z", n));
    let mut s = format!("  vars {}, {}, {}\n", x.join(", "), y.join(", "), z.join(", "));
    for i in 0..n {
        writeln!(s, "  rel {}*{} = q*{}*{}", z[i], y[i], y[i], z[i]).unwrap();
        writeln!(s, "  rel {}*{} = q^-1*{}*{} + {}", z[i], x[i], x[i], z[i], y[i]).unwrap();
        writeln!(s, "  rel {}*{} = q*{}*{}", y[i], x[i], x[i], y[i]).unwrap();
    }
    doc("QQ(q)", "q-heisenberg", &s)
}

fn b_uq_sl2(_: &Args) -> String {
    doc(
        "QQ(q)[z^+-]",
        "uq-sl2",
        "  vars x, y
  sigma x { z -> q^-2*z }
  sigma_inv x { z -> q^2*z }
  sigma y { z -> q^2*z }
  sigma_inv y { z -> q^-2*z }
  rel x*y - y*x = (z - z^-1)/(q - q^-1)
",
    )
}

fn b_hayashi(a: &Args) -> String {
    let n = a.n("n");
    let (x, y, z) = (names("x", n), names("y", n), names("z", n));
    let mut s = format!("  vars {}, {}\n", x.join(", "), z.join(", "));
    for i in 0..n {
        let yi = &y[i];
        writeln!(s, "  sigma {} {{ {yi} -> q^-1*{yi} }}\n  sigma_inv {} {{ {yi} -> q*{yi} }}", x[i], x[i]).unwrap();
        writeln!(s, "  sigma {} {{ {yi} -> q*{yi} }}\n  sigma_inv {} {{ {yi} -> q^-1*{yi} }}", z[i], z[i]).unwrap();
        writeln!(s, "  rel {}*{} = q*{}*{} + {yi}^-1", z[i], x[i], x[i], z[i]).unwrap();
    }
    let ring = format!("QQ(q)[{}]", y.iter().map(|v| format!("{v}^+-")).collect::<Vec<_>>().join(","));
    doc(&ring, "hayashi", &s)
}

/// `q_ij` for `i ≠ j` in terms of the generators `q{i}{j}`, `i < j`.
fn qij(i: usize, j: usize) -> String {
    if i < j {
        format!("q{}{}", i + 1, j + 1)
    } else {
        format!("q{}{}^-1", j + 1, i + 1)
    }
}

fn b_dq_sq(a: &Args) -> String {
    let n = a.n("n");
    let (x, d) = (names("x", n), names("d", n));
    let mut s = format!("  vars {}\n  vars {}\n", x.join(", "), d.join(", "));
    for i in 0..n {
        for j in 0..n {
            if i < j {
                writeln!(s, "  rel {}*{} = {}*{}*{}", x[i], x[j], qij(i, j), x[j], x[i]).unwrap();
                writeln!(s, "  rel {}*{} = {}*{}*{}", d[i], d[j], qij(i, j), d[j], d[i]).unwrap();
            }
            if i == j {
                writeln!(s, "  rel {}*{} - {}*{} = 1", d[i], x[i], x[i], d[i]).unwrap();
            } else {
                writeln!(s, "  rel {}*{} = {}*{}*{}", d[i], x[j], qij(j, i), x[j], d[i]).unwrap();
            }
        }
    }
    doc(&field(&pair_gens("q", n)), "dq-sq", &s)
}

fn b_witten(a: &Args) -> String {
    let [x1, x2, x3, x4, x5, x6, x7] = ["xi1", "xi2", "xi3", "xi4", "xi5", "xi6", "xi7"].map(|k| a.s(k));
    doc(
        "QQ(xi1,xi2,xi5,xi6,xi7)[x]",
        "witten",
        &format!(
            "  vars z
  vars y
  sigma_inv z {{ x -> {x1}*x }}
  sigma_inv y {{ x -> {x5}^-1*x }}
  rel z*x = {x1}^-1*x*z - {x2}*{x1}^-1*x
  rel z*y - {x3}*y*z = {x4}*y
  rel y*x = {x5}*x*y + {x6}*z^2 + {x7}*z
"
        ),
    )
}

fn b_maltsiniotis(a: &Args) -> String {
    let n = a.n("n");
    let (x, y, l) = (names("x", n), names("y", n), names("l", n));
    let mut s = String::new();
    for i in 0..n {
        writeln!(s, "  vars {}, {}", x[i], y[i]).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            let q = qij(i, j);
            let qji = qij(j, i);
            writeln!(s, "  rel {}*{} = {}*{q}*{}*{}", x[i], x[j], l[i], x[j], x[i]).unwrap();
            writeln!(s, "  rel {}*{} = {q}*{}*{}", y[i], y[j], y[j], y[i]).unwrap();
            writeln!(s, "  rel {}*{} = {qji}*{}*{}", x[i], y[j], y[j], x[i]).unwrap();
            writeln!(s, "  rel {}*{} = {}^-1*{qji}*{}*{}", y[i], x[j], l[i], x[j], y[i]).unwrap();
        }
        let mut rhs = "1".to_string();
        for j in 0..i {
            write!(rhs, " + ({} - 1)*{}*{}", l[j], y[j], x[j]).unwrap();
        }
        writeln!(s, "  rel {}*{} - {}*{}*{} = {rhs}", x[i], y[i], l[i], y[i], x[i]).unwrap();
    }
    let mut gens = l.clone();
    gens.extend(pair_gens("q", n));
    doc(&field(&gens), "maltsiniotis", &s)
}

fn pij(i: usize, j: usize) -> String {
    if i < j {
        format!("p{}{}", i + 1, j + 1)
    } else {
        format!("p{}{}^-1", j + 1, i + 1)
    }
}

fn b_quantum_weyl_pq(a: &Args) -> String {
    let n = a.n("n");
    let (x, d) = (names("x", n), names("d", n));
    let mut s = String::new();
    for i in (0..n).rev() {
        writeln!(s, "  vars {}, {}", x[i], d[i]).unwrap();
    }
    for i in 0..n {
        for j in 0..n {
            if i < j {
                let p = pij(i, j);
                writeln!(s, "  rel {}*{} = {p}*q*{}*{}", x[i], x[j], x[j], x[i]).unwrap();
                writeln!(s, "  rel {}*{} = {p}*q^-1*{}*{}", d[i], d[j], d[j], d[i]).unwrap();
            }
            if i != j {
                writeln!(s, "  rel {}*{} = {}*q*{}*{}", d[i], x[j], pij(j, i), x[j], d[i]).unwrap();
            }
        }
        let mut rhs = format!("1 + q^2*{}*{}", x[i], d[i]);
        for j in i + 1..n {
            write!(rhs, " + (q^2 - 1)*{}*{}", x[j], d[j]).unwrap();
        }
        writeln!(s, "  rel {}*{} = {rhs}", d[i], x[i]).unwrap();
    }
    let mut gens = vec!["q".to_string()];
    gens.extend(pair_gens("p", n));
    doc(&field(&gens), "quantum-weyl-pq", &s)
}

fn gij(i: usize, j: usize) -> String {
    if i < j {
        format!("g{}{}", i + 1, j + 1)
    } else {
        format!("g{}{}^-1", j + 1, i + 1)
    }
}

fn b_multiparameter_weyl(a: &Args) -> String {
    let n = a.n("n");
    let (x, y, q) = (names("x", n), names("y", n), names("q", n));
    let mut s = String::new();
    for i in 0..n {
        writeln!(s, "  vars {}, {}", x[i], y[i]).unwrap();
    }
    for i in 0..n {
        for j in 0..n {
            if i < j {
                writeln!(s, "  rel {}*{} = {}*{}*{}", y[i], y[j], gij(i, j), y[j], y[i]).unwrap();
                writeln!(s, "  rel {}*{} = {}*{}*{}*{}", x[i], x[j], q[i], gij(i, j), x[j], x[i]).unwrap();
                writeln!(s, "  rel {}*{} = {}*{}*{}", x[i], y[j], gij(j, i), y[j], x[i]).unwrap();
            } else if j < i {
                writeln!(s, "  rel {}*{} = {}*{}*{}*{}", x[i], y[j], q[j], gij(j, i), y[j], x[i]).unwrap();
            }
        }
        let mut rhs = format!("{}*{}*{} + 1", q[i], y[i], x[i]);
        for l in 0..i {
            write!(rhs, " + ({} - 1)*{}*{}", q[l], y[l], x[l]).unwrap();
        }
        writeln!(s, "  rel {}*{} = {rhs}", x[i], y[i]).unwrap();
    }
    let mut gens = q.clone();
    gens.extend(pair_gens("g", n));
    doc(&field(&gens), "multiparameter-weyl", &s)
}

fn b_quantum_symplectic(a: &Args) -> String {
    let n = a.n("n");
    let (x, y) = (names("x", n), names("y", n));
    let mut s = String::new();
    for i in 0..n {
        writeln!(s, "  vars {}, {}", y[i], x[i]).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            writeln!(s, "  rel {}*{} = q^-1*{}*{}", y[j], x[i], x[i], y[j]).unwrap();
            writeln!(s, "  rel {}*{} = q*{}*{}", y[j], y[i], y[i], y[j]).unwrap();
            writeln!(s, "  rel {}*{} = q^-1*{}*{}", x[j], x[i], x[i], x[j]).unwrap();
            writeln!(s, "  rel {}*{} = q*{}*{}", x[j], y[i], y[i], x[j]).unwrap();
        }
        let mut rhs = String::from("0");
        for l in 0..i {
            write!(rhs, " + (q^2 - 1)*q^{}*{}*{}", i - l, y[l], x[l]).unwrap();
        }
        writeln!(s, "  rel {}*{} - q^2*{}*{} = {rhs}", x[i], y[i], y[i], x[i]).unwrap();
    }
    doc("QQ(q)", "quantum-symplectic", &s)
}

fn b_quadratic3(a: &Args) -> String {
    let [a1, a2, a3, a4, a5, a6, x1, x2] = ["a1", "a2", "a3", "a4", "a5", "a6", "xi1", "xi2"].map(|k| a.s(k));
    doc(
        "QQ[z]",
        "quadratic-3",
        &format!(
            "  vars y
  vars x
  rel y*z = z*y - {a4}*z^2
  rel y*x = x*y + {a1}*z + {a2}*y^2 + {a3}*y*z + {x1}*z^2
  rel x*z = z*x - {x2}*y^2 - {a5}*y*z - {a6}*z^2
"
        ),
    )
}

fn b_quantum_space(a: &Args) -> String {
    let n = a.n("n");
    let x = names("x", n);
    let mut s = format!("  vars {}\n", x.join(", "));
    for i in 0..n {
        for j in i + 1..n {
            writeln!(s, "  rel {}*{} = {}*{}*{}", x[j], x[i], qij(i, j), x[i], x[j]).unwrap();
        }
    }
    doc(&field(&pair_gens("q", n)), "quantum-space", &s)
}

fn b_quantum_torus(a: &Args) -> String {
    let n = a.n("n");
    let x = names("x", n);
    let mut s = format!("  vars {}\n  invertible {}\n", x.join(", "), x.join(", "));
    for i in 0..n {
        for j in i + 1..n {
            writeln!(s, "  rel {}*{} = {}*{}*{}", x[j], x[i], a.s("q"), x[i], x[j]).unwrap();
        }
    }
    doc("QQ(q)", "quantum-torus", &s)
}

fn b_skew_quantum(a: &Args) -> String {
    let n = a.n("n");
    let r = a.n("r").min(n);
    let x = names("x", n);
    let mut s = format!("  vars {}\n", x.join(", "));
    if r > 0 {
        writeln!(s, "  invertible {}", x[..r].join(", ")).unwrap();
    }
    for i in 0..n {
        let (up, down) = if i == 0 { ("q".to_string(), "q^-1".to_string()) } else { (format!("q^{}", i + 1), format!("q^-{}", i + 1)) };
        writeln!(s, "  sigma {} {{ t -> {up}*t }}\n  sigma_inv {} {{ t -> {down}*t }}", x[i], x[i]).unwrap();
        for j in i + 1..n {
            writeln!(s, "  rel {}*{} = q*{}*{}", x[j], x[i], x[i], x[j]).unwrap();
        }
    }
    doc("QQ(q)[t^+-]", "skew-quantum-polynomials", &s)
}

const N1: &[ParamSpec] = &[size("n", "1", 4)];
const N2: &[ParamSpec] = &[size("n", "2", 4)];
const N3: &[ParamSpec] = &[size("n", "3", 5)];
const NM: &[ParamSpec] = &[size("n", "2", 4), size("m", "2", 4)];
const Q_NM: &[ParamSpec] = &[size("n", "2", 4), size("m", "2", 4), unit("q", "q")];

static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        key: "additive-weyl",
        family: "additive analogue of the Weyl algebra",
        params: N2,
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_additive_weyl,
    },
    CatalogEntry {
        key: "algebra-u",
        family: "quantum algebra U over a polynomial ring",
        params: N1,
        quasi_commutative: false,
        bijective: true,
        note: "complex parameters are taken in QQ(q)",
        build: b_algebra_u,
    },
    CatalogEntry {
        key: "diffusion",
        family: "diffusion algebra",
        params: &[size("n", "3", 4), unit("c", "c")],
        quasi_commutative: false,
        bijective: true,
        note: "uses one constant c = c_ij = c_ji for every pair",
        build: b_diffusion,
    },
    CatalogEntry {
        key: "discrete-systems",
        family: "multidimensional discrete linear systems",
        params: N2,
        quasi_commutative: true,
        bijective: true,
        note: "",
        build: b_discrete,
    },
    CatalogEntry {
        key: "dispin",
        family: "dispin algebra U(osp(1,2))",
        params: &[],
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_dispin,
    },
    CatalogEntry {
        key: "dq-sq",
        family: "q-differential operators on a quantum space (nested)",
        params: N2,
        quasi_commutative: false,
        bijective: true,
        note: "the coordinates form the inner level, the derivations the outer one",
        build: b_dq_sq,
    },
    CatalogEntry {
        key: "dqh",
        family: "q-differential operators D_{q,h}",
        params: &[unit("q", "q"), any("h", "h")],
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_dqh,
    },
    CatalogEntry {
        key: "enveloping",
        family: "universal enveloping algebra of a Lie algebra",
        params: &[
            ParamSpec { name: "basis", default: "e,f,h", kind: ParamKind::Text },
            ParamSpec { name: "brackets", default: "e,f: h; h,e: 2*e; h,f: -2*f", kind: ParamKind::Text },
        ],
        quasi_commutative: false,
        bijective: true,
        note: "brackets are given as 'a,b: [a,b]' separated by ';'",
        build: b_enveloping,
    },
    CatalogEntry {
        key: "hayashi",
        family: "Hayashi algebra over a Laurent ring",
        params: N1,
        quasi_commutative: false,
        bijective: true,
        note: "x_i and z_i twist y_i by q^-1 and q",
        build: b_hayashi,
    },
    CatalogEntry {
        key: "maltsiniotis",
        family: "quantum Weyl algebra of Maltsiniotis (nested)",
        params: N2,
        quasi_commutative: false,
        bijective: true,
        note: "one level per pair (x_i, y_i)",
        build: b_maltsiniotis,
    },
    CatalogEntry {
        key: "mixed",
        family: "mixed differential and shift operators",
        params: &[any("h", "h")],
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_mixed,
    },
    CatalogEntry {
        key: "multiparameter-weyl",
        family: "multiparameter quantized Weyl algebra (nested)",
        params: N2,
        quasi_commutative: false,
        bijective: true,
        note: "one level per pair (x_i, y_i)",
        build: b_multiparameter_weyl,
    },
    CatalogEntry {
        key: "multiplicative-weyl",
        family: "multiplicative analogue of the Weyl algebra",
        params: N3,
        quasi_commutative: true,
        bijective: true,
        note: "",
        build: b_multiplicative_weyl,
    },
    CatalogEntry {
        key: "ore-derivation",
        family: "skew polynomial ring of derivation type",
        params: &[any("d", "t^2")],
        quasi_commutative: false,
        bijective: true,
        note: "d is the image of t under the derivation",
        build: b_ore_derivation,
    },
    CatalogEntry {
        key: "partial-difference",
        family: "linear partial difference operators",
        params: NM,
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_partial_difference,
    },
    CatalogEntry {
        key: "partial-shift",
        family: "linear partial shift operators",
        params: NM,
        quasi_commutative: true,
        bijective: true,
        note: "",
        build: b_partial_shift,
    },
    CatalogEntry {
        key: "polynomial",
        family: "commutative polynomial ring",
        params: N2,
        quasi_commutative: true,
        bijective: true,
        note: "",
        build: b_polynomial,
    },
    CatalogEntry {
        key: "q-dilation",
        family: "linear partial q-dilation operators",
        params: Q_NM,
        quasi_commutative: true,
        bijective: true,
        note: "",
        build: b_q_dilation,
    },
    CatalogEntry {
        key: "q-differential",
        family: "linear partial q-differential operators",
        params: Q_NM,
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_q_differential,
    },
    CatalogEntry {
        key: "q-heisenberg",
        family: "q-Heisenberg algebra",
        params: N1,
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_q_heisenberg,
    },
    CatalogEntry {
        key: "quadratic-3",
        family: "quadratic algebra in three variables (nested)",
        params: &[
            any("a1", "1"),
            any("a2", "2"),
            any("a3", "3"),
            any("a4", "0"),
            any("a5", "5"),
            any("a6", "6"),
            any("xi1", "7"),
            any("xi2", "8"),
        ],
        quasi_commutative: false,
        bijective: true,
        note: "the inner extension lives over QQ[z]",
        build: b_quadratic3,
    },
    CatalogEntry {
        key: "quantum-matrices",
        family: "coordinate algebra of 2x2 quantum matrices over QQ(q)[u]",
        params: &[],
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_quantum_matrices,
    },
    CatalogEntry {
        key: "quantum-space",
        family: "quantum affine space",
        params: N3,
        quasi_commutative: true,
        bijective: true,
        note: "",
        build: b_quantum_space,
    },
    CatalogEntry {
        key: "quantum-symplectic",
        family: "quantum symplectic space (nested)",
        params: N2,
        quasi_commutative: false,
        bijective: true,
        note: "one level per pair (y_i, x_i)",
        build: b_quantum_symplectic,
    },
    CatalogEntry {
        key: "quantum-torus",
        family: "quantum torus",
        params: &[size("n", "2", 4), unit("q", "q")],
        quasi_commutative: true,
        bijective: true,
        note: "all variables invertible",
        build: b_quantum_torus,
    },
    CatalogEntry {
        key: "quantum-weyl-pq",
        family: "quantum Weyl algebra with Hecke parameters (nested)",
        params: N2,
        quasi_commutative: false,
        bijective: true,
        note: "pairs are nested from the last one outwards; p_ji = p_ij^-1",
        build: b_quantum_weyl_pq,
    },
    CatalogEntry {
        key: "shift",
        family: "shift operators",
        params: &[any("h", "h")],
        quasi_commutative: true,
        bijective: true,
        note: "",
        build: b_shift,
    },
    CatalogEntry {
        key: "skew-poly-3d",
        family: "three-dimensional skew polynomial algebra",
        params: &[
            unit("alpha", "alpha"),
            unit("beta", "beta"),
            unit("gamma", "gamma"),
            ParamSpec { name: "lambda", default: "0", kind: ParamKind::Text },
            ParamSpec { name: "mu", default: "0", kind: ParamKind::Text },
            ParamSpec { name: "nu", default: "0", kind: ParamKind::Text },
        ],
        quasi_commutative: true,
        bijective: true,
        note: "lambda, mu, nu are affine expressions in x, y, z; the default (all zero) is quasi-commutative, and nonzero choices need relations among alpha, beta, gamma to stay confluent",
        build: b_skew3,
    },
    CatalogEntry {
        key: "skew-quantum-polynomials",
        family: "skew quantum polynomials over a Laurent ring",
        params: &[size("n", "2", 4), ParamSpec { name: "r", default: "1", kind: ParamKind::Size { min: 0, max: 4 } }],
        quasi_commutative: true,
        bijective: true,
        note: "the first r variables are invertible",
        build: b_skew_quantum,
    },
    CatalogEntry {
        key: "uq-sl2",
        family: "quantum enveloping algebra of sl(2)",
        params: &[],
        quasi_commutative: false,
        bijective: true,
        note: "q is assumed not to be 1 or -1",
        build: b_uq_sl2,
    },
    CatalogEntry {
        key: "uso3",
        family: "quantum algebra U'(so(3))",
        params: &[],
        quasi_commutative: false,
        bijective: true,
        note: "written over QQ(s) with q = s^2",
        build: b_uso3,
    },
    CatalogEntry {
        key: "vq-sl3",
        family: "algebra V_q(sl3) over QQ(q)[l1,l2,k1,k2]",
        params: &[],
        quasi_commutative: false,
        bijective: true,
        note: "complex parameters are taken in QQ(q)",
        build: b_vq_sl3,
    },
    CatalogEntry {
        key: "weyl",
        family: "Weyl algebra",
        params: N1,
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_weyl,
    },
    CatalogEntry {
        key: "weyl-extended",
        family: "extended Weyl algebra over rational functions",
        params: N1,
        quasi_commutative: false,
        bijective: true,
        note: "",
        build: b_weyl_extended,
    },
    CatalogEntry {
        key: "witten",
        family: "Witten deformation of U(sl2) (nested)",
        params: &[
            unit("xi1", "xi1"),
            any("xi2", "xi2"),
            unit("xi3", "xi1"),
            any("xi4", "xi2"),
            unit("xi5", "xi5"),
            any("xi6", "xi6"),
            any("xi7", "xi7"),
        ],
        quasi_commutative: false,
        bijective: true,
        note: "confluent when xi3 = xi1 and xi4 = xi2",
        build: b_witten,
    },
    CatalogEntry {
        key: "woronowicz",
        family: "Woronowicz algebra",
        params: &[unit("nu", "nu")],
        quasi_commutative: false,
        bijective: true,
        note: "nu is assumed not to be a root of unity",
        build: b_woronowicz,
    },
];

/// All entries, ordered by key.
pub fn list_catalog() -> Vec<&'static CatalogEntry> {
    let mut v: Vec<_> = ENTRIES.iter().collect();
    v.sort_by_key(|e| e.key);
    v
}

pub fn entry(key: &str) -> Result<&'static CatalogEntry, CatalogError> {
    ENTRIES.iter().find(|e| e.key == key).ok_or_else(|| CatalogError::UnknownKey(key.into()))
}

fn args(e: &CatalogEntry, params: &[(String, String)]) -> Result<Args, CatalogError> {
    let mut vals: BTreeMap<&'static str, String> =
        e.params.iter().map(|p| (p.name, p.default.to_string())).collect();
    for (k, v) in params {
        let spec = e
            .params
            .iter()
            .find(|p| p.name == k)
            .ok_or_else(|| CatalogError::UnknownParam(e.key.into(), k.clone()))?;
        if let ParamKind::Size { min, max } = spec.kind {
            match v.trim().parse::<usize>() {
                Ok(n) if (min..=max).contains(&n) => {}
                _ => return Err(CatalogError::Param(k.clone(), format!("expected an integer in {min}..={max}"))),
            }
        }
        vals.insert(spec.name, v.clone());
    }
    Ok(Args { vals })
}

/// The definition text an entry generates.
pub fn source(key: &str, params: &[(String, String)]) -> Result<String, CatalogError> {
    let e = entry(key)?;
    Ok((e.build)(&args(e, params)?))
}

pub fn instantiate(key: &str, params: &[(String, String)]) -> Result<Definition, CatalogError> {
    let e = entry(key)?;
    let a = args(e, params)?;
    let text = (e.build)(&a);
    let def = parse_definition(&text).map_err(|x| CatalogError::Build(x.to_string()))?;
    for p in e.params {
        let ParamKind::Scalar(c) = p.kind else { continue };
        let v = parse_expr(a.raw(p.name), &def).map_err(|x| CatalogError::Param(p.name.into(), x.msg))?;
        let bad = match c {
            Constraint::Any => None,
            Constraint::Nonzero => v.is_zero().then_some("must be nonzero"),
            Constraint::Unit => match v.as_constant() {
                Some(k) if k.is_unit() => None,
                _ => Some("must be a unit of the coefficient ring"),
            },
        };
        if let Some(m) = bad {
            return Err(CatalogError::Param(p.name.into(), format!("{} {m}", a.raw(p.name))));
        }
    }
    if e.key == "enveloping" {
        jacobi_check(def.presentation())?;
    }
    Ok(def)
}

fn jacobi_check(p: &Arc<crate::presentation::Presentation>) -> Result<(), CatalogError> {
    let n = p.nvars();
    let x: Vec<SkewPoly> = (0..n).map(|i| SkewPoly::var(p, i)).collect();
    let br = |a: &SkewPoly, b: &SkewPoly| (a * b).sub(&(b * a));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = br(&br(&x[i], &x[j]), &x[k])
                    .add(&br(&br(&x[j], &x[k]), &x[i]))
                    .add(&br(&br(&x[k], &x[i]), &x[j]));
                if !s.is_zero() {
                    let nm = p.var_names();
                    return Err(CatalogError::Param(
                        "brackets".into(),
                        format!("Jacobi identity fails on ({}, {}, {})", nm[i], nm[j], nm[k]),
                    ));
                }
            }
        }
    }
    Ok(())
}
