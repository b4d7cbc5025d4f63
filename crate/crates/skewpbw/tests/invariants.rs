use proptest::prelude::*;
use skewpbw::catalog::instantiate;
use skewpbw::cli::{parse_definition, Definition};
use skewpbw::invariants::{
    dim_report, k_groups, k_laurent_step, Dim, Extension, InvariantsError, KExpr, KTable, RingFacts,
};

fn kv(k: &str, v: &str) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn k_facts() -> RingFacts {
    RingFacts { is_noetherian: true, is_regular: true, k_trivial_action: true, ..Default::default() }
}

/// Pascal's triangle built by addition only.
fn pascal(n: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![1u64]];
    for i in 1..=n {
        let prev = &t[i - 1];
        let row = (0..=i)
            .map(|k| if k == 0 || k == i { 1 } else { prev[k - 1] + prev[k] })
            .collect();
        t.push(row);
    }
    t
}

fn choose(t: &[Vec<u64>], n: u32, k: i64) -> u64 {
    if k < 0 || k > n as i64 {
        0
    } else {
        t[n as usize][k as usize]
    }
}

fn report(d: &Definition, facts: &RingFacts) -> Result<skewpbw::invariants::DimReport, InvariantsError> {
    match d {
        Definition::Plain(p) => dim_report(Extension::Skew(p), facts),
        Definition::Quantum(q) => dim_report(Extension::Quantum(q), facts),
    }
}

#[test]
fn quasi_commutative_over_a_field() {
    for n in 1..=3 {
        for key in ["quantum-space", "polynomial"] {
            let d = instantiate(key, &[kv("n", &n.to_string())]).unwrap();
            let r = report(&d, &RingFacts::field()).unwrap();
            assert_eq!(r.lkdim.exact(), Some(Dim::Finite(n)), "{key}");
            assert_eq!(r.lgld.exact(), Some(Dim::Finite(n)), "{key}");
            assert_eq!(r.udim, Some(1));
        }
    }
}

#[test]
fn semisimple_coefficients_give_lgld_n() {
    let facts = RingFacts { is_semisimple: true, ..Default::default() };
    let d = instantiate("quantum-space", &[kv("n", "3")]).unwrap();
    let r = report(&d, &facts).unwrap();
    assert_eq!(r.lgld.exact(), Some(Dim::Finite(3)));
    // not declared Noetherian: no Krull bound, no uniform dimension
    assert_eq!(r.lkdim.lo, None);
    assert_eq!(r.udim, None);
}

#[test]
fn noetherian_domain_has_uniform_dimension_one() {
    let facts = RingFacts { is_noetherian: true, is_domain: true, ..Default::default() };
    for key in ["weyl", "uq-sl2", "dispin", "q-heisenberg"] {
        let d = instantiate(key, &[]).unwrap();
        assert_eq!(report(&d, &facts).unwrap().udim, Some(1), "{key}");
    }
    let d = instantiate("weyl", &[]).unwrap();
    let facts = RingFacts { is_noetherian: true, ..Default::default() };
    assert_eq!(report(&d, &facts).unwrap().udim, None);
}

#[test]
fn skew_laurent_line_over_a_field() {
    let d = instantiate("skew-quantum-polynomials", &[kv("n", "1"), kv("r", "1")]).unwrap();
    assert!(matches!(d, Definition::Quantum(_)));
    let r = report(&d, &RingFacts::field()).unwrap();
    assert_eq!(r.lgld.exact(), Some(Dim::Finite(1)));
    assert_eq!(r.lkdim.exact(), Some(Dim::Finite(1)));
    assert_eq!(r.udim, Some(1));
}

#[test]
fn non_quasi_commutative_gives_intervals() {
    let d = instantiate("weyl", &[kv("n", "2")]).unwrap();
    let r = report(&d, &RingFacts::field()).unwrap();
    assert_eq!(r.lgld.numeric(), (0, Some(2)));
    assert_eq!(r.lkdim.numeric(), (0, Some(2)));
    assert_eq!(r.lgld.exact(), None);

    let facts = RingFacts { is_noetherian: true, ..Default::default() };
    let r = report(&d, &facts).unwrap();
    assert_eq!(r.lgld.render("lgld"), "in [lgld(R), lgld(R)+2]");
    assert!(r.render_text().contains("lKdim(A) in [lKdim(R), lKdim(R)+2]"));
}

#[test]
fn quantum_torus_notes() {
    let d = instantiate("quantum-torus", &[kv("n", "2")]).unwrap();
    let r = report(&d, &RingFacts::field()).unwrap();
    assert_eq!(r.lkdim.numeric(), (0, Some(2)));
    assert!(!r.notes.is_empty());

    let facts = RingFacts { is_noetherian: true, lgld: Dim::Infinite, ..Default::default() };
    let r = report(&d, &facts).unwrap();
    assert_eq!(r.lgld.render("lgld"), "no bound");
}

#[test]
fn hypotheses_and_consistency() {
    let d = parse_definition("ring QQ[t]\nalgebra a {\n  vars x\n  sigma x { t -> t^2 }\n}\n").unwrap();
    assert!(matches!(report(&d, &RingFacts::field()), Err(InvariantsError::HypothesisNotMet(_))));

    let w = instantiate("weyl", &[]).unwrap();
    let bad = RingFacts { is_field: true, lgld: Dim::Finite(2), ..Default::default() };
    assert!(matches!(report(&w, &bad), Err(InvariantsError::Inconsistent(_))));
    let bad = RingFacts { is_field: true, lkdim: Dim::Infinite, ..Default::default() };
    assert!(matches!(report(&w, &bad), Err(InvariantsError::Inconsistent(_))));

    assert!(matches!(k_groups(&RingFacts::field(), 1, 1), Err(InvariantsError::HypothesisNotMet(_))));
    assert!(k_laurent_step(&KTable::base(2), &RingFacts::default()).is_err());
}

#[test]
fn records_output() {
    let d = instantiate("quantum-space", &[kv("n", "2")]).unwrap();
    let r = report(&d, &RingFacts::field()).unwrap();
    assert_eq!(
        r.render_records(),
        "n=2\nlgld_lo=2\nlgld_hi=2\nlgld_exact=true\nlkdim_lo=2\nlkdim_hi=2\nlkdim_exact=true\nudim=1\n"
    );
}

#[test]
fn k_groups_in_low_degrees() {
    let f = k_facts();
    for r in 0..=5u32 {
        let r64 = r as u64;
        assert_eq!(k_groups(&f, 0, r).unwrap(), KExpr::k(0));
        let k1 = k_groups(&f, 1, r).unwrap();
        assert_eq!((k1.get(0), k1.get(1)), (r64, 1));
        let k2 = k_groups(&f, 2, r).unwrap();
        assert_eq!((k2.get(0), k2.get(1), k2.get(2)), (r64 * r64.saturating_sub(1) / 2, r64, 1));
    }
    assert_eq!(k_groups(&f, 2, 3).unwrap().to_string(), "K0^3 ⊕ K1^3 ⊕ K2");
    assert_eq!(k_groups(&f, 1, 0).unwrap().to_string(), "K1");
}

#[test]
fn laurent_steps_match_binomials() {
    let t = pascal(8);
    let f = k_facts();
    let mut table = KTable::base(8);
    for n in 0..=8u32 {
        for m in 0..=8u32 {
            let e = table.degree(m);
            for j in 0..=m {
                assert_eq!(e.get(j), choose(&t, n, (m - j) as i64), "n={n} m={m} j={j}");
            }
            assert_eq!(*e, k_groups(&f, m, n).unwrap());
        }
        table = k_laurent_step(&table, &f).unwrap();
    }
}

proptest! {
    #[test]
    fn k_groups_follow_pascal(m in 1u32..=8, r in 0u32..8) {
        let f = k_facts();
        let lhs = k_groups(&f, m, r + 1).unwrap();
        let rhs = k_groups(&f, m, r).unwrap().direct_sum(&k_groups(&f, m - 1, r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn k_groups_grow_with_r(m in 0u32..=8, r in 0u32..8) {
        let f = k_facts();
        let a = k_groups(&f, m, r).unwrap();
        let b = k_groups(&f, m, r + 1).unwrap();
        for j in 0..=m {
            prop_assert!(a.get(j) <= b.get(j));
        }
        prop_assert_eq!(a.get(m), 1);
    }

    #[test]
    fn dimension_intervals_are_ordered(n in 1usize..=4, lg in 0u64..4, lk in 0u64..4, qc in any::<bool>()) {
        let key = if qc { "quantum-space" } else { "weyl" };
        let d = instantiate(key, &[kv("n", &n.to_string())]).unwrap();
        let facts = RingFacts { is_noetherian: true, lgld: Dim::Finite(lg), lkdim: Dim::Finite(lk), ..Default::default() };
        let r = report(&d, &facts).unwrap();
        let (lo, hi) = r.lgld.numeric();
        prop_assert_eq!(lo, if qc { lg + n as u64 } else { lg });
        prop_assert_eq!(hi, Some(lg + n as u64));
        let (lo, hi) = r.lkdim.numeric();
        prop_assert!(lo <= hi.unwrap());
        prop_assert_eq!(hi, Some(lk + n as u64));
        prop_assert_eq!(r.lgld.exact().is_some(), qc);
    }
}
