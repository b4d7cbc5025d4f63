//! Dimension bounds and formal K-group decompositions computed from
//! declared facts about the coefficient ring.
//!
//! Nothing here inspects R itself: every fact is a user declaration and is
//! only checked for consistency with the obvious implications.

use std::collections::BTreeMap;
use std::fmt;

use crate::presentation::Presentation;
use crate::quantum::QuantumPresentation;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InvariantsError {
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("inconsistent ring facts: {0}")]
    Inconsistent(String),
}

/// A dimension of R as declared by the user.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Dim {
    Finite(u64),
    Infinite,
    #[default]
    Unknown,
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => write!(f, "∞"),
            Dim::Unknown => write!(f, "?"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RingFacts {
    pub lgld: Dim,
    pub lkdim: Dim,
    pub is_noetherian: bool,
    pub is_domain: bool,
    pub is_semisimple: bool,
    pub is_field: bool,
    pub is_regular: bool,
    pub is_psf: bool,
    pub k_trivial_action: bool,
}

impl RingFacts {
    pub fn field() -> RingFacts {
        RingFacts { is_field: true, ..Default::default() }
    }

    /// Close the declarations under field ⇒ semisimple ⇒ lgld 0 and
    /// field ⇒ lKdim 0 (a field is also a Noetherian domain). A declared
    /// value contradicting an implied one is an error.
    pub fn normalized(&self) -> Result<RingFacts, InvariantsError> {
        let mut f = self.clone();
        if f.is_field {
            f.is_semisimple = true;
            f.is_noetherian = true;
            f.is_domain = true;
            match f.lkdim {
                Dim::Unknown => f.lkdim = Dim::Finite(0),
                Dim::Finite(0) => {}
                d => return Err(InvariantsError::Inconsistent(format!("a field has lKdim 0, declared {d}"))),
            }
        }
        if f.is_semisimple {
            match f.lgld {
                Dim::Unknown => f.lgld = Dim::Finite(0),
                Dim::Finite(0) => {}
                d => return Err(InvariantsError::Inconsistent(format!("a semisimple ring has lgld 0, declared {d}"))),
            }
        }
        Ok(f)
    }
}

/// `base(R) + offset`; rendered symbolically when the base is unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub base: Dim,
    pub offset: u64,
}

impl Bound {
    pub fn of(base: Dim, offset: u64) -> Bound {
        Bound { base, offset }
    }

    pub fn value(&self) -> Dim {
        match self.base {
            Dim::Finite(b) => Dim::Finite(b + self.offset),
            d => d,
        }
    }

    fn render(&self, sym: &str) -> String {
        match (self.base, self.offset) {
            (Dim::Unknown, 0) => format!("{sym}(R)"),
            (Dim::Unknown, k) => format!("{sym}(R)+{k}"),
            _ => self.value().to_string(),
        }
    }
}

/// Interval `[lo, hi]`; `None` means no bound is available on that side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl Interval {
    fn unbounded() -> Interval {
        Interval { lo: None, hi: None }
    }

    fn between(lo: Bound, hi: Bound) -> Interval {
        Interval { lo: Some(lo), hi: Some(hi) }
    }

    fn exactly(b: Bound) -> Interval {
        Interval::between(b, b)
    }

    /// The common value when both ends coincide.
    pub fn exact(&self) -> Option<Dim> {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => Some(l.value()),
            (Some(l), Some(h)) => match (l.value(), h.value()) {
                (Dim::Finite(a), Dim::Finite(b)) if a == b => Some(Dim::Finite(a)),
                (Dim::Infinite, Dim::Infinite) => Some(Dim::Infinite),
                _ => None,
            },
            _ => None,
        }
    }

    /// Numeric ends, with an absent or unknown end read as 0 or ∞.
    pub fn numeric(&self) -> (u64, Option<u64>) {
        let lo = match self.lo.map(|b| b.value()) {
            Some(Dim::Finite(v)) => v,
            Some(Dim::Infinite) => u64::MAX,
            _ => 0,
        };
        let hi = match self.hi.map(|b| b.value()) {
            Some(Dim::Finite(v)) => Some(v),
            _ => None,
        };
        (lo, hi)
    }

    pub fn render(&self, sym: &str) -> String {
        if let (Some(l), Some(h)) = (self.lo, self.hi) {
            if l == h || self.exact().is_some_and(|d| d != Dim::Unknown) {
                return format!("= {}", h.render(sym));
            }
        }
        let lo = self.lo.map(|b| b.render(sym)).unwrap_or_else(|| "0".into());
        let hi = self.hi.map(|b| b.render(sym)).unwrap_or_else(|| "?".into());
        if self.lo.is_none() && self.hi.is_none() {
            return "no bound".to_string();
        }
        format!("in [{lo}, {hi}]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub n: usize,
    pub lgld: Interval,
    pub lkdim: Interval,
    pub udim: Option<u64>,
    pub notes: Vec<String>,
}

impl DimReport {
    pub fn render_text(&self) -> String {
        let mut s = format!(
            "n = {}\nlgld(A) {}\nlKdim(A) {}\nudim(A) {}\n",
            self.n,
            self.lgld.render("lgld"),
            self.lkdim.render("lKdim"),
            self.udim.map(|u| format!("= {u}")).unwrap_or_else(|| "unknown".into())
        );
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }

    pub fn render_records(&self) -> String {
        let end = |b: Option<Bound>, sym: &str| b.map(|b| b.render(sym)).unwrap_or_else(|| "none".into());
        let exact = |i: &Interval| i.exact().is_some_and(|d| d != Dim::Unknown) || (i.lo.is_some() && i.lo == i.hi);
        format!(
            "n={}\nlgld_lo={}\nlgld_hi={}\nlgld_exact={}\nlkdim_lo={}\nlkdim_hi={}\nlkdim_exact={}\nudim={}\n",
            self.n,
            end(self.lgld.lo, "lgld"),
            end(self.lgld.hi, "lgld"),
            exact(&self.lgld),
            end(self.lkdim.lo, "lKdim"),
            end(self.lkdim.hi, "lKdim"),
            exact(&self.lkdim),
            self.udim.map(|u| u.to_string()).unwrap_or_else(|| "unknown".into())
        )
    }
}

pub enum Extension<'a> {
    Skew(&'a Presentation),
    Quantum(&'a QuantumPresentation),
}

pub fn dim_report(ext: Extension<'_>, facts: &RingFacts) -> Result<DimReport, InvariantsError> {
    let f = facts.normalized()?;
    match ext {
        Extension::Skew(p) => skew_report(p, &f),
        Extension::Quantum(q) => Ok(quantum_report(q, &f)),
    }
}

fn skew_report(p: &Presentation, f: &RingFacts) -> Result<DimReport, InvariantsError> {
    if !p.is_bijective() {
        return Err(InvariantsError::HypothesisNotMet(format!("{} is not bijective", p.name)));
    }
    let n = p.top_vars().len() as u64;
    let qc = p.is_quasi_commutative();
    let mut notes = vec![];
    if p.is_nested() {
        notes.push("R is the algebra generated by the inner levels".to_string());
    }
    let lgld = if qc { Interval::exactly(Bound::of(f.lgld, n)) } else { Interval::between(Bound::of(f.lgld, 0), Bound::of(f.lgld, n)) };
    let lkdim = if !f.is_noetherian {
        notes.push("no Krull bound without a left Noetherian R".to_string());
        Interval::unbounded()
    } else if qc {
        Interval::exactly(Bound::of(f.lkdim, n))
    } else {
        Interval::between(Bound::of(f.lkdim, 0), Bound::of(f.lkdim, n))
    };
    let udim = (f.is_noetherian && f.is_domain).then_some(1);
    Ok(DimReport { n: n as usize, lgld, lkdim, udim, notes })
}

fn quantum_report(q: &QuantumPresentation, f: &RingFacts) -> DimReport {
    let n = q.nvars() as u64;
    let r = q.r as u64;
    let laurent_line = r == 1 && n == 1;
    let mut notes = vec![];
    let lgld = if f.is_semisimple && (r == 0 || laurent_line) {
        // R[x^{±1};σ] is not left Artinian, so its lgld is 1 rather than 0
        Interval::exactly(Bound::of(Dim::Finite(0), n))
    } else if r == 0 {
        Interval::exactly(Bound::of(f.lgld, n))
    } else if f.lgld == Dim::Infinite {
        notes.push("the global-dimension bound needs lgld(R) finite".to_string());
        Interval::unbounded()
    } else {
        if f.lgld == Dim::Unknown {
            notes.push("the global-dimension bound assumes lgld(R) finite".to_string());
        }
        Interval::between(Bound::of(f.lgld, 0), Bound::of(f.lgld, n))
    };
    let lkdim = if !f.is_noetherian {
        notes.push("no Krull bound without a left Noetherian R".to_string());
        Interval::unbounded()
    } else if r == 0 || (f.is_field && laurent_line) {
        Interval::exactly(Bound::of(f.lkdim, n))
    } else {
        if f.is_field && r == n {
            notes.push("over a field the Krull dimension of the quantum torus is only bounded above by n".to_string());
        }
        Interval::between(Bound::of(f.lkdim, 0), Bound::of(f.lkdim, n))
    };
    let udim = (f.is_noetherian && f.is_domain).then_some(1);
    DimReport { n: n as usize, lgld, lkdim, udim, notes }
}

/// `⊕_j K_j(R)^{m_j}`, kept formal.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KExpr {
    pub mult: BTreeMap<u32, u64>,
}

impl KExpr {
    pub fn k(j: u32) -> KExpr {
        KExpr { mult: BTreeMap::from([(j, 1)]) }
    }

    pub fn get(&self, j: u32) -> u64 {
        self.mult.get(&j).copied().unwrap_or(0)
    }

    pub fn direct_sum(&self, o: &KExpr) -> KExpr {
        let mut m = self.mult.clone();
        for (&j, &k) in &o.mult {
            *m.entry(j).or_insert(0) += k;
        }
        m.retain(|_, k| *k != 0);
        KExpr { mult: m }
    }
}

impl fmt::Display for KExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .mult
            .iter()
            .map(|(j, m)| if *m == 1 { format!("K{j}") } else { format!("K{j}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `K_0(B), …, K_top(B)` written in terms of the K-groups of R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTable {
    pub degrees: Vec<KExpr>,
}

impl KTable {
    /// B = R: `K_m(B) = K_m(R)`.
    pub fn base(top: u32) -> KTable {
        KTable { degrees: (0..=top).map(KExpr::k).collect() }
    }

    pub fn degree(&self, m: u32) -> &KExpr {
        &self.degrees[m as usize]
    }
}

/// Adjoin one Laurent variable: `K_m(B[x^{±1};σ]) = K_m(B) ⊕ K_{m-1}(B)`,
/// with `K_{-1} = 0`.
pub fn k_laurent_step(t: &KTable, facts: &RingFacts) -> Result<KTable, InvariantsError> {
    if !facts.k_trivial_action {
        return Err(InvariantsError::HypothesisNotMet("the twist must act trivially on K-theory".into()));
    }
    let degrees = (0..t.degrees.len())
        .map(|m| if m == 0 { t.degrees[0].clone() } else { t.degrees[m].direct_sum(&t.degrees[m - 1]) })
        .collect();
    Ok(KTable { degrees })
}

/// `K_m` of the quantum algebra with `r` Laurent variables over R:
/// multiplicity `C(r, m-j)` at `K_j(R)`. Non-Laurent variables add nothing.
pub fn k_groups(facts: &RingFacts, m: u32, r: u32) -> Result<KExpr, InvariantsError> {
    let mut missing = vec![];
    if !facts.is_noetherian {
        missing.push("left Noetherian");
    }
    if !facts.is_regular {
        missing.push("left regular");
    }
    if !facts.k_trivial_action {
        missing.push("trivial action on K-theory");
    }
    if !missing.is_empty() {
        return Err(InvariantsError::HypothesisNotMet(format!("R must be declared {}", missing.join(", "))));
    }
    let mut mult = BTreeMap::new();
    for j in 0..=m {
        let k = m - j;
        if k <= r {
            mult.insert(j, num_integer::binomial(r as u64, k as u64));
        }
    }
    Ok(KExpr { mult })
}
