//! `spbw` command dispatch.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{emit, emit_presentation, parse_definition, parse_expr, Definition};
use crate::catalog;
use crate::graded::{tower, Graded};
use crate::invariants::{dim_report, k_groups, Dim, Extension, RingFacts};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Parser, Debug)]
#[command(name = "spbw", version, about = "Exact arithmetic in skew PBW extensions")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Largest overlap degree examined by the confluence check.
    #[arg(long, default_value_t = 4, global = true)]
    degree_bound: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

/// A catalog key or a path to a definition file.
#[derive(Args, Debug)]
struct Source {
    source: String,
    /// Catalog parameter, `name=value`.
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, String)>,
}

#[derive(Args, Debug, Default)]
struct FactFlags {
    #[arg(long)]
    noetherian: bool,
    #[arg(long)]
    domain: bool,
    #[arg(long)]
    semisimple: bool,
    #[arg(long)]
    field: bool,
    #[arg(long)]
    regular: bool,
    #[arg(long)]
    psf: bool,
    #[arg(long)]
    trivial_k_action: bool,
    /// Left global dimension of R: an integer or `inf`.
    #[arg(long, value_parser = parse_dim)]
    lgld: Option<Dim>,
    /// Left Krull dimension of R.
    #[arg(long, value_parser = parse_dim)]
    lkdim: Option<Dim>,
}

impl FactFlags {
    fn facts(&self) -> RingFacts {
        RingFacts {
            lgld: self.lgld.unwrap_or_default(),
            lkdim: self.lkdim.unwrap_or_default(),
            is_noetherian: self.noetherian,
            is_domain: self.domain,
            is_semisimple: self.semisimple,
            is_field: self.field,
            is_regular: self.regular,
            is_psf: self.psf,
            k_trivial_action: self.trivial_k_action,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a presentation and check overlaps for confluence.
    Check(Source),
    /// Normal form of an expression.
    Eval {
        #[command(flatten)]
        src: Source,
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// The associated quasi-commutative algebra, or the top component of `-e`.
    Gr {
        #[command(flatten)]
        src: Source,
        #[arg(short = 'e', long = "expr")]
        expr: Option<String>,
    },
    /// Iterated skew-polynomial description of the associated quasi-commutative algebra.
    Tower(Source),
    /// Ore witness for `f` and the term `s` in a localized presentation.
    Ore {
        #[command(flatten)]
        src: Source,
        #[arg(short = 'f')]
        f: String,
        #[arg(short = 's')]
        s: String,
        /// Solve `s·g = f·x^α` instead of `g·s = x^α·f`.
        #[arg(long)]
        right: bool,
    },
    /// Bounds on global, Krull and uniform dimension.
    Dims {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        facts: FactFlags,
    },
    /// K_m as a sum of K-groups of the coefficient ring.
    Ktheory {
        #[arg(long)]
        m: u32,
        /// Number of Laurent variables; read from SOURCE when omitted.
        #[arg(long)]
        r: Option<u32>,
        source: Option<String>,
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
        #[command(flatten)]
        facts: FactFlags,
    },
    /// Built-in algebras.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    List,
    Show { key: String },
    Build {
        key: String,
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
    },
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn parse_dim(s: &str) -> Result<Dim, String> {
    match s {
        "inf" | "infinity" | "∞" => Ok(Dim::Infinite),
        _ => s.parse().map(Dim::Finite).map_err(|_| format!("expected an integer or 'inf', got '{s}'")),
    }
}

enum Fail {
    /// Bad arguments or unreadable input: exit 2.
    Usage(String),
    /// The input is well-formed but the requested check failed: exit 1.
    Failed(String),
    /// Like `Failed`, with a report destined for standard output.
    Report(String),
}

fn usage(m: impl Into<String>) -> Fail {
    Fail::Usage(m.into())
}

fn failed(m: impl Into<String>) -> Fail {
    Fail::Failed(m.into())
}

fn load(source: &str, params: &[(String, String)]) -> Result<Definition, Fail> {
    let path = Path::new(source);
    if path.exists() || source.ends_with(".spbw") {
        if !params.is_empty() {
            return Err(usage("--param only applies to catalog keys"));
        }
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{source}: {e}")))?;
        parse_definition(&text).map_err(|e| usage(format!("{source}:{e}")))
    } else {
        catalog::instantiate(source, params).map_err(|e| usage(e.to_string()))
    }
}

fn expr(src: &str, def: &Definition) -> Result<crate::poly::SkewPoly, Fail> {
    parse_expr(src, def).map_err(|e| usage(format!("expression {e}")))
}

struct Ctx {
    format: Format,
    degree_bound: usize,
}

impl Ctx {
    fn records(&self) -> bool {
        self.format == Format::Records
    }
}

fn check(ctx: &Ctx, def: &Definition) -> (String, bool) {
    let p = def.presentation();
    let mut rep = p.validate();
    if rep.ok {
        rep.merge(p.check_confluence(ctx.degree_bound));
    }
    let s = if ctx.records() { rep.render_records() } else { rep.render_text() };
    (s, rep.ok)
}

fn dispatch(cli: Cli) -> Result<String, Fail> {
    let ctx = Ctx { format: cli.format, degree_bound: cli.degree_bound };
    match cli.cmd {
        Cmd::Check(src) => {
            let def = load(&src.source, &src.params)?;
            let (s, ok) = check(&ctx, &def);
            if ok {
                Ok(s)
            } else {
                Err(Fail::Report(s))
            }
        }
        Cmd::Eval { src, expr: e } => {
            let def = load(&src.source, &src.params)?;
            let v = expr(&e, &def)?;
            Ok(if ctx.records() { format!("value={v}\n") } else { format!("{v}\n") })
        }
        Cmd::Gr { src, expr: e } => {
            let def = load(&src.source, &src.params)?;
            let g = Graded::new(def.presentation());
            match e {
                None => Ok(emit_presentation(&g.gr)),
                Some(e) => {
                    let v = expr(&e, &def)?;
                    let (d, top) = g.top_component(&v).map_err(|e| failed(e.to_string()))?;
                    Ok(if ctx.records() {
                        format!("degree={d}\ntop={top}\n")
                    } else {
                        format!("degree {d}: {top}\n")
                    })
                }
            }
        }
        Cmd::Tower(src) => {
            let def = load(&src.source, &src.params)?;
            let g = Graded::new(def.presentation());
            let p = &*g.gr;
            let steps = tower(p).map_err(|e| failed(e.to_string()))?;
            let mut s = String::new();
            let mut all = true;
            for st in &steps {
                let rt = st.inverse_on_vars.is_some().then(|| st.round_trips(p));
                all &= rt != Some(false);
                if ctx.records() {
                    s.push_str(&format!(
                        "step={} round_trip={}\n",
                        p.vars[st.index].name,
                        rt.map_or("none".into(), |b| b.to_string())
                    ));
                } else {
                    s.push_str(&st.render(p));
                    if let Some(b) = rt {
                        s.push_str(if b { "\n  round-trip ok" } else { "\n  round-trip FAILED" });
                    }
                    s.push('\n');
                }
            }
            if all {
                Ok(s)
            } else {
                Err(Fail::Report(s))
            }
        }
        Cmd::Ore { src, f, s, right } => {
            let def = load(&src.source, &src.params)?;
            let Definition::Quantum(q) = &def else {
                return Err(failed(format!("{} has no invertible variables", def.name())));
            };
            let fv = expr(&f, &def)?;
            let sv = expr(&s, &def)?;
            if sv.len() != 1 {
                return Err(usage("-s must be a single term r*x^a"));
            }
            let (alpha, r) = sv.terms().iter().next().unwrap();
            let res = if right { q.ore_right_witness(&fv, r, alpha) } else { q.ore_left_witness(&fv, r, alpha) };
            let g = res.map_err(|e| failed(e.to_string()))?;
            let mono = q.monomial(alpha.clone(), def.presentation().ring.one()).map_err(|e| failed(e.to_string()))?;
            let rel = if right {
                format!("({sv})*({g}) = ({fv})*({mono})")
            } else {
                format!("({g})*({sv}) = ({mono})*({fv})")
            };
            Ok(if ctx.records() { format!("witness={g}\nverified=true\n") } else { format!("g = {g}\n{rel}\n") })
        }
        Cmd::Dims { src, facts } => {
            let def = load(&src.source, &src.params)?;
            let ext = match &def {
                Definition::Plain(p) => Extension::Skew(p),
                Definition::Quantum(q) => Extension::Quantum(q),
            };
            let r = dim_report(ext, &facts.facts()).map_err(|e| failed(e.to_string()))?;
            Ok(if ctx.records() { r.render_records() } else { r.render_text() })
        }
        Cmd::Ktheory { m, r, source, params, facts } => {
            let r = match (r, source) {
                (Some(r), _) => r,
                (None, Some(src)) => match load(&src, &params)? {
                    Definition::Plain(_) => 0,
                    Definition::Quantum(q) => q.r as u32,
                },
                (None, None) => return Err(usage("give --r or a source")),
            };
            let k = k_groups(&facts.facts(), m, r).map_err(|e| failed(e.to_string()))?;
            Ok(if ctx.records() { format!("m={m}\nr={r}\nk={k}\n") } else { format!("{k}\n") })
        }
        Cmd::Catalog(c) => catalog_cmd(&ctx, c),
    }
}

fn catalog_cmd(ctx: &Ctx, c: CatalogCmd) -> Result<String, Fail> {
    match c {
        CatalogCmd::List => {
            let mut s = String::new();
            for e in catalog::list_catalog() {
                if ctx.records() {
                    s.push_str(&format!("key={} family={} params={}\n", e.key, e.family.replace(' ', "_"), e.signature()));
                } else {
                    s.push_str(&format!("{:<26} {:<40} {}\n", e.key, e.family, e.signature()));
                }
            }
            Ok(s)
        }
        CatalogCmd::Show { key } => {
            let e = catalog::entry(&key).map_err(|e| usage(e.to_string()))?;
            let mut s = format!(
                "{}\nfamily: {}\nparams: {}\nquasi-commutative: {}\nbijective: {}\n",
                e.key,
                e.family,
                e.signature(),
                e.quasi_commutative,
                e.bijective
            );
            if !e.note.is_empty() {
                s.push_str(&format!("note: {}\n", e.note));
            }
            let text = catalog::source(&key, &[]).map_err(|e| usage(e.to_string()))?;
            s.push('\n');
            s.push_str(&text);
            Ok(s)
        }
        CatalogCmd::Build { key, params } => {
            let def = catalog::instantiate(&key, &params).map_err(|e| usage(e.to_string()))?;
            Ok(emit(&def))
        }
    }
}

/// Run the command line; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli) {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
            0
        }
        Err(Fail::Report(s)) => {
            let _ = out.write_all(s.as_bytes());
            1
        }
        Err(Fail::Failed(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Fail::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}
