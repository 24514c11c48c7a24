//! Command-line front end.
//!
//! Exit status is 0 on success, 1 on parse or validation errors and 2 when
//! the field is too small for the requested operation.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::factorizer::{factor, verify_factorization, ExtensionPolicy, FactorConfig};
use crate::field::{make_field, Field};
use crate::hitting::{gen_hitting_set, HitStrategy};
use crate::polytope::{caratheodory_check, hadamard_example, newton_vertices, sb_exponent, sparsity_cap, SbConfig, Support};
use crate::sparsepoly::{parse_poly, parse_poly_n, sparse_divide, x_names, Factorization, SparsePoly};

#[derive(Parser, Debug)]
#[command(name = "spfactor", about = "Sparse polynomial factorization over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long, default_value_t = 7)]
    pub prime: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub ext: u32,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    /// Constant in the sparsity-bound exponent (integer, a/b or decimal).
    #[arg(long, default_value = "5")]
    pub sb_constant: String,
    /// Extra cap on candidate factor sparsity.
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// File holding the polynomial.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Polynomial text, used when no file is given.
    pub poly: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Grid,
    Ks,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Which {
    Eg1,
    Eg2,
    Hadamard,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factor a polynomial.
    Factor {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        bound: BoundArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "grid")]
        strategy: StrategyArg,
        /// Factor line restrictions on all cores.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
        /// Fail instead of moving to an extension field.
        #[arg(long)]
        no_extend: bool,
        #[arg(long, default_value_t = 32)]
        max_anchors: usize,
    },
    /// Check a claimed factorization.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Claimed factorization, in the text or JSON output format of `factor`.
        #[arg(long)]
        claim: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Newton polytope statistics and the corner-point bound.
    Polytope {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        bound: BoundArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Search uniform vertex averages up to this size.
        #[arg(long)]
        max_k: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Print a hitting set, one point per line.
    Hitset {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum, default_value = "grid")]
        strategy: StrategyArg,
        /// Print at most this many points.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Sparsity blow-up examples and the Hadamard construction.
    Examples {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, default_value_t = 7)]
        prime: u64,
        /// Also run the factorizer on the example polynomial.
        #[arg(long)]
        factor: bool,
        #[arg(long)]
        json: bool,
    },
}

impl From<StrategyArg> for HitStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Grid => HitStrategy::Grid,
            StrategyArg::Ks => HitStrategy::Ks,
        }
    }
}

/// Parse `argv` (including the program name), run, and write to `out`.
/// Diagnostics go to `err`. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_field_too_small() {
                2
            } else {
                1
            }
        }
    }
}

fn field_of(a: &FieldArgs) -> Result<Field> {
    make_field(a.prime, a.ext)
}

fn sb_of(b: &BoundArgs) -> Result<SbConfig> {
    let mut cfg = SbConfig::default().with_constant(&b.sb_constant)?;
    cfg.user_cap = b.cap;
    Ok(cfg)
}

fn read_text(input: &InputArgs) -> Result<String> {
    match (&input.input, &input.poly) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse { pos: 0, msg: format!("{}: {e}", path.display()) }),
        (None, Some(p)) => Ok(p.clone()),
        (None, None) => Err(Error::Parse { pos: 0, msg: "no polynomial given".into() }),
    }
}

fn read_poly(field: &Field, input: &InputArgs) -> Result<SparsePoly> {
    parse_poly(field, read_text(input)?.trim())
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("serializable"))
}

fn dispatch(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Factor { field, bound, input, strategy, parallel, json, no_extend, max_anchors } => {
            let field = field_of(field)?;
            let f = read_poly(&field, input)?;
            let cfg = FactorConfig {
                sb: sb_of(bound)?,
                strategy: (*strategy).into(),
                extension: if *no_extend { ExtensionPolicy::Forbid } else { ExtensionPolicy::Auto },
                max_anchors: *max_anchors,
                parallel: *parallel,
            };
            let r = factor(&f, &cfg)?;
            let names = x_names(f.nvars());
            Ok(if *json { json_line(&r.to_json(&field, &names)) } else { r.to_text(&field, &names) })
        }
        Command::Verify { field, input, claim, json } => {
            let field = field_of(field)?;
            let f = read_poly(&field, input)?;
            let text = std::fs::read_to_string(claim)
                .map_err(|e| Error::Parse { pos: 0, msg: format!("{}: {e}", claim.display()) })?;
            let cand = parse_claim(&field, &text, f.nvars())?;
            let cap = cand.factors.iter().map(|(g, _)| g.sparsity()).max().unwrap_or(1).max(f.sparsity());
            let ok = verify_factorization(&f, &cand, cap);
            Ok(if *json {
                json_line(&serde_json::json!({ "verdict": ok }))
            } else {
                format!("verdict: {ok}\n")
            })
        }
        Command::Polytope { field, bound, input, max_k, json } => {
            let field = field_of(field)?;
            let f = read_poly(&field, input)?;
            polytope_report(&f, &sb_of(bound)?, *max_k, *json)
        }
        Command::Hitset { field, n, s, d, k, strategy, limit } => {
            let field = field_of(field)?;
            let h = gen_hitting_set(&field, *n, *s, *d, *k, (*strategy).into())?;
            let mut out = String::new();
            for p in h.iter().take(limit.unwrap_or(usize::MAX)) {
                let coords: Vec<String> = p.iter().map(|&c| field.fmt_elem(c)).collect();
                out.push_str(&coords.join(" "));
                out.push('\n');
            }
            Ok(out)
        }
        Command::Examples { which, n, d, m, prime, factor: run_factor, json } => {
            examples(*which, *n, *d, *m, *prime, *run_factor, *json)
        }
    }
}

/// Accepts either the text output of `factor` or its JSON record.
pub fn parse_claim(field: &Field, text: &str, nvars: usize) -> Result<Factorization> {
    let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| bad(&e.to_string()))?;
        let unit = field.from_json(v.get("unit").ok_or_else(|| bad("missing unit"))?)?;
        let mut factors = Vec::new();
        for item in v.get("factors").and_then(|f| f.as_array()).ok_or_else(|| bad("missing factors"))? {
            let poly = item.get("poly").and_then(|p| p.as_str()).ok_or_else(|| bad("missing poly"))?;
            let e = item
                .get("multiplicity")
                .and_then(|m| m.as_u64())
                .ok_or_else(|| bad("missing multiplicity"))?;
            factors.push((parse_poly_n(field, poly, nvars)?, e as u32));
        }
        return Ok(Factorization { unit, factors });
    }
    let mut unit = field.one();
    let mut factors = Vec::new();
    for line in trimmed.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix("unit:") {
            let c = parse_poly_n(field, rest.trim(), nvars)?;
            unit = c.constant_value().ok_or_else(|| bad("unit is not a constant"))?;
        } else if let Some((body, e)) = line.rsplit_once(")^") {
            let body = body.strip_prefix('(').ok_or_else(|| bad("expected `(poly)^e`"))?;
            let e: u32 = e.trim().parse().map_err(|_| bad("bad multiplicity"))?;
            factors.push((parse_poly_n(field, body, nvars)?, e));
        } else {
            factors.push((parse_poly_n(field, line, nvars)?, 1));
        }
    }
    Ok(Factorization { unit, factors })
}

fn polytope_report(f: &SparsePoly, cfg: &SbConfig, max_k: Option<u32>, json: bool) -> Result<String> {
    let e = Support::of(f);
    let vs = newton_vertices(&e)?;
    let n = f.nvars() as u64;
    let d = f.individual_degree() as u64;
    let exponent = sb_exponent(n, d.max(1), cfg);
    let cap = sparsity_cap(n, f.sparsity() as u64, d, cfg);
    let check = caratheodory_check(&e, d, cfg, max_k);
    let (holds, uniform_k) = match &check {
        Ok(r) => (true, r.uniform_k),
        Err(Error::BoundViolation { .. }) => (false, None),
        Err(other) => return Err(other.clone()),
    };
    if json {
        return Ok(json_line(&serde_json::json!({
            "nvars": n,
            "sparsity": e.len(),
            "individual_degree": d,
            "vertices": vs.vertices,
            "vertex_count": vs.len(),
            "exponent": exponent,
            "bound_holds": holds,
            "uniform_k": uniform_k,
            "sparsity_cap": cap,
        })));
    }
    let mut out = String::new();
    out.push_str(&format!("nvars: {n}\n"));
    out.push_str(&format!("sparsity: {}\n", e.len()));
    out.push_str(&format!("individual degree: {d}\n"));
    out.push_str(&format!("vertices: {}\n", vs.len()));
    for v in &vs.vertices {
        out.push_str(&format!("  {v:?}\n"));
    }
    out.push_str(&format!("exponent: {exponent}\n"));
    out.push_str(&format!("bound t^exponent >= |E|: {holds}\n"));
    if let Some(k) = max_k {
        match uniform_k {
            Some(u) => out.push_str(&format!("uniform cover k: {u}\n")),
            None => out.push_str(&format!("uniform cover k: none up to {k}\n")),
        }
    }
    out.push_str(&format!("sparsity cap: {cap}\n"));
    Ok(out)
}

/// Outcome of one sparsity blow-up example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupReport {
    pub f: SparsePoly,
    pub g: SparsePoly,
    pub f_sparsity: usize,
    pub g_sparsity: usize,
    pub claimed_f: u64,
    pub claimed_g: u64,
    pub divides: bool,
}

/// `f = prod (x_i^d - 1)` with factor `g = prod (1 + x_i + ... + x_i^(d-1))`.
pub fn example_products(field: &Field, n: usize, d: u32) -> BlowupReport {
    let one = SparsePoly::one(field, n);
    let mut f = one.clone();
    let mut g = one.clone();
    for i in 0..n {
        let x = SparsePoly::var(field, n, i);
        f = &f * &(&x.pow(d) - &one);
        let geo = (0..d).fold(SparsePoly::zero(field, n), |acc, j| &acc + &x.pow(j));
        g = &g * &geo;
    }
    finish(f, g, 2u64.pow(n as u32), (d as u64).pow(n as u32))
}

/// `f = x_1^p + ... + x_n^p` with factor `g = (x_1 + ... + x_n)^d`, `d < p`.
pub fn example_frobenius(field: &Field, n: usize, d: u32) -> BlowupReport {
    let p = field.characteristic();
    let f = (0..n).fold(SparsePoly::zero(field, n), |acc, i| &acc + &SparsePoly::var(field, n, i).pow(p));
    let lin = (0..n).fold(SparsePoly::zero(field, n), |acc, i| &acc + &SparsePoly::var(field, n, i));
    let g = lin.pow(d);
    finish(f, g, n as u64, binomial(n as u64 + d as u64 - 1, d as u64))
}

fn finish(f: SparsePoly, g: SparsePoly, claimed_f: u64, claimed_g: u64) -> BlowupReport {
    let cap = f.sparsity().max(g.sparsity()).saturating_mul(f.sparsity().max(2));
    let divides = sparse_divide(&f, &g, cap).is_ok();
    BlowupReport { f_sparsity: f.sparsity(), g_sparsity: g.sparsity(), f, g, claimed_f, claimed_g, divides }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn examples(which: Which, n: usize, d: u32, m: u32, prime: u64, run_factor: bool, json: bool) -> Result<String> {
    let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
    match which {
        Which::Eg1 | Which::Eg2 => {
            if n == 0 || d == 0 {
                return Err(bad("n and d must be positive"));
            }
            let field = make_field(prime, 1)?;
            let (name, r) = match which {
                Which::Eg1 => ("eg1", example_products(&field, n, d)),
                _ => {
                    if d as u64 >= prime {
                        return Err(bad("eg2 needs d < p"));
                    }
                    ("eg2", example_frobenius(&field, n, d))
                }
            };
            let factored = if run_factor {
                let fr = factor(&r.f, &FactorConfig::default())?;
                Some(fr.factors.iter().map(|(h, e)| (h.sparsity(), *e)).collect::<Vec<_>>())
            } else {
                None
            };
            let names = x_names(n);
            if json {
                return Ok(json_line(&serde_json::json!({
                    "example": name,
                    "p": prime,
                    "n": n,
                    "d": d,
                    "f": r.f.fmt_with(&names),
                    "g": r.g.fmt_with(&names),
                    "f_sparsity": r.f_sparsity,
                    "f_claimed": r.claimed_f,
                    "g_sparsity": r.g_sparsity,
                    "g_claimed": r.claimed_g,
                    "g_divides_f": r.divides,
                    "factor_sparsities": factored,
                })));
            }
            let mut out = format!("example: {name} p={prime} n={n} d={d}\n");
            out.push_str(&format!("f = {}\n", r.f.fmt_with(&names)));
            out.push_str(&format!("g = {}\n", r.g.fmt_with(&names)));
            out.push_str(&format!("|f| observed {} claimed {}\n", r.f_sparsity, r.claimed_f));
            out.push_str(&format!("|g| observed {} claimed {}\n", r.g_sparsity, r.claimed_g));
            out.push_str(&format!("g divides f: {}\n", r.divides));
            if let Some(fs) = factored {
                let parts: Vec<String> = fs.iter().map(|(s, e)| format!("{s}^{e}")).collect();
                out.push_str(&format!("irreducible factor sparsities: {}\n", parts.join(" ")));
            }
            Ok(out)
        }
        Which::Hadamard => {
            let h = hadamard_example(m)?;
            if json {
                return Ok(json_line(&serde_json::json!({
                    "example": "hadamard",
                    "m": h.m,
                    "n": h.n,
                    "subspaces": h.subspaces,
                    "lattice_points": h.support.len(),
                    "vertices": h.vertices.len(),
                    "all_in_hull": h.all_in_hull,
                    "vertices_are_columns": h.vertices_are_columns,
                })));
            }
            let mut out = format!("example: hadamard m={} n={}\n", h.m, h.n);
            out.push_str(&format!("subspaces of F_2^{}: {}\n", h.m, h.subspaces));
            out.push_str(&format!("lattice points: {}\n", h.support.len()));
            out.push_str(&format!("hull vertices observed {} claimed {}\n", h.vertices.len(), h.n));
            out.push_str(&format!("all points in hull: {}\n", h.all_in_hull));
            out.push_str(&format!("vertices are columns: {}\n", h.vertices_are_columns));
            Ok(out)
        }
    }
}
