//! Command-line front end. Every command prints one JSON document (or its
//! text rendering) and maps library errors to exit codes 2, 3 and 4.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::oracle::{self, king, OracleConfig, SampleBank};
use crate::quiver::{box_iter, Class, DimVec, EulerContext, Quiver};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "tamestab", version, about = "Stability landscape of Dynkin and Euclidean quivers")]
pub struct Cli {
    /// Quiver: a JSON file, inline JSON, or a built-in name (a2, a3,
    /// kronecker, sq, sq-alt, sq-source, d4tilde, a2tilde21, a3tilde31,
    /// e6tilde). Repeatable for selftest.
    #[arg(long, global = true)]
    pub quiver: Vec<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_003)]
    pub prime: u64,
    /// l1 bound for root scans; defaults to 4 times the l1 norm of the null
    /// root, or 16 without one.
    #[arg(long, global = true)]
    pub bound: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cp,
    Ss,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class, null root, tubes, count identities, regular cone and its facets.
    Analyze,
    /// Canonical decomposition of a dimension vector.
    Candecomp {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Canonical presentation of an integer vector.
    Canpres {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Semi-stable subcategory descriptor of a weight.
    Ssdesc {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Compare two weights by canonical presentation or semi-stable subcategory.
    Equiv {
        #[arg(long, allow_hyphen_values = true)]
        d1: String,
        #[arg(long, allow_hyphen_values = true)]
        d2: String,
        #[arg(long, value_enum, default_value_t = Mode::Ss)]
        mode: Mode,
    },
    /// Intersection of two semi-stable subcategories.
    Intersect {
        #[arg(long, allow_hyphen_values = true)]
        d1: String,
        #[arg(long, allow_hyphen_values = true)]
        d2: String,
    },
    /// All intersections of semi-stable subcategories that are not semi-stable.
    EnumerateNonss,
    /// SVG of the affine slice of the positive orthant (3 or 4 vertices).
    SliceSvg {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled-module checks of the combinatorial algorithms.
    Selftest,
}

pub fn load_quiver(spec: &str) -> Result<Quiver> {
    let path = std::path::Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {spec}: {e}")))?;
        return Quiver::from_json(&text);
    }
    if spec.trim_start().starts_with('{') {
        return Quiver::from_json(spec);
    }
    Quiver::named(spec).ok_or_else(|| Error::InvalidInput(format!("unknown quiver '{spec}'")))
}

pub fn parse_vec(s: &str, n: usize) -> Result<DimVec> {
    let v: std::result::Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
    let v = v.map_err(|_| Error::InvalidInput(format!("not a comma-separated integer list: '{s}'")))?;
    if v.len() != n {
        return Err(Error::InvalidInput(format!("vector '{s}' has {} entries, quiver has {n} vertices", v.len())));
    }
    Ok(v)
}

fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn class_name(c: Class) -> &'static str {
    match c {
        Class::Dynkin => "Dynkin",
        Class::Euclidean => "Euclidean",
        Class::Wild => "Wild",
    }
}

fn default_bound(ctx: &EulerContext) -> i64 {
    4 * ctx.delta().map(|d| d.iter().sum::<i64>()).unwrap_or(4)
}

struct Env {
    ctx: EulerContext,
    bound: i64,
}

fn single_context(cli: &Cli) -> Result<Env> {
    let spec = match cli.quiver.as_slice() {
        [one] => one,
        [] => return Err(Error::InvalidInput("--quiver is required".into())),
        _ => return Err(Error::InvalidInput("this command takes exactly one --quiver".into())),
    };
    let mut ctx = EulerContext::build(load_quiver(spec)?)?;
    ctx.set_oracle_config(config(cli));
    let bound = cli.bound.unwrap_or_else(|| default_bound(&ctx));
    if bound < 1 {
        return Err(Error::InvalidInput(format!("bound must be positive, got {bound}")));
    }
    Ok(Env { ctx, bound })
}

fn config(cli: &Cli) -> OracleConfig {
    OracleConfig { seed: cli.seed, prime: cli.prime, ..OracleConfig::default() }
}

fn analyze(ctx: &EulerContext) -> Result<Value> {
    let mut out = json!({
        "class": class_name(ctx.class()),
        "vertices": ctx.n(),
        "euler_matrix": ctx.euler_matrix(),
        "coxeter_matrix": ctx.coxeter_matrix(),
    });
    match ctx.class() {
        Class::Wild => {}
        Class::Dynkin => {
            let roots = ctx.dynkin_positive_roots()?;
            out["positive_roots"] = json!(roots);
            out["positive_root_count"] = json!(roots.len());
        }
        Class::Euclidean => {
            let delta = ctx.require_euclidean()?.clone();
            let n = ctx.n();
            let defect: Vec<i64> = (0..n).map(|j| ctx.euler_unchecked(&delta, &crate::quiver::unit(n, j))).collect();
            let s = ctx.regular_structure()?;
            let big_n = s.tubes.len();
            out["delta"] = json!(delta);
            out["defect_functional"] = json!(defect);
            out["tubes"] = json!(s
                .tubes
                .iter()
                .map(|t| json!({"tube": t.index + 1, "rank": t.rank, "quasi_simples": t.quasi_simples}))
                .collect::<Vec<_>>());
            out["counts"] = json!({
                "tubes": big_n,
                "sum_rank_minus_one": s.tubes.iter().map(|t| t.rank - 1).sum::<usize>(),
                "n_minus_2": n - 2,
                "quasi_simples": s.tubes.iter().map(|t| t.rank).sum::<usize>(),
                "n_minus_2_plus_tubes": n - 2 + big_n,
                "facet_count": s.drop_choices.len(),
                "dependency_dimension": s.dependencies.len(),
            });
            out["regular_cone"] = json!({
                "generators": s.h_cone.generators(),
                "rank": s.h_cone.rank(),
                "facets": s.h_cone.facet_strings(),
                "equalities": s.h_cone.equalities().iter().map(|r| r.iter().map(big).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            out["facets_F"] = json!(s
                .drop_choices
                .iter()
                .zip(&s.f_cones)
                .map(|(drops, c)| json!({"drops": drops, "generators": c.generators()}))
                .collect::<Vec<_>>());
            out["cones_C"] = json!(s
                .drop_choices
                .iter()
                .zip(&s.c_cones)
                .map(|(drops, c)| json!({"drops": drops, "facets": c.facet_strings()}))
                .collect::<Vec<_>>());
            out["dependencies"] = json!(s
                .dependencies
                .iter()
                .map(|r| r.iter().map(big).collect::<Vec<_>>())
                .collect::<Vec<_>>());
        }
    }
    Ok(out)
}

fn equiv(env: &Env, d1: &[i64], d2: &[i64], mode: Mode) -> Result<Value> {
    let ctx = &env.ctx;
    match mode {
        Mode::Cp => {
            let equal = ctx.cp_equivalent(d1, d2)?;
            let r1 = ctx.canonical_presentation(d1)?.ray_set();
            let r2 = ctx.canonical_presentation(d2)?.ray_set();
            Ok(json!({
                "mode": "cp",
                "verdict": if equal { "equal" } else { "different" },
                "rays_d1": r1,
                "rays_d2": r2,
            }))
        }
        Mode::Ss => {
            let mut v = ctx.ss_equivalent(d1, d2, env.bound)?.to_json();
            v["mode"] = json!("ss");
            Ok(v)
        }
    }
}

fn run_command(cli: &Cli) -> Result<Value> {
    if let Command::Selftest = cli.command {
        return selftest(cli);
    }
    let env = single_context(cli)?;
    let ctx = &env.ctx;
    let n = ctx.n();
    let result = match &cli.command {
        Command::Analyze => analyze(ctx)?,
        Command::Candecomp { d } => ctx.canonical_decomposition(&parse_vec(d, n)?)?.to_json(),
        Command::Canpres { d } => ctx.canonical_presentation(&parse_vec(d, n)?)?.to_json(),
        Command::Ssdesc { d } => ctx.ss_descriptor(&parse_vec(d, n)?)?.to_json(),
        Command::Equiv { d1, d2, mode } => equiv(&env, &parse_vec(d1, n)?, &parse_vec(d2, n)?, *mode)?,
        Command::Intersect { d1, d2 } => ctx.intersect_ss(&parse_vec(d1, n)?, &parse_vec(d2, n)?)?.to_json(),
        Command::EnumerateNonss => {
            let list = ctx.enumerate_nonss()?;
            json!({"count": list.count, "items": list.items.iter().map(|i| i.to_json()).collect::<Vec<_>>()})
        }
        Command::SliceSvg { out } => {
            let svg = crate::svg::slice_svg(ctx)?;
            match out {
                Some(path) => {
                    std::fs::write(path, &svg)
                        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
                    json!({"written": path.display().to_string(), "bytes": svg.len()})
                }
                None => Value::String(svg),
            }
        }
        Command::Selftest => unreachable!("handled above"),
    };
    Ok(json!({
        "schema": SCHEMA,
        "command": command_name(&cli.command),
        "quiver": ctx.quiver().to_json_value(),
        "config": {"seed": cli.seed, "prime": cli.prime, "bound": env.bound},
        "result": result,
    }))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze => "analyze",
        Command::Candecomp { .. } => "candecomp",
        Command::Canpres { .. } => "canpres",
        Command::Ssdesc { .. } => "ssdesc",
        Command::Equiv { .. } => "equiv",
        Command::Intersect { .. } => "intersect",
        Command::EnumerateNonss => "enumerate-nonss",
        Command::SliceSvg { .. } => "slice-svg",
        Command::Selftest => "selftest",
    }
}

#[derive(Default)]
struct Check {
    cases: usize,
    failures: Vec<String>,
}

impl Check {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn to_json(&self, name: &str) -> Value {
        json!({
            "name": name,
            "cases": self.cases,
            "failures": self.failures.len(),
            "examples": self.failures.iter().filter(|s| !s.is_empty()).collect::<Vec<_>>(),
            "pass": self.failures.is_empty(),
        })
    }
}

/// Nonzero vectors of the box with all entries at most `g`.
pub fn grid(n: usize, g: i64) -> Vec<DimVec> {
    box_iter(&vec![g; n]).filter(|d| d.iter().any(|&x| x != 0)).collect()
}

fn selftest_context(ctx: &EulerContext, cfg: &OracleConfig) -> Result<Vec<Value>> {
    ctx.require_tame()?;
    let n = ctx.n();
    let g = if n <= 3 { 2 } else { 1 };
    let vecs = grid(n, g);
    let mut raw = SampleBank::raw(ctx, cfg.clone());
    let f = raw.field();
    let mut checks = Vec::new();

    let mut ext = Check::default();
    for a in &vecs {
        for b in &vecs {
            let predicted = ctx.ext_generic(a, b)?;
            let sampled = raw.ext(a, b, 2)?;
            ext.record(predicted == sampled, || format!("ext({a:?},{b:?}): {predicted} vs sampled {sampled}"));
        }
    }
    checks.push(ext.to_json("ext_generic_vs_sampled"));

    let mut cd = Check::default();
    let mut schur = Check::default();
    for d in &vecs {
        let predicted = oracle::expected_summands(ctx, d)?;
        let sampled = raw.summands(d, 0)?;
        cd.record(predicted == sampled, || format!("{d:?}: {predicted:?} vs sampled {sampled:?}"));
        let m = raw.sample(d, 0)?;
        let brick = oracle::module_hom_dim(&f, &m, &m) == 1;
        let s = ctx.is_schur_root(d)?;
        schur.record(s == brick, || format!("{d:?}: schur {s}, sampled brick {brick}"));
    }
    checks.push(cd.to_json("canonical_decomposition_vs_sampled"));
    checks.push(schur.to_json("schur_root_vs_sampled_endomorphisms"));

    let mut king_check = Check::default();
    let weights: Vec<DimVec> = box_iter(&vec![4; n]).map(|v| v.iter().map(|x| x - 2).collect()).collect();
    for alpha in vecs.iter().filter(|a| ctx.is_real_root(a).unwrap_or(false) && ctx.is_schur_root(a).unwrap_or(false)) {
        if alpha.iter().sum::<i64>() > 6 {
            continue;
        }
        let subs = king::king_subs(ctx, alpha, cfg.seed)?;
        for d in &weights {
            let predicted = ctx.hss_contains(alpha, d)?;
            let sampled = king::king_semistable(ctx, &subs, alpha, d)?;
            king_check.record(predicted == sampled, || format!("alpha {alpha:?}, d {d:?}: {predicted} vs {sampled}"));
        }
    }
    checks.push(king_check.to_json("king_semistability_vs_sampled"));

    if ctx.class() == Class::Dynkin {
        let mut rs = Check::default();
        let roots = ctx.dynkin_positive_roots()?;
        let mut families: BTreeSet<Vec<DimVec>> = roots.iter().map(|r| vec![r.clone()]).collect();
        for (i, a) in roots.iter().enumerate() {
            for b in &roots[i + 1..] {
                if ctx.ext_generic(a, b)? == 0 && ctx.ext_generic(b, a)? == 0 {
                    families.insert(vec![a.clone(), b.clone()]);
                }
            }
        }
        for fam in &families {
            let exact = ctx.relative_simples_exact(fam)?;
            let sampled = oracle::relative_simples(ctx, fam, cfg)?;
            rs.record(exact == sampled, || format!("{fam:?}: exact {exact:?} vs closure {sampled:?}"));
        }
        checks.push(rs.to_json("relative_simples_closure_vs_exact"));
    }
    Ok(checks)
}

fn selftest(cli: &Cli) -> Result<Value> {
    let specs: Vec<String> = if cli.quiver.is_empty() {
        ["a2", "a3", "kronecker", "sq"].iter().map(|s| s.to_string()).collect()
    } else {
        cli.quiver.clone()
    };
    let cfg = config(cli);
    let mut reports = Vec::new();
    let mut pass = true;
    for spec in &specs {
        let mut ctx = EulerContext::build(load_quiver(spec)?)?;
        ctx.set_oracle_config(cfg.clone());
        let checks = selftest_context(&ctx, &cfg)?;
        pass &= checks.iter().all(|c| c["pass"] == json!(true));
        reports.push(json!({"quiver": spec, "class": class_name(ctx.class()), "checks": checks}));
    }
    Ok(json!({
        "schema": SCHEMA,
        "command": "selftest",
        "config": {"seed": cli.seed, "prime": cli.prime},
        "pass": pass,
        "contexts": reports,
    }))
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in items {
                            out.push_str(&format!("{pad}  -\n"));
                            render_text(item, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Runs the CLI on `args` (including the program name); returns the exit
/// code and the text to print on stdout.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let payload = json!({"schema": SCHEMA, "error": {"kind": "invalid_input", "message": e.to_string()}});
            return (2, format!("{}\n", serde_json::to_string_pretty(&payload).expect("serializable")));
        }
    };
    match run_command(&cli) {
        Ok(v) => {
            let code = if v.get("pass") == Some(&json!(false)) { 3 } else { 0 };
            if let (Command::SliceSvg { out: None }, Some(Value::String(svg))) = (&cli.command, v.get("result")) {
                return (code, svg.clone());
            }
            let text = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
                Format::Text => {
                    let mut s = String::new();
                    render_text(&v, 0, &mut s);
                    s
                }
            };
            (code, text)
        }
        Err(e) => {
            let payload = json!({"schema": SCHEMA, "error": {"kind": e.kind(), "message": e.to_string()}});
            (e.exit_code(), format!("{}\n", serde_json::to_string_pretty(&payload).expect("serializable")))
        }
    }
}
