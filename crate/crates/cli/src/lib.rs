//! Argument handling and report rendering for the `nilorbit` binary. Kept in a
//! library so tests can drive [`run`] without spawning processes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use nilorbit::coadjoint::{coadjoint_act, darboux_basis, gram_matrix, orbit_dim, radical, weight, Functional};
use nilorbit::enveloping::{check_rep, eigenspace, induce, weyl_generators, DEFAULT_DEGREE_CAP};
use nilorbit::io;
use nilorbit::polarisation::{is_polarisation, slice_verdict, vergne_polarisation};
use nilorbit::superalgebra::{classify_lambda, classify_quotient, graded_polarisation, s_bound, weight_range_audit, Family};
use nilorbit::{Error, LieAlgebra, Subspace};

#[derive(Parser, Debug)]
#[command(name = "nilorbit", version, about = "Exact computations for nilpotent Lie algebras and superalgebras")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct AlgebraSource {
    /// n_m:<m>, glmn:<m>,<n> or super_heisenberg
    #[arg(long, conflicts_with = "algebra")]
    builtin: Option<String>,
    /// Path to an algebra in JSON form.
    #[arg(long)]
    algebra: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct WithF {
    #[command(flatten)]
    source: AlgebraSource,
    /// Functional as {"coords": {"index": "p/q"}}.
    #[arg(long)]
    f: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms and report the nilpotency class.
    Validate(AlgebraSource),
    /// Dimensions and bases of the lower central series.
    Lcs(AlgebraSource),
    Center(AlgebraSource),
    /// Rank of the Kirillov form.
    OrbitDim(WithF),
    Weight(WithF),
    Radical(WithF),
    Darboux(WithF),
    /// Vergne polarisation (graded polarisation for superalgebras).
    Polarise(WithF),
    IsPolarisation {
        #[command(flatten)]
        base: WithF,
        /// Subspace as {"rows": [{"index": "p/q"}, ...]}.
        #[arg(long)]
        subspace: String,
    },
    SliceVerdict {
        #[command(flatten)]
        base: WithF,
        #[arg(long)]
        subspace: String,
        /// Functional whose orbit is intersected; defaults to --f.
        #[arg(long)]
        orbit_of: Option<String>,
    },
    /// Differential operators of the induced module.
    Induce {
        #[command(flatten)]
        base: WithF,
        /// Polarisation; defaults to the Vergne polarisation.
        #[arg(long)]
        subspace: Option<String>,
    },
    /// Coadjoint action f ∘ exp(-ad x).
    Act {
        #[command(flatten)]
        base: WithF,
        /// Vector as {"coords": {"index": "p/q"}}.
        #[arg(long)]
        x: String,
    },
    /// Polynomials of degree <= cap on which k acts through f.
    Eigenspace {
        #[command(flatten)]
        base: WithF,
        /// The subalgebra k; defaults to the polarisation.
        #[arg(long)]
        subspace: Option<String>,
        /// Polarisation the module is induced from; defaults to the Vergne
        /// polarisation.
        #[arg(long)]
        polarisation: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u32,
    },
    /// Images of a Darboux basis and their Weyl relations.
    WeylCheck(WithF),
    /// Shape of the graded-primitive quotient for λ.
    SuperClassify {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long)]
        lambda: String,
    },
    /// Values of s_i for i = 1..max.
    STable {
        #[arg(long)]
        max: u64,
    },
    /// Weight histogram over random functionals.
    Audit {
        #[arg(long)]
        builtin: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Machine-readable report.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub verb: String,
    pub input_sha256: String,
    pub result: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Loaded {
    alg: LieAlgebra,
}

fn load(src: &AlgebraSource) -> Res<Loaded> {
    match (&src.builtin, &src.algebra) {
        (Some(name), None) => {
            let family = parse_family(name)?;
            Ok(Loaded { alg: family.build()? })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
            Ok(Loaded { alg: io::parse_algebra(&text)? })
        }
        _ => Err(Failure::Usage("exactly one of --builtin or --algebra is required".into())),
    }
}

/// An unknown builtin name is a usage error; a known family with bad
/// parameters (e.g. `glmn:2,2`) is a domain error when it is built.
fn parse_family(name: &str) -> Res<Family> {
    name.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn input_hash(verb: &str, alg: Option<&LieAlgebra>, args: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(verb.as_bytes());
    if let Some(alg) = alg {
        h.update([0u8]);
        h.update(io::algebra_to_value(alg).to_string().as_bytes());
    }
    for a in args {
        h.update([0u8]);
        h.update(a.as_bytes());
    }
    hex::encode(h.finalize())
}

fn subspace_json(alg: &LieAlgebra, s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "rows": io::subspace_to_value(s)["rows"].clone(),
        "basis": s.basis().iter().map(|v| alg.format_vector(v)).collect::<Vec<_>>(),
    })
}

fn subspace_text(alg: &LieAlgebra, s: &Subspace) -> String {
    let mut out = format!("dim {}\n", s.dim());
    for v in s.basis() {
        out.push_str(&format!("  {}\n", alg.format_vector(v)));
    }
    out
}

struct Rendered {
    verb: &'static str,
    hash: String,
    text: String,
    result: Value,
}

fn execute(cmd: &Command) -> Res<Rendered> {
    let with_f = |b: &WithF| -> Res<(Loaded, Functional)> {
        let l = load(&b.source)?;
        let f = io::parse_functional(&b.f, l.alg.dim())?;
        Ok((l, f))
    };
    let out = match cmd {
        Command::Validate(src) => {
            let l = load(src)?;
            let report = l.alg.validate();
            let class = report.nilpotency_class;
            let violations: Vec<String> = report.violations.iter().map(|v| v.describe(&l.alg)).collect();
            let mut text = format!("{} (dim {})\n", l.alg.name(), l.alg.dim());
            text.push_str(if report.is_valid() { "valid\n" } else { "invalid\n" });
            for v in &violations {
                text.push_str(&format!("  violation {v}\n"));
            }
            match class {
                Some(c) => text.push_str(&format!("nilpotency class {c}\n")),
                None => text.push_str("not nilpotent\n"),
            }
            Rendered {
                verb: "validate",
                hash: input_hash("validate", Some(&l.alg), &[]),
                text,
                result: json!({
                    "valid": report.is_valid(),
                    "violations": violations,
                    "lcs_dims": report.lcs_dims,
                    "nilpotency_class": class,
                }),
            }
        }
        Command::Lcs(src) => {
            let l = load(src)?;
            let terms = l.alg.lower_central_series();
            let mut text = String::new();
            for (i, t) in terms.iter().enumerate() {
                text.push_str(&format!("g^{} {}", i + 1, subspace_text(&l.alg, t)));
            }
            Rendered {
                verb: "lcs",
                hash: input_hash("lcs", Some(&l.alg), &[]),
                text,
                result: json!({
                    "terms": terms.iter().map(|t| subspace_json(&l.alg, t)).collect::<Vec<_>>(),
                    "nilpotency_class": l.alg.nilpotency_class(),
                }),
            }
        }
        Command::Center(src) => {
            let l = load(src)?;
            let z = l.alg.center();
            Rendered {
                verb: "center",
                hash: input_hash("center", Some(&l.alg), &[]),
                text: subspace_text(&l.alg, &z),
                result: subspace_json(&l.alg, &z),
            }
        }
        Command::OrbitDim(b) => {
            let (l, f) = with_f(b)?;
            let d = orbit_dim(&l.alg, &f)?;
            Rendered {
                verb: "orbit-dim",
                hash: input_hash("orbit-dim", Some(&l.alg), &[&b.f]),
                text: format!("{d}\n"),
                result: json!({ "orbit_dim": d }),
            }
        }
        Command::Weight(b) => {
            let (l, f) = with_f(b)?;
            let w = weight(&l.alg, &f)?;
            Rendered {
                verb: "weight",
                hash: input_hash("weight", Some(&l.alg), &[&b.f]),
                text: format!("{w}\n"),
                result: json!({ "weight": w }),
            }
        }
        Command::Radical(b) => {
            let (l, f) = with_f(b)?;
            let r = radical(&l.alg, &f)?;
            Rendered {
                verb: "radical",
                hash: input_hash("radical", Some(&l.alg), &[&b.f]),
                text: subspace_text(&l.alg, &r),
                result: subspace_json(&l.alg, &r),
            }
        }
        Command::Darboux(b) => {
            let (l, f) = with_f(b)?;
            let db = darboux_basis(&l.alg, &f)?;
            let mut text = format!("weight {}\n", db.weight());
            let mut pairs = Vec::new();
            for (i, (x, y)) in db.pairs.iter().enumerate() {
                text.push_str(&format!("x{} = {}\ny{} = {}\n", i + 1, l.alg.format_vector(x), i + 1, l.alg.format_vector(y)));
                pairs.push(json!({ "x": io::vector_to_value(x), "y": io::vector_to_value(y) }));
            }
            for k in &db.kernel {
                text.push_str(&format!("kernel {}\n", l.alg.format_vector(k)));
            }
            let gram = gram_matrix(&l.alg, &f)?;
            Rendered {
                verb: "darboux",
                hash: input_hash("darboux", Some(&l.alg), &[&b.f]),
                text,
                result: json!({
                    "weight": db.weight(),
                    "rank": gram.rank(),
                    "pairs": pairs,
                    "kernel": db.kernel.iter().map(|k| io::vector_to_value(k)).collect::<Vec<_>>(),
                }),
            }
        }
        Command::Polarise(b) => {
            let (l, f) = with_f(b)?;
            let p = if l.alg.is_graded() {
                graded_polarisation(&l.alg, &classify_lambda(&l.alg, &f)?)?
            } else {
                vergne_polarisation(&l.alg, &f, None)?
            };
            Rendered {
                verb: "polarise",
                hash: input_hash("polarise", Some(&l.alg), &[&b.f]),
                text: subspace_text(&l.alg, &p),
                result: subspace_json(&l.alg, &p),
            }
        }
        Command::IsPolarisation { base, subspace } => {
            let (l, f) = with_f(base)?;
            let p = io::parse_subspace(subspace, l.alg.dim())?;
            let ok = is_polarisation(&l.alg, &p, &f)?;
            Rendered {
                verb: "is-polarisation",
                hash: input_hash("is-polarisation", Some(&l.alg), &[&base.f, subspace]),
                text: format!("{ok}\n"),
                result: json!({ "is_polarisation": ok }),
            }
        }
        Command::SliceVerdict { base, subspace, orbit_of } => {
            let (l, f) = with_f(base)?;
            let k = io::parse_subspace(subspace, l.alg.dim())?;
            let target = match orbit_of {
                Some(t) => io::parse_functional(t, l.alg.dim())?,
                None => f.clone(),
            };
            let v = slice_verdict(&l.alg, &f, &k, &target)?;
            let mut text = format!("{}\n{}\n", v.status, v.detail);
            if let Some(c) = v.module_count {
                text.push_str(&format!("modules {c}\n"));
            }
            Rendered {
                verb: "slice-verdict",
                hash: input_hash("slice-verdict", Some(&l.alg), &[&base.f, subspace, orbit_of.as_deref().unwrap_or("")]),
                text,
                result: json!({
                    "status": v.status.as_str(),
                    "detail": v.detail,
                    "module_count": v.module_count,
                    "slice_dim": v.slice_dim,
                    "orbit_dim": v.orbit_dim,
                    "intersection_dim": v.intersection_dim,
                }),
            }
        }
        Command::Induce { base, subspace } => {
            let (l, f) = with_f(base)?;
            let p = match subspace {
                Some(s) => io::parse_subspace(s, l.alg.dim())?,
                None => vergne_polarisation(&l.alg, &f, None)?,
            };
            let rep = induce(&l.alg, &f, &p)?;
            let (ok, _) = check_rep(&rep);
            let mut text = format!("variables {}\n", rep.vars());
            for (i, c) in rep.complement.iter().enumerate() {
                text.push_str(&format!("t{} <-> {}\n", i + 1, l.alg.format_vector(c)));
            }
            let mut ops = serde_json::Map::new();
            for (i, w) in rep.rho.iter().enumerate() {
                text.push_str(&format!("rho({}) = {}\n", l.alg.basis_name(i), w));
                ops.insert(l.alg.basis_name(i).to_string(), Value::String(w.to_string()));
            }
            text.push_str(&format!("homomorphism {ok}\n"));
            Rendered {
                verb: "induce",
                hash: input_hash("induce", Some(&l.alg), &[&base.f, subspace.as_deref().unwrap_or("")]),
                text,
                result: json!({
                    "variables": rep.vars(),
                    "polarisation": subspace_json(&l.alg, &p),
                    "complement": rep.complement.iter().map(|c| io::vector_to_value(c)).collect::<Vec<_>>(),
                    "rho": ops,
                    "homomorphism": ok,
                }),
            }
        }
        Command::Act { base, x } => {
            let (l, f) = with_f(base)?;
            let xv = io::parse_vector(x, l.alg.dim())?;
            let g = coadjoint_act(&l.alg, &xv, &f)?;
            Rendered {
                verb: "act",
                hash: input_hash("act", Some(&l.alg), &[&base.f, x]),
                text: format!("{}\n", io::functional_to_value(&g)),
                result: json!({ "functional": io::functional_to_value(&g) }),
            }
        }
        Command::Eigenspace { base, subspace, polarisation, degree_cap } => {
            let (l, f) = with_f(base)?;
            let p = match polarisation {
                Some(s) => io::parse_subspace(s, l.alg.dim())?,
                None => vergne_polarisation(&l.alg, &f, None)?,
            };
            let k = match subspace {
                Some(s) => io::parse_subspace(s, l.alg.dim())?,
                None => p.clone(),
            };
            let rep = induce(&l.alg, &f, &p)?;
            let e = eigenspace(&rep, &k, &f, *degree_cap)?;
            let basis: Vec<String> = e.basis.iter().map(|q| q.to_string()).collect();
            let mut text = format!("dim {} (degree <= {})\n", e.dim, e.degree_cap);
            for q in &basis {
                text.push_str(&format!("  {q}\n"));
            }
            Rendered {
                verb: "eigenspace",
                hash: input_hash(
                    "eigenspace",
                    Some(&l.alg),
                    &[
                        &base.f,
                        subspace.as_deref().unwrap_or(""),
                        polarisation.as_deref().unwrap_or(""),
                        &degree_cap.to_string(),
                    ],
                ),
                text,
                result: json!({ "dim": e.dim, "degree_cap": e.degree_cap, "basis": basis }),
            }
        }
        Command::WeylCheck(b) => {
            let (l, f) = with_f(b)?;
            let p = vergne_polarisation(&l.alg, &f, None)?;
            let rep = induce(&l.alg, &f, &p)?;
            let db = darboux_basis(&l.alg, &f)?;
            let gens = weyl_generators(&rep, &db)?;
            let mut text = format!("pairs {}\n", gens.len());
            let mut pairs = Vec::new();
            for (i, (x, y)) in gens.iter().enumerate() {
                text.push_str(&format!("X{} = {}\nY{} = {}\n", i + 1, x, i + 1, y));
                pairs.push(json!({ "X": x.to_string(), "Y": y.to_string() }));
            }
            text.push_str("relations hold\n");
            Rendered {
                verb: "weyl-check",
                hash: input_hash("weyl-check", Some(&l.alg), &[&b.f]),
                text,
                result: json!({ "pairs": pairs, "relations_hold": true }),
            }
        }
        Command::SuperClassify { source, lambda } => {
            let l = load(source)?;
            let lam = io::parse_functional(lambda, l.alg.dim())?;
            let sf = classify_lambda(&l.alg, &lam)?;
            let shape = classify_quotient(&l.alg, &sf)?;
            Rendered {
                verb: "super-classify",
                hash: input_hash("super-classify", Some(&l.alg), &[lambda]),
                text: format!("{shape}\n"),
                result: json!({
                    "s": shape.s,
                    "n": shape.n,
                    "two_block": shape.two_block,
                    "provenance": shape.provenance.as_str(),
                    "in_lambda": sf.in_lambda,
                    "in_lambda_prime": sf.in_lambda_prime,
                }),
            }
        }
        Command::STable { max } => {
            let rows = (1..=*max).map(s_bound).collect::<Result<Vec<_>, _>>()?;
            let mut text = String::from("i s_i\n");
            for r in &rows {
                text.push_str(&format!("{} {}\n", r.i, r.value));
            }
            Rendered {
                verb: "s-table",
                hash: input_hash("s-table", None, &[&max.to_string()]),
                text,
                result: json!({ "rows": rows.iter().map(|r| json!([r.i, r.value])).collect::<Vec<_>>() }),
            }
        }
        Command::Audit { builtin, trials, seed } => {
            let family = parse_family(builtin)?;
            let report = weight_range_audit(family, *trials, *seed)?;
            let hist: serde_json::Map<String, Value> =
                report.histogram.iter().map(|(w, c)| (w.to_string(), json!(c))).collect();
            Rendered {
                verb: "audit",
                hash: input_hash("audit", Some(&family.build()?), &[&trials.to_string(), &seed.to_string()]),
                text: report.render(),
                result: json!({
                    "family": family.to_string(),
                    "seed": report.seed,
                    "trials": report.trials,
                    "histogram": hist,
                    "bound": report.bound,
                    "attained": report.attained(),
                    "passed": report.passed(),
                }),
            }
        }
    };
    Ok(out)
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli.command) {
        Ok(r) => {
            let stdout = if cli.json {
                let report = Report { verb: r.verb.to_string(), input_sha256: r.hash, result: r.result };
                serde_json::to_string_pretty(&report).expect("report serialises") + "\n"
            } else {
                r.text
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

/// Parses a report printed with `--json`.
pub fn parse_report(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}
