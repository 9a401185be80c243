//! The `sqfree` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sqfree_core::brill_noether::{self, CliffordOptions, PencilSearchOptions, PencilSource};
use sqfree_core::decompose::{is_indecomposable, SearchOptions, Verdict};
use sqfree_core::homology::{is_cm_complex, is_two_cm_complex, reduced_homology};
use sqfree_core::jacobian;
use sqfree_core::{CanonicalOmega, Field, Graph, SquareFreeModule};

use crate::formats::{self, FormatError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sqfree", version, about = "Square-free modules over Stanley-Reisner rings of graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Graph JSON file.
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Named graph: cycle:k, path:k, complete:k, theta:a,b,c, k33, petersen, heawood.
    #[arg(long, global = true)]
    pub builder: Option<String>,
    /// Module JSON file.
    #[arg(long, global = true)]
    pub module: Option<PathBuf>,
    /// Q or Fp:<p>.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Vertices, edges, genus, girth, 2-connectivity and s.
    GraphInfo,
    /// Smooth valency-2 vertices with non-adjacent neighbours.
    Reduce,
    /// Reduced Betti numbers and the CM test of the complex.
    Homology,
    /// Compare 2-CM, 2-connectivity and generation of ω in degree 0.
    TwoCm,
    /// The canonical module of the graph, as module JSON.
    Omega,
    /// Validate a module and report its invariants.
    ModuleInfo,
    /// Dimensions of ω_M for a module (or of ω for a graph).
    OmegaDims,
    /// Check l(M) - l(ω_M) = 1 + deg M - g.
    RrCheck,
    /// Holonomies of a multidegree-0 module after gauge fixing.
    JacobianNormalize,
    /// The P^1 class of a multidegree-0 module on a cycle.
    JacobianClassify,
    /// Least degree of a certified pencil in the search space.
    Gonality,
    /// Clifford index over the enumerated pencils and nets.
    Clifford,
    /// An indecomposable CM module of degree d with l = 1.
    BuildEffective {
        #[arg(long)]
        degree: usize,
    },
    /// A module of degree -s.
    BuildMinDegree,
    /// A cycle nonzero on every edge and at every face of ω.
    GeneralSection,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<sqfree_core::Error> for Failure {
    fn from(e: sqfree_core::Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    value: Value,
    inconclusive: bool,
}

impl Report {
    fn of(value: Value) -> Report {
        Report { value, inconclusive: false }
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", path.display())))
}

fn field_of(c: &Common) -> Result<Field, Failure> {
    c.field.parse().map_err(|e: sqfree_core::Error| Failure::Usage(format!("--field: {e}")))
}

fn load_graph(c: &Common) -> Result<Graph, Failure> {
    match (&c.graph, &c.builder) {
        (Some(_), Some(_)) => Err(Failure::Usage("give only one of --graph and --builder".into())),
        (Some(p), None) => Ok(formats::graph_from_json(&read_json(p)?)?),
        (None, Some(b)) => Graph::from_builder(b).map_err(|e| Failure::Usage(format!("--builder: {e}"))),
        (None, None) => Err(Failure::Usage("this command needs --graph or --builder".into())),
    }
}

fn load_module(c: &Common) -> Result<SquareFreeModule, Failure> {
    let p = c.module.as_ref().ok_or_else(|| Failure::Usage("this command needs --module".into()))?;
    Ok(formats::module_from_json(&read_json(p)?)?)
}

/// The module from `--module`, or `k[Δ]` from `--graph`/`--builder`.
fn module_or_structure(c: &Common) -> Result<SquareFreeModule, Failure> {
    if c.module.is_some() {
        load_module(c)
    } else {
        let g = load_graph(c)?;
        Ok(SquareFreeModule::structure_module(&g.complex(), field_of(c)?))
    }
}

fn opts(c: &Common) -> SearchOptions {
    SearchOptions { seed: c.seed, ..SearchOptions::default() }
}

fn module_json(m: &SquareFreeModule) -> Result<Value, Failure> {
    Ok(formats::module_to_json(m)?)
}

fn dims_json(m: &SquareFreeModule, dims: &[usize]) -> Value {
    let mut out = Map::new();
    for (i, &f) in m.complex().faces().iter().enumerate() {
        out.insert(f.label(), json!(dims[i]));
    }
    Value::Object(out)
}

fn source_json(s: &PencilSource) -> Value {
    match s {
        PencilSource::AvoidingSets { a1, a2, proportional } => json!({"kind": "avoiding-sets", "a1": a1, "a2": a2, "proportional": proportional}),
        PencilSource::GeneralSectionAndCycle => json!({"kind": "general-section-and-cycle"}),
        PencilSource::CyclePair => json!({"kind": "cycle-pair"}),
        PencilSource::Triangle => json!({"kind": "triangle"}),
    }
}

fn execute(cmd: &Command, c: &Common) -> Result<Report, Failure> {
    match cmd {
        Command::GraphInfo => {
            let g = load_graph(c)?;
            let s = g.max_independent_connected_complement().ok();
            Ok(Report::of(json!({
                "v": g.vertex_count(),
                "e": g.edge_count(),
                "genus": g.genus().ok(),
                "girth": g.girth(),
                "two_connected": g.is_two_connected(),
                "s": s,
            })))
        }
        Command::Reduce => {
            let g = load_graph(c)?;
            let (r, renaming) = g.reduce();
            let names: Vec<Value> = renaming.iter().enumerate().skip(1).map(|(_, x)| json!(x)).collect();
            Ok(Report::of(json!({ "graph": formats::graph_to_json(&r), "renaming": names })))
        }
        Command::Homology => {
            let g = load_graph(c)?;
            let field = field_of(c)?;
            let cx = g.complex();
            let betti: Vec<usize> = (-1..=1).map(|i| reduced_homology(&cx, field, i).dim()).collect();
            Ok(Report::of(json!({ "reduced_betti": betti, "cm": is_cm_complex(&cx, field) })))
        }
        Command::TwoCm => {
            let g = load_graph(c)?;
            let field = field_of(c)?;
            let generated = if g.is_connected() { Some(CanonicalOmega::build(&g, field)?.is_generated_in_degree_zero()) } else { None };
            Ok(Report::of(json!({
                "two_cm": is_two_cm_complex(&g.complex(), field),
                "two_connected": g.is_two_connected(),
                "omega_generated_in_degree_zero": generated,
            })))
        }
        Command::Omega => {
            let g = load_graph(c)?;
            let om = CanonicalOmega::build(&g, field_of(c)?)?;
            Ok(Report::of(module_json(om.module())?))
        }
        Command::ModuleInfo => {
            let m = load_module(c)?;
            let verdict = if m.field().is_rational() { is_indecomposable(&m, opts(c))? } else { Verdict::Inconclusive };
            Ok(Report {
                value: json!({
                    "valid": true,
                    "multidegree": m.multi_degree(),
                    "deg": m.degree(),
                    "l": m.global_sections(),
                    "cm": m.is_cm(),
                    "locally_rank_one": m.is_locally_rank_one(),
                    "indecomposable": verdict.as_str(),
                    "seed": c.seed,
                }),
                inconclusive: verdict == Verdict::Inconclusive,
            })
        }
        Command::OmegaDims => {
            let m = module_or_structure(c)?;
            let dims = m.omega_dims()?;
            Ok(Report::of(json!({ "dims": dims_json(&m, &dims) })))
        }
        Command::RrCheck => {
            let m = module_or_structure(c)?;
            let rr = m.riemann_roch_check()?;
            Ok(Report::of(json!({ "holds": rr.holds, "l": rr.l, "l_omega": rr.l_omega, "deg": rr.degree, "g": rr.genus })))
        }
        Command::JacobianNormalize => {
            let m = load_module(c)?;
            Ok(Report::of(formats::holonomy_to_json(&jacobian::tree_normalize(&m)?)))
        }
        Command::JacobianClassify => {
            let m = load_module(c)?;
            let cls = jacobian::classify_cycle_graph(&m)?;
            Ok(Report::of(json!({
                "point": [cls.point.0.to_text(), cls.point.1.to_text()],
                "distinguished_edge": cls.distinguished_edge.map(|(a, b)| json!([a, b])),
                "l": m.global_sections(),
            })))
        }
        Command::Gonality => {
            let g = load_graph(c)?;
            field_rational(c)?;
            let search = PencilSearchOptions { search: opts(c), ..PencilSearchOptions::default() };
            let res = brill_noether::gonality(&g, &search)?;
            let verified = res.certificate.verify(&g, opts(c))?;
            let bounds = brill_noether::gonality_bounds(&g)?;
            Ok(Report::of(json!({
                "gonality": res.gonality,
                "flag": res.flag,
                "bounds": { "girth": bounds.girth_bound, "genus": bounds.genus_bound },
                "candidates": res.candidates,
                "source": source_json(&res.source),
                "certificate": formats::certificate_to_json(&res.certificate, Some(verified)),
                "seed": c.seed,
            })))
        }
        Command::Clifford => {
            let g = load_graph(c)?;
            field_rational(c)?;
            let mut o = CliffordOptions::default();
            o.pencils.search = opts(c);
            let res = brill_noether::clifford_index(&g, &o)?;
            Ok(Report::of(json!({
                "clifford_index": res.index,
                "d": res.certificate.degree,
                "r": res.certificate.r,
                "enumerated": res.enumerated.len(),
                "clifford_violations": res.violations,
                "flag": brill_noether::SEARCH_SPACE_FLAG,
                "certificate": formats::certificate_to_json(&res.certificate, None),
                "seed": c.seed,
            })))
        }
        Command::BuildEffective { degree } => {
            let g = load_graph(c)?;
            Ok(Report::of(module_json(&SquareFreeModule::build_effective(&g, field_of(c)?, *degree)?)?))
        }
        Command::BuildMinDegree => {
            let g = load_graph(c)?;
            Ok(Report::of(module_json(&SquareFreeModule::build_min_degree(&g, field_of(c)?)?)?))
        }
        Command::GeneralSection => {
            let g = load_graph(c)?;
            let om = CanonicalOmega::build(&g, field_of(c)?)?;
            let u = om.general_section(c.seed)?;
            Ok(Report::of(json!({ "cycle": formats::cycle_to_json(&u), "seed": c.seed })))
        }
    }
}

fn field_rational(c: &Common) -> Result<(), Failure> {
    if field_of(c)?.is_rational() {
        Ok(())
    } else {
        Err(Failure::Domain("this command works over Q only".into()))
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(x, indent + 1, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(x));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli.command, &cli.common) {
        Ok(report) => {
            let mut stdout = match cli.common.format {
                Format::Json => serde_json::to_string(&report.value).expect("JSON values serialize"),
                Format::Text => {
                    let mut s = String::new();
                    render_text(&report.value, 0, &mut s);
                    s.trim_end().to_string()
                }
            };
            stdout.push('\n');
            let code = if report.inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(m)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Domain(m)) => Outcome { code: EXIT_DOMAIN, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}
