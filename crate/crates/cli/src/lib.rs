//! Command implementations and JSON documents for the `stepbound` binary.
//!
//! Rationals travel as strings (`"3"`, `"-1/2"`) so verification round-trips
//! stay exact. Node indices are 0-based.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use stepbound::bounds::{bounds_report, CouplingType};
use stepbound::graphs::{presets, Family, InteractionGraph, SignPattern};
use stepbound::linalg::SymMatrix;
use stepbound::polytope::{min_steps_bruteforce, optimal_overhead_exact, optimal_overhead_float, BRUTE_MAX_STEPS};
use stepbound::schemes::{scheme_from_partitions, synthesize_by_matchings, verify, Scheme, Step};
use stepbound::spectral::{min_eig_rationality, spectrum, SpectralConfig};

/// Failure with its process exit code: 1 for a failed verification, 2 for
/// invalid input or size limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<stepbound::Error> for CliError {
    fn from(e: stepbound::Error) -> Self {
        Self::invalid(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> CliResult<BigRational> {
    let bad = || CliError::invalid(format!("not a rational number: {s:?}"));
    let (num, den) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p = num.parse().map_err(|_| bad())?;
    let q: stepbound::BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Serialized interaction graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, usize>>,
    /// `[k, l, weight]` with `k < l`.
    pub edges: Vec<(usize, usize, String)>,
}

impl GraphDocument {
    pub fn from_graph(g: &InteractionGraph, family: Option<Family>) -> Self {
        let (family, params) = match family {
            Some(f) => {
                let params = match f {
                    Family::Cycle { n } | Family::Path { n } | Family::Complete { n } => {
                        BTreeMap::from([("n".to_string(), n)])
                    }
                    Family::Lattice { l } => BTreeMap::from([("l".to_string(), l)]),
                    Family::Wheel => BTreeMap::new(),
                };
                (Some(f.name().to_string()), Some(params))
            }
            None => (None, None),
        };
        let edges = g.weights().iter().map(|(&(k, l), w)| (k, l, w.to_string())).collect();
        Self { n: g.n(), family, params, edges }
    }

    pub fn to_graph(&self) -> CliResult<InteractionGraph> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, l, w) in &self.edges {
            if k >= l {
                return Err(CliError::invalid(format!("edge [{k}, {l}] must have k < l")));
            }
            let w = parse_rational(w)?;
            if w.is_zero() {
                return Err(CliError::invalid(format!("edge [{k}, {l}] has zero weight")));
            }
            edges.push((*k, *l, w));
        }
        Ok(InteractionGraph::from_weighted_edges(self.n, edges)?)
    }

    /// The family tag, if present and well formed.
    pub fn family_tag(&self) -> CliResult<Option<Family>> {
        let Some(name) = &self.family else { return Ok(None) };
        let param = |key: &str| {
            self.params
                .as_ref()
                .and_then(|p| p.get(key).copied())
                .ok_or_else(|| CliError::invalid(format!("family {name} needs parameter {key}")))
        };
        Ok(Some(match name.as_str() {
            "cycle" => Family::Cycle { n: param("n")? },
            "path" => Family::Path { n: param("n")? },
            "lattice" => Family::Lattice { l: param("l")? },
            "wheel" => Family::Wheel,
            "complete" => Family::Complete { n: param("n")? },
            other => return Err(CliError::invalid(format!("unknown family {other:?}"))),
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDocument {
    pub t: String,
    pub signs: Vec<i8>,
}

/// Serialized sign-flip scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDocument {
    pub n: usize,
    pub steps: Vec<StepDocument>,
}

impl SchemeDocument {
    pub fn from_scheme(s: &Scheme) -> Self {
        let steps = s
            .steps()
            .iter()
            .map(|st| StepDocument { t: st.t.to_string(), signs: st.signs.signs().to_vec() })
            .collect();
        Self { n: s.n(), steps }
    }

    pub fn to_scheme(&self) -> CliResult<Scheme> {
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(j, st)| {
                let t = parse_rational(&st.t)?;
                if !t.is_positive() {
                    return Err(CliError::invalid(format!("step {j}: time must be positive")));
                }
                if st.signs.len() != self.n {
                    return Err(CliError::invalid(format!("step {j}: expected {} signs", self.n)));
                }
                Ok(Step { t, signs: SignPattern::new(st.signs.clone())? })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Scheme::new(self.n, steps)?)
    }
}

#[derive(Parser, Debug)]
#[command(name = "stepbound", version, about = "Step and overhead bounds, sign-flip schemes and exact verification")]
pub struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Cycle,
    Path,
    Lattice,
    Wheel,
    Complete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Cycle,
    Lattice,
    Wheel,
    Matchings,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph document for a named family.
    Graph {
        family: FamilyName,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Eigenvalue clusters and the exact verdict on the minimal eigenvalue.
    Spectrum { graph: PathBuf },
    /// All step and overhead bounds for simulating the graph.
    Bounds {
        graph: PathBuf,
        /// Natural interaction graph; defaults to the unit complete graph.
        #[arg(long)]
        natural: Option<PathBuf>,
        /// `zz`, `identity`, or a JSON file holding a symmetric matrix.
        #[arg(long, default_value = "zz")]
        coupling: String,
        /// Dimension of the identity coupling.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Overhead parameter for the eigenvalue-counting bound.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Synthesize a verified sign-flip scheme.
    Scheme {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Check a scheme against a target graph exactly.
    Verify { scheme: PathBuf, graph: PathBuf },
    /// Optimal time overhead by linear programming.
    OptimalTau {
        graph: PathBuf,
        /// Rational simplex instead of floating point.
        #[arg(long)]
        exact: bool,
    },
    /// Minimal number of steps by exhaustive search.
    MinSteps {
        graph: PathBuf,
        #[arg(long, default_value_t = BRUTE_MAX_STEPS)]
        max_steps: usize,
    },
}

/// Result of one command: JSON payload, human summary and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub json: Value,
    pub summary: String,
    pub code: i32,
}

impl Output {
    fn ok(json: Value, summary: String) -> Self {
        Self { json, summary, code: 0 }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

pub fn read_graph(path: &Path) -> CliResult<(GraphDocument, InteractionGraph)> {
    let doc: GraphDocument = read_json(path)?;
    let g = doc.to_graph()?;
    Ok((doc, g))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn cmd_graph(family: FamilyName, n: Option<usize>, l: Option<usize>) -> CliResult<Output> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::invalid(format!("--{flag} is required")));
    let f = match family {
        FamilyName::Cycle => Family::Cycle { n: need(n, "n")? },
        FamilyName::Path => Family::Path { n: need(n, "n")? },
        FamilyName::Complete => Family::Complete { n: need(n, "n")? },
        FamilyName::Lattice => Family::Lattice { l: need(l, "l")? },
        FamilyName::Wheel => Family::Wheel,
    };
    let g = f.build()?;
    let doc = GraphDocument::from_graph(&g, Some(f));
    Ok(Output::ok(to_value(&doc), format!("{}: {} nodes, {} edges", f.name(), g.n(), g.edge_count())))
}

pub fn cmd_spectrum(graph: &Path) -> CliResult<Output> {
    let (_, g) = read_graph(graph)?;
    if g.n() == 0 {
        return Err(CliError::invalid("graph has no nodes"));
    }
    let cfg = SpectralConfig::default();
    let spec = spectrum(&g.to_sym(), &cfg)?;
    let min = min_eig_rationality(&g.weight_matrix(), &cfg)?;
    let summary = format!(
        "minimal eigenvalue {:.9} (multiplicity {}, {})",
        min.value,
        min.multiplicity,
        stepbound::spectral::verdict_label(&min.verdict)
    );
    Ok(Output::ok(json!({ "n": spec.n, "clusters": spec.clusters, "min_eigenvalue": min }), summary))
}

fn parse_coupling(spec: &str, m: usize) -> CliResult<CouplingType> {
    match spec {
        "zz" => Ok(CouplingType::zz()),
        "identity" => Ok(CouplingType::identity(m)?),
        path => {
            let rows: Vec<Vec<f64>> = read_json(Path::new(path))?;
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::invalid("coupling matrix must be square and nonempty"));
            }
            if (0..n).any(|i| (0..n).any(|j| rows[i][j] != rows[j][i])) {
                return Err(CliError::invalid("coupling matrix must be symmetric"));
            }
            Ok(CouplingType::custom(SymMatrix::from_rows(&rows))?)
        }
    }
}

pub fn cmd_bounds(graph: &Path, natural: Option<&Path>, coupling: &str, m: usize, mu: Option<f64>) -> CliResult<Output> {
    let (_, target) = read_graph(graph)?;
    let natural = match natural {
        Some(p) => read_graph(p)?.1,
        None => InteractionGraph::complete(target.n())?,
    };
    let c = parse_coupling(coupling, m)?;
    let report = bounds_report(&target, &natural, &c, mu, &SpectralConfig::default())?;
    let mut summary = format!("steps_lower {}", report.steps_lower());
    if let Some(o) = &report.overhead_lower {
        summary += &format!(", overhead_lower {:.9}{}", o.value, if o.strict { " (strict)" } else { "" });
    }
    let mut json = to_value(&report);
    json["steps_lower"] = json!(report.steps_lower());
    Ok(Output::ok(json, summary))
}

fn preset_scheme(g: &InteractionGraph, doc: &GraphDocument, method: Method) -> CliResult<Scheme> {
    let wanted = match method {
        Method::Cycle => "cycle",
        Method::Lattice => "lattice",
        Method::Wheel => "wheel",
        _ => unreachable!("not a preset method"),
    };
    if let Some(tag) = doc.family_tag()? {
        if tag.name() != wanted {
            return Err(CliError::invalid(format!("method {wanted} does not apply to a {} graph", tag.name())));
        }
    }
    match presets::recognize(g) {
        Some((family, parts)) if family.name() == wanted => Ok(scheme_from_partitions(g.n(), &parts)?),
        _ => Err(CliError::invalid(format!("graph is not an instance with a {wanted} preset"))),
    }
}

pub fn cmd_scheme(graph: &Path, method: Method) -> CliResult<Output> {
    let (doc, g) = read_graph(graph)?;
    let (scheme, used) = match method {
        Method::Matchings => (synthesize_by_matchings(&g)?, "matchings"),
        Method::Auto => {
            let synth = synthesize_by_matchings(&g)?;
            match presets::recognize(&g) {
                Some((family, parts)) => {
                    let preset = scheme_from_partitions(g.n(), &parts)?;
                    if preset.step_count() <= synth.step_count() {
                        (preset, family.name())
                    } else {
                        (synth, "matchings")
                    }
                }
                None => (synth, "matchings"),
            }
        }
        m => {
            let s = preset_scheme(&g, &doc, m)?;
            let name = match m {
                Method::Cycle => "cycle",
                Method::Lattice => "lattice",
                _ => "wheel",
            };
            (s, name)
        }
    };
    let report = verify(&scheme, &g.weight_matrix())?;
    if !report.ok {
        return Err(CliError { code: 1, message: format!("internal verification failed: {} defects", report.defects.len()) });
    }
    let summary = format!("{used}: {} steps, overhead {}", report.steps, report.overhead);
    Ok(Output::ok(to_value(&SchemeDocument::from_scheme(&scheme)), summary))
}

pub fn cmd_verify(scheme: &Path, graph: &Path) -> CliResult<Output> {
    let doc: SchemeDocument = read_json(scheme)?;
    let s = doc.to_scheme()?;
    let (_, g) = read_graph(graph)?;
    let report = verify(&s, &g.weight_matrix())?;
    let summary = if report.ok {
        format!("verified: overhead {}, steps {}", report.overhead, report.steps)
    } else {
        format!("not verified: {} defects", report.defects.len())
    };
    let code = if report.ok { 0 } else { 1 };
    Ok(Output { json: to_value(&report), summary, code })
}

pub fn cmd_optimal_tau(graph: &Path, exact: bool) -> CliResult<Output> {
    let (_, g) = read_graph(graph)?;
    let a = g.weight_matrix();
    let (json, tau) = if exact {
        let s = optimal_overhead_exact(&a)?;
        let support: Vec<Value> = s.support.iter().map(|(x, t)| json!({ "signs": x.signs(), "t": t.to_string() })).collect();
        (json!({ "mode": "exact", "status": s.status, "tau": s.tau.to_string(), "support": support }), s.tau.to_string())
    } else {
        let s = optimal_overhead_float(&a)?;
        let support: Vec<Value> = s.support.iter().map(|(x, t)| json!({ "signs": x.signs(), "t": t })).collect();
        (json!({ "mode": "float", "status": s.status, "tau": s.tau, "support": support }), format!("{:.9}", s.tau))
    };
    let steps = json["support"].as_array().map_or(0, Vec::len);
    Ok(Output::ok(json, format!("tau {tau} with {steps} generators")))
}

pub fn cmd_min_steps(graph: &Path, max_steps: usize) -> CliResult<Output> {
    let (_, g) = read_graph(graph)?;
    let found = min_steps_bruteforce(&g.weight_matrix(), max_steps)?;
    Ok(match found {
        Some(s) => Output::ok(
            json!({ "steps": s.step_count(), "scheme": SchemeDocument::from_scheme(&s) }),
            format!("minimal steps {}", s.step_count()),
        ),
        None => Output::ok(json!({ "steps": null, "scheme": null }), format!("no scheme within {max_steps} steps")),
    })
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Graph { family, n, l } => cmd_graph(*family, *n, *l),
        Command::Spectrum { graph } => cmd_spectrum(graph),
        Command::Bounds { graph, natural, coupling, m, mu } => cmd_bounds(graph, natural.as_deref(), coupling, *m, *mu),
        Command::Scheme { graph, method } => cmd_scheme(graph, *method),
        Command::Verify { scheme, graph } => cmd_verify(scheme, graph),
        Command::OptimalTau { graph, exact } => cmd_optimal_tau(graph, *exact),
        Command::MinSteps { graph, max_steps } => cmd_min_steps(graph, *max_steps),
    }
}

/// Runs a parsed command line, writing JSON and the summary; returns the exit
/// code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.json).expect("serializable") + "\n";
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return 2;
                }
            } else {
                print!("{text}");
            }
            if !cli.quiet {
                eprintln!("{}", out.summary);
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("3").unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(parse_rational("-2/4").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn graph_documents_validate() {
        let doc = GraphDocument { n: 3, family: None, params: None, edges: vec![(1, 0, "1".into())] };
        assert_eq!(doc.to_graph().unwrap_err().code, 2);
        let doc = GraphDocument { n: 3, family: None, params: None, edges: vec![(0, 1, "0".into())] };
        assert!(doc.to_graph().is_err());
        let doc = GraphDocument { n: 3, family: None, params: None, edges: vec![(0, 1, "1".into()), (0, 1, "2".into())] };
        assert!(doc.to_graph().is_err());
        let doc = GraphDocument { n: 3, family: None, params: None, edges: vec![(0, 3, "1".into())] };
        assert!(doc.to_graph().is_err());
    }

    #[test]
    fn family_tags() {
        let g = InteractionGraph::square_lattice(4).unwrap();
        let doc = GraphDocument::from_graph(&g, Some(Family::Lattice { l: 4 }));
        assert_eq!(doc.family_tag().unwrap(), Some(Family::Lattice { l: 4 }));
        let bad = GraphDocument { family: Some("torus".into()), ..doc };
        assert!(bad.family_tag().is_err());
    }
}
