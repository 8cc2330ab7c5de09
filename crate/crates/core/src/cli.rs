//! Command-line front end.
//!
//! Every subcommand prints a flat record, one `key=value` per line (or one JSON
//! object with `--json`). Exit codes: 0 success, 1 input error, 2 certificate
//! failure, 3 cost-guard or enumeration-budget refusal.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::applications::{self, Mode, Settings};
use crate::constants::{gamma_rows, gamma_table, solve_theta, ConstantSolution, DegreeRegime};
use crate::error::{Error, Result};
use crate::graph::{parse_colored_graph, parse_graph, ColoredGraph, Graph};
use crate::oracle::{exact_max_cut_with, exact_q_with, EnumerationBudget, DEFAULT_BUDGET_BITS};
use crate::taylor::{approximate_q_with, ApproxOptions, ApproxResult, TaylorConfig, DEFAULT_COST_CEILING};
use crate::weights::{
    coloring_matrix_hard, coloring_matrix_soft, independent_set_matrix_hard,
    independent_set_matrix_soft, lift_matrix, maxcut_matrix, parse_weights, EdgeWeightTensor,
    ZeroFreeCertificate,
};

pub const COST_CEILING_ENV: &str = "HOMPART_COST_CEILING";
const MIN_COST_CEILING: f64 = 1e6;

#[derive(Debug, Parser)]
#[command(name = "hompart", version, about = "Graph homomorphism partition functions: exact and Taylor-approximate")]
struct Cli {
    /// Emit the record as a single JSON object.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approx => Mode::Approx,
        }
    }
}

#[derive(Debug, Args)]
struct Tuning {
    /// Worker threads for derivative computation.
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Refuse Taylor orders whose estimated product count exceeds this.
    #[arg(long, env = COST_CEILING_ENV, default_value_t = DEFAULT_COST_CEILING)]
    cost_ceiling: f64,

    /// Maximum log2 of the number of maps the exact oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET_BITS)]
    budget_bits: f64,
}

#[derive(Debug, Args)]
struct Accuracy {
    /// Target relative error of approximate values.
    #[arg(long = "eps", default_value_t = 0.1)]
    eps_rel: f64,

    /// Fixed Taylor order, overriding the one derived from --eps.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact partition function by enumeration.
    Evaluate {
        #[arg(long)]
        graph: PathBuf,
        /// Preset (ones, coloring-hard, coloring-soft, indset-hard, indset-soft, maxcut:EPS) or JSON file.
        #[arg(long)]
        weights: String,
        /// Label count for presets that need one.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Taylor approximation with certified error bound.
    Approx {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        accuracy: Accuracy,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Soft-weighted count of k-colorings.
    Colorings {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Override the tabulated gamma (voids the approximation guarantee).
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        accuracy: Accuracy,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Soft-weighted count of independent sets.
    Indsets {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        accuracy: Accuracy,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Bounds on the maximum cut from P_G(A_eps).
    Maxcut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "eps-param")]
        eps_param: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[command(flatten)]
        accuracy: Accuracy,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Many color-preserving homomorphisms G -> H, or far from any?
    Distinguish {
        /// Colored source graph (edge lines "u v color").
        #[arg(long)]
        graph: PathBuf,
        /// Colored target graph.
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        w: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        accuracy: Accuracy,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Constant table and solved angle equation.
    Constants {
        /// Maximum degree selecting the table row and the finite-degree equation.
        #[arg(long)]
        delta: Option<usize>,
        /// Solve for this alpha instead of the tabulated one.
        #[arg(long)]
        alpha: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Int(v) => write!(f, "{v}"),
            Field::Float(v) => write!(f, "{v}"),
            Field::Text(v) => f.write_str(v),
            Field::Bool(v) => write!(f, "{v}"),
        }
    }
}

/// Ordered key/value output record.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Record {
    pub fields: Vec<(String, Field)>,
}

impl Record {
    fn int(&mut self, key: &str, v: usize) -> &mut Self {
        self.fields.push((key.into(), Field::Int(v as u64)));
        self
    }
    fn float(&mut self, key: &str, v: f64) -> &mut Self {
        self.fields.push((key.into(), Field::Float(v)));
        self
    }
    fn text(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.fields.push((key.into(), Field::Text(v.into())));
        self
    }
    fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.fields.push((key.into(), Field::Bool(v)));
        self
    }
    fn complex(&mut self, prefix: &str, z: Complex64) -> &mut Self {
        self.float(&format!("{prefix}_re"), z.re);
        self.float(&format!("{prefix}_im"), z.im)
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_text(&self) -> String {
        self.fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.fields {
            let value = match v {
                Field::Int(x) => serde_json::Value::from(*x),
                Field::Float(x) => serde_json::Number::from_f64(*x)
                    .map(serde_json::Value::Number)
                    .unwrap_or_else(|| serde_json::Value::String(x.to_string())),
                Field::Text(s) => serde_json::Value::String(s.clone()),
                Field::Bool(b) => serde_json::Value::Bool(*b),
            };
            map.insert(k.clone(), value);
        }
        serde_json::Value::Object(map).to_string()
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?)
}

fn load_colored(path: &Path) -> Result<ColoredGraph> {
    parse_colored_graph(&read(path)?)
}

fn require_k(k: Option<usize>, preset: &str) -> Result<usize> {
    match k {
        Some(k) if k >= 1 => Ok(k),
        _ => Err(Error::InvalidArgument(format!("preset {preset:?} needs --k >= 1"))),
    }
}

/// Resolves a preset name or JSON weight file into a tensor bound to `g`.
fn resolve_weights(spec: &str, k: Option<usize>, g: &Graph) -> Result<EdgeWeightTensor> {
    let max_degree = g.max_degree();
    let soft_degree = || {
        if max_degree == 0 {
            Err(Error::InvalidArgument("soft presets need a graph with at least one edge".into()))
        } else {
            Ok(max_degree)
        }
    };
    let matrix = match spec {
        "ones" => return EdgeWeightTensor::all_ones(require_k(k, spec)?, g.edge_count()),
        "coloring-hard" => coloring_matrix_hard(require_k(k, spec)?)?,
        "coloring-soft" => {
            let d = soft_degree()?;
            coloring_matrix_soft(require_k(k, spec)?, gamma_table(d).gamma, d)?
        }
        "indset-hard" => independent_set_matrix_hard(),
        "indset-soft" => {
            let d = soft_degree()?;
            independent_set_matrix_soft(gamma_table(d).gamma, d)?
        }
        _ => {
            if let Some(eps) = spec.strip_prefix("maxcut:") {
                let eps: f64 = eps
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad max-cut eps in {spec:?}")))?;
                maxcut_matrix(eps)?
            } else {
                let parsed = parse_weights(&read(Path::new(spec))?)?;
                if let Some(k) = k {
                    if k != parsed.k() {
                        return Err(Error::InvalidArgument(format!(
                            "--k {k} disagrees with k = {} in {spec}",
                            parsed.k()
                        )));
                    }
                }
                return parsed.into_tensor(g);
            }
        }
    };
    Ok(lift_matrix(&matrix, g))
}

fn check_tuning(t: &Tuning) -> Result<(TaylorConfig, EnumerationBudget)> {
    if t.threads == 0 {
        return Err(Error::InvalidArgument("--threads must be at least 1".into()));
    }
    if !(t.cost_ceiling >= MIN_COST_CEILING) {
        return Err(Error::InvalidArgument(format!(
            "cost ceiling must be at least {MIN_COST_CEILING:e}, got {}",
            t.cost_ceiling
        )));
    }
    if !(t.budget_bits > 0.0) {
        return Err(Error::InvalidArgument("--budget-bits must be positive".into()));
    }
    Ok((
        TaylorConfig {
            cost_ceiling: t.cost_ceiling,
            threads: t.threads,
        },
        EnumerationBudget {
            max_bits: t.budget_bits,
        },
    ))
}

fn check_accuracy(a: &Accuracy) -> Result<()> {
    if !(a.eps_rel > 0.0 && a.eps_rel < 1.0) {
        return Err(Error::InvalidArgument(format!("--eps must be in (0, 1), got {}", a.eps_rel)));
    }
    Ok(())
}

fn settings(mode: ModeArg, accuracy: &Accuracy, tuning: &Tuning, gamma: Option<f64>) -> Result<Settings> {
    check_accuracy(accuracy)?;
    let (taylor, budget) = check_tuning(tuning)?;
    Ok(Settings {
        mode: mode.into(),
        eps_rel: accuracy.eps_rel,
        order: accuracy.order,
        budget,
        taylor,
        gamma_override: gamma,
    })
}

fn graph_fields(rec: &mut Record, g: &Graph) {
    rec.int("vertices", g.vertex_count())
        .int("edges", g.edge_count())
        .int("max_degree", g.max_degree());
}

fn certificate_fields(rec: &mut Record, cert: Option<&ZeroFreeCertificate>) {
    match cert {
        Some(c) => {
            rec.text("certificate", if c.passed { "passed" } else { "failed" })
                .float("gamma", c.gamma)
                .float("alpha", c.alpha)
                .float("beta", c.beta)
                .float("delta", c.delta)
                .float("delta_max", c.delta_max);
        }
        None => {
            rec.text("certificate", "none");
        }
    }
}

fn approx_fields(rec: &mut Record, r: &ApproxResult) {
    rec.complex("log", r.log_estimate)
        .int("order", r.order)
        .float("additive_log_bound", r.additive_log_bound)
        .float("rel_bound", r.relative_bound);
    certificate_fields(rec, r.certificate.as_ref());
}

fn solution_fields(rec: &mut Record, s: &ConstantSolution) {
    rec.text("regime", s.regime.to_string())
        .float("theta", s.theta)
        .float("tau", s.tau)
        .flag("converged", s.converged)
        .float("residual", s.residual);
}

fn execute(command: Command) -> Result<Record> {
    let mut rec = Record::default();
    match command {
        Command::Evaluate { graph, weights, k, tuning } => {
            let (_, budget) = check_tuning(&tuning)?;
            let g = load_graph(&graph)?;
            let b = resolve_weights(&weights, k, &g)?;
            let value = exact_q_with(&g, &b, budget)?;
            rec.text("command", "evaluate");
            graph_fields(&mut rec, &g);
            rec.int("k", b.k()).complex("value", value);
        }
        Command::Approx { graph, weights, k, accuracy, tuning } => {
            check_accuracy(&accuracy)?;
            let (config, _) = check_tuning(&tuning)?;
            let g = load_graph(&graph)?;
            let b = resolve_weights(&weights, k, &g)?;
            let opts = ApproxOptions {
                eps_rel: accuracy.eps_rel,
                order: accuracy.order,
                config,
            };
            let r = approximate_q_with(&g, &b, &opts)?;
            rec.text("command", "approx");
            graph_fields(&mut rec, &g);
            rec.int("k", b.k()).float("eps", accuracy.eps_rel).complex("value", r.value_estimate);
            approx_fields(&mut rec, &r);
        }
        Command::Colorings { graph, k, mode, gamma, accuracy, tuning } => {
            let s = settings(mode, &accuracy, &tuning, gamma)?;
            let g = load_graph(&graph)?;
            let r = applications::soft_coloring_sum(&g, k, &s)?;
            rec.text("command", "colorings").text("mode", s.mode.to_string());
            graph_fields(&mut rec, &g);
            rec.int("k", k);
            soft_fields(&mut rec, &r);
        }
        Command::Indsets { graph, mode, gamma, accuracy, tuning } => {
            let s = settings(mode, &accuracy, &tuning, gamma)?;
            let g = load_graph(&graph)?;
            let r = applications::soft_independent_set_sum(&g, &s)?;
            rec.text("command", "indsets").text("mode", s.mode.to_string());
            graph_fields(&mut rec, &g);
            soft_fields(&mut rec, &r);
        }
        Command::Maxcut { graph, eps_param, mode, accuracy, tuning } => {
            let s = settings(mode, &accuracy, &tuning, None)?;
            let g = load_graph(&graph)?;
            let b = applications::maxcut_bounds(&g, eps_param, &s)?;
            rec.text("command", "maxcut").text("mode", s.mode.to_string());
            graph_fields(&mut rec, &g);
            rec.float("eps_param", eps_param)
                .float("p_value", b.p_value)
                .float("lower", b.lower)
                .float("upper", b.upper)
                .float("log_error", b.log_error);
            if s.mode == Mode::Exact {
                if let Ok(mu) = exact_max_cut_with(&g, s.budget) {
                    rec.int("max_cut", mu);
                }
            }
            if let Some(r) = &b.approx {
                approx_fields(&mut rec, r);
            }
        }
        Command::Distinguish { graph, target, w, mode, gamma, accuracy, tuning } => {
            let s = settings(mode, &accuracy, &tuning, gamma)?;
            let g = load_colored(&graph)?;
            let h = load_colored(&target)?;
            let v = applications::distinguish_homomorphisms(&g, &h, w, &s)?;
            rec.text("command", "distinguish").text("mode", s.mode.to_string());
            graph_fields(&mut rec, &g.graph);
            rec.int("k", h.graph.vertex_count())
                .int("w", v.w)
                .float("gamma", v.gamma)
                .flag("gamma_overridden", gamma.is_some())
                .float("normalized_value", v.normalized_value)
                .float("far_threshold", v.far_threshold)
                .float("many_threshold", v.many_threshold)
                .float("rel_bound", v.relative_bound)
                .text("verdict", v.verdict.to_string());
            if let Some(r) = &v.approx {
                rec.int("order", r.order);
            }
        }
        Command::Constants { delta, alpha } => {
            rec.text("command", "constants");
            match delta {
                Some(0) => return Err(Error::InvalidArgument("--delta must be at least 1".into())),
                Some(d) => {
                    let row = gamma_table(d);
                    rec.int("delta", d)
                        .float("gamma", row.gamma)
                        .float("alpha", alpha.unwrap_or(row.alpha))
                        .float("beta", row.beta);
                    let s = solve_theta(alpha.unwrap_or(row.alpha), DegreeRegime::Explicit(d))?;
                    solution_fields(&mut rec, &s);
                }
                None => {
                    for (from, row) in gamma_rows() {
                        let p = format!("table.delta_ge_{from}");
                        rec.float(&format!("{p}.gamma"), row.gamma)
                            .float(&format!("{p}.alpha"), row.alpha)
                            .float(&format!("{p}.beta"), row.beta);
                    }
                    let a = alpha.unwrap_or(gamma_table(1).alpha);
                    rec.float("alpha", a);
                    let s = solve_theta(a, DegreeRegime::Asymptotic)?;
                    solution_fields(&mut rec, &s);
                }
            }
        }
    }
    Ok(rec)
}

fn soft_fields(rec: &mut Record, r: &applications::SoftSumResult) {
    rec.float("gamma", r.gamma)
        .flag("gamma_overridden", r.gamma_overridden)
        .float("normalized_value", r.normalized_value)
        .complex("value", r.value);
    if let Some(a) = &r.approx {
        approx_fields(rec, a);
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(err, "{first}");
                    1
                }
            };
        }
    };
    let start = Instant::now();
    match execute(cli.command) {
        Ok(mut rec) => {
            rec.float("elapsed_ms", start.elapsed().as_secs_f64() * 1e3);
            let text = if cli.json { rec.to_json() + "\n" } else { rec.to_text() };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
