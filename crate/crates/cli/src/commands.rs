//! Command-line surface: `analyze`, `simulate`, `verify` and `random`.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgesync_core::graph::{random_leader_graph, RandomGraphParams};
use edgesync_core::lyapunov::LyapunovMethod;
use edgesync_core::TolerancePolicy;

use crate::error::{CliError, Result};
use crate::format::{matrix_csv, parse_csv_floats, read_graph, trajectory_csv, write_file, GraphDoc};
use crate::pipeline::{analyze, run_simulation, verify, AlphaSpec, QSpec, SimOptions};
use crate::report::{
    to_json, AnalysisJson, CertificateJson, ConfigJson, ManifestJson, SummaryJson, VerdictJson, VerifyJson, VERSION,
};

#[derive(Debug, Parser)]
#[command(name = "edgesync", version, about = "Signed-digraph consensus analysis and simulation")]
pub struct Cli {
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true, default_value = "1e-9")]
    pub rank_rtol: f64,
    /// Absolute threshold for treating eigenvalues and projector gaps as zero.
    #[arg(long, global = true, default_value = "1e-8")]
    pub eig_zero: f64,
    /// Tolerance of the objective checks at the final time.
    #[arg(long, global = true, default_value = "1e-6")]
    pub sim_tol: f64,
}

impl TolArgs {
    fn policy(&self) -> Result<TolerancePolicy> {
        for (name, v) in [("--rank-rtol", self.rank_rtol), ("--eig-zero", self.eig_zero), ("--sim-tol", self.sim_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(TolerancePolicy {
            rank_rtol: self.rank_rtol,
            eig_zero: self.eig_zero,
            sim: self.sim_tol,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure, ranks, zero-eigenvalue multiplicities and behavior class.
    Analyze {
        graph: PathBuf,
        /// Write the analysis JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write es.csv, es_in.csv, ls.csv and le.csv into this directory.
        #[arg(long)]
        export_matrices: Option<PathBuf>,
    },
    /// Certify, simulate and check the predicted behavior.
    Simulate {
        graph: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        /// Output directory for trajectory.csv, summary.json, verdict.json,
        /// certificate.json and manifest.json.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Full pipeline with every check; exit 0 only if all gated checks pass.
    Verify {
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Seeded random graph with a prescribed leader structure.
    Random {
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        roots: usize,
        #[arg(long, default_value_t = 0)]
        sb_sccs: usize,
        #[arg(long, default_value_t = 0)]
        sub_sccs: usize,
        #[arg(long, default_value_t = 3)]
        scc_size: usize,
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        #[arg(long, default_value_t = 0.3)]
        neg_prob: f64,
        /// Make the whole graph structurally balanced.
        #[arg(long)]
        sb: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Schur,
    Kronecker,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Initial node states, comma separated [default: 1,2,...,N].
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Control gain.
    #[arg(long, default_value_t = 4.0)]
    pub k1: f64,
    /// Final time.
    #[arg(long = "t", default_value_t = 10.0)]
    pub t_final: f64,
    /// RK4 step.
    #[arg(long, default_value = "1e-3")]
    pub dt: f64,
    /// Keep every n-th step in the trajectory.
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
    /// `identity` or `diag:<csv>`.
    #[arg(long, default_value = "identity")]
    pub q: String,
    /// One value for every zero eigenvalue, or a comma-separated list.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Lyapunov solver.
    #[arg(long, value_enum, default_value_t = MethodArg::Schur)]
    pub lyapunov: MethodArg,
}

impl SimArgs {
    pub fn options(&self) -> Result<SimOptions> {
        Ok(SimOptions {
            k1: self.k1,
            x0: self.x0.as_deref().map(|s| parse_csv_floats(s, "--x0")).transpose()?,
            t_final: self.t_final,
            dt: self.dt,
            record_every: self.record_every,
            q: QSpec::parse(&self.q)?,
            alpha: AlphaSpec::parse(&self.alpha)?,
            method: match self.lyapunov {
                MethodArg::Schur => LyapunovMethod::Schur,
                MethodArg::Kronecker => LyapunovMethod::Kronecker,
            },
        })
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8> {
    let tol = cli.tol.policy()?;
    match &cli.command {
        Command::Analyze {
            graph,
            out,
            export_matrices,
        } => cmd_analyze(graph, out.as_deref(), export_matrices.as_deref(), &tol),
        Command::Simulate { graph, sim, out } => cmd_simulate(graph, &sim.options()?, out, &tol),
        Command::Verify { graphs, sim } => cmd_verify(graphs, &sim.options()?, &tol),
        Command::Random {
            n,
            roots,
            sb_sccs,
            sub_sccs,
            scc_size,
            density,
            neg_prob,
            sb,
            seed,
        } => {
            let params = RandomGraphParams {
                n: *n,
                roots: *roots,
                sb_sccs: *sb_sccs,
                sub_sccs: *sub_sccs,
                scc_size: *scc_size,
                density: *density,
                neg_prob: *neg_prob,
                force_sb: *sb,
            };
            print_stdout(&cmd_random(&params, *seed)?)?;
            Ok(0)
        }
    }
}

fn print_stdout(s: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

pub fn cmd_analyze(graph: &Path, out: Option<&Path>, matrices: Option<&Path>, tol: &TolerancePolicy) -> Result<u8> {
    let g = read_graph(graph)?;
    let a = analyze(&g, tol)?;
    let json = to_json(&AnalysisJson::from(&a));
    match out {
        Some(p) => write_file(p, &json)?,
        None => print_stdout(&json)?,
    }
    if let Some(dir) = matrices {
        create_dir(dir)?;
        let inc = &a.incidence;
        write_file(&dir.join("es.csv"), &matrix_csv(&inc.es, "e"))?;
        write_file(&dir.join("es_in.csv"), &matrix_csv(&inc.es_in, "e"))?;
        write_file(&dir.join("ls.csv"), &matrix_csv(&inc.ls, "v"))?;
        write_file(&dir.join("le.csv"), &matrix_csv(&inc.le, "e"))?;
    }
    Ok(0)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

pub const SIMULATE_OUTPUTS: [&str; 5] = [
    "trajectory.csv",
    "summary.json",
    "verdict.json",
    "certificate.json",
    "manifest.json",
];

pub fn cmd_simulate(graph: &Path, opts: &SimOptions, out: &Path, tol: &TolerancePolicy) -> Result<u8> {
    let g = read_graph(graph)?;
    let a = analyze(&g, tol)?;
    let run = run_simulation(&a, opts, tol)?;
    create_dir(out)?;
    let manifest = ManifestJson {
        command: "simulate",
        inputs: vec![graph.display().to_string()],
        config: ConfigJson::new(opts, Some(run.config.x0.clone()), None, tol),
        version: VERSION,
        outputs: SIMULATE_OUTPUTS.iter().map(|f| out.join(f).display().to_string()).collect(),
    };
    let files = [
        trajectory_csv(&run.trajectory),
        to_json(&SummaryJson::from(&run)),
        to_json(&VerdictJson::from(&run.verdict)),
        to_json(&CertificateJson::new(&run.certificate, opts.method)),
        to_json(&manifest),
    ];
    for (name, body) in SIMULATE_OUTPUTS.iter().zip(&files) {
        write_file(&out.join(name), body)?;
    }
    for w in &run.trajectory.diagnostics.warnings {
        eprintln!("warning: {w}");
    }
    let v = &run.verdict;
    eprintln!(
        "{}: {} ({})",
        if v.overall_pass { "pass" } else { "FAIL" },
        v.predicted.name(),
        v.case.label()
    );
    Ok(if v.overall_pass { 0 } else { 1 })
}

pub fn cmd_verify(graphs: &[PathBuf], opts: &SimOptions, tol: &TolerancePolicy) -> Result<u8> {
    let mut reports = Vec::new();
    let mut all_pass = true;
    for path in graphs {
        let g = read_graph(path)?;
        let outcome = verify(&g, opts, tol)?;
        all_pass &= outcome.pass();
        reports.push(VerifyJson::new(path.display().to_string(), &outcome));
    }
    print_stdout(&to_json(&reports))?;
    Ok(if all_pass { 0 } else { 1 })
}

pub fn cmd_random(params: &RandomGraphParams, seed: u64) -> Result<String> {
    let g = random_leader_graph(params, seed)?;
    Ok(GraphDoc::from_graph(&g).to_json())
}
