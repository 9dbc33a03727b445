//! The analysis, simulation and verification pipelines shared by the
//! commands and the test suites.

use edgesync_core::behavior::{classify, verify_objective, BehaviorCase, BehaviorClass, BehaviorVerdict};
use edgesync_core::dynamics::{expm_edge_oracle, simulate, SimulationConfig, Trajectory};
use edgesync_core::graph::{
    has_directed_spanning_tree, is_structurally_balanced, leader_groups, GaugeVector, LeaderStructure, SignedDigraph,
};
use edgesync_core::incidence::{IncidenceSet, IncidenceSetF64};
use edgesync_core::linalg::inf_norm;
use edgesync_core::lyapunov::{solve_p_with, LyapunovCertificate, LyapunovMethod};
use edgesync_core::spectral::{rank_report, zero_eigenstructure, SpectralReport, ZeroEigenstructure};
use edgesync_core::{DMatrix, DVector, TolerancePolicy};

use crate::error::{CliError, Result};
use crate::format::parse_csv_floats;

/// Everything that follows from the graph alone.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub graph: SignedDigraph,
    pub leaders: LeaderStructure,
    pub gauge: Option<GaugeVector>,
    pub spanning_tree: bool,
    pub incidence: IncidenceSet,
    pub incidence_f64: IncidenceSetF64,
    pub spectral: SpectralReport,
    pub zero: ZeroEigenstructure,
    pub class: BehaviorClass,
    pub case: BehaviorCase,
}

pub fn analyze(g: &SignedDigraph, tol: &TolerancePolicy) -> Result<Analysis> {
    let leaders = leader_groups(g);
    let gauge = is_structurally_balanced(g, None);
    let spanning_tree = has_directed_spanning_tree(g);
    let incidence = IncidenceSet::new(g);
    let incidence_f64 = incidence.to_f64();
    let spectral = rank_report(g, &leaders, &incidence, tol)?;
    let zero = zero_eigenstructure(&incidence_f64.le, &incidence_f64.es, tol)?;
    let (class, case) = classify(&leaders, gauge.is_some(), spanning_tree)?;
    Ok(Analysis {
        graph: g.clone(),
        leaders,
        gauge,
        spanning_tree,
        incidence,
        incidence_f64,
        spectral,
        zero,
        class,
        case,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum QSpec {
    Identity,
    Diag(Vec<f64>),
}

impl QSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(QSpec::Identity);
        }
        match s.strip_prefix("diag:") {
            Some(list) => Ok(QSpec::Diag(parse_csv_floats(list, "--q")?)),
            None => Err(CliError::Config(format!("--q must be `identity` or `diag:<csv>`, got {s:?}"))),
        }
    }

    pub fn build(&self, m: usize) -> Result<DMatrix<f64>> {
        match self {
            QSpec::Identity => Ok(DMatrix::identity(m, m)),
            QSpec::Diag(d) if d.len() == m => Ok(DMatrix::from_diagonal(&DVector::from_column_slice(d))),
            QSpec::Diag(d) => Err(CliError::Config(format!("--q diag needs {m} entries, got {}", d.len()))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            QSpec::Identity => "identity".into(),
            QSpec::Diag(d) => {
                let parts: Vec<String> = d.iter().map(|v| v.to_string()).collect();
                format!("diag:{}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    Scalar(f64),
    List(Vec<f64>),
}

impl AlphaSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let v = parse_csv_floats(s, "--alpha")?;
        Ok(if v.len() == 1 && !s.contains(',') {
            AlphaSpec::Scalar(v[0])
        } else {
            AlphaSpec::List(v)
        })
    }

    pub fn build(&self, xi: usize) -> Result<Vec<f64>> {
        match self {
            AlphaSpec::Scalar(a) => Ok(vec![*a; xi]),
            AlphaSpec::List(v) if v.len() == xi => Ok(v.clone()),
            AlphaSpec::List(v) => Err(CliError::Config(format!(
                "--alpha needs {xi} entries (one per zero eigenvalue), got {}",
                v.len()
            ))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AlphaSpec::Scalar(a) => a.to_string(),
            AlphaSpec::List(v) => v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub k1: f64,
    /// `None` selects [`default_x0`].
    pub x0: Option<Vec<f64>>,
    pub t_final: f64,
    pub dt: f64,
    pub record_every: usize,
    pub q: QSpec,
    pub alpha: AlphaSpec,
    pub method: LyapunovMethod,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            k1: SimulationConfig::DEFAULT_K1,
            x0: None,
            t_final: SimulationConfig::DEFAULT_T_FINAL,
            dt: SimulationConfig::DEFAULT_DT,
            record_every: SimulationConfig::DEFAULT_RECORD_EVERY,
            q: QSpec::Identity,
            alpha: AlphaSpec::Scalar(1.0),
            method: LyapunovMethod::Schur,
        }
    }
}

/// `x0_i = i` (1-based), used when no initial state is given.
pub fn default_x0(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64).collect()
}

impl SimOptions {
    pub fn x0_for(&self, n: usize) -> Result<Vec<f64>> {
        let x0 = self.x0.clone().unwrap_or_else(|| default_x0(n));
        if x0.len() != n {
            return Err(CliError::Config(format!("--x0 has {} entries but the graph has {n} nodes", x0.len())));
        }
        Ok(x0)
    }

    pub fn config(&self, n: usize) -> Result<SimulationConfig> {
        let cfg = SimulationConfig {
            k1: self.k1,
            x0: self.x0_for(n)?,
            t_final: self.t_final,
            dt: self.dt,
            record_every: self.record_every,
        };
        cfg.validate(n)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub config: SimulationConfig,
    pub certificate: LyapunovCertificate,
    pub trajectory: Trajectory,
    pub verdict: BehaviorVerdict,
}

pub fn run_simulation(a: &Analysis, opts: &SimOptions, tol: &TolerancePolicy) -> Result<SimulationRun> {
    let n = a.graph.node_count();
    let m = a.graph.edge_count();
    let config = opts.config(n)?;
    let q = opts.q.build(m)?;
    let alphas = opts.alpha.build(a.zero.xi)?;
    let certificate = solve_p_with(&a.incidence_f64.le, &a.zero, &q, &alphas, tol, opts.method)?;
    let trajectory = simulate(&a.incidence_f64, &a.zero, &config, Some(&certificate))?;
    let verdict = verify_objective(&trajectory, &a.leaders, a.gauge.as_ref(), a.class, a.case, tol.sim)?;
    Ok(SimulationRun {
        config,
        certificate,
        trajectory,
        verdict,
    })
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    /// Gated findings decide the exit status; the others are reported only.
    pub gated: bool,
}

impl Finding {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Finding {
            name: name.into(),
            value,
            threshold,
            pass: value.is_finite() && value <= threshold,
            gated: true,
        }
    }

    fn flag(name: impl Into<String>, pass: bool) -> Self {
        Finding {
            name: name.into(),
            value: if pass { 0.0 } else { 1.0 },
            threshold: 0.0,
            pass,
            gated: true,
        }
    }

    fn diagnostic(mut self) -> Self {
        self.gated = false;
        self
    }
}

/// Times at which the trajectory is compared against the exponential oracle.
pub const ORACLE_TIMES: [f64; 4] = [0.5, 1.0, 2.5, 10.0];

/// Zero-structure residual bound, also used for projector identities.
pub const STRUCTURE_TOL: f64 = 1e-9;
/// Node/edge consistency and edge-average drift bound.
pub const INVARIANT_TOL: f64 = 1e-8;
/// RK4 against the matrix exponential.
pub const ORACLE_TOL: f64 = 1e-7;

/// Allowed increase of `V` between samples, relative to `1 + V(0)`.
pub const V_MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub analysis: Analysis,
    pub run: SimulationRun,
    pub findings: Vec<Finding>,
}

impl VerifyOutcome {
    pub fn pass(&self) -> bool {
        self.findings.iter().filter(|f| f.gated).all(|f| f.pass)
    }

    pub fn failures(&self) -> Vec<&Finding> {
        self.findings.iter().filter(|f| f.gated && !f.pass).collect()
    }
}

/// Worst RK4 versus `exp(-k1 Le t) e0` gap over the recorded samples closest
/// to [`ORACLE_TIMES`] that fall inside the simulated horizon.
pub fn oracle_gap(a: &Analysis, run: &SimulationRun) -> Result<f64> {
    let traj = &run.trajectory;
    let e0: DVector<f64> = traj.e.row(0).transpose();
    let mut worst = 0.0f64;
    for &t in ORACLE_TIMES.iter().filter(|&&t| t <= traj.t_final()) {
        let r = nearest_row(&traj.times, t);
        let exact = expm_edge_oracle(&a.incidence_f64.le, run.config.k1, traj.times[r], &e0)?;
        let row: DVector<f64> = traj.e.row(r).transpose();
        worst = worst.max(inf_norm(&(row - exact)));
    }
    Ok(worst)
}

fn nearest_row(times: &[f64], t: f64) -> usize {
    let mut best = 0;
    for (i, &s) in times.iter().enumerate() {
        if (s - t).abs() < (times[best] - t).abs() {
            best = i;
        }
    }
    best
}

/// `-k1 lambda_min(Q) / (2 lambda_max(P))`.
pub fn decay_bound(run: &SimulationRun) -> Result<f64> {
    let (qmin, _) = edgesync_core::linalg::symmetric_extreme_eigenvalues(&run.certificate.q)?;
    Ok(-run.config.k1 * qmin / (2.0 * run.certificate.max_eig_p))
}

/// Runs analysis, certification and a finely recorded simulation, and
/// collects every check. The null-space relation is reported but not gated.
pub fn verify(g: &SignedDigraph, opts: &SimOptions, tol: &TolerancePolicy) -> Result<VerifyOutcome> {
    let analysis = analyze(g, tol)?;
    let mut fine = opts.clone();
    // The finite-difference derivative of V needs every step.
    fine.record_every = 1;
    let run = run_simulation(&analysis, &fine, tol)?;
    let s = &analysis.spectral;
    let mut f = vec![
        Finding::flag("rank-es-in", s.rank_match.es_in),
        Finding::flag("rank-es", s.rank_match.es),
        Finding::flag("rank-ls", s.rank_match.ls),
        Finding::flag("rank-le", s.rank_match.le),
        Finding::flag("gamma", s.gamma_match),
        Finding::flag("xi", s.xi_match),
        Finding::flag("null-space-relation", s.null_space_match()).diagnostic(),
        Finding::at_most("zero-structure-residual", analysis.zero.residuals.max(), STRUCTURE_TOL),
    ];
    let cert = &run.certificate;
    f.push(Finding::at_most("lyapunov-residual", cert.residual, 1e-8 * cert.q.norm()));
    f.push(Finding::flag("lyapunov-p-positive", cert.min_eig_p > 0.0));
    let traj = &run.trajectory;
    let d = &traj.diagnostics;
    f.push(Finding::at_most("node-edge-consistency", d.edge_ode_agreement, INVARIANT_TOL));
    f.push(Finding::at_most("edge-average-drift", d.edge_average_drift, INVARIANT_TOL));
    f.push(Finding::at_most("expm-oracle", oracle_gap(&analysis, &run)?, ORACLE_TOL));
    f.push(Finding::at_most("edge-limit", d.limit_error, tol.sim));
    let v0 = traj.v.as_ref().map_or(0.0, |v| v[0]);
    f.push(Finding::at_most(
        "v-monotone",
        traj.v_max_increase().unwrap_or(f64::NAN),
        V_MONOTONE_SLACK * (1.0 + v0),
    ));
    f.push(Finding::at_most("vdot-finite-difference", traj.vdot_mismatch(&cert.q)?, tol.sim));
    let bound = decay_bound(&run)?;
    if let Some(slope) = traj.decay_slope() {
        f.push(Finding::at_most("decay-slope", slope, bound + 0.1 * bound.abs()));
    }
    for c in &run.verdict.checks {
        f.push(Finding::at_most(c.name, c.residual, c.tol));
    }
    Ok(VerifyOutcome {
        analysis,
        run,
        findings: f,
    })
}
