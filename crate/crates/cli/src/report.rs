//! JSON documents written by the commands. Field order is fixed by the
//! struct definitions, so output is byte-stable.

use edgesync_core::behavior::BehaviorVerdict;
use edgesync_core::graph::{GroupKind, Regime};
use edgesync_core::lyapunov::{LyapunovCertificate, LyapunovMethod};
use edgesync_core::spectral::{NullSpaceRelation, RankSet, SpectralReport};
use edgesync_core::TolerancePolicy;
use serde::Serialize;

use crate::pipeline::{Analysis, SimOptions, SimulationRun, VerifyOutcome};

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ToleranceJson {
    pub rank_rtol: f64,
    pub eig_zero: f64,
    pub sim: f64,
}

impl From<&TolerancePolicy> for ToleranceJson {
    fn from(t: &TolerancePolicy) -> Self {
        ToleranceJson {
            rank_rtol: t.rank_rtol,
            eig_zero: t.eig_zero,
            sim: t.sim,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RanksJson {
    pub es_in: usize,
    pub es: usize,
    pub ls: usize,
    pub le: usize,
}

impl From<RankSet> for RanksJson {
    fn from(r: RankSet) -> Self {
        RanksJson {
            es_in: r.es_in,
            es: r.es,
            ls: r.ls,
            le: r.le,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RankMatchJson {
    pub es_in: bool,
    pub es: bool,
    pub ls: bool,
    pub le: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NullSpaceJson {
    pub computed: &'static str,
    pub predicted: &'static str,
    pub projector_distance: f64,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn relation_name(r: NullSpaceRelation) -> &'static str {
    match r {
        NullSpaceRelation::Equal => "Equal",
        NullSpaceRelation::NotEqual => "NotEqual",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralJson {
    pub rank_es: usize,
    pub rank_es_in: usize,
    pub rank_ls: usize,
    pub rank_le: usize,
    pub predicted_ranks: RanksJson,
    pub rank_match: RankMatchJson,
    pub gamma: usize,
    pub xi: usize,
    pub predicted_gamma: usize,
    pub predicted_xi: usize,
    pub multiplicity_case: &'static str,
    pub gamma_match: bool,
    pub xi_match: bool,
    pub null_space: NullSpaceJson,
    pub tolerance: ToleranceJson,
}

impl From<&SpectralReport> for SpectralJson {
    fn from(s: &SpectralReport) -> Self {
        SpectralJson {
            rank_es: s.ranks.es,
            rank_es_in: s.ranks.es_in,
            rank_ls: s.ranks.ls,
            rank_le: s.ranks.le,
            predicted_ranks: s.predicted_ranks.into(),
            rank_match: RankMatchJson {
                es_in: s.rank_match.es_in,
                es: s.rank_match.es,
                ls: s.rank_match.ls,
                le: s.rank_match.le,
            },
            gamma: s.gamma,
            xi: s.xi,
            predicted_gamma: s.predicted.gamma,
            predicted_xi: s.predicted.xi,
            multiplicity_case: s.predicted.case.label(),
            gamma_match: s.gamma_match,
            xi_match: s.xi_match,
            null_space: NullSpaceJson {
                computed: relation_name(s.null_space.computed),
                predicted: relation_name(s.null_space.predicted),
                projector_distance: s.null_space.projector_distance,
                matches: s.null_space_match(),
            },
            tolerance: (&s.tolerance).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupJson {
    pub kind: &'static str,
    pub members: Vec<usize>,
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisJson {
    pub n: usize,
    pub m: usize,
    pub valid: bool,
    pub sb: bool,
    pub spanning_tree: bool,
    pub regime: &'static str,
    pub l1: usize,
    pub l2sb: usize,
    pub l2sub: usize,
    pub groups: Vec<GroupJson>,
    pub leaders: Vec<usize>,
    pub followers: Vec<usize>,
    pub gauge: Option<Vec<i8>>,
    pub gamma: usize,
    pub xi: usize,
    pub class: &'static str,
    pub case: &'static str,
    pub spectral: SpectralJson,
}

impl From<&Analysis> for AnalysisJson {
    fn from(a: &Analysis) -> Self {
        let ls = &a.leaders;
        AnalysisJson {
            n: a.graph.node_count(),
            m: a.graph.edge_count(),
            valid: true,
            sb: a.gauge.is_some(),
            spanning_tree: a.spanning_tree,
            regime: match a.spectral.regime {
                Regime::SpanningTree => "spanning-tree",
                Regime::MultiLeader => "multi-leader",
            },
            l1: ls.l1,
            l2sb: ls.l2_sb,
            l2sub: ls.l2_sub,
            groups: ls
                .groups
                .iter()
                .map(|g| GroupJson {
                    kind: match g.kind {
                        GroupKind::Root => "Root",
                        GroupKind::SccSb => "SccSB",
                        GroupKind::SccSub => "SccSUB",
                    },
                    members: one_based(&g.members),
                })
                .collect(),
            leaders: one_based(&ls.leaders),
            followers: one_based(&ls.followers),
            gauge: a.gauge.as_ref().map(|d| d.as_slice().to_vec()),
            gamma: a.spectral.gamma,
            xi: a.spectral.xi,
            class: a.class.name(),
            case: a.case.label(),
            spectral: (&a.spectral).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub method: &'static str,
    pub alphas: Vec<f64>,
    pub residual: f64,
    pub min_eig_p: f64,
    pub max_eig_p: f64,
    pub certified: bool,
    pub p: Vec<Vec<f64>>,
}

impl CertificateJson {
    pub fn new(c: &LyapunovCertificate, method: LyapunovMethod) -> Self {
        CertificateJson {
            method: match method {
                LyapunovMethod::Schur => "schur",
                LyapunovMethod::Kronecker => "kronecker",
            },
            alphas: c.alphas.clone(),
            residual: c.residual,
            min_eig_p: c.min_eig_p,
            max_eig_p: c.max_eig_p,
            certified: c.is_certified(),
            p: c.p.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub predicted: &'static str,
    pub case: &'static str,
    pub checks: Vec<CheckJson>,
    pub overall_pass: bool,
}

impl From<&BehaviorVerdict> for VerdictJson {
    fn from(v: &BehaviorVerdict) -> Self {
        VerdictJson {
            predicted: v.predicted.name(),
            case: v.case.label(),
            checks: v
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.to_string(),
                    residual: c.residual,
                    tol: c.tol,
                    pass: c.pass,
                })
                .collect(),
            overall_pass: v.overall_pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryJson {
    pub rows: usize,
    pub t_final: f64,
    pub ebar_final_norm: f64,
    pub e_final: Vec<f64>,
    pub predicted_e_limit: Vec<f64>,
    pub limit_error: f64,
    pub edge_ode_agreement: f64,
    pub edge_average_drift: f64,
    pub stability_bound: f64,
    pub warnings: Vec<String>,
}

impl From<&SimulationRun> for SummaryJson {
    fn from(r: &SimulationRun) -> Self {
        let t = &r.trajectory;
        let d = &t.diagnostics;
        SummaryJson {
            rows: t.rows(),
            t_final: t.t_final(),
            ebar_final_norm: d.ebar_final_norm,
            e_final: d.e_final.iter().copied().collect(),
            predicted_e_limit: d.predicted_e_limit.iter().copied().collect(),
            limit_error: d.limit_error,
            edge_ode_agreement: d.edge_ode_agreement,
            edge_average_drift: d.edge_average_drift,
            stability_bound: d.stability_bound,
            warnings: d.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigJson {
    pub k1: f64,
    pub q: String,
    pub alpha: String,
    pub x0: Option<Vec<f64>>,
    pub dt: f64,
    pub t_final: f64,
    pub record_every: usize,
    pub lyapunov_method: &'static str,
    pub seed: Option<u64>,
    pub tolerance: ToleranceJson,
}

impl ConfigJson {
    pub fn new(opts: &SimOptions, x0: Option<Vec<f64>>, seed: Option<u64>, tol: &TolerancePolicy) -> Self {
        ConfigJson {
            k1: opts.k1,
            q: opts.q.describe(),
            alpha: opts.alpha.describe(),
            x0,
            dt: opts.dt,
            t_final: opts.t_final,
            record_every: opts.record_every,
            lyapunov_method: match opts.method {
                LyapunovMethod::Schur => "schur",
                LyapunovMethod::Kronecker => "kronecker",
            },
            seed,
            tolerance: tol.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestJson {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub config: ConfigJson,
    pub version: &'static str,
    pub outputs: Vec<String>,
}

pub const VERSION: &str = concat!("edgesync ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Serialize)]
pub struct FindingJson {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub gated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyJson {
    pub graph: String,
    pub pass: bool,
    pub class: &'static str,
    pub case: &'static str,
    pub findings: Vec<FindingJson>,
    pub failures: Vec<String>,
}

impl VerifyJson {
    pub fn new(graph: String, o: &VerifyOutcome) -> Self {
        VerifyJson {
            graph,
            pass: o.pass(),
            class: o.analysis.class.name(),
            case: o.analysis.case.label(),
            findings: o
                .findings
                .iter()
                .map(|f| FindingJson {
                    name: f.name.clone(),
                    value: f.value,
                    threshold: f.threshold,
                    pass: f.pass,
                    gated: f.gated,
                })
                .collect(),
            failures: o.failures().iter().map(|f| f.name.clone()).collect(),
        }
    }
}
