#![allow(dead_code)]

use edgesync_core::graph::SignedDigraph;

pub const X0_5: [f64; 5] = [3.5, 4.0, -2.0, -6.5, 5.5];
pub const X0_9: [f64; 9] = [3.5, 4.0, -2.0, -6.5, 5.5, -10.5, 3.5, 12.0, 5.5];

pub fn g0() -> SignedDigraph {
    SignedDigraph::from_triples(
        9,
        &[
            (1, 2, -1),
            (3, 1, 1),
            (2, 4, 1),
            (4, 3, -1),
            (5, 6, 1),
            (6, 7, 1),
            (7, 5, -1),
            (2, 9, -1),
            (5, 9, 1),
            (8, 9, -1),
        ],
    )
    .unwrap()
}

pub fn g1() -> SignedDigraph {
    SignedDigraph::from_triples(5, &[(1, 2, -1), (1, 3, 1), (2, 4, 1), (3, 4, 1), (5, 1, 1)]).unwrap()
}

fn g2_edges() -> Vec<(usize, usize, i64)> {
    vec![
        (1, 2, -1),
        (1, 3, 1),
        (2, 4, 1),
        (3, 4, -1),
        (1, 5, 1),
        (3, 6, -1),
        (7, 1, -1),
        (7, 8, 1),
        (8, 1, -1),
        (9, 3, 1),
    ]
}

pub fn g2() -> SignedDigraph {
    SignedDigraph::from_triples(9, &g2_edges()).unwrap()
}

pub fn g3() -> SignedDigraph {
    let mut e = g2_edges();
    e[6] = (1, 7, 1);
    e[8] = (8, 1, 1);
    SignedDigraph::from_triples(9, &e).unwrap()
}

pub fn g4() -> SignedDigraph {
    let mut e = g2_edges();
    e[6] = (1, 7, -1);
    e[8] = (8, 1, 1);
    SignedDigraph::from_triples(9, &e).unwrap()
}

pub fn sb_cycle() -> SignedDigraph {
    SignedDigraph::from_triples(3, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap()
}

pub fn sub_cycle() -> SignedDigraph {
    SignedDigraph::from_triples(3, &[(1, 2, 1), (2, 3, 1), (3, 1, -1)]).unwrap()
}

use edgesync_core::behavior::{classify, verify_objective, BehaviorVerdict};
use edgesync_core::dynamics::{simulate, SimulationConfig, Trajectory};
use edgesync_core::graph::{has_directed_spanning_tree, is_structurally_balanced, leader_groups, LeaderStructure};
use edgesync_core::incidence::{IncidenceSet, IncidenceSetF64};
use edgesync_core::lyapunov::{solve_p, LyapunovCertificate};
use edgesync_core::spectral::{rank_report, zero_eigenstructure, SpectralReport, ZeroEigenstructure};
use edgesync_core::{DMatrix, TolerancePolicy};

pub struct Run {
    pub leaders: LeaderStructure,
    pub inc: IncidenceSetF64,
    pub report: SpectralReport,
    pub zes: ZeroEigenstructure,
    pub cert: LyapunovCertificate,
    pub traj: Trajectory,
    pub verdict: BehaviorVerdict,
}

/// Full pipeline with `Q = I`, unit shifts and default integration settings.
pub fn run(g: &SignedDigraph, x0: &[f64], record_every: usize) -> Run {
    let tol = TolerancePolicy::default();
    let leaders = leader_groups(g);
    let inc_i = IncidenceSet::new(g);
    let inc = inc_i.to_f64();
    let report = rank_report(g, &leaders, &inc_i, &tol).unwrap();
    let zes = zero_eigenstructure(&inc.le, &inc.es, &tol).unwrap();
    let m = g.edge_count();
    let cert = solve_p(&inc.le, &zes, &DMatrix::identity(m, m), &vec![1.0; zes.xi], &tol).unwrap();
    let mut cfg = SimulationConfig::new(x0.to_vec());
    cfg.record_every = record_every;
    let traj = simulate(&inc, &zes, &cfg, Some(&cert)).unwrap();
    let gauge = is_structurally_balanced(g, None);
    let (class, case) = classify(&leaders, gauge.is_some(), has_directed_spanning_tree(g)).unwrap();
    let verdict = verify_objective(&traj, &leaders, gauge.as_ref(), class, case, 1e-6).unwrap();
    Run {
        leaders,
        inc,
        report,
        zes,
        cert,
        traj,
        verdict,
    }
}
