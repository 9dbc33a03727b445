mod common;

use common::*;
use edgesync_core::behavior::{BehaviorCase, BehaviorClass};
use edgesync_core::graph::SignedDigraph;
use edgesync_core::linalg::inf_norm;
use edgesync_core::spectral::{NullSpaceRelation, RankSet};
use edgesync_core::DVector;

fn counts(r: &Run) -> (usize, usize, usize) {
    (r.leaders.l1, r.leaders.l2_sb, r.leaders.l2_sub)
}

fn assert_clean(r: &Run) {
    assert!(r.report.predictions_match(), "{:?}", r.report);
    assert!(r.zes.residuals.max() <= 1e-9, "{:?}", r.zes.residuals);
    assert!(r.cert.is_certified(), "residual {} min eig {}", r.cert.residual, r.cert.min_eig_p);
    assert!(r.verdict.overall_pass, "{:?}", r.verdict.checks);
    assert!(r.traj.diagnostics.ebar_final_norm <= 1e-6);
}

#[test]
fn g0_three_leader_groups() {
    let r = run(&g0(), &X0_9, 10);
    assert_eq!(counts(&r), (1, 1, 1));
    assert_eq!((r.zes.gamma, r.zes.xi), (2, 3));
    assert_eq!(r.verdict.predicted, BehaviorClass::BipartiteContainment);
    assert_clean(&r);
}

#[test]
fn g1_interval_bipartite() {
    let r = run(&g1(), &X0_5, 10);
    assert!(!r.report.sb);
    assert_eq!(counts(&r), (1, 0, 0));
    assert_eq!(
        r.report.ranks,
        RankSet {
            es_in: 4,
            es: 5,
            ls: 4,
            le: 4
        }
    );
    assert_eq!((r.zes.gamma, r.zes.xi), (1, 1));
    assert_eq!(r.verdict.predicted, BehaviorClass::IntervalBipartiteConsensus);
    assert_clean(&r);
    assert!(r.traj.diagnostics.limit_error <= 1e-6);
    assert!(inf_norm(&r.traj.final_e()) > 1e-3);
    assert!(inf_norm(&r.traj.final_x()) <= 5.5 + 1e-6);
}

#[test]
fn g2_g3_g4_multiplicities() {
    let expected = [
        (g2(), (2, 0, 0), (3, 3)),
        (g3(), (1, 1, 0), (2, 3)),
        (g4(), (1, 0, 1), (2, 2)),
    ];
    for (g, c, gx) in expected {
        let r = run(&g, &X0_9, 10);
        assert_eq!(counts(&r), c);
        assert_eq!((r.zes.gamma, r.zes.xi), gx);
        assert_eq!(r.verdict.predicted, BehaviorClass::BipartiteContainment);
        assert!(inf_norm(&r.traj.final_e()) >= 1e-3);
        assert_clean(&r);
    }
}

#[test]
fn g3_kernel_relation_disagrees_with_prediction() {
    // The computed kernels coincide although the structural rule says they
    // differ; this is reported, not hidden.
    let r = run(&g3(), &X0_9, 100);
    assert_eq!(r.report.null_space.computed, NullSpaceRelation::Equal);
    assert_eq!(r.report.null_space.predicted, NullSpaceRelation::NotEqual);
}

#[test]
fn cycles_reach_consensus() {
    let sb = run(&sb_cycle(), &[1.0, 2.0, 3.0], 10);
    assert_eq!(sb.verdict.predicted, BehaviorClass::BipartiteConsensus);
    assert_clean(&sb);
    let x = sb.traj.final_x();
    assert!((x[0] - 2.0).abs() < 1e-6 && (x[2] - 2.0).abs() < 1e-6);

    let sub = run(&sub_cycle(), &[1.0, 2.0, 3.0], 10);
    assert_eq!(sub.verdict.predicted, BehaviorClass::TrivialConsensus);
    assert_clean(&sub);
    assert!(inf_norm(&sub.traj.final_x()) < 1e-6);
}

#[test]
fn two_node_limits() {
    let coop = SignedDigraph::from_triples(2, &[(1, 2, 1)]).unwrap();
    let x = run(&coop, &[1.0, 0.0], 10).traj.final_x();
    assert!((x - DVector::from_vec(vec![1.0, 1.0])).amax() < 1e-6);

    let comp = SignedDigraph::from_triples(2, &[(1, 2, -1)]).unwrap();
    let r = run(&comp, &[1.0, 0.0], 10);
    assert_eq!(r.verdict.case, BehaviorCase::BalancedSpanningTree);
    assert!((r.traj.final_x() - DVector::from_vec(vec![1.0, -1.0])).amax() < 1e-6);
}

#[test]
fn follower_contained_between_two_roots() {
    let g = SignedDigraph::from_triples(3, &[(1, 2, 1), (3, 2, 1)]).unwrap();
    let r = run(&g, &[1.0, -7.0, 3.0], 10);
    assert_clean(&r);
    let x = r.traj.final_x();
    assert!((x[1] - 2.0).abs() < 1e-6, "{x}");
}

#[test]
fn g1_scales_with_initial_state() {
    let x0: Vec<f64> = X0_5.iter().map(|v| 2.0 * v).collect();
    let r = run(&g1(), &x0, 10);
    assert_clean(&r);
    assert!(inf_norm(&r.traj.final_x()) <= 11.0 + 1e-6);
    let base = run(&g1(), &X0_5, 10);
    assert!((r.traj.final_e() - base.traj.final_e() * 2.0).amax() < 1e-9);
}

#[test]
fn zero_initial_state_stays_put() {
    let r = run(&g2(), &[0.0; 9], 10);
    assert_eq!(r.traj.x.amax(), 0.0);
    assert!(r.verdict.overall_pass);
}
