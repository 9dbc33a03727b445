//! Emergent-behavior classification and the objective checks evaluated on a
//! completed trajectory at its final time.

use alloc::vec::Vec;

use crate::dynamics::Trajectory;
use crate::graph::{GaugeVector, GroupKind, LeaderStructure};
use crate::linalg::inf_norm;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BehaviorClass {
    BipartiteConsensus,
    TrivialConsensus,
    IntervalBipartiteConsensus,
    BipartiteContainment,
}

impl BehaviorClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::BipartiteConsensus => "BipartiteConsensus",
            Self::TrivialConsensus => "TrivialConsensus",
            Self::IntervalBipartiteConsensus => "IntervalBipartiteConsensus",
            Self::BipartiteContainment => "BipartiteContainment",
        }
    }
}

/// Which structural case produced the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BehaviorCase {
    /// Balanced graph with a spanning tree.
    BalancedSpanningTree,
    /// Unbalanced spanning-tree graph led by an unbalanced SCC.
    UnbalancedSccLeader,
    /// Unbalanced spanning-tree graph led by a root node or a balanced SCC.
    RootOrBalancedSccLeader,
    /// Several leader groups, at least one a root or a balanced SCC.
    MultiLeaderContainment,
    /// Several leader groups, all unbalanced SCCs.
    MultiLeaderAllUnbalanced,
}

impl BehaviorCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::BalancedSpanningTree => "balanced-spanning-tree",
            Self::UnbalancedSccLeader => "unbalanced-scc-leader",
            Self::RootOrBalancedSccLeader => "root-or-balanced-scc-leader",
            Self::MultiLeaderContainment => "multi-leader-containment",
            Self::MultiLeaderAllUnbalanced => "multi-leader-all-unbalanced",
        }
    }

    pub fn class(self) -> BehaviorClass {
        match self {
            Self::BalancedSpanningTree => BehaviorClass::BipartiteConsensus,
            Self::UnbalancedSccLeader | Self::MultiLeaderAllUnbalanced => BehaviorClass::TrivialConsensus,
            Self::RootOrBalancedSccLeader => BehaviorClass::IntervalBipartiteConsensus,
            Self::MultiLeaderContainment => BehaviorClass::BipartiteContainment,
        }
    }
}

/// Classifies from the balance flag, the spanning-tree flag and the leader
/// groups. Fails when the graph has neither a spanning tree nor a usable
/// multi-leader structure (no leader group at all).
pub fn classify(ls: &LeaderStructure, sb: bool, spanning_tree: bool) -> Result<(BehaviorClass, BehaviorCase)> {
    let case = if spanning_tree {
        if ls.group_count() != 1 {
            return Err(Error::AssumptionViolated);
        }
        if sb {
            BehaviorCase::BalancedSpanningTree
        } else if ls.groups[0].kind == GroupKind::SccSub {
            BehaviorCase::UnbalancedSccLeader
        } else {
            BehaviorCase::RootOrBalancedSccLeader
        }
    } else {
        if ls.group_count() < 2 {
            return Err(Error::AssumptionViolated);
        }
        if ls.l1 + ls.l2_sb >= 1 {
            BehaviorCase::MultiLeaderContainment
        } else {
            BehaviorCase::MultiLeaderAllUnbalanced
        }
    };
    Ok((case.class(), case))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &'static str, residual: f64, tol: f64) -> Self {
        Self {
            name,
            residual,
            tol,
            pass: residual.is_finite() && residual <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorVerdict {
    pub predicted: BehaviorClass,
    pub case: BehaviorCase,
    pub checks: Vec<Check>,
    pub overall_pass: bool,
}

impl BehaviorVerdict {
    pub fn new(predicted: BehaviorClass, case: BehaviorCase, checks: Vec<Check>) -> Self {
        let overall_pass = checks.iter().all(|c| c.pass);
        Self {
            predicted,
            case,
            checks,
            overall_pass,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check_gauge_len(traj: &Trajectory, gauge: &GaugeVector) -> Result<()> {
    if gauge.len() != traj.x.ncols() {
        return Err(Error::DimensionMismatch {
            what: "gauge",
            expected: traj.x.ncols(),
            found: gauge.len(),
        });
    }
    Ok(())
}

/// Agreement up to sign: `max_k |e_k(T)|`, plus the distance of `x(T)` from
/// `c d` with `c` the mean of `d_i x_i(T)`.
pub fn verify_bipartite_consensus(traj: &Trajectory, gauge: &GaugeVector, tol: f64) -> Result<[Check; 2]> {
    check_gauge_len(traj, gauge)?;
    let x = traj.final_x();
    let n = x.len() as f64;
    let c = x.iter().enumerate().map(|(i, v)| gauge.get(i) as f64 * v).sum::<f64>() / n;
    let align = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v - c * gauge.get(i) as f64).abs())
        .fold(0.0, f64::max);
    Ok([
        Check::new("bipartite-consensus", inf_norm(&traj.final_e()), tol),
        Check::new("gauge-alignment", align, tol),
    ])
}

/// `||x(T)||_inf`.
pub fn verify_trivial_consensus(traj: &Trajectory, tol: f64) -> Check {
    Check::new("trivial-consensus", inf_norm(&traj.final_x()), tol)
}

/// Every state within `[-theta, theta]`, `theta` being the largest final
/// leader magnitude.
pub fn verify_interval_bipartite(traj: &Trajectory, ls: &LeaderStructure, tol: f64) -> Check {
    let x = traj.final_x();
    let theta = ls.leaders.iter().map(|&i| x[i].abs()).fold(0.0, f64::max);
    let residual = (inf_norm(&x) - theta).max(0.0);
    Check::new("interval-bipartite", residual, tol)
}

/// For each follower `j`, `(x_j - max_i s_i x_i)(x_j - min_i s_i x_i) <= 0`
/// over the leaders `i`, with `s_i = d_i d_j`.
pub fn verify_containment_sb(
    traj: &Trajectory,
    ls: &LeaderStructure,
    gauge: &GaugeVector,
    tol: f64,
) -> Result<Check> {
    check_gauge_len(traj, gauge)?;
    let x = traj.final_x();
    let mut worst = 0.0f64;
    for &j in &ls.followers {
        let dj = gauge.get(j) as f64;
        let (lo, hi) = ls
            .leaders
            .iter()
            .map(|&i| gauge.get(i) as f64 * dj * x[i])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        worst = worst.max((x[j] - hi) * (x[j] - lo));
    }
    Ok(Check::new("containment-sb", worst, tol))
}

/// `|x_j(T)| <= max_i |x_i(T)|` for every follower `j` and leader `i`.
pub fn verify_containment_sub(traj: &Trajectory, ls: &LeaderStructure, tol: f64) -> Check {
    let x = traj.final_x();
    let bound = ls.leaders.iter().map(|&i| x[i].abs()).fold(0.0, f64::max);
    let residual = ls
        .followers
        .iter()
        .map(|&j| x[j].abs() - bound)
        .fold(0.0, f64::max);
    Check::new("containment-sub", residual, tol)
}

/// `||ebar(T)||_inf`.
pub fn verify_sync_errors(traj: &Trajectory, tol: f64) -> Check {
    Check::new("sync-errors", inf_norm(&traj.final_ebar()), tol)
}

/// Runs the check selected by the class together with the synchronization
/// error check. `gauge` is required for balanced graphs.
pub fn verify_objective(
    traj: &Trajectory,
    ls: &LeaderStructure,
    gauge: Option<&GaugeVector>,
    class: BehaviorClass,
    case: BehaviorCase,
    tol: f64,
) -> Result<BehaviorVerdict> {
    let mut checks = Vec::new();
    match class {
        BehaviorClass::BipartiteConsensus => {
            let gauge = gauge.ok_or(Error::StructurallyUnbalanced)?;
            checks.extend(verify_bipartite_consensus(traj, gauge, tol)?);
        }
        BehaviorClass::TrivialConsensus => checks.push(verify_trivial_consensus(traj, tol)),
        BehaviorClass::IntervalBipartiteConsensus => checks.push(verify_interval_bipartite(traj, ls, tol)),
        BehaviorClass::BipartiteContainment => match gauge {
            Some(gauge) => checks.push(verify_containment_sb(traj, ls, gauge, tol)?),
            None => checks.push(verify_containment_sub(traj, ls, tol)),
        },
    }
    checks.push(verify_sync_errors(traj, tol));
    Ok(BehaviorVerdict::new(class, case, checks))
}
