//! Zero-eigenvalue structure of the signed edge Laplacian and the structural
//! predictions it is checked against.
//!
//! The zero eigenvalue of `Le` has Jordan blocks of size one or two. The
//! computation therefore needs only `ker(Le)` and `ker(Le^2)`:
//! `gamma = dim ker(Le)`, `xi = dim ker(Le^2)`, chain heads span
//! `ker(Le) ∩ range(Le)`, and chain tails solve `Le * tail = head`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::graph::{
    is_structurally_balanced, regime, LeaderStructure, Regime, SignedDigraph,
};
use crate::incidence::IncidenceSet;
use crate::linalg::{modulus, 
    dominant_left_vectors, eigenvalues, ensure_finite, min_norm_solve, null_space,
    numerical_rank, rank_threshold,
};
use crate::{Error, Result, TolerancePolicy};

/// Which structural case fixed the predicted multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplicityCase {
    /// Balanced graph with a directed spanning tree.
    SbSingleLeader,
    /// Balanced, several root nodes, no balanced SCC leaders.
    SbMultiRoots,
    /// Balanced, no root node, several balanced SCC leaders.
    SbMultiSccs,
    /// Balanced, at least one root node and one balanced SCC leader.
    SbMultiMixed,
    /// Unbalanced with a spanning tree rooted at a single node.
    SubSingleRoot,
    /// Unbalanced with a spanning tree rooted at a balanced SCC.
    SubSingleSbScc,
    /// Unbalanced with a spanning tree rooted at an unbalanced SCC.
    SubSingleSubScc,
    /// Unbalanced, several leader groups, none of them a balanced SCC.
    SubMultiNoSbScc,
    /// Unbalanced, several leader groups, at least one balanced SCC.
    SubMultiWithSbScc,
}

impl MultiplicityCase {
    pub fn label(self) -> &'static str {
        match self {
            MultiplicityCase::SbSingleLeader => "sb-single-leader",
            MultiplicityCase::SbMultiRoots => "sb-multi-roots",
            MultiplicityCase::SbMultiSccs => "sb-multi-sccs",
            MultiplicityCase::SbMultiMixed => "sb-multi-roots-and-sccs",
            MultiplicityCase::SubSingleRoot => "sub-single-root",
            MultiplicityCase::SubSingleSbScc => "sub-single-sb-scc",
            MultiplicityCase::SubSingleSubScc => "sub-single-sub-scc",
            MultiplicityCase::SubMultiNoSbScc => "sub-multi-without-sb-scc",
            MultiplicityCase::SubMultiWithSbScc => "sub-multi-with-sb-scc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityPrediction {
    pub gamma: usize,
    pub xi: usize,
    pub case: MultiplicityCase,
}

/// Predicted geometric (`gamma`) and algebraic (`xi`) multiplicity of the
/// zero eigenvalue of `Le` for a graph with `n` nodes and `m` edges.
pub fn predict_multiplicities(
    ls: &LeaderStructure,
    sb: bool,
    spanning_tree: bool,
    n: usize,
    m: usize,
) -> Result<MultiplicityPrediction> {
    use MultiplicityCase::*;
    if !spanning_tree && ls.group_count() <= 1 {
        return Err(Error::AssumptionViolated);
    }
    let base = m as i64 - n as i64;
    let (l1, l2sb) = (ls.l1 as i64, ls.l2_sb as i64);
    let (gamma, xi, case) = if spanning_tree {
        let kind = &ls.groups[0].kind;
        use crate::graph::GroupKind::*;
        match (sb, kind) {
            (true, _) => (base + 1, base + 1, SbSingleLeader),
            (false, Root) => (base + 1, base + 1, SubSingleRoot),
            (false, SccSb) => (base, base + 1, SubSingleSbScc),
            (false, SccSub) => (base, base, SubSingleSubScc),
        }
    } else if sb {
        match (l1, l2sb) {
            (_, 0) => (base + l1, base + l1, SbMultiRoots),
            (0, _) => (base + 1, base + l2sb, SbMultiSccs),
            _ => (base + l1, base + l1 + l2sb, SbMultiMixed),
        }
    } else if l2sb == 0 {
        (base + l1, base + l1, SubMultiNoSbScc)
    } else {
        (base + l1, base + l1 + l2sb, SubMultiWithSbScc)
    };
    if gamma < 0 || xi < gamma {
        return Err(Error::AssumptionViolated);
    }
    Ok(MultiplicityPrediction {
        gamma: gamma as usize,
        xi: xi as usize,
        case,
    })
}

/// Predicted ranks of `EsIn`, `Es`, `Ls` and `Le`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankSet {
    pub es_in: usize,
    pub es: usize,
    pub ls: usize,
    pub le: usize,
}

pub fn predict_ranks(ls: &LeaderStructure, sb: bool, n: usize) -> RankSet {
    let le = if sb && ls.l1 == 0 { n - 1 } else { n - ls.l1 };
    RankSet {
        es_in: n - ls.l1,
        es: if sb { n - 1 } else { n },
        ls: n - ls.l1 - ls.l2_sb,
        le,
    }
}

/// One Jordan block of the zero eigenvalue with its biorthogonal left
/// partner(s).
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroPair {
    /// 1x1 block: `Le vr = 0`, `vl^T Le = 0`.
    Simple { vr: DVector<f64>, vl: DVector<f64> },
    /// 2x2 block: `Le vr_head = 0`, `Le vr_tail = vr_head`,
    /// `vl_head^T Le = vl_tail^T`, `vl_tail^T Le = 0`.
    Chain {
        vr_head: DVector<f64>,
        vr_tail: DVector<f64>,
        vl_head: DVector<f64>,
        vl_tail: DVector<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ZeroResiduals {
    /// max `||Le vr||` over simple and head right vectors.
    pub right_kernel: f64,
    /// max `||Le vr_tail - vr_head||`.
    pub right_chain: f64,
    /// max `||vl^T Le||` over simple and tail left vectors.
    pub left_kernel: f64,
    /// max `||vl_head^T Le - vl_tail^T||`.
    pub left_chain: f64,
    /// `||Vl^T Vr - I||_F`.
    pub biorthogonality: f64,
    /// `||Pi0^2 - Pi0||_F`.
    pub idempotency: f64,
    /// `||(Pi0 Le)^2||_F`.
    pub nilpotency: f64,
    /// `||Lambda Le Es^T||_F`.
    pub limit_on_range: f64,
}

impl ZeroResiduals {
    pub fn max(&self) -> f64 {
        [
            self.right_kernel,
            self.right_chain,
            self.left_kernel,
            self.left_chain,
            self.biorthogonality,
            self.idempotency,
            self.nilpotency,
            self.limit_on_range,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroEigenstructure {
    pub gamma: usize,
    pub xi: usize,
    /// Chains first, then simple pairs.
    pub pairs: Vec<ZeroPair>,
    /// Right vectors as columns, in pairing order (head, tail, head, tail,
    /// ..., simple, ...).
    pub vr: DMatrix<f64>,
    /// Left vectors as columns, `vl^T vr = I`.
    pub vl: DMatrix<f64>,
    /// Spectral projector onto the generalized zero eigenspace.
    pub pi0: DMatrix<f64>,
    /// Limit operator: simple pairs plus head-right/head-left products.
    pub lambda: DMatrix<f64>,
    pub residuals: ZeroResiduals,
}

impl ZeroEigenstructure {
    pub fn edge_count(&self) -> usize {
        self.pi0.nrows()
    }

    pub fn chain_count(&self) -> usize {
        self.xi - self.gamma
    }

    pub fn simple_count(&self) -> usize {
        2 * self.gamma - self.xi
    }
}

/// Computes the zero eigenvalue structure of `le`. `es` (`n x m`) is used to
/// check that the limit operator annihilates `Le * range(Es^T)`.
pub fn zero_eigenstructure(
    le: &DMatrix<f64>,
    es: &DMatrix<f64>,
    tol: &TolerancePolicy,
) -> Result<ZeroEigenstructure> {
    ensure_finite(le, "edge Laplacian")?;
    ensure_finite(es, "incidence matrix")?;
    let m = le.nrows();
    if le.ncols() != m {
        return Err(Error::DimensionMismatch {
            what: "edge Laplacian columns",
            expected: m,
            found: le.ncols(),
        });
    }
    if es.ncols() != m {
        return Err(Error::DimensionMismatch {
            what: "incidence columns",
            expected: m,
            found: es.ncols(),
        });
    }
    if m == 0 {
        let z = DMatrix::zeros(0, 0);
        return Ok(ZeroEigenstructure {
            gamma: 0,
            xi: 0,
            pairs: Vec::new(),
            vr: z.clone(),
            vl: z.clone(),
            pi0: z.clone(),
            lambda: z,
            residuals: ZeroResiduals::default(),
        });
    }

    let le2 = le * le;
    let rank1 = numerical_rank(le, tol)?;
    let rank2 = numerical_rank(&le2, tol)?;
    let rank3 = numerical_rank(&(&le2 * le), tol)?;
    if rank3 != rank2 {
        return Err(Error::NilpotencyIndex {
            rank_sq: rank2,
            rank_cube: rank3,
        });
    }
    let gamma = m - rank1;
    let xi = m - rank2;

    if xi < m {
        let threshold = 10.0 * rank_threshold(le, tol)?;
        let mut mags: Vec<f64> = eigenvalues(le)?.iter().map(modulus).collect();
        mags.sort_by(f64::total_cmp);
        let gap = mags[xi];
        if gap <= threshold {
            return Err(Error::SpectralGap { gap, threshold });
        }
    }

    let chains = xi - gamma;
    let simples = 2 * gamma - xi;

    let gen_kernel = null_space(&le2, tol)?;
    let heads = dominant_left_vectors(&(le * &gen_kernel), chains);
    let tails = min_norm_solve(le, &heads, tol)?;
    let kernel = null_space(le, tol)?;
    let outside_heads = &kernel - &heads * (heads.transpose() * &kernel);
    let simple = dominant_left_vectors(&outside_heads, simples);

    let mut vr = DMatrix::zeros(m, xi);
    for c in 0..chains {
        vr.set_column(2 * c, &heads.column(c));
        vr.set_column(2 * c + 1, &tails.column(c));
    }
    for s in 0..simples {
        vr.set_column(2 * chains + s, &simple.column(s));
    }

    // Any basis of the left generalized kernel, made biorthogonal to `vr`.
    // The Jordan relations on the left then hold automatically.
    let left_kernel = null_space(&le2.transpose(), tol)?;
    let gram = vr.transpose() * &left_kernel;
    let gram_inv = gram
        .try_inverse()
        .ok_or(Error::Singular("left/right zero eigenvector pairing"))?;
    let vl = &left_kernel * gram_inv;

    let mut pairs = Vec::with_capacity(chains + simples);
    let mut lambda = DMatrix::zeros(m, m);
    for c in 0..chains {
        let (h, t) = (vr.column(2 * c).into_owned(), vr.column(2 * c + 1).into_owned());
        let (lh, lt) = (vl.column(2 * c).into_owned(), vl.column(2 * c + 1).into_owned());
        lambda += &h * lh.transpose();
        pairs.push(ZeroPair::Chain {
            vr_head: h,
            vr_tail: t,
            vl_head: lh,
            vl_tail: lt,
        });
    }
    for s in 0..simples {
        let k = 2 * chains + s;
        let (r, l) = (vr.column(k).into_owned(), vl.column(k).into_owned());
        lambda += &r * l.transpose();
        pairs.push(ZeroPair::Simple { vr: r, vl: l });
    }
    let pi0 = &vr * vl.transpose();

    let residuals = residuals(le, es, &pairs, &vr, &vl, &pi0, &lambda);
    Ok(ZeroEigenstructure {
        gamma,
        xi,
        pairs,
        vr,
        vl,
        pi0,
        lambda,
        residuals,
    })
}

fn residuals(
    le: &DMatrix<f64>,
    es: &DMatrix<f64>,
    pairs: &[ZeroPair],
    vr: &DMatrix<f64>,
    vl: &DMatrix<f64>,
    pi0: &DMatrix<f64>,
    lambda: &DMatrix<f64>,
) -> ZeroResiduals {
    let mut r = ZeroResiduals::default();
    let le_t = le.transpose();
    for pair in pairs {
        match pair {
            ZeroPair::Simple { vr, vl } => {
                r.right_kernel = r.right_kernel.max((le * vr).norm());
                r.left_kernel = r.left_kernel.max((&le_t * vl).norm());
            }
            ZeroPair::Chain {
                vr_head,
                vr_tail,
                vl_head,
                vl_tail,
            } => {
                r.right_kernel = r.right_kernel.max((le * vr_head).norm());
                r.right_chain = r.right_chain.max((le * vr_tail - vr_head).norm());
                r.left_kernel = r.left_kernel.max((&le_t * vl_tail).norm());
                r.left_chain = r.left_chain.max((&le_t * vl_head - vl_tail).norm());
            }
        }
    }
    let xi = vr.ncols();
    r.biorthogonality = (vl.transpose() * vr - DMatrix::<f64>::identity(xi, xi)).norm();
    r.idempotency = (pi0 * pi0 - pi0).norm();
    let pl = pi0 * le;
    r.nilpotency = (&pl * &pl).norm();
    r.limit_on_range = (lambda * le * es.transpose()).norm();
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullSpaceRelation {
    Equal,
    NotEqual,
}

/// Compares `ker(Le^T)` with `ker(Es)` through their orthogonal projectors.
/// Returns the verdict and the Frobenius distance between the projectors.
pub fn null_space_relation(
    le: &DMatrix<f64>,
    es: &DMatrix<f64>,
    tol: &TolerancePolicy,
) -> Result<(NullSpaceRelation, f64)> {
    let a = null_space(&le.transpose(), tol)?;
    let b = null_space(es, tol)?;
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            what: "edge count",
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let dist = (&a * a.transpose() - &b * b.transpose()).norm();
    let verdict = if dist <= tol.eig_zero {
        NullSpaceRelation::Equal
    } else {
        NullSpaceRelation::NotEqual
    };
    Ok((verdict, dist))
}

/// Structural prediction: equal unless the graph has a root node, except for
/// balanced graphs with a spanning tree, where the two kernels always agree.
pub fn predict_null_space_relation(ls: &LeaderStructure, sb: bool, regime: Regime) -> NullSpaceRelation {
    let equal = match regime {
        Regime::SpanningTree => sb || ls.l1 == 0,
        Regime::MultiLeader => ls.l1 == 0,
    };
    if equal {
        NullSpaceRelation::Equal
    } else {
        NullSpaceRelation::NotEqual
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankMatch {
    pub es_in: bool,
    pub es: bool,
    pub ls: bool,
    pub le: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullSpaceVerdict {
    pub computed: NullSpaceRelation,
    pub predicted: NullSpaceRelation,
    pub projector_distance: f64,
}

/// Computed versus predicted ranks and multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub sb: bool,
    pub regime: Regime,
    pub ranks: RankSet,
    pub predicted_ranks: RankSet,
    pub rank_match: RankMatch,
    pub gamma: usize,
    pub xi: usize,
    pub predicted: MultiplicityPrediction,
    pub gamma_match: bool,
    pub xi_match: bool,
    pub null_space: NullSpaceVerdict,
    pub tolerance: TolerancePolicy,
}

impl SpectralReport {
    /// All rank and multiplicity predictions hold.
    pub fn predictions_match(&self) -> bool {
        let r = self.rank_match;
        r.es_in && r.es && r.ls && r.le && self.gamma_match && self.xi_match
    }

    pub fn null_space_match(&self) -> bool {
        self.null_space.computed == self.null_space.predicted
    }
}

pub fn rank_report(
    g: &SignedDigraph,
    ls: &LeaderStructure,
    inc: &IncidenceSet,
    tol: &TolerancePolicy,
) -> Result<SpectralReport> {
    let regime = regime(g, ls)?;
    let sb = is_structurally_balanced(g, None).is_some();
    let (n, m) = (g.node_count(), g.edge_count());
    let f = inc.to_f64();
    let ranks = RankSet {
        es_in: numerical_rank(&f.es_in, tol)?,
        es: numerical_rank(&f.es, tol)?,
        ls: numerical_rank(&f.ls, tol)?,
        le: numerical_rank(&f.le, tol)?,
    };
    let rank_le2 = numerical_rank(&(&f.le * &f.le), tol)?;
    let predicted_ranks = predict_ranks(ls, sb, n);
    let predicted = predict_multiplicities(ls, sb, regime == Regime::SpanningTree, n, m)?;
    let (gamma, xi) = (m - ranks.le, m - rank_le2);
    let (computed, projector_distance) = null_space_relation(&f.le, &f.es, tol)?;
    Ok(SpectralReport {
        sb,
        regime,
        ranks,
        predicted_ranks,
        rank_match: RankMatch {
            es_in: ranks.es_in == predicted_ranks.es_in,
            es: ranks.es == predicted_ranks.es,
            ls: ranks.ls == predicted_ranks.ls,
            le: ranks.le == predicted_ranks.le,
        },
        gamma,
        xi,
        predicted,
        gamma_match: gamma == predicted.gamma,
        xi_match: xi == predicted.xi,
        null_space: NullSpaceVerdict {
            computed,
            predicted: predict_null_space_relation(ls, sb, regime),
            projector_distance,
        },
        tolerance: *tol,
    })
}
