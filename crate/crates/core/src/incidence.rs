//! Signed incidence matrices, Laplacians and gauge transformations.
//!
//! All matrices here are built and multiplied in exact integer arithmetic;
//! [`IncidenceSet::to_f64`] converts them for spectral work.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::graph::{is_structurally_balanced, Sign, SignedDigraph};
use crate::{Error, Result};

/// Column `k` describes edge `k = (tail -> head)`: `+1` at the tail row, and
/// at the head row `-1` if cooperative or `+1` if antagonistic.
pub fn build_incidence(g: &SignedDigraph) -> DMatrix<i32> {
    let mut es = DMatrix::zeros(g.node_count(), g.edge_count());
    for (k, e) in g.edges().iter().enumerate() {
        es[(e.tail, k)] = 1;
        es[(e.head, k)] = head_entry(e.sign);
    }
    es
}

/// Same as the incidence matrix with the tail entries removed.
pub fn build_in_incidence(g: &SignedDigraph) -> DMatrix<i32> {
    let mut es_in = DMatrix::zeros(g.node_count(), g.edge_count());
    for (k, e) in g.edges().iter().enumerate() {
        es_in[(e.head, k)] = head_entry(e.sign);
    }
    es_in
}

fn head_entry(sign: Sign) -> i32 {
    match sign {
        Sign::Positive => -1,
        Sign::Negative => 1,
    }
}

/// `Ls = EsIn * Es^T` and `Le = Es^T * EsIn`.
pub fn build_laplacians(
    es: &DMatrix<i32>,
    es_in: &DMatrix<i32>,
) -> Result<(DMatrix<i32>, DMatrix<i32>)> {
    if es.shape() != es_in.shape() {
        return Err(Error::DimensionMismatch {
            what: "in-incidence columns",
            expected: es.ncols(),
            found: es_in.ncols(),
        });
    }
    let ls = es_in * es.transpose();
    let le = es.transpose() * es_in;
    Ok((ls, le))
}

/// The four matrices derived from a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceSet {
    pub es: DMatrix<i32>,
    pub es_in: DMatrix<i32>,
    pub ls: DMatrix<i32>,
    pub le: DMatrix<i32>,
}

impl IncidenceSet {
    pub fn new(g: &SignedDigraph) -> Self {
        let es = build_incidence(g);
        let es_in = build_in_incidence(g);
        let (ls, le) = build_laplacians(&es, &es_in).expect("shapes agree by construction");
        Self { es, es_in, ls, le }
    }

    pub fn node_count(&self) -> usize {
        self.es.nrows()
    }

    pub fn edge_count(&self) -> usize {
        self.es.ncols()
    }

    pub fn to_f64(&self) -> IncidenceSetF64 {
        let f = |m: &DMatrix<i32>| m.map(|v| v as f64);
        IncidenceSetF64 {
            es: f(&self.es),
            es_in: f(&self.es_in),
            ls: f(&self.ls),
            le: f(&self.le),
        }
    }
}

/// Floating-point copies of an [`IncidenceSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceSetF64 {
    pub es: DMatrix<f64>,
    pub es_in: DMatrix<f64>,
    pub ls: DMatrix<f64>,
    pub le: DMatrix<f64>,
}

/// Node gauge `d` and edge gauge `de` of a structurally balanced graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugePair {
    pub d: Vec<i32>,
    pub de: Vec<i32>,
}

impl GaugePair {
    /// `D * Ls * D`; an M-matrix pattern for balanced graphs.
    pub fn transform_laplacian(&self, ls: &DMatrix<i32>) -> DMatrix<i32> {
        DMatrix::from_fn(ls.nrows(), ls.ncols(), |i, j| self.d[i] * ls[(i, j)] * self.d[j])
    }

    /// `D * Es * De`; an unsigned incidence matrix for balanced graphs.
    pub fn transform_incidence(&self, es: &DMatrix<i32>) -> DMatrix<i32> {
        DMatrix::from_fn(es.nrows(), es.ncols(), |i, k| self.d[i] * es[(i, k)] * self.de[k])
    }
}

/// The edge gauge takes the node gauge of each edge's tail.
pub fn gauge_transform(g: &SignedDigraph) -> Result<GaugePair> {
    let gauge = is_structurally_balanced(g, None).ok_or(Error::StructurallyUnbalanced)?;
    let d: Vec<i32> = gauge.as_slice().iter().map(|&x| x as i32).collect();
    let de = g.edges().iter().map(|e| d[e.tail]).collect();
    Ok(GaugePair { d, de })
}
