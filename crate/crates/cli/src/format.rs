//! Graph documents, CSV tables and number formatting.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use edgesync_core::dynamics::Trajectory;
use edgesync_core::graph::{RawEdge, SignedDigraph};
use edgesync_core::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: i64,
    pub to: i64,
    pub sign: i64,
}

/// `{"n": .., "edges": [{"from": .., "to": .., "sign": ..}, ...]}` with
/// 1-based node labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &SignedDigraph) -> Self {
        GraphDoc {
            n: g.node_count(),
            edges: g
                .to_raw()
                .into_iter()
                .map(|e| EdgeDoc {
                    from: e.from,
                    to: e.to,
                    sign: e.sign,
                })
                .collect(),
        }
    }

    pub fn raw_edges(&self) -> Vec<RawEdge> {
        self.edges
            .iter()
            .map(|e| RawEdge {
                from: e.from,
                to: e.to,
                sign: e.sign,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph documents always serialize");
        s.push('\n');
        s
    }
}

pub fn parse_graph(text: &str, path: &Path) -> Result<SignedDigraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let report = edgesync_core::graph::validate(doc.n, &doc.raw_edges());
    if !report.ok() {
        return Err(CliError::Invalid {
            path: path.to_path_buf(),
            report,
        });
    }
    Ok(SignedDigraph::from_raw(doc.n, &doc.raw_edges())?)
}

pub fn read_graph(path: &Path) -> Result<SignedDigraph> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_graph(&text, path)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 <= |x| < 1e12`.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn push_row(out: &mut String, fields: impl Iterator<Item = String>) {
    let mut first = true;
    for f in fields {
        if !first {
            out.push(',');
        }
        out.push_str(&f);
        first = false;
    }
    out.push('\n');
}

/// Row-major CSV with a header of `prefix1..prefixK`.
pub fn matrix_csv<T: Copy + Into<f64>>(a: &DMatrix<T>, prefix: &str) -> String {
    let mut out = String::new();
    push_row(&mut out, (1..=a.ncols()).map(|j| format!("{prefix}{j}")));
    for i in 0..a.nrows() {
        push_row(&mut out, (0..a.ncols()).map(|j| fmt_g(a[(i, j)].into())));
    }
    out
}

/// `t,x1..xN,e1..eM,ebar1..ebarM,em1..emM[,V]`, one row per recorded time.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let (n, m) = (traj.x.ncols(), traj.e.ncols());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    for p in ["e", "ebar", "em"] {
        header.extend((1..=m).map(|k| format!("{p}{k}")));
    }
    if traj.v.is_some() {
        header.push("V".into());
    }
    let mut out = String::with_capacity(traj.rows() * (1 + n + 3 * m) * 16);
    push_row(&mut out, header.into_iter());
    for r in 0..traj.rows() {
        let mut line = fmt_g(traj.times[r]);
        for block in [&traj.x, &traj.e, &traj.ebar, &traj.em] {
            for v in block.row(r).iter() {
                let _ = write!(line, ",{}", fmt_g(*v));
            }
        }
        if let Some(v) = &traj.v {
            let _ = write!(line, ",{}", fmt_g(v[r]));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_csv_floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Config(format!("{what}: cannot parse {t:?} as a finite number")))
        })
        .collect()
}
