//! Node, edge and synchronization-error trajectories.
//!
//! The node system `x' = -k1 Ls x` is integrated with fixed-step RK4. Edge
//! states `e = Es^T x`, edge averages `em = Pi0 e` and synchronization errors
//! `ebar = e - em` are derived from it. The edge system `e' = -k1 Le e` is
//! integrated separately from `Es^T x0` as a cross-check only.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::incidence::IncidenceSetF64;
use crate::linalg::{expm, inf_norm, spectral_radius};
use crate::lyapunov::{evaluate_v, evaluate_vdot, LyapunovCertificate};
use crate::spectral::ZeroEigenstructure;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub k1: f64,
    pub x0: Vec<f64>,
    pub t_final: f64,
    pub dt: f64,
    /// Keep every `record_every`-th step (t = 0 and t_final are always kept).
    pub record_every: usize,
}

impl SimulationConfig {
    pub const DEFAULT_K1: f64 = 4.0;
    pub const DEFAULT_T_FINAL: f64 = 10.0;
    pub const DEFAULT_DT: f64 = 1e-3;
    pub const DEFAULT_RECORD_EVERY: usize = 10;

    pub fn new(x0: Vec<f64>) -> Self {
        Self {
            k1: Self::DEFAULT_K1,
            x0,
            t_final: Self::DEFAULT_T_FINAL,
            dt: Self::DEFAULT_DT,
            record_every: Self::DEFAULT_RECORD_EVERY,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.x0.len() != n {
            return Err(Error::DimensionMismatch {
                what: "initial state",
                expected: n,
                found: self.x0.len(),
            });
        }
        if self.x0.iter().any(|v| !v.is_finite()) {
            return bad("initial state must be finite".into());
        }
        if !(self.k1 > 0.0 && self.k1.is_finite()) {
            return bad(format!("k1 = {} must be positive", self.k1));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_final >= self.dt && self.t_final.is_finite()) {
            return bad(format!("t_final = {} must be at least dt", self.t_final));
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        Ok(())
    }

    fn grid(&self) -> StepGrid {
        StepGrid {
            t_final: self.t_final,
            dt: self.dt,
            record_every: self.record_every,
        }
    }
}

/// Time grid of a fixed-step integration. The step is adjusted to
/// `t_final / round(t_final / dt)` so the last step lands on `t_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepGrid {
    pub t_final: f64,
    pub dt: f64,
    pub record_every: usize,
}

impl StepGrid {
    pub fn steps(&self) -> usize {
        (libm::round(self.t_final / self.dt) as usize).max(1)
    }

    pub fn step(&self) -> f64 {
        self.t_final / self.steps() as f64
    }
}

/// `-k1 Ls x`.
pub fn node_field(ls: &DMatrix<f64>, k1: f64, x: &DVector<f64>) -> Result<DVector<f64>> {
    if ls.ncols() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "node state",
            expected: ls.ncols(),
            found: x.len(),
        });
    }
    Ok(ls * x * -k1)
}

/// `-k1 Le e`.
pub fn edge_field(le: &DMatrix<f64>, k1: f64, e: &DVector<f64>) -> Result<DVector<f64>> {
    if le.ncols() != e.len() {
        return Err(Error::DimensionMismatch {
            what: "edge state",
            expected: le.ncols(),
            found: e.len(),
        });
    }
    Ok(le * e * -k1)
}

fn check_edge_dim(e: &DVector<f64>, zes: &ZeroEigenstructure) -> Result<()> {
    if e.len() != zes.edge_count() {
        return Err(Error::DimensionMismatch {
            what: "edge state",
            expected: zes.edge_count(),
            found: e.len(),
        });
    }
    Ok(())
}

/// Weighted edge average `Pi0 e`.
pub fn edge_average(e: &DVector<f64>, zes: &ZeroEigenstructure) -> Result<DVector<f64>> {
    check_edge_dim(e, zes)?;
    Ok(&zes.pi0 * e)
}

/// Synchronization error `e - Pi0 e`.
pub fn sync_error(e: &DVector<f64>, zes: &ZeroEigenstructure) -> Result<DVector<f64>> {
    Ok(e - edge_average(e, zes)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
}

/// Classical fixed-step RK4 for an autonomous field.
pub fn integrate<F>(mut field: F, y0: &DVector<f64>, grid: &StepGrid) -> Result<RawTrajectory>
where
    F: FnMut(&DVector<f64>) -> DVector<f64>,
{
    if grid.record_every == 0 || !(grid.dt > 0.0 && grid.dt.is_finite()) || !(grid.t_final > 0.0 && grid.t_final.is_finite()) {
        return Err(Error::InvalidConfig(format!("bad integration grid {grid:?}")));
    }
    let steps = grid.steps();
    let h = grid.step();
    let mut y = y0.clone();
    let mut times = alloc::vec![0.0];
    let mut states = alloc::vec![y.clone()];
    for i in 1..=steps {
        let k1 = field(&y);
        let k2 = field(&(&y + &k1 * (0.5 * h)));
        let k3 = field(&(&y + &k2 * (0.5 * h)));
        let k4 = field(&(&y + &k3 * h));
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let t = i as f64 * h;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { time: t });
        }
        if i % grid.record_every == 0 || i == steps {
            times.push(t);
            states.push(y.clone());
        }
    }
    Ok(RawTrajectory { times, states })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub ebar_final_norm: f64,
    pub e_final: DVector<f64>,
    pub predicted_e_limit: DVector<f64>,
    /// `||e(t_final) - predicted_e_limit||_inf`.
    pub limit_error: f64,
    /// max over recorded times of the gap between derived and co-integrated
    /// edge states.
    pub edge_ode_agreement: f64,
    /// max over recorded times of `||em(t) - em(0)||_inf`.
    pub edge_average_drift: f64,
    /// `2 / (k1 rho(Le))`, infinite when `Le` is nilpotent.
    pub stability_bound: f64,
    pub warnings: Vec<String>,
}

/// Recorded simulation; matrices have one row per recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub k1: f64,
    pub times: Vec<f64>,
    pub x: DMatrix<f64>,
    pub e: DMatrix<f64>,
    pub ebar: DMatrix<f64>,
    pub em: DMatrix<f64>,
    pub v: Option<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

pub fn simulate(
    inc: &IncidenceSetF64,
    zes: &ZeroEigenstructure,
    cfg: &SimulationConfig,
    cert: Option<&LyapunovCertificate>,
) -> Result<Trajectory> {
    let n = inc.ls.nrows();
    let m = inc.le.nrows();
    cfg.validate(n)?;
    if zes.edge_count() != m {
        return Err(Error::DimensionMismatch {
            what: "zero eigenstructure",
            expected: m,
            found: zes.edge_count(),
        });
    }
    if let Some(c) = cert {
        if c.p.nrows() != m {
            return Err(Error::DimensionMismatch {
                what: "certificate",
                expected: m,
                found: c.p.nrows(),
            });
        }
    }
    let mut warnings = Vec::new();
    let rho = spectral_radius(&inc.le)?;
    let stability_bound = if rho > 0.0 { 2.0 / (cfg.k1 * rho) } else { f64::INFINITY };
    if cfg.dt > stability_bound {
        warnings.push(format!(
            "dt = {} exceeds the stability bound 2/(k1 rho(Le)) = {stability_bound}",
            cfg.dt
        ));
    }

    let grid = cfg.grid();
    let x0 = DVector::from_column_slice(&cfg.x0);
    let k1 = cfg.k1;
    let nodes = integrate(|x| &inc.ls * x * -k1, &x0, &grid)?;
    let es_t = inc.es.transpose();
    let e0 = &es_t * &x0;
    let edges = integrate(|e| &inc.le * e * -k1, &e0, &grid)?;

    let rows = nodes.times.len();
    let mut x = DMatrix::zeros(rows, n);
    let mut e = DMatrix::zeros(rows, m);
    let mut em = DMatrix::zeros(rows, m);
    let mut ebar = DMatrix::zeros(rows, m);
    let mut v = cert.map(|_| Vec::with_capacity(rows));
    let mut edge_ode_agreement = 0.0f64;
    let mut edge_average_drift = 0.0f64;
    let mut em0 = DVector::zeros(m);
    for (r, xr) in nodes.states.iter().enumerate() {
        let er = &es_t * xr;
        let emr = &zes.pi0 * &er;
        let ebr = &er - &emr;
        if r == 0 {
            em0 = emr.clone();
        }
        edge_ode_agreement = edge_ode_agreement.max(inf_norm(&(&er - &edges.states[r])));
        edge_average_drift = edge_average_drift.max(inf_norm(&(&emr - &em0)));
        if let (Some(v), Some(c)) = (v.as_mut(), cert) {
            v.push(evaluate_v(&c.p, &ebr)?);
        }
        x.set_row(r, &xr.transpose());
        e.set_row(r, &er.transpose());
        em.set_row(r, &emr.transpose());
        ebar.set_row(r, &ebr.transpose());
    }

    let e_final: DVector<f64> = e.row(rows - 1).transpose();
    let predicted_e_limit = &zes.lambda * &e0;
    let limit_error = inf_norm(&(&e_final - &predicted_e_limit));
    let ebar_final_norm = inf_norm(&ebar.row(rows - 1).transpose());
    Ok(Trajectory {
        k1,
        times: nodes.times,
        x,
        e,
        ebar,
        em,
        v,
        diagnostics: Diagnostics {
            ebar_final_norm,
            e_final,
            predicted_e_limit,
            limit_error,
            edge_ode_agreement,
            edge_average_drift,
            stability_bound,
            warnings,
        },
    })
}

/// `Lambda Es^T x0`, the limit of the edge states.
pub fn predict_edge_limit(
    zes: &ZeroEigenstructure,
    es: &DMatrix<f64>,
    x0: &DVector<f64>,
) -> Result<DVector<f64>> {
    if es.nrows() != x0.len() || es.ncols() != zes.edge_count() {
        return Err(Error::DimensionMismatch {
            what: "initial state",
            expected: es.nrows(),
            found: x0.len(),
        });
    }
    Ok(&zes.lambda * (es.transpose() * x0))
}

/// `exp(-k1 Le T) e0` through the dense matrix exponential.
pub fn expm_edge_oracle(le: &DMatrix<f64>, k1: f64, t: f64, e0: &DVector<f64>) -> Result<DVector<f64>> {
    if le.ncols() != e0.len() {
        return Err(Error::DimensionMismatch {
            what: "edge state",
            expected: le.ncols(),
            found: e0.len(),
        });
    }
    let out = expm(&(le * (-k1 * t)))? * e0;
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("exponential oracle result"));
    }
    Ok(out)
}

impl Trajectory {
    pub fn rows(&self) -> usize {
        self.times.len()
    }

    pub fn t_final(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn final_x(&self) -> DVector<f64> {
        self.x.row(self.rows() - 1).transpose()
    }

    pub fn final_e(&self) -> DVector<f64> {
        self.e.row(self.rows() - 1).transpose()
    }

    pub fn final_ebar(&self) -> DVector<f64> {
        self.ebar.row(self.rows() - 1).transpose()
    }

    pub fn ebar_at(&self, r: usize) -> DVector<f64> {
        self.ebar.row(r).transpose()
    }

    /// Largest increase of `V` between consecutive recorded samples, or
    /// zero when `V` is nonincreasing. `None` without a certificate.
    pub fn v_max_increase(&self) -> Option<f64> {
        let v = self.v.as_ref()?;
        Some(
            v.windows(2)
                .map(|w| w[1] - w[0])
                .fold(0.0, f64::max),
        )
    }

    /// Largest `|dV/dt_fd - Vdot| / (1 + |Vdot|)` over interior samples,
    /// where `dV/dt_fd` is the sixth-order central difference of the
    /// recorded `V` and `Vdot = -k1 ebar^T Q ebar / 2`.
    ///
    /// Needs a certificate and at least seven samples. The recorded spacing
    /// must be fine enough for the stencil to resolve the fastest mode.
    pub fn vdot_mismatch(&self, q: &DMatrix<f64>) -> Result<f64> {
        const W: [f64; 7] = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
        let v = self
            .v
            .as_ref()
            .ok_or(Error::InvalidConfig("trajectory has no Lyapunov values".into()))?;
        if v.len() < 7 {
            return Err(Error::InvalidConfig("need at least 7 samples".into()));
        }
        let h = self.times[1] - self.times[0];
        let mut worst = 0.0f64;
        for r in 3..v.len() - 3 {
            let fd: f64 = (0..7).map(|k| W[k] * v[r + k - 3]).sum::<f64>() / (60.0 * h);
            let exact = evaluate_vdot(q, self.k1, &self.ebar_at(r))?;
            worst = worst.max((fd - exact).abs() / (1.0 + exact.abs()));
        }
        Ok(worst)
    }

    /// Least-squares slope of `ln ||ebar(t)||_2` over the samples with
    /// `t >= 1` and `||ebar|| >= 1e-9` (from `t = 0` if fewer than three
    /// such samples). `None` when fewer than three samples qualify.
    pub fn decay_slope(&self) -> Option<f64> {
        const FLOOR: f64 = 1e-9;
        let norms: Vec<f64> = (0..self.rows()).map(|r| self.ebar.row(r).norm()).collect();
        let cutoff = norms.iter().position(|&v| v < FLOOR).unwrap_or(norms.len());
        let pick = |t_min: f64| -> Vec<(f64, f64)> {
            (0..cutoff)
                .filter(|&r| self.times[r] >= t_min && norms[r] > 0.0)
                .map(|r| (self.times[r], libm::log(norms[r])))
                .collect()
        };
        let mut pts = pick(1.0);
        if pts.len() < 3 {
            pts = pick(0.0);
        }
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let (mt, my) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), &(t, y)| (a + t / n, b + y / n));
        let (sty, stt) = pts.iter().fold((0.0, 0.0), |(a, b), &(t, y)| {
            (a + (t - mt) * (y - my), b + (t - mt) * (t - mt))
        });
        Some(sty / stt)
    }
}
