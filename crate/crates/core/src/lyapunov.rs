//! Lyapunov certificates for the synchronization errors.
//!
//! The equation
//!
//! ```text
//! P Le + Le^T P = Q - sum_i alpha_i (P vr_i vl_i^T + vl_i vr_i^T P)
//! ```
//!
//! is the standard equation `P A + A^T P = Q` for the shifted operator
//! `A = Le + sum_i alpha_i vr_i vl_i^T`, whose spectrum is the nonzero
//! spectrum of `Le` together with the `alpha_i`.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};

use crate::linalg::{eigenvalues, schur, ensure_finite, symmetric_extreme_eigenvalues};
use crate::spectral::ZeroEigenstructure;
use crate::{Error, Result, TolerancePolicy};

/// How the standard Lyapunov equation is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LyapunovMethod {
    /// Complex Schur form followed by column-wise triangular solves, `O(m^3)`.
    #[default]
    Schur,
    /// Vectorized `m^2 x m^2` dense linear system, `O(m^6)`.
    Kronecker,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovCertificate {
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub alphas: Vec<f64>,
    /// Frobenius norm of the defining equation's mismatch.
    pub residual: f64,
    pub min_eig_p: f64,
    pub max_eig_p: f64,
}

impl LyapunovCertificate {
    /// Residual within `1e-8 * ||Q||_F` and `P` positive definite.
    pub fn is_certified(&self) -> bool {
        self.min_eig_p > 0.0 && self.residual <= 1e-8 * self.q.norm()
    }
}

/// `Le + sum_i alpha_i vr_i vl_i^T`.
pub fn shifted_operator(le: &DMatrix<f64>, zes: &ZeroEigenstructure, alphas: &[f64]) -> DMatrix<f64> {
    let mut a = le.clone();
    for (i, &alpha) in alphas.iter().enumerate() {
        a += alpha * zes.vr.column(i) * zes.vl.column(i).transpose();
    }
    a
}

pub fn solve_p(
    le: &DMatrix<f64>,
    zes: &ZeroEigenstructure,
    q: &DMatrix<f64>,
    alphas: &[f64],
    tol: &TolerancePolicy,
) -> Result<LyapunovCertificate> {
    solve_p_with(le, zes, q, alphas, tol, LyapunovMethod::default())
}

pub fn solve_p_with(
    le: &DMatrix<f64>,
    zes: &ZeroEigenstructure,
    q: &DMatrix<f64>,
    alphas: &[f64],
    tol: &TolerancePolicy,
    method: LyapunovMethod,
) -> Result<LyapunovCertificate> {
    ensure_finite(le, "edge Laplacian")?;
    ensure_finite(q, "Q")?;
    let m = le.nrows();
    if q.shape() != (m, m) {
        return Err(Error::DimensionMismatch {
            what: "Q",
            expected: m,
            found: q.nrows(),
        });
    }
    if zes.edge_count() != m {
        return Err(Error::DimensionMismatch {
            what: "zero eigenstructure",
            expected: m,
            found: zes.edge_count(),
        });
    }
    if alphas.len() != zes.xi {
        return Err(Error::DimensionMismatch {
            what: "alpha count",
            expected: zes.xi,
            found: alphas.len(),
        });
    }
    if let Some((index, &value)) = alphas.iter().enumerate().find(|(_, &a)| !(a > 0.0 && a.is_finite())) {
        return Err(Error::NonPositiveAlpha { index, value });
    }
    if (q - q.transpose()).norm() > 1e-12 * q.norm().max(1.0) {
        return Err(Error::NotSymmetricPositiveDefinite);
    }
    if m > 0 && symmetric_extreme_eigenvalues(q)?.0 <= 0.0 {
        return Err(Error::NotSymmetricPositiveDefinite);
    }

    let a = shifted_operator(le, zes, alphas);
    let min_real = eigenvalues(&a)?
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    if m > 0 && min_real <= tol.eig_zero {
        return Err(Error::ShiftedOperatorUnstable { min_real });
    }

    let p = match method {
        LyapunovMethod::Schur => solve_schur(&a, q)?,
        LyapunovMethod::Kronecker => solve_kronecker(&a, q)?,
    };
    let p = (&p + p.transpose()) * 0.5;
    let (min_eig_p, max_eig_p) = symmetric_extreme_eigenvalues(&p)?;
    let residual = equation_residual(le, zes, q, alphas, &p);
    Ok(LyapunovCertificate {
        p,
        q: q.clone(),
        alphas: alphas.to_vec(),
        residual,
        min_eig_p,
        max_eig_p,
    })
}

/// `||P Le + Le^T P - Q + sum_i alpha_i (P vr_i vl_i^T + vl_i vr_i^T P)||_F`,
/// evaluated term by term.
pub fn equation_residual(
    le: &DMatrix<f64>,
    zes: &ZeroEigenstructure,
    q: &DMatrix<f64>,
    alphas: &[f64],
    p: &DMatrix<f64>,
) -> f64 {
    let mut lhs = p * le + le.transpose() * p - q;
    for (i, &alpha) in alphas.iter().enumerate() {
        let vr = zes.vr.column(i);
        let vl = zes.vl.column(i);
        lhs += alpha * (p * vr * vl.transpose() + vl * vr.transpose() * p);
    }
    lhs.norm()
}

/// Solves `P A + A^T P = Q` with `A = U T U^*`: `Y = U^* P U` satisfies
/// `Y T + T^* Y = U^* Q U`, which is solved one column at a time.
fn solve_schur(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = a.nrows();
    if m == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let ac: DMatrix<Complex<f64>> = a.map(|v| Complex::new(v, 0.0));
    let (u, t) = schur(&ac)?.unpack();
    let qc: DMatrix<Complex<f64>> = q.map(|v| Complex::new(v, 0.0));
    let c = u.adjoint() * qc * &u;
    let mut y = DMatrix::<Complex<f64>>::zeros(m, m);
    for j in 0..m {
        let mut rhs: DVector<Complex<f64>> = c.column(j).into_owned();
        for k in 0..j {
            let tkj = t[(k, j)];
            rhs -= y.column(k) * tkj;
        }
        // (T^* + t_jj I) is lower triangular: forward substitution.
        let tjj = t[(j, j)];
        for i in 0..m {
            let mut s = rhs[i];
            for l in 0..i {
                s -= t[(l, i)].conj() * y[(l, j)];
            }
            let diag = t[(i, i)].conj() + tjj;
            if diag.re == 0.0 && diag.im == 0.0 {
                return Err(Error::Singular("Lyapunov diagonal"));
            }
            y[(i, j)] = s / diag;
        }
    }
    let p = &u * y * u.adjoint();
    Ok(p.map(|z| z.re))
}

/// Column-major vectorization: `vec(P A + A^T P) = (A^T ⊗ I + I ⊗ A^T) vec(P)`.
fn solve_kronecker(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = a.nrows();
    if m == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let at = a.transpose();
    let id = DMatrix::<f64>::identity(m, m);
    let k = at.kronecker(&id) + id.kronecker(&at);
    let rhs = DVector::from_column_slice(q.as_slice());
    let x = k
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("vectorized Lyapunov system"))?;
    Ok(DMatrix::from_column_slice(m, m, x.as_slice()))
}

/// `V = ebar^T P ebar / 2`.
pub fn evaluate_v(p: &DMatrix<f64>, ebar: &DVector<f64>) -> Result<f64> {
    if p.nrows() != ebar.len() || p.ncols() != ebar.len() {
        return Err(Error::DimensionMismatch {
            what: "synchronization error",
            expected: p.nrows(),
            found: ebar.len(),
        });
    }
    Ok(0.5 * ebar.dot(&(p * ebar)))
}

/// `-k1 ebar^T Q ebar / 2`, the derivative of `V` along the error dynamics.
pub fn evaluate_vdot(q: &DMatrix<f64>, k1: f64, ebar: &DVector<f64>) -> Result<f64> {
    if q.nrows() != ebar.len() || q.ncols() != ebar.len() {
        return Err(Error::DimensionMismatch {
            what: "synchronization error",
            expected: q.nrows(),
            found: ebar.len(),
        });
    }
    Ok(-0.5 * k1 * ebar.dot(&(q * ebar)))
}
