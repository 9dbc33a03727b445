//! Dense numerical kernels: SVD-based rank, kernels and ranges, minimum-norm
//! solves, eigenvalues and the matrix exponential.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};

use crate::{Error, Result, TolerancePolicy};

pub fn ensure_finite(a: &DMatrix<f64>, what: &'static str) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// SVD with singular values sorted in decreasing order, computed by
/// one-sided Jacobi rotations.
///
/// `v` is always a full `cols x cols` orthogonal basis whose trailing columns
/// span the kernel. Only the first `rank` columns of `u` are meaningful.
struct SortedSvd {
    u: DMatrix<f64>,
    s: Vec<f64>,
    v: DMatrix<f64>,
    threshold: f64,
    rank: usize,
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// Orthogonalizes the columns of `w` in place and returns the accumulated
/// right rotations.
fn jacobi_sweeps(w: &mut DMatrix<f64>) -> DMatrix<f64> {
    let c = w.ncols();
    let mut v = DMatrix::identity(c, c);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = cs * t;
                rotate_columns(w, p, q, cs, sn);
                rotate_columns(&mut v, p, q, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }
    v
}

fn rotate_columns(a: &mut DMatrix<f64>, p: usize, q: usize, cs: f64, sn: f64) {
    for i in 0..a.nrows() {
        let (x, y) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = cs * x - sn * y;
        a[(i, q)] = sn * x + cs * y;
    }
}

impl SortedSvd {
    fn new(a: &DMatrix<f64>, tol: &TolerancePolicy) -> Self {
        let (r, c) = a.shape();
        let mut w = a.clone();
        let v_raw = jacobi_sweeps(&mut w);
        let norms: Vec<f64> = (0..c).map(|j| w.column(j).norm()).collect();
        let mut order: Vec<usize> = (0..c).collect();
        order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
        let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
        let v = DMatrix::from_fn(c, c, |i, k| v_raw[(i, order[k])]);
        let sigma_max = s.first().copied().unwrap_or(0.0);
        let threshold = tol.rank_threshold(sigma_max, r, c);
        let rank = if sigma_max == 0.0 {
            0
        } else {
            s.iter().filter(|&&x| x > threshold).count()
        };
        let k = c.min(r);
        let mut u = DMatrix::zeros(r, k);
        for (col, &j) in order.iter().take(k).enumerate() {
            if norms[j] > 0.0 {
                u.set_column(col, &(w.column(j) / norms[j]));
            }
        }
        Self {
            u,
            s,
            v,
            threshold,
            rank,
        }
    }
}

/// Number of singular values above `rtol * sigma_max * max(rows, cols)`.
pub fn numerical_rank(a: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<usize> {
    ensure_finite(a, "rank input")?;
    if a.is_empty() {
        return Ok(0);
    }
    Ok(SortedSvd::new(a, tol).rank)
}

/// The rank threshold that [`numerical_rank`] would use for `a`.
pub fn rank_threshold(a: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<f64> {
    ensure_finite(a, "rank input")?;
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(SortedSvd::new(a, tol).threshold)
}

/// Orthonormal basis of the numerical kernel, one column per dimension.
pub fn null_space(a: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<DMatrix<f64>> {
    ensure_finite(a, "null-space input")?;
    let c = a.ncols();
    if a.nrows() == 0 || c == 0 {
        return Ok(DMatrix::identity(c, c));
    }
    let svd = SortedSvd::new(a, tol);
    Ok(svd.v.columns(svd.rank, c - svd.rank).into_owned())
}

/// Orthonormal basis of the numerical column space.
pub fn range_basis(a: &DMatrix<f64>, tol: &TolerancePolicy) -> Result<DMatrix<f64>> {
    ensure_finite(a, "range input")?;
    if a.is_empty() {
        return Ok(DMatrix::zeros(a.nrows(), 0));
    }
    let svd = SortedSvd::new(a, tol);
    Ok(svd.u.columns(0, svd.rank).into_owned())
}

/// The `k` dominant left singular vectors of `a`.
pub fn dominant_left_vectors(a: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    if k == 0 || a.is_empty() {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = SortedSvd::new(a, &TolerancePolicy::default());
    svd.u.columns(0, k.min(svd.u.ncols())).into_owned()
}

/// Minimum-norm least-squares solution of `a x = b` (pseudo-inverse with the
/// rank cutoff of `tol`).
pub fn min_norm_solve(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    tol: &TolerancePolicy,
) -> Result<DMatrix<f64>> {
    ensure_finite(a, "solve matrix")?;
    ensure_finite(b, "solve right-hand side")?;
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            what: "right-hand side rows",
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    if a.is_empty() {
        return Ok(DMatrix::zeros(a.ncols(), b.ncols()));
    }
    let svd = SortedSvd::new(a, tol);
    let r = svd.rank;
    let u = svd.u.columns(0, r);
    let v = svd.v.columns(0, r);
    let mut coeffs = u.transpose() * b;
    for i in 0..r {
        let inv = 1.0 / svd.s[i];
        coeffs.row_mut(i).scale_mut(inv);
    }
    Ok(v * coeffs)
}

// Deflation thresholds tried in turn. A threshold of one ulp stalls on
// defective eigenvalues, whose subdiagonal entries level off just above it.
const SCHUR_EPS: [f64; 3] = [64.0 * f64::EPSILON, 1e-12, 1e-10];

/// Schur decomposition with a bounded iteration count, loosening the
/// deflation threshold when the QR iteration does not converge.
pub fn schur<T>(a: &DMatrix<T>) -> Result<nalgebra::Schur<T, nalgebra::Dyn>>
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    let max_iter = 100 * a.nrows().max(10);
    SCHUR_EPS
        .iter()
        .find_map(|&eps| a.clone().try_schur(eps, max_iter))
        .ok_or(Error::Singular("Schur iteration"))
}

/// Eigenvalues of a general square matrix (unordered).
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    ensure_finite(a, "eigenvalue input")?;
    if a.is_empty() {
        return Ok(Vec::new());
    }
    Ok(schur(a)?.complex_eigenvalues().iter().copied().collect())
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn symmetric_extreme_eigenvalues(a: &DMatrix<f64>) -> Result<(f64, f64)> {
    ensure_finite(a, "symmetric eigenvalue input")?;
    if a.is_empty() {
        return Ok((0.0, 0.0));
    }
    let ev = a.clone().symmetric_eigenvalues();
    Ok((ev.min(), ev.max()))
}

pub fn modulus(z: &Complex<f64>) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(modulus).fold(0.0, f64::max))
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring around a degree-13 Padé
/// approximant.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    ensure_finite(a, "exponential input")?;
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            what: "square matrix",
            expected: n,
            found: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > THETA13 {
        libm::ceil(libm::log2(norm1 / THETA13)) as i32
    } else {
        0
    };
    let scaled = a * libm::pow(2.0, -(squarings as f64));
    let b = &PADE13;
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &id * b[1];
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &id * b[0];
    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or(Error::Singular("Padé denominator"))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    ensure_finite(&r, "exponential result")?;
    Ok(r)
}

pub fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}
