/// The single tolerance knob passed to every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Relative cutoff for singular values when computing ranks and kernels.
    pub rank_rtol: f64,
    /// Clustering tolerance for eigenvalues treated as zero and for subspace
    /// comparisons.
    pub eig_zero: f64,
    /// Tolerance for checks on simulated trajectories.
    pub sim: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-9,
            eig_zero: 1e-8,
            sim: 1e-6,
        }
    }
}

impl TolerancePolicy {
    /// Singular-value threshold `rtol * sigma_max * max(rows, cols)`.
    pub fn rank_threshold(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        self.rank_rtol * sigma_max * rows.max(cols) as f64
    }
}
