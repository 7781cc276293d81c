//! Lovász theta number by a dense primal-dual interior-point method, with
//! independently re-checkable certificates on both sides.
//!
//! Primal: maximise `<J, X>` subject to `tr X = 1`, `X_ij = 0` on edges,
//! `X` positive semidefinite. Any symmetric `B` with unit diagonal and unit
//! entries on non-edges gives `theta <= lambda_max(B)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("theta is undefined on the empty vertex set")]
    EmptyGraph,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("certificate has wrong shape: {0}")]
    BadCertificate(String),
    #[error("solver configuration must be positive: {0}")]
    BadConfig(&'static str),
}

/// Dense real symmetric matrix; symmetry is enforced on construction by
/// averaging with the transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, ThetaError> {
        if m.nrows() != m.ncols() {
            return Err(ThetaError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(ThetaError::NonFinite);
        }
        let t = m.transpose();
        Ok(SymMatrix((m + t) * 0.5))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self, ThetaError> {
        SymMatrix::new(DMatrix::from_fn(n, n, f))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Stop once `upper - lower <= target_gap * upper`.
    pub target_gap: f64,
    pub eps_psd: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            target_gap: 1e-5,
            eps_psd: 1e-8,
            max_iterations: 200,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), ThetaError> {
        if !(self.target_gap > 0.0) {
            return Err(ThetaError::BadConfig("target_gap"));
        }
        if !(self.eps_psd > 0.0) {
            return Err(ThetaError::BadConfig("eps_psd"));
        }
        if self.max_iterations == 0 {
            return Err(ThetaError::BadConfig("max_iterations"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    /// Closed form, no iterations.
    Exact,
    Converged,
    /// Iteration limit or numerical breakdown; the interval is still valid.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifiedValue {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

impl CertifiedValue {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lower - slack <= x && x <= self.upper + slack
    }
}

/// Feasible points behind a [`CertifiedValue`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaCertificate {
    /// Row-major `n x n` primal matrix: zero on edges, positive semidefinite.
    pub primal: Vec<f64>,
    /// Entries of the dual matrix `B` on the edges, in [`Graph::edges`] order.
    pub edge_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSolution {
    pub value: CertifiedValue,
    pub certificate: ThetaCertificate,
}

/// Extreme eigenvalue with a computable error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBound {
    /// Rayleigh quotient of `eigenvector`; never exceeds the true maximum.
    pub value: f64,
    pub eigenvector: DVector<f64>,
    /// `||M v - value v||` for the unit eigenvector.
    pub residual: f64,
    /// Certified upper bound on `lambda_max`.
    pub upper: f64,
}

struct Spectrum {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
    /// Bound on the distance of each true eigenvalue from the computed set.
    error: f64,
}

fn spectrum(m: &DMatrix<f64>) -> Spectrum {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let values = eig.eigenvalues;
    let vectors = eig.eigenvectors;
    let resid = m * &vectors - &vectors * DMatrix::from_diagonal(&values);
    let ortho = vectors.transpose() * &vectors - DMatrix::identity(n, n);
    let scale = values.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    // M - V L V^T splits into the residual and a non-orthogonality term
    let error = resid.norm() * (1.0 + ortho.norm()) + scale * ortho.norm() + f64::EPSILON * scale * n as f64;
    Spectrum {
        values,
        vectors,
        error,
    }
}

fn gershgorin_upper(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| {
            let off: f64 = (0..m.ncols()).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
            m[(i, i)] + off
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest eigenvalue of a symmetric matrix, certified from above by a
/// full residual bound capped with Gershgorin's estimate.
pub fn max_eigenvalue(m: &SymMatrix) -> EigenBound {
    let a = m.as_matrix();
    let n = a.nrows();
    if n == 0 {
        return EigenBound {
            value: f64::NEG_INFINITY,
            eigenvector: DVector::zeros(0),
            residual: 0.0,
            upper: f64::NEG_INFINITY,
        };
    }
    let s = spectrum(a);
    let top = s.values.imax();
    let v = s.vectors.column(top).normalize();
    let av = a * &v;
    let value = v.dot(&av);
    let residual = (av - &v * value).norm();
    let upper = (s.values[top] + s.error).min(gershgorin_upper(a)).max(value);
    EigenBound {
        value,
        eigenvector: v,
        residual,
        upper,
    }
}

/// Certified lower bound on the smallest eigenvalue.
pub fn min_eigenvalue_lower(m: &SymMatrix) -> f64 {
    let s = spectrum(m.as_matrix());
    s.values.min() - s.error
}

/// Re-checks a dual certificate: builds `B` and returns its certified
/// `lambda_max`, an upper bound on theta.
pub fn dual_bound(g: &Graph, edge_weights: &[f64]) -> Result<f64, ThetaError> {
    let edges = g.edges();
    if edge_weights.len() != edges.len() {
        return Err(ThetaError::BadCertificate(format!(
            "{} edge weights for {} edges",
            edge_weights.len(),
            edges.len()
        )));
    }
    let n = g.n();
    let mut b = DMatrix::from_element(n, n, 1.0);
    for (&(u, v), &w) in edges.iter().zip(edge_weights) {
        b[(u, v)] = w;
        b[(v, u)] = w;
    }
    Ok(max_eigenvalue(&SymMatrix::new(b)?).upper)
}

/// Re-checks a primal certificate and returns the lower bound it proves.
/// Edge entries must be exactly zero; any remaining indefiniteness is
/// removed by a diagonal shift before the value is taken.
pub fn primal_bound(g: &Graph, primal: &[f64]) -> Result<f64, ThetaError> {
    let n = g.n();
    if primal.len() != n * n {
        return Err(ThetaError::BadCertificate(format!(
            "primal has {} entries, expected {}",
            primal.len(),
            n * n
        )));
    }
    let x = DMatrix::from_row_slice(n, n, primal);
    for (u, v) in g.edges() {
        if x[(u, v)] != 0.0 || x[(v, u)] != 0.0 {
            return Err(ThetaError::BadCertificate(format!(
                "primal entry on edge ({u},{v}) is nonzero"
            )));
        }
    }
    let x = SymMatrix::new(x)?;
    let shift = (-min_eigenvalue_lower(&x)).max(0.0);
    let m = x.as_matrix();
    let total = m.sum() + n as f64 * shift;
    let trace = m.trace() + n as f64 * shift;
    if !(trace > 0.0) {
        return Err(ThetaError::BadCertificate("primal trace is not positive".into()));
    }
    Ok(total / trace)
}

/// Equality-constraint operator: trace plus one constraint per edge.
struct ThetaSdp {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ThetaSdp {
    fn m(&self) -> usize {
        1 + self.edges.len()
    }

    fn b(&self) -> DVector<f64> {
        let mut b = DVector::zeros(self.m());
        b[0] = 1.0;
        b
    }

    /// `A(W)_k = tr(A_k W)`; `W` need not be symmetric.
    fn apply(&self, w: &DMatrix<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.m());
        out[0] = w.trace();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            out[k + 1] = w[(a, b)] + w[(b, a)];
        }
        out
    }

    fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::from_diagonal_element(self.n, self.n, y[0]);
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            out[(a, b)] += y[k + 1];
            out[(b, a)] += y[k + 1];
        }
        out
    }

    /// `M_kl = tr(A_k X A_l Z^{-1})` for symmetric `X`, `Z^{-1}`.
    fn schur(&self, x: &DMatrix<f64>, zi: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.m();
        let mut s = DMatrix::zeros(m, m);
        s[(0, 0)] = x.component_mul(zi).sum();
        let p = zi * x;
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            let v = p[(a, b)] + p[(b, a)];
            s[(0, k + 1)] = v;
            s[(k + 1, 0)] = v;
        }
        for (l, &(c, d)) in self.edges.iter().enumerate() {
            for (k, &(a, b)) in self.edges.iter().enumerate().skip(l) {
                let v = x[(b, c)] * zi[(d, a)]
                    + x[(b, d)] * zi[(c, a)]
                    + x[(a, c)] * zi[(d, b)]
                    + x[(a, d)] * zi[(c, b)];
                s[(k + 1, l + 1)] = v;
                s[(l + 1, k + 1)] = v;
            }
        }
        s
    }
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Largest step in (0, 1] keeping `base + alpha * dir` positive definite,
/// damped by `fraction`.
fn step_length(base: &DMatrix<f64>, dir: &DMatrix<f64>, fraction: f64) -> Option<f64> {
    let chol = base.clone().cholesky()?;
    let l = chol.l();
    let t = l.solve_lower_triangular(dir)?;
    let s = l.solve_lower_triangular(&t.transpose())?;
    let lmin = SymmetricEigen::new(sym(s)).eigenvalues.min();
    Some(if lmin >= 0.0 {
        1.0
    } else {
        (fraction * (-1.0 / lmin)).min(1.0)
    })
}

struct Iterate {
    x: DMatrix<f64>,
    y: DVector<f64>,
    z: DMatrix<f64>,
}

struct Certified {
    lower: f64,
    upper: f64,
    primal: Vec<f64>,
    edge_weights: Vec<f64>,
}

impl ThetaSdp {
    fn primal_certificate(&self, g: &Graph, x: &DMatrix<f64>) -> Option<(f64, Vec<f64>)> {
        let n = self.n;
        let mut p = sym(x.clone());
        for &(a, b) in &self.edges {
            p[(a, b)] = 0.0;
            p[(b, a)] = 0.0;
        }
        let lmin = min_eigenvalue_lower(&SymMatrix(p.clone()));
        if lmin < 0.0 {
            for i in 0..n {
                p[(i, i)] -= lmin;
            }
        }
        let tr = p.trace();
        if !(tr > 0.0) {
            return None;
        }
        p /= tr;
        let flat: Vec<f64> = p.transpose().iter().copied().collect();
        let value = primal_bound(g, &flat).ok()?;
        Some((value, flat))
    }

    fn dual_certificate(&self, g: &Graph, y: &DVector<f64>) -> Option<(f64, Vec<f64>)> {
        let weights: Vec<f64> = (0..self.edges.len()).map(|k| 1.0 - y[k + 1]).collect();
        let value = dual_bound(g, &weights).ok()?;
        Some((value, weights))
    }

    fn solve(&self, g: &Graph, cfg: &SolverConfig) -> (Certified, usize, SolveStatus) {
        let n = self.n;
        let nf = n as f64;
        let j = DMatrix::from_element(n, n, 1.0);
        let b = self.b();
        let mut it = Iterate {
            x: DMatrix::identity(n, n) / nf,
            y: {
                let mut y = DVector::zeros(self.m());
                y[0] = nf + 1.0;
                y
            },
            z: DMatrix::identity(n, n) * (nf + 1.0) - &j,
        };
        let mut best = Certified {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            primal: Vec::new(),
            edge_weights: Vec::new(),
        };
        let mut status = SolveStatus::Stalled;
        let mut iterations = 0;
        loop {
            if let Some((lo, p)) = self.primal_certificate(g, &it.x) {
                if lo > best.lower {
                    best.lower = lo;
                    best.primal = p;
                }
            }
            if let Some((up, w)) = self.dual_certificate(g, &it.y) {
                if up < best.upper {
                    best.upper = up;
                    best.edge_weights = w;
                }
            }
            if best.upper - best.lower <= cfg.target_gap * best.upper.abs() {
                status = SolveStatus::Converged;
                break;
            }
            if iterations == cfg.max_iterations || self.newton_step(&mut it, &j, &b).is_none() {
                break;
            }
            iterations += 1;
        }
        (best, iterations, status)
    }

    /// One Mehrotra predictor-corrector step with the HKM direction.
    fn newton_step(&self, it: &mut Iterate, c: &DMatrix<f64>, b: &DVector<f64>) -> Option<()> {
        let nf = self.n as f64;
        let zi = it.z.clone().cholesky()?.inverse();
        let zi = sym(zi);
        let mu = it.x.component_mul(&it.z).sum() / nf;
        if !(mu > 0.0) {
            return None;
        }
        let rd = c - self.adjoint(&it.y) + &it.z;
        let schur = self.schur(&it.x, &zi);
        let chol = schur.cholesky()?;
        let x_rd_zi = self.apply(&(&it.x * &rd * &zi));

        let direction = |rhs: DVector<f64>, extra: Option<&DMatrix<f64>>, sigma_mu: f64| {
            let dy = chol.solve(&rhs);
            let dz = self.adjoint(&dy) - &rd;
            let mut dx = &zi * sigma_mu - &it.x - sym(&it.x * &dz * &zi);
            if let Some(e) = extra {
                dx -= sym(e * &zi);
            }
            (dx, dy, dz)
        };

        // predictor
        let (dxa, _, dza) = direction(&x_rd_zi - b, None, 0.0);
        let ap = step_length(&it.x, &dxa, 1.0)?;
        let ad = step_length(&it.z, &dza, 1.0)?;
        let mu_aff = (&it.x + &dxa * ap).component_mul(&(&it.z + &dza * ad)).sum() / nf;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let cross = &dxa * &dza;
        let rhs = self.apply(&zi) * (sigma * mu) + &x_rd_zi - self.apply(&(&cross * &zi)) - b;
        let (dx, dy, dz) = direction(rhs, Some(&cross), sigma * mu);
        let ap = step_length(&it.x, &dx, 0.95)?;
        let ad = step_length(&it.z, &dz, 0.95)?;
        it.x = sym(&it.x + dx * ap);
        it.y += dy * ad;
        it.z = sym(&it.z + dz * ad);
        Some(())
    }
}

/// Lovász theta of `g` with its certificates.
pub fn lovasz_theta_certified(g: &Graph, cfg: &SolverConfig) -> Result<ThetaSolution, ThetaError> {
    cfg.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(ThetaError::EmptyGraph);
    }
    if n == 1 {
        return Ok(ThetaSolution {
            value: CertifiedValue {
                lower: 1.0,
                upper: 1.0,
                iterations: 0,
                status: SolveStatus::Exact,
            },
            certificate: ThetaCertificate {
                primal: vec![1.0],
                edge_weights: Vec::new(),
            },
        });
    }
    let sdp = ThetaSdp {
        n,
        edges: g.edges(),
    };
    let (best, iterations, status) = sdp.solve(g, cfg);
    Ok(ThetaSolution {
        value: CertifiedValue {
            lower: best.lower,
            upper: best.upper,
            iterations,
            status,
        },
        certificate: ThetaCertificate {
            primal: best.primal,
            edge_weights: best.edge_weights,
        },
    })
}

pub fn lovasz_theta(g: &Graph, cfg: &SolverConfig) -> Result<CertifiedValue, ThetaError> {
    lovasz_theta_certified(g, cfg).map(|s| s.value)
}

/// Theta of the complement, an upper bound on the Shannon OR-capacity.
pub fn theta_bar(g: &Graph, cfg: &SolverConfig) -> Result<CertifiedValue, ThetaError> {
    lovasz_theta(&g.complement(), cfg)
}

pub fn theta_bar_certified(g: &Graph, cfg: &SolverConfig) -> Result<ThetaSolution, ThetaError> {
    lovasz_theta_certified(&g.complement(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn eigen_examples() {
        let id = SymMatrix::new(DMatrix::identity(5, 5)).unwrap();
        assert_abs_diff_eq!(max_eigenvalue(&id).value, 1.0, epsilon = 1e-12);
        let ones = SymMatrix::new(DMatrix::from_element(6, 6, 1.0)).unwrap();
        let e = max_eigenvalue(&ones);
        assert_abs_diff_eq!(e.value, 6.0, epsilon = 1e-12);
        assert!(e.upper >= 6.0 && e.upper - 6.0 < 1e-9 * 6.0);
        let c5 = Graph::cycle(5);
        let adj = SymMatrix::from_fn(5, |i, j| if c5.has_edge(i, j) { 1.0 } else { 0.0 }).unwrap();
        let e = max_eigenvalue(&adj);
        assert_abs_diff_eq!(e.value, 2.0, epsilon = 1e-12);
        assert!(e.residual < 1e-12);
        assert!(e.upper >= e.value);
    }

    #[test]
    fn sym_matrix_rejects_bad_input() {
        assert!(matches!(
            SymMatrix::new(DMatrix::zeros(2, 3)),
            Err(ThetaError::NotSquare { .. })
        ));
        assert_eq!(
            SymMatrix::new(DMatrix::from_element(2, 2, f64::NAN)),
            Err(ThetaError::NonFinite)
        );
        let s = SymMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0])).unwrap();
        assert_eq!(s.as_matrix()[(1, 0)], 1.0);
    }

    #[test]
    fn theta_of_c5() {
        let v = lovasz_theta(&Graph::cycle(5), &cfg()).unwrap();
        assert_eq!(v.status, SolveStatus::Converged);
        assert!(v.lower <= v.upper);
        assert!(v.contains(5f64.sqrt(), 0.0), "{v:?}");
        assert!(v.gap() <= 1e-5 * v.upper);
    }

    #[test]
    fn theta_of_empty_and_complete() {
        for n in [2, 5, 9] {
            let e = lovasz_theta(&Graph::empty(n), &cfg()).unwrap();
            assert_abs_diff_eq!(e.midpoint(), n as f64, epsilon = 1e-4 * n as f64);
            let k = lovasz_theta(&Graph::complete(n), &cfg()).unwrap();
            assert_abs_diff_eq!(k.midpoint(), 1.0, epsilon = 1e-4);
            let kb = theta_bar(&Graph::complete(n), &cfg()).unwrap();
            assert_abs_diff_eq!(kb.midpoint(), n as f64, epsilon = 1e-4 * n as f64);
        }
    }

    #[test]
    fn single_vertex_is_exact() {
        let v = lovasz_theta(&Graph::complete(1), &cfg()).unwrap();
        assert_eq!((v.lower, v.upper, v.status), (1.0, 1.0, SolveStatus::Exact));
        assert_eq!(lovasz_theta(&Graph::empty(0), &cfg()), Err(ThetaError::EmptyGraph));
    }

    #[test]
    fn certificates_recheck() {
        let g = Graph::cycle(7);
        let s = lovasz_theta_certified(&g, &cfg()).unwrap();
        let lo = primal_bound(&g, &s.certificate.primal).unwrap();
        let up = dual_bound(&g, &s.certificate.edge_weights).unwrap();
        assert!((lo - s.value.lower).abs() < 1e-12);
        assert!((up - s.value.upper).abs() < 1e-12);
        // theta(C7) = 7 cos(pi/7) / (1 + cos(pi/7))
        let c = (std::f64::consts::PI / 7.0).cos();
        assert!(s.value.contains(7.0 * c / (1.0 + c), 1e-9));
    }

    #[test]
    fn stalled_solve_still_brackets() {
        let tight = SolverConfig {
            max_iterations: 3,
            ..cfg()
        };
        let v = lovasz_theta(&Graph::cycle(5), &tight).unwrap();
        assert_eq!(v.status, SolveStatus::Stalled);
        assert!(v.contains(5f64.sqrt(), 0.0));
    }

    #[test]
    fn bad_config() {
        let c = SolverConfig {
            target_gap: 0.0,
            ..cfg()
        };
        assert_eq!(
            lovasz_theta(&Graph::cycle(5), &c),
            Err(ThetaError::BadConfig("target_gap"))
        );
    }
}
