//! Generalized symmetric eigensolving, harmonic dimensions and the mirror
//! verification harness.

use std::time::Instant;

use nalgebra as na;
use serde::{Deserialize, Serialize};

use crate::error::{dim_check, Error, Result};
use crate::geometry::{parameterize, CurveParams};
use crate::lie_core::{DualFunctional, LieAlgebraData, LieVector, DEFAULT_Q_MAX};
use crate::spencer_assembly::{
    adjoint, metric_weights, Bidegree, ConnectionData, Discretization, LaplacianMode, MetricKind,
    OperatorMatrix,
};

/// Residual bound for each eigenpair, relative to `‖A‖_∞`.
pub const SOLVER_RESIDUAL_TOL: f64 = 1e-8;
/// Default zero-eigenvalue threshold, relative to `max(1, μ_max)`.
pub const HARMONIC_TOL: f64 = 1e-8;
/// Asymmetry allowed in the stiffness side of a pencil before it is rejected.
const SYMMETRY_TOL: f64 = 1e-10;

/// The seven constraint vectors of the reference sweep.
pub const PAPER_LAMBDAS: [[f64; 3]; 7] = [
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [1.0, 1.0, 0.0],
    [0.5, 0.5, 0.5],
    [2.0, 0.0, 0.0],
    [0.1, 0.1, 0.1],
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub residual_max: f64,
    pub matrix_dims: [usize; 2],
}

impl SpectrumResult {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }
}

fn inf_norm(m: &na::DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// All eigenvalues of the pencil `A v = μ M v` for symmetric `A` and SPD `M`.
///
/// Reduces to a standard symmetric problem through the Cholesky factor of `M`
/// and checks every eigenpair's residual afterwards.
pub fn generalized_eigs(a: &na::DMatrix<f64>, m: &na::DMatrix<f64>) -> Result<SpectrumResult> {
    if !a.is_square() || !m.is_square() {
        return Err(Error::Input("pencil matrices must be square".into()));
    }
    dim_check("pencil", a.nrows(), m.nrows())?;
    let n = a.nrows();
    let scale = a.amax().max(1.0);
    let asym = (a - a.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Input(format!("stiffness matrix is not symmetric (residual {asym:e})")));
    }
    if n == 0 {
        return Ok(SpectrumResult {
            eigenvalues: vec![],
            residual_max: 0.0,
            matrix_dims: [0, 0],
        });
    }
    let a_sym = (a + a.transpose()) * 0.5;
    let diagonal = (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == 0.0));
    let (eig, vectors) = if diagonal {
        // M = S², reduced matrix S⁻¹ A S⁻¹ and eigenvectors S⁻¹ V
        let mut inv_sqrt = na::DVector::zeros(n);
        for i in 0..n {
            let d = m[(i, i)];
            if !(d > 0.0) {
                return Err(Error::Numeric("mass matrix is not positive definite".into()));
            }
            inv_sqrt[i] = d.sqrt().recip();
        }
        let mut reduced = a_sym.clone();
        for j in 0..n {
            for i in 0..n {
                reduced[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
            }
        }
        let eig = symmetric_eigen(reduced)?;
        let mut vectors = eig.eigenvectors.clone();
        for (i, mut row) in vectors.row_iter_mut().enumerate() {
            row *= inv_sqrt[i];
        }
        (eig, vectors)
    } else {
        let chol = m
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Numeric("mass matrix is not positive definite".into()))?;
        let l = chol.l();
        let half = l
            .solve_lower_triangular(&a_sym)
            .ok_or_else(|| Error::Numeric("singular Cholesky factor".into()))?;
        let reduced = l
            .solve_lower_triangular(&half.transpose())
            .ok_or_else(|| Error::Numeric("singular Cholesky factor".into()))?;
        let eig = symmetric_eigen((&reduced + reduced.transpose()) * 0.5)?;
        let vectors = l
            .transpose()
            .solve_upper_triangular(&eig.eigenvectors)
            .ok_or_else(|| Error::Numeric("singular Cholesky factor".into()))?;
        (eig, vectors)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    let av = &a_sym * &vectors;
    let mv = if diagonal {
        let mut mv = vectors.clone();
        for (i, mut row) in mv.row_iter_mut().enumerate() {
            row *= m[(i, i)];
        }
        mv
    } else {
        m * &vectors
    };
    let a_norm = inf_norm(&a_sym).max(f64::MIN_POSITIVE);
    let mut residual_max = 0.0_f64;
    for j in 0..n {
        let v_norm = vectors.column(j).norm();
        let r = (av.column(j) - mv.column(j) * eig.eigenvalues[j]).norm();
        residual_max = residual_max.max(r / (a_norm * v_norm));
    }
    if residual_max > SOLVER_RESIDUAL_TOL {
        return Err(Error::Numeric(format!(
            "eigenpair residual {residual_max:e} exceeds {SOLVER_RESIDUAL_TOL:e}"
        )));
    }
    Ok(SpectrumResult {
        eigenvalues,
        residual_max,
        matrix_dims: [n, n],
    })
}

fn symmetric_eigen(m: na::DMatrix<f64>) -> Result<na::SymmetricEigen<f64, na::Dyn>> {
    na::SymmetricEigen::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))
}

/// Spectrum of a metric-self-adjoint operator `Δ`, via the pencil `(MΔ, M)`.
pub fn operator_spectrum(op: &OperatorMatrix, mass: &OperatorMatrix) -> Result<SpectrumResult> {
    dim_check("operator spectrum", op.rows(), mass.rows())?;
    let stiffness = match mass.diagonal() {
        Some(d) => {
            let mut s = op.entries.clone();
            for (i, mut row) in s.row_iter_mut().enumerate() {
                row *= d[i];
            }
            s
        }
        None => &mass.entries * &op.entries,
    };
    generalized_eigs(&stiffness, &mass.entries)
}

/// Number of eigenvalues with `|μ| < tol · max(1, μ_max)`.
pub fn harmonic_dim(spec: &SpectrumResult, tol: f64) -> usize {
    let threshold = tol * spec.max().abs().max(1.0);
    spec.eigenvalues.iter().filter(|mu| mu.abs() < threshold).count()
}

fn numerical_rank(m: &na::DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * top).count()
}

/// One mirror verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirrorConfig {
    pub id: String,
    pub curve: CurveParams,
    pub lambda: [f64; 3],
    pub mode: LaplacianMode,
    pub metric: MetricKind,
    pub q_max: usize,
    pub tol: f64,
}

impl MirrorConfig {
    pub fn new(id: impl Into<String>, lambda: [f64; 3], mode: LaplacianMode) -> Self {
        Self {
            id: id.into(),
            curve: CurveParams::default(),
            lambda,
            mode,
            metric: MetricKind::ConstraintStrength,
            q_max: DEFAULT_Q_MAX,
            tol: HARMONIC_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.curve.validate()?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Input(format!("tol must be positive (got {})", self.tol)));
        }
        if self.q_max < 2 {
            return Err(Error::Input(format!("q_max must be at least 2 (got {})", self.q_max)));
        }
        DualFunctional::new(self.lambda.to_vec())?;
        Ok(())
    }

    pub fn dual(&self) -> DualFunctional {
        DualFunctional {
            coeffs: self.lambda.to_vec(),
        }
    }

    pub fn discretization(&self) -> Result<Discretization> {
        let mesh = parameterize(&self.curve)?;
        Ok(Discretization::new(mesh, LieAlgebraData::su2_epsilon(), self.q_max))
    }
}

/// The reference sweep: the seven paper vectors in one mode.
pub fn paper_configs(mode: LaplacianMode) -> Vec<MirrorConfig> {
    let tag = match mode {
        LaplacianMode::Faithful => "faithful",
        LaplacianMode::Simplified => "simplified",
    };
    PAPER_LAMBDAS
        .iter()
        .map(|l| MirrorConfig::new(format!("{tag}:({},{},{})", l[0], l[1], l[2]), *l, mode))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub eig_min_plus: f64,
    pub eig_min_minus: f64,
    pub residual_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirrorReport {
    pub config_id: String,
    pub lambda: [f64; 3],
    pub lambda_norm: f64,
    pub mode: LaplacianMode,
    pub metric: MetricKind,
    pub degrees: Vec<DegreeComparison>,
    pub cochain_defect: f64,
    /// `⟨λ, [𝔤, 𝔤]⟩ ≠ 0`, the checkable half of the general-position hypothesis.
    pub general_position: bool,
    pub passed: bool,
}

impl MirrorReport {
    /// Smallest eigenvalue over all degrees at `+λ`.
    pub fn eig_min(&self) -> f64 {
        self.degrees.iter().map(|d| d.eig_min_plus).fold(f64::INFINITY, f64::min)
    }
}

/// `⟨λ, [e_a, e_b]⟩ ≠ 0` for some basis pair.
pub fn pairs_nontrivially_with_brackets(alg: &LieAlgebraData, lambda: &DualFunctional) -> bool {
    let n = alg.dim();
    (0..n).any(|a| {
        (0..n).any(|b| {
            alg.bracket(&LieVector::basis(n, a), &LieVector::basis(n, b))
                .and_then(|v| lambda.pair(&v))
                .is_ok_and(|v| v != 0.0)
        })
    })
}

/// Laplacian `Δ^k` and its mass for one sign of `λ`.
pub fn assembled_system(
    disc: &Discretization,
    config: &MirrorConfig,
    lambda: &DualFunctional,
    k: usize,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let conn = ConnectionData::flat(disc.cells());
    let weights = metric_weights(config.metric, lambda, &conn, &disc.mesh)?;
    let lap = disc.laplacian(k, config.mode, lambda, &weights)?;
    let mass = disc.mass(&weights, k)?;
    Ok((lap, mass))
}

fn verify_mirror_inner(config: &MirrorConfig) -> Result<MirrorReport> {
    config.validate()?;
    let disc = config.discretization()?;
    let plus = config.dual();
    let minus = if fault_injected() {
        DualFunctional::zero(plus.coeffs.len())
    } else {
        plus.mirror()
    };
    let mut degrees = Vec::with_capacity(2);
    for k in 0..2 {
        let (lap_p, mass_p) = assembled_system(&disc, config, &plus, k)?;
        let spec_p = operator_spectrum(&lap_p, &mass_p)?;
        let (lap_m, mass_m) = assembled_system(&disc, config, &minus, k)?;
        let spec_m = operator_spectrum(&lap_m, &mass_m)?;
        degrees.push(DegreeComparison {
            degree: k,
            dim_plus: harmonic_dim(&spec_p, config.tol),
            dim_minus: harmonic_dim(&spec_m, config.tol),
            eig_min_plus: spec_p.min(),
            eig_min_minus: spec_m.min(),
            residual_max: spec_p.residual_max.max(spec_m.residual_max),
        });
    }
    let passed = degrees.iter().all(|d| d.dim_plus == d.dim_minus);
    Ok(MirrorReport {
        config_id: config.id.clone(),
        lambda: config.lambda,
        lambda_norm: plus.norm(),
        mode: config.mode,
        metric: config.metric,
        degrees,
        cochain_defect: disc.cochain_defect(&plus)?,
        general_position: pairs_nontrivially_with_brackets(&disc.algebra, &plus),
        passed,
    })
}

/// Test builds can drop the `δ` block of the `−λ` system through an environment switch.
fn fault_injected() -> bool {
    cfg!(feature = "fault-injection") && std::env::var_os("SPENCER_MIRROR_INJECT_FAULT").is_some()
}

/// Assembles and solves degrees 0 and 1 at `λ` and `−λ` and compares harmonic dimensions.
pub fn verify_mirror(config: &MirrorConfig) -> Result<MirrorReport> {
    verify_mirror_inner(config).map_err(|e| e.context(format!("config {}", config.id)))
}

/// Permutation realizing the pullback under `t ↦ −t`: node `i ↦ −i`,
/// edge `e ↦ −e − 1` (orientation reversal is absorbed into the permutation,
/// so `d` picks up a sign while `δ` blocks are untouched).
pub fn reflection_matrix(layout: &crate::spencer_assembly::SpaceLayout) -> na::DMatrix<f64> {
    let n = layout.cells;
    let mut p = na::DMatrix::zeros(layout.total(), layout.total());
    for b in &layout.blocks {
        let off = layout.offset(*b).expect("own block");
        let fiber = layout.fiber(*b);
        for c in 0..n {
            let image = if b.p == 0 { (n - c) % n } else { (2 * n - c - 1) % n };
            for a in 0..fiber {
                p[(off + image * fiber + a, off + c * fiber + a)] = 1.0;
            }
        }
    }
    p
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionCheck {
    pub degree: usize,
    /// Harmonic dimension of the reflected `λ` system.
    pub dim_reflected: usize,
    /// Harmonic dimension of the `−λ` system.
    pub dim_minus: usize,
    /// `max |P Δ_λ Pᵀ − Δ_{−λ}|` relative to `max(1, |Δ_{−λ}|)`.
    pub operator_deviation: f64,
}

/// Reflection oracle for faithful mode: conjugating `Δ_λ` by the `t ↦ −t`
/// pullback must reproduce `Δ_{−λ}`, and their kernels must have equal size.
pub fn reflection_check(config: &MirrorConfig, k: usize) -> Result<ReflectionCheck> {
    let disc = config.discretization()?;
    let plus = config.dual();
    let (lap_p, mass_p) = assembled_system(&disc, config, &plus, k)?;
    let (lap_m, mass_m) = assembled_system(&disc, config, &plus.mirror(), k)?;
    let p = reflection_matrix(&lap_p.domain);
    let reflected = OperatorMatrix {
        domain: lap_p.domain.clone(),
        codomain: lap_p.codomain.clone(),
        entries: &p * &lap_p.entries * p.transpose(),
    };
    let reflected_mass = OperatorMatrix {
        entries: &p * &mass_p.entries * p.transpose(),
        ..mass_p
    };
    let spec_r = operator_spectrum(&reflected, &reflected_mass)?;
    let spec_m = operator_spectrum(&lap_m, &mass_m)?;
    Ok(ReflectionCheck {
        degree: k,
        dim_reflected: harmonic_dim(&spec_r, config.tol),
        dim_minus: harmonic_dim(&spec_m, config.tol),
        operator_deviation: reflected.max_abs_diff(&lap_m) / lap_m.max_abs().max(1.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeRankCheck {
    pub kernel_dims: [usize; 2],
    /// `dim S⁰ − rank D⁰` and `dim S¹ − rank [D⁰*; D¹]`.
    pub predicted_dims: [usize; 2],
    pub rank_d0: usize,
    pub rank_d1: usize,
    pub space_dims: [usize; 2],
}

/// Faithful-mode kernel dimensions versus SVD ranks of the differentials.
pub fn hodge_rank_check(config: &MirrorConfig) -> Result<HodgeRankCheck> {
    let disc = config.discretization()?;
    let lambda = config.dual();
    let weights = metric_weights(config.metric, &lambda, &ConnectionData::flat(disc.cells()), &disc.mesh)?;
    let d0 = disc.differential(&lambda, 0)?;
    let d1 = disc.differential(&lambda, 1)?;
    let m0 = disc.mass(&weights, 0)?;
    let m1 = disc.mass(&weights, 1)?;
    let d0_star = adjoint(&d0, &m0, &m1)?;
    let mut kernel_dims = [0; 2];
    for (k, dim) in kernel_dims.iter_mut().enumerate() {
        let lap = disc.laplacian(k, LaplacianMode::Faithful, &lambda, &weights)?;
        let mass = disc.mass(&weights, k)?;
        *dim = harmonic_dim(&operator_spectrum(&lap, &mass)?, config.tol);
    }
    let stacked = {
        let (r0, r1, c) = (d0_star.rows(), d1.rows(), d1.cols());
        let mut s = na::DMatrix::zeros(r0 + r1, c);
        s.view_mut((0, 0), (r0, c)).copy_from(&d0_star.entries);
        s.view_mut((r0, 0), (r1, c)).copy_from(&d1.entries);
        s
    };
    let rank_d0 = numerical_rank(&d0.entries, config.tol);
    let rank_d1 = numerical_rank(&d1.entries, config.tol);
    let rank_stacked = numerical_rank(&stacked, config.tol);
    let space_dims = [d0.cols(), d1.cols()];
    Ok(HodgeRankCheck {
        kernel_dims,
        predicted_dims: [space_dims[0] - rank_d0, space_dims[1] - rank_stacked],
        rank_d0,
        rank_d1,
        space_dims,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub config_id: String,
    pub report: Option<MirrorReport>,
    pub error: Option<String>,
    pub error_kind: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub comparisons: usize,
    pub comparisons_passed: usize,
    pub failures: usize,
    /// `(config_id, ‖λ‖, eig_min)` sorted by `‖λ‖`.
    pub eig_min_by_norm: Vec<(String, f64, f64)>,
    /// `eig_min` is strictly increasing across distinct norms (and equal on ties).
    pub monotone: bool,
    /// `eig_min` of the largest-norm row minus that of the smallest-norm row.
    pub eig_min_spread: Option<f64>,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

impl SweepTable {
    pub fn all_passed(&self) -> bool {
        self.summary.failures == 0 && self.summary.comparisons == self.summary.comparisons_passed
    }

    pub fn reports(&self) -> impl Iterator<Item = &MirrorReport> {
        self.rows.iter().filter_map(|r| r.report.as_ref())
    }
}

/// Relative tolerance for treating two norms or two minimum eigenvalues as tied.
const TIE_TOL: f64 = 1e-9;

fn monotone_in_norm(points: &[(String, f64, f64)]) -> bool {
    points.windows(2).all(|w| {
        let (n0, e0) = (w[0].1, w[0].2);
        let (n1, e1) = (w[1].1, w[1].2);
        let scale = e0.abs().max(e1.abs()).max(1.0);
        if (n1 - n0).abs() <= TIE_TOL * n0.max(1.0) {
            (e1 - e0).abs() <= TIE_TOL * scale
        } else {
            e1 > e0 + TIE_TOL * scale
        }
    })
}

/// Runs every config; per-row failures are recorded and the sweep continues.
pub fn sweep(configs: &[MirrorConfig]) -> SweepTable {
    let start = Instant::now();
    let rows: Vec<SweepRow> = configs
        .iter()
        .map(|c| match verify_mirror(c) {
            Ok(report) => SweepRow {
                config_id: c.id.clone(),
                report: Some(report),
                error: None,
                error_kind: None,
            },
            Err(e) => SweepRow {
                config_id: c.id.clone(),
                report: None,
                error: Some(e.to_string()),
                error_kind: Some(e.kind().to_string()),
            },
        })
        .collect();
    let mut points: Vec<(String, f64, f64)> = rows
        .iter()
        .filter_map(|r| r.report.as_ref())
        .map(|r| (r.config_id.clone(), r.lambda_norm, r.eig_min()))
        .collect();
    points.sort_by(|a, b| a.1.total_cmp(&b.1));
    let comparisons = rows.iter().filter_map(|r| r.report.as_ref()).map(|r| r.degrees.len()).sum();
    let comparisons_passed = rows
        .iter()
        .filter_map(|r| r.report.as_ref())
        .flat_map(|r| r.degrees.iter())
        .filter(|d| d.dim_plus == d.dim_minus)
        .count();
    let failures = rows
        .iter()
        .filter(|r| r.report.as_ref().is_none_or(|rep| !rep.passed))
        .count();
    let eig_min_spread = match (points.first(), points.last()) {
        (Some(lo), Some(hi)) if points.len() > 1 => Some(hi.2 - lo.2),
        _ => None,
    };
    SweepTable {
        summary: SweepSummary {
            rows: rows.len(),
            comparisons,
            comparisons_passed,
            failures,
            monotone: monotone_in_norm(&points),
            eig_min_by_norm: points,
            eig_min_spread,
            elapsed_ms: start.elapsed().as_millis(),
        },
        rows,
    }
}

/// Bidegree labels of a layout, e.g. `["(1,0)", "(0,1)"]`.
pub fn layout_labels(blocks: &[Bidegree]) -> Vec<String> {
    blocks.iter().map(|b| format!("({},{})", b.p, b.q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pencil() {
        let m = na::DMatrix::from_diagonal(&na::DVector::from_vec(vec![2.0, 3.0, 5.0]));
        let s = generalized_eigs(&m, &m).unwrap();
        for mu in &s.eigenvalues {
            assert!((mu - 1.0).abs() < 1e-14);
        }
        let a = na::DMatrix::from_diagonal(&na::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let s = generalized_eigs(&a, &na::DMatrix::identity(3, 3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.matrix_dims, [3, 3]);
    }

    #[test]
    fn pencil_errors() {
        let a = na::DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let i = na::DMatrix::identity(2, 2);
        assert!(matches!(generalized_eigs(&a, &i), Err(Error::Input(_))));
        let neg = na::DMatrix::from_diagonal(&na::DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(generalized_eigs(&i, &neg), Err(Error::Numeric(_))));
        assert!(generalized_eigs(&i, &na::DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn harmonic_counts() {
        let s = SpectrumResult {
            eigenvalues: vec![1e-12, 2e-9, 0.5, 10.0],
            residual_max: 0.0,
            matrix_dims: [4, 4],
        };
        assert_eq!(harmonic_dim(&s, 1e-8), 2);
        let s = SpectrumResult {
            eigenvalues: vec![0.1, 0.5],
            residual_max: 0.0,
            matrix_dims: [2, 2],
        };
        assert_eq!(harmonic_dim(&s, 1e-8), 0);
    }

    #[test]
    fn monotonicity_rule() {
        let p = |n: f64, e: f64| ("x".to_string(), n, e);
        assert!(monotone_in_norm(&[p(0.1, 1.0), p(1.0, 2.0), p(1.0, 2.0), p(2.0, 5.0)]));
        assert!(!monotone_in_norm(&[p(0.1, 1.0), p(1.0, 1.0)]));
        assert!(!monotone_in_norm(&[p(1.0, 1.0), p(1.0, 1.5)]));
        assert!(monotone_in_norm(&[]));
    }

    #[test]
    fn empty_sweep() {
        let t = sweep(&[]);
        assert!(t.rows.is_empty());
        assert!(t.all_passed());
        assert_eq!(t.summary.eig_min_spread, None);
    }

    #[test]
    fn zero_lambda_is_self_mirror() {
        let mut c = MirrorConfig::new("zero", [0.0; 3], LaplacianMode::Faithful);
        c.curve.nodes = 24;
        let r = verify_mirror(&c).unwrap();
        assert!(r.passed);
        assert_eq!(r.degrees[0].dim_plus, 1);
        assert!(!r.general_position);
        assert_eq!(r.cochain_defect, 0.0);
    }

    #[test]
    fn sweep_records_failures_and_continues() {
        let mut bad = MirrorConfig::new("bad", [1.0, 0.0, 0.0], LaplacianMode::Simplified);
        bad.curve.nodes = 2;
        let mut good = MirrorConfig::new("good", [1.0, 0.0, 0.0], LaplacianMode::Simplified);
        good.curve.nodes = 16;
        let t = sweep(&[bad, good]);
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows[0].error.as_deref().unwrap().contains("config bad"));
        assert!(t.rows[1].report.as_ref().unwrap().passed);
        assert_eq!(t.summary.failures, 1);
        assert!(!t.all_passed());
    }

    #[test]
    fn reflection_is_a_permutation() {
        let c = MirrorConfig::new("r", [0.0, 0.0, 1.0], LaplacianMode::Faithful);
        let disc = Discretization::new(
            parameterize(&CurveParams { nodes: 6, ..Default::default() }).unwrap(),
            LieAlgebraData::su2_epsilon(),
            c.q_max,
        );
        let p = reflection_matrix(&disc.layout(1));
        let pp = &p * p.transpose();
        assert_eq!(pp, na::DMatrix::identity(24, 24));
    }
}
