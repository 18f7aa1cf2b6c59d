//! Discretized Spencer complex on a periodic curve.
//!
//! Total degree `k` fields live in `⊕_{p+q=k} Ω^p ⊗ Sym^q` with `p ∈ {0, 1}`:
//! 0-forms are nodal values, 1-forms are edge densities. Blocks are ordered
//! by decreasing form degree, and inside a block the index is
//! `cell * sym_dim(q) + fiber`. The differential is
//! `D(ω ⊗ s) = dω ⊗ s + (−1)^p ω ⊗ δ^λ(s)` with `d` the forward difference
//! divided by edge length. Masses are lumped (diagonal).

use nalgebra as na;
use serde::{Deserialize, Serialize};

use crate::error::{dim_check, Error, Result};
use crate::geometry::MeshCircle;
use crate::lie_core::{sym_space_dim, DualFunctional, LieAlgebraData, SpencerExtension};

/// Agreement required between `D(−λ) − D(λ)` and the closed form of `R`.
pub const DIFFERENCE_TOL: f64 = 1e-13;
/// Agreement required between `Δ(−λ) − Δ(λ)` and the six-term expansion of `K`.
pub const PERTURBATION_TOL: f64 = 1e-10;
/// Relative residual allowed for metric self-adjointness checks.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    /// Form degree.
    pub p: usize,
    /// Symmetric-power degree.
    pub q: usize,
}

impl Bidegree {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    #[serde(alias = "constraint")]
    ConstraintStrength,
    #[serde(alias = "curvature")]
    CurvatureGeometric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianMode {
    /// `D D* + D* D` assembled from the Spencer differentials.
    Faithful,
    /// Graph Laplacian on each fiber component plus `‖λ‖² I`.
    Simplified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricWeights {
    pub kind: MetricKind,
    /// One multiplier per node.
    pub values: Vec<f64>,
}

impl MetricWeights {
    /// Weight attached to edge `e`: the mean of its endpoint weights.
    pub fn edge(&self, e: usize) -> f64 {
        let n = self.values.len();
        0.5 * (self.values[e] + self.values[(e + 1) % n])
    }
}

/// Pointwise curvature data of the connection; only `‖Ω‖²` is consumed.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionData {
    pub curvature_norm_sq: Vec<f64>,
}

impl ConnectionData {
    pub fn flat(nodes: usize) -> Self {
        Self {
            curvature_norm_sq: vec![0.0; nodes],
        }
    }
}

pub fn metric_weights(
    kind: MetricKind,
    lambda: &DualFunctional,
    conn: &ConnectionData,
    mesh: &MeshCircle,
) -> Result<MetricWeights> {
    dim_check("connection data", conn.curvature_norm_sq.len(), mesh.len())?;
    if let Some(bad) = conn
        .curvature_norm_sq
        .iter()
        .position(|v| !(*v >= 0.0 && v.is_finite()))
    {
        return Err(Error::Input(format!(
            "curvature_norm_sq[{bad}] = {} is not a nonnegative number",
            conn.curvature_norm_sq[bad]
        )));
    }
    let values = match kind {
        MetricKind::ConstraintStrength => vec![1.0 + lambda.norm_sq(); mesh.len()],
        MetricKind::CurvatureGeometric => conn.curvature_norm_sq.iter().map(|k| 1.0 + k).collect(),
    };
    Ok(MetricWeights { kind, values })
}

/// Block structure of one graded space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceLayout {
    pub cells: usize,
    pub algebra_dim: usize,
    pub blocks: Vec<Bidegree>,
}

impl SpaceLayout {
    pub fn new(cells: usize, algebra_dim: usize, blocks: Vec<Bidegree>) -> Self {
        Self {
            cells,
            algebra_dim,
            blocks,
        }
    }

    /// `⊕_{p+q=k, p≤1, q≤q_max} Ω^p ⊗ Sym^q`, highest form degree first.
    pub fn total_degree(cells: usize, algebra_dim: usize, k: usize, q_max: usize) -> Self {
        let blocks = (0..=k.min(1))
            .rev()
            .map(|p| Bidegree::new(p, k - p))
            .filter(|b| b.q <= q_max)
            .collect();
        Self::new(cells, algebra_dim, blocks)
    }

    pub fn fiber(&self, b: Bidegree) -> usize {
        sym_space_dim(self.algebra_dim, b.q)
    }

    pub fn block_size(&self, b: Bidegree) -> usize {
        self.cells * self.fiber(b)
    }

    pub fn offset(&self, b: Bidegree) -> Option<usize> {
        let mut off = 0;
        for blk in &self.blocks {
            if *blk == b {
                return Some(off);
            }
            off += self.block_size(*blk);
        }
        None
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().map(|b| self.block_size(*b)).sum()
    }
}

/// Dense matrix between two labelled graded spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub domain: SpaceLayout,
    pub codomain: SpaceLayout,
    pub entries: na::DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn zeros(domain: SpaceLayout, codomain: SpaceLayout) -> Self {
        let entries = na::DMatrix::zeros(codomain.total(), domain.total());
        Self {
            domain,
            codomain,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_diagonal(&self) -> bool {
        let m = &self.entries;
        m.is_square()
            && (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| i == j || m[(i, j)] == 0.0))
    }

    /// Diagonal entries, if the matrix is square and diagonal.
    pub fn diagonal(&self) -> Option<na::DVector<f64>> {
        self.is_diagonal().then(|| self.entries.diagonal())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.amax()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries).amax()
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        dim_check("operator composition", self.cols(), rhs.rows())?;
        Ok(Self {
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries * &rhs.entries,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        dim_check("operator sum (rows)", self.rows(), rhs.rows())?;
        dim_check("operator sum (cols)", self.cols(), rhs.cols())?;
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries + &rhs.entries,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        dim_check("operator difference (rows)", self.rows(), rhs.rows())?;
        dim_check("operator difference (cols)", self.cols(), rhs.cols())?;
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries - &rhs.entries,
        })
    }

    fn block_mut(
        &mut self,
        row: Bidegree,
        col: Bidegree,
    ) -> Option<na::DMatrixViewMut<'_, f64>> {
        let r0 = self.codomain.offset(row)?;
        let c0 = self.domain.offset(col)?;
        let (nr, nc) = (self.codomain.block_size(row), self.domain.block_size(col));
        Some(self.entries.view_mut((r0, c0), (nr, nc)))
    }

    /// Copy of the `(row, col)` block, if both bidegrees are present.
    pub fn block(&self, row: Bidegree, col: Bidegree) -> Option<na::DMatrix<f64>> {
        let r0 = self.codomain.offset(row)?;
        let c0 = self.domain.offset(col)?;
        let (nr, nc) = (self.codomain.block_size(row), self.domain.block_size(col));
        Some(self.entries.view((r0, c0), (nr, nc)).into_owned())
    }
}

/// Metric adjoint `D* = M_dom⁻¹ Dᵀ M_cod`, so that `⟨Du, v⟩_cod = ⟨u, D*v⟩_dom`.
pub fn adjoint(op: &OperatorMatrix, m_dom: &OperatorMatrix, m_cod: &OperatorMatrix) -> Result<OperatorMatrix> {
    dim_check("adjoint (domain mass)", m_dom.rows(), op.cols())?;
    dim_check("adjoint (codomain mass)", m_cod.rows(), op.rows())?;
    let mut rhs = op.entries.transpose();
    match m_cod.diagonal() {
        Some(d) => {
            for (j, mut col) in rhs.column_iter_mut().enumerate() {
                col *= d[j];
            }
        }
        None => rhs *= &m_cod.entries,
    }
    let entries = match m_dom.diagonal() {
        Some(d) => {
            for (i, mut row) in rhs.row_iter_mut().enumerate() {
                if d[i] <= 0.0 {
                    return Err(Error::Numeric(format!("mass diagonal entry {i} is {}", d[i])));
                }
                row /= d[i];
            }
            rhs
        }
        None => {
            let chol = m_dom
                .entries
                .clone()
                .cholesky()
                .ok_or_else(|| Error::Numeric("domain mass is not positive definite".into()))?;
            chol.solve(&rhs)
        }
    };
    Ok(OperatorMatrix {
        domain: op.codomain.clone(),
        codomain: op.domain.clone(),
        entries,
    })
}

/// Mesh, algebra and truncation shared by every assembled operator.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: MeshCircle,
    pub algebra: LieAlgebraData,
    pub q_max: usize,
}

impl Discretization {
    pub fn new(mesh: MeshCircle, algebra: LieAlgebraData, q_max: usize) -> Self {
        Self { mesh, algebra, q_max }
    }

    pub fn cells(&self) -> usize {
        self.mesh.len()
    }

    pub fn layout(&self, k: usize) -> SpaceLayout {
        SpaceLayout::total_degree(self.cells(), self.algebra.dim(), k, self.q_max)
    }

    fn check_differential_degree(&self, k: usize) -> Result<()> {
        if k > 1 {
            return Err(Error::Capacity(format!(
                "differential of total degree {k} is not supported (k ∈ {{0, 1}})"
            )));
        }
        if self.q_max < k + 1 {
            return Err(Error::Capacity(format!(
                "D^{k} needs q_max ≥ {} (q_max = {})",
                k + 1,
                self.q_max
            )));
        }
        Ok(())
    }

    /// Lumped mass on the total-degree-`k` space: `w_i h_i` on nodes,
    /// `w_e ℓ_e` on edges, repeated across the fiber.
    pub fn mass(&self, weights: &MetricWeights, k: usize) -> Result<OperatorMatrix> {
        dim_check("metric weights", weights.values.len(), self.cells())?;
        let layout = self.layout(k);
        let mut diag = Vec::with_capacity(layout.total());
        for b in &layout.blocks {
            let fiber = layout.fiber(*b);
            for c in 0..self.cells() {
                let v = if b.p == 0 {
                    weights.values[c] * self.mesh.arc_weights[c]
                } else {
                    weights.edge(c) * self.mesh.edge_lengths[c]
                };
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Assembly(format!(
                        "nonpositive mass {v} at cell {c} of block {b:?}"
                    )));
                }
                diag.extend(std::iter::repeat_n(v, fiber));
            }
        }
        Ok(OperatorMatrix {
            domain: layout.clone(),
            codomain: layout,
            entries: na::DMatrix::from_diagonal(&na::DVector::from_vec(diag)),
        })
    }

    fn write_exterior_derivative(&self, block: &mut na::DMatrixViewMut<'_, f64>, fiber: usize) {
        for e in 0..self.cells() {
            let inv = 1.0 / self.mesh.edge_lengths[e];
            let next = self.mesh.next(e);
            for a in 0..fiber {
                block[(e * fiber + a, next * fiber + a)] += inv;
                block[(e * fiber + a, e * fiber + a)] -= inv;
            }
        }
    }

    fn write_fiber_operator(&self, block: &mut na::DMatrixViewMut<'_, f64>, local: &na::DMatrix<f64>, scale: f64) {
        let (fo, fi) = local.shape();
        for c in 0..self.cells() {
            for r in 0..fo {
                for s in 0..fi {
                    block[(c * fo + r, c * fi + s)] = scale * local[(r, s)];
                }
            }
        }
    }

    /// Spencer differential `D^k` for `k ∈ {0, 1}`.
    pub fn differential(&self, lambda: &DualFunctional, k: usize) -> Result<OperatorMatrix> {
        self.check_differential_degree(k)?;
        let ext = SpencerExtension::new(&self.algebra, lambda, self.q_max)?;
        let mut op = OperatorMatrix::zeros(self.layout(k), self.layout(k + 1));
        for b in op.domain.blocks.clone() {
            let fiber = op.domain.fiber(b);
            if b.p == 0 {
                if let Some(mut blk) = op.block_mut(Bidegree::new(1, b.q), b) {
                    self.write_exterior_derivative(&mut blk, fiber);
                }
            }
            let target = Bidegree::new(b.p, b.q + 1);
            if op.codomain.offset(target).is_some() {
                let local = ext.matrix(b.q)?;
                let sign = if b.p % 2 == 0 { 1.0 } else { -1.0 };
                let mut blk = op.block_mut(target, b).expect("target block present");
                self.write_fiber_operator(&mut blk, &local, sign);
            }
        }
        Ok(op)
    }

    /// Closed form `R^k(ω ⊗ s) = −2(−1)^p ω ⊗ δ^λ(s)`.
    pub fn difference_closed_form(&self, lambda: &DualFunctional, k: usize) -> Result<OperatorMatrix> {
        self.check_differential_degree(k)?;
        let ext = SpencerExtension::new(&self.algebra, lambda, self.q_max)?;
        let mut op = OperatorMatrix::zeros(self.layout(k), self.layout(k + 1));
        for b in op.domain.blocks.clone() {
            let target = Bidegree::new(b.p, b.q + 1);
            if op.codomain.offset(target).is_some() {
                let local = ext.matrix(b.q)?;
                let sign = if b.p % 2 == 0 { -2.0 } else { 2.0 };
                let mut blk = op.block_mut(target, b).expect("target block present");
                self.write_fiber_operator(&mut blk, &local, sign);
            }
        }
        Ok(op)
    }

    /// `R^k = D^k(−λ) − D^k(λ)`, cross-checked against the closed form.
    pub fn difference_operator(&self, lambda: &DualFunctional, k: usize) -> Result<OperatorMatrix> {
        let by_difference = self
            .differential(&lambda.mirror(), k)?
            .sub(&self.differential(lambda, k)?)?;
        let closed = self.difference_closed_form(lambda, k)?;
        let dev = closed.max_abs_diff(&by_difference);
        if dev > DIFFERENCE_TOL {
            return Err(Error::Consistency(format!(
                "R^{k}: matrix difference and closed form differ by {dev:e}"
            )));
        }
        Ok(closed)
    }

    /// Weighted periodic graph Laplacian `d*d` on nodes (`p = 0`) or
    /// `d d*` on edges (`p = 1`).
    fn graph_laplacian(&self, weights: &MetricWeights, p: usize) -> Result<na::DMatrix<f64>> {
        let n = self.cells();
        let scalar = SpaceLayout::new(n, self.algebra.dim(), vec![Bidegree::new(0, 0)]);
        let edges = SpaceLayout::new(n, self.algebra.dim(), vec![Bidegree::new(1, 0)]);
        let mut d = OperatorMatrix::zeros(scalar.clone(), edges.clone());
        {
            let mut blk = d.block_mut(Bidegree::new(1, 0), Bidegree::new(0, 0)).expect("block");
            self.write_exterior_derivative(&mut blk, 1);
        }
        let m0 = na::DMatrix::from_diagonal(&na::DVector::from_fn(n, |i, _| {
            weights.values[i] * self.mesh.arc_weights[i]
        }));
        let m1 = na::DMatrix::from_diagonal(&na::DVector::from_fn(n, |e, _| {
            weights.edge(e) * self.mesh.edge_lengths[e]
        }));
        let mass0 = OperatorMatrix { domain: scalar.clone(), codomain: scalar, entries: m0 };
        let mass1 = OperatorMatrix { domain: edges.clone(), codomain: edges, entries: m1 };
        let d_star = adjoint(&d, &mass0, &mass1)?;
        Ok(if p == 0 {
            d_star.entries * d.entries
        } else {
            d.entries * d_star.entries
        })
    }

    /// Spencer–Hodge Laplacian on the total-degree-`k` space, `k ∈ {0, 1}`.
    pub fn laplacian(
        &self,
        k: usize,
        mode: LaplacianMode,
        lambda: &DualFunctional,
        weights: &MetricWeights,
    ) -> Result<OperatorMatrix> {
        if k > 1 {
            return Err(Error::Capacity(format!("Laplacian of degree {k} is not supported")));
        }
        match mode {
            LaplacianMode::Faithful => {
                let dk = self.differential(lambda, k)?;
                let m_k = self.mass(weights, k)?;
                let m_next = self.mass(weights, k + 1)?;
                let mut lap = adjoint(&dk, &m_k, &m_next)?.compose(&dk)?;
                if k > 0 {
                    let dprev = self.differential(lambda, k - 1)?;
                    let m_prev = self.mass(weights, k - 1)?;
                    let down = dprev.compose(&adjoint(&dprev, &m_prev, &m_k)?)?;
                    lap = down.add(&lap)?;
                }
                Ok(lap)
            }
            LaplacianMode::Simplified => {
                let layout = self.layout(k);
                let shift = lambda.norm_sq();
                let mut op = OperatorMatrix::zeros(layout.clone(), layout.clone());
                for b in &layout.blocks {
                    let l = self.graph_laplacian(weights, b.p)?;
                    let fiber = layout.fiber(*b);
                    let off = layout.offset(*b).expect("own block");
                    for i in 0..self.cells() {
                        for j in 0..self.cells() {
                            let v = l[(i, j)];
                            if v == 0.0 {
                                continue;
                            }
                            for a in 0..fiber {
                                op.entries[(off + i * fiber + a, off + j * fiber + a)] = v;
                            }
                        }
                    }
                }
                for i in 0..layout.total() {
                    op.entries[(i, i)] += shift;
                }
                Ok(op)
            }
        }
    }

    /// `K^k = Δ^k(−λ) − Δ^k(λ)` (faithful mode), cross-checked against the
    /// expansion in `R` and `D`:
    /// `D R* + R D* + R R*` (from the lower differential) plus
    /// `R* D + D* R + R* R` (from `D^k`).
    pub fn perturbation_operator(
        &self,
        k: usize,
        lambda: &DualFunctional,
        weights: &MetricWeights,
    ) -> Result<OperatorMatrix> {
        let by_difference = self
            .laplacian(k, LaplacianMode::Faithful, &lambda.mirror(), weights)?
            .sub(&self.laplacian(k, LaplacianMode::Faithful, lambda, weights)?)?;
        let expansion = self.perturbation_expansion(k, lambda, weights)?;
        let dev = expansion.max_abs_diff(&by_difference);
        if dev > PERTURBATION_TOL {
            return Err(Error::Consistency(format!(
                "K^{k}: Laplacian difference and expansion differ by {dev:e}"
            )));
        }
        Ok(expansion)
    }

    /// The six-term expansion of `K^k` built only from `D(λ)` and the closed-form `R`.
    pub fn perturbation_expansion(
        &self,
        k: usize,
        lambda: &DualFunctional,
        weights: &MetricWeights,
    ) -> Result<OperatorMatrix> {
        if k > 1 {
            return Err(Error::Capacity(format!("K^{k} is not supported")));
        }
        let m_k = self.mass(weights, k)?;
        let m_next = self.mass(weights, k + 1)?;
        let dk = self.differential(lambda, k)?;
        let rk = self.difference_closed_form(lambda, k)?;
        let rk_star = adjoint(&rk, &m_k, &m_next)?;
        let dk_star = adjoint(&dk, &m_k, &m_next)?;
        let mut total = rk_star
            .compose(&dk)?
            .add(&dk_star.compose(&rk)?)?
            .add(&rk_star.compose(&rk)?)?;
        if k > 0 {
            let m_prev = self.mass(weights, k - 1)?;
            let dp = self.differential(lambda, k - 1)?;
            let rp = self.difference_closed_form(lambda, k - 1)?;
            let rp_star = adjoint(&rp, &m_prev, &m_k)?;
            let dp_star = adjoint(&dp, &m_prev, &m_k)?;
            let lower = dp
                .compose(&rp_star)?
                .add(&rp.compose(&dp_star)?)?
                .add(&rp.compose(&rp_star)?)?;
            total = lower.add(&total)?;
        }
        Ok(total)
    }

    /// Largest singular value of `D^1 ∘ D^0`.
    pub fn cochain_defect(&self, lambda: &DualFunctional) -> Result<f64> {
        let composite = self
            .differential(lambda, 1)?
            .compose(&self.differential(lambda, 0)?)?;
        if composite.max_abs() == 0.0 {
            return Ok(0.0);
        }
        Ok(composite.entries.singular_values().max())
    }
}

/// Largest deviation from metric self-adjointness, `‖M⁻¹(ΔᵀM) − Δ‖_∞`,
/// relative to `max(1, ‖Δ‖_∞)`.
pub fn self_adjoint_residual(op: &OperatorMatrix, mass: &OperatorMatrix) -> Result<f64> {
    let adj = adjoint(op, mass, mass)?;
    Ok(adj.max_abs_diff(op) / op.max_abs().max(1.0))
}
