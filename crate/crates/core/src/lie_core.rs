//! Lie algebra data, symmetric tensor powers and the Spencer extension operator.
//!
//! Symmetric tensors of degree `k` are stored as homogeneous polynomials in the
//! dual basis: a coefficient per sorted multi-index `i_1 <= ... <= i_k`. The
//! symmetric multilinear form `T(w_1, ..., w_k)` is recovered by polarization,
//! see [`SymTensor::evaluate`]. The fixed orthonormal basis identifies `e_a`
//! with `e*_a`, so a Lie vector `v` is also the degree-1 tensor `x_a ↦ v_a`.

use std::collections::HashMap;

use nalgebra as na;
use serde::{Deserialize, Serialize};

use crate::error::{dim_check, Error, Result};

/// Default truncation degree for the symmetric algebra.
pub const DEFAULT_Q_MAX: usize = 3;

/// Tolerance for the structural checks on user-supplied structure constants.
const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    /// f[a][b][c] flattened as `a * dim^2 + b * dim + c`.
    structure: Vec<f64>,
    killing: na::DMatrix<f64>,
}

impl LieAlgebraData {
    /// The rank-3 compact algebra with `[e_a, e_b] = Σ_c ε_abc e_c`.
    pub fn su2_epsilon() -> Self {
        let mut f = vec![0.0; 27];
        for (a, b, c, s) in [
            (0, 1, 2, 1.0),
            (1, 2, 0, 1.0),
            (2, 0, 1, 1.0),
            (1, 0, 2, -1.0),
            (2, 1, 0, -1.0),
            (0, 2, 1, -1.0),
        ] {
            f[a * 9 + b * 3 + c] = s;
        }
        Self::from_structure_constants(3, f).expect("epsilon algebra is valid")
    }

    /// Builds an algebra from flattened structure constants, checking
    /// antisymmetry, the Jacobi identity and nondegeneracy of the Killing form.
    pub fn from_structure_constants(dim: usize, structure: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("algebra dimension must be positive".into()));
        }
        dim_check("structure constants", structure.len(), dim * dim * dim)?;
        if structure.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("structure constants must be finite".into()));
        }
        let mut alg = Self {
            dim,
            structure,
            killing: na::DMatrix::zeros(dim, dim),
        };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    if (alg.f(a, b, c) + alg.f(b, a, c)).abs() > STRUCTURE_TOL {
                        return Err(Error::Input(format!(
                            "structure constants not antisymmetric at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let jac = alg.jacobi_residual_max();
        if jac > STRUCTURE_TOL {
            return Err(Error::Input(format!("Jacobi identity violated (residual {jac:e})")));
        }
        let ads: Vec<_> = (0..dim).map(|a| alg.ad(&LieVector::basis(dim, a))).collect();
        alg.killing = na::DMatrix::from_fn(dim, dim, |a, b| (&ads[a] * &ads[b]).trace());
        if alg.killing.determinant().abs() <= STRUCTURE_TOL {
            return Err(Error::Input("Killing form is degenerate".into()));
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        self.structure[(a * self.dim + b) * self.dim + c]
    }

    pub fn killing(&self) -> &na::DMatrix<f64> {
        &self.killing
    }

    /// Matrix of `ad_X`, i.e. `(ad_X)_{cb} = Σ_a f[a][b][c] X_a`.
    pub fn ad(&self, x: &LieVector) -> na::DMatrix<f64> {
        let n = self.dim;
        na::DMatrix::from_fn(n, n, |c, b| (0..n).map(|a| self.f(a, b, c) * x.coeffs[a]).sum())
    }

    pub fn bracket(&self, x: &LieVector, y: &LieVector) -> Result<LieVector> {
        dim_check("bracket", x.dim(), self.dim)?;
        dim_check("bracket", y.dim(), self.dim)?;
        let n = self.dim;
        let coeffs = (0..n)
            .map(|c| {
                let mut acc = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        acc += self.f(a, b, c) * x.coeffs[a] * y.coeffs[b];
                    }
                }
                acc
            })
            .collect();
        Ok(LieVector { coeffs })
    }

    /// `tr(ad_X ∘ ad_Y)`.
    pub fn killing_pairing(&self, x: &LieVector, y: &LieVector) -> Result<f64> {
        dim_check("killing", x.dim(), self.dim)?;
        dim_check("killing", y.dim(), self.dim)?;
        Ok((self.ad(x) * self.ad(y)).trace())
    }

    /// Largest absolute Jacobi residual over all basis quadruples.
    pub fn jacobi_residual_max(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r: f64 = (0..n)
                            .map(|e| {
                                self.f(a, b, e) * self.f(e, c, d)
                                    + self.f(b, c, e) * self.f(e, a, d)
                                    + self.f(c, a, e) * self.f(e, b, d)
                            })
                            .sum();
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        worst
    }

    /// Dimension of `Sym^k` of this algebra.
    pub fn sym_space_dim(&self, k: usize) -> usize {
        sym_space_dim(self.dim, k)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieVector {
    pub coeffs: Vec<f64>,
}

impl LieVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("Lie vector entries must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(dim: usize) -> Self {
        Self { coeffs: vec![0.0; dim] }
    }

    pub fn basis(dim: usize, a: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coeffs[a] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
}

/// A constant element of the dual algebra, written in the dual basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualFunctional {
    pub coeffs: Vec<f64>,
}

impl DualFunctional {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("dual functional entries must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(dim: usize) -> Self {
        Self { coeffs: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The mirror image `−λ`.
    pub fn mirror(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|v| -v).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|v| s * v).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|v| *v == 0.0)
    }

    pub fn pair(&self, x: &LieVector) -> Result<f64> {
        dim_check("pair", self.dim(), x.dim())?;
        Ok(self.coeffs.iter().zip(&x.coeffs).map(|(l, x)| l * x).sum())
    }
}

/// `C(k + dim − 1, k)`.
pub fn sym_space_dim(dim: usize, k: usize) -> usize {
    if dim == 0 {
        return usize::from(k == 0);
    }
    // C(k + dim - 1, dim - 1), accumulated exactly.
    let mut acc: usize = 1;
    for i in 1..dim {
        acc = acc * (k + i) / i;
    }
    acc
}

/// Canonical ordered basis of sorted multi-indices for `Sym^k`.
#[derive(Clone, Debug)]
pub struct SymBasis {
    dim: usize,
    degree: usize,
    indices: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl SymBasis {
    pub fn new(dim: usize, degree: usize) -> Self {
        let mut indices = Vec::with_capacity(sym_space_dim(dim, degree));
        let mut current = Vec::with_capacity(degree);
        fn rec(dim: usize, left: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..dim {
                cur.push(i);
                rec(dim, left - 1, i, cur, out);
                cur.pop();
            }
        }
        rec(dim, degree, 0, &mut current, &mut indices);
        let lookup = indices.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self {
            dim,
            degree,
            indices,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn multi_index(&self, i: usize) -> &[usize] {
        &self.indices[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.indices.iter().map(Vec::as_slice)
    }

    /// Position of a multi-index; the input need not be sorted.
    pub fn position(&self, multi: &[usize]) -> Option<usize> {
        let mut key = multi.to_vec();
        key.sort_unstable();
        self.lookup.get(&key).copied()
    }

    /// Human-readable label such as `x1x1x3` (1-based); `1` for degree 0.
    pub fn label(&self, i: usize) -> String {
        let m = &self.indices[i];
        if m.is_empty() {
            "1".to_string()
        } else {
            m.iter().map(|a| format!("x{}", a + 1)).collect()
        }
    }
}

/// Homogeneous element of `Sym^k` in the sorted monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl SymTensor {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            coeffs: vec![0.0; sym_space_dim(dim, degree)],
        }
    }

    pub fn scalar(dim: usize, c: f64) -> Self {
        Self {
            dim,
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        dim_check("symmetric tensor", coeffs.len(), sym_space_dim(dim, degree))?;
        Ok(Self { dim, degree, coeffs })
    }

    /// The monomial `x_{i_1} ⋯ x_{i_k}` (indices in any order).
    pub fn monomial(dim: usize, multi: &[usize]) -> Self {
        let basis = SymBasis::new(dim, multi.len());
        let mut t = Self::zero(dim, multi.len());
        t.coeffs[basis.position(multi).expect("index in range")] = 1.0;
        t
    }

    /// A Lie vector viewed as a degree-1 tensor through the fixed basis.
    pub fn from_vector(v: &LieVector) -> Self {
        Self {
            dim: v.dim(),
            degree: 1,
            coeffs: v.coeffs.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, multi: &[usize]) -> f64 {
        SymBasis::new(self.dim, self.degree)
            .position(multi)
            .map_or(0.0, |i| self.coeffs[i])
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        dim_check("tensor add (dim)", self.dim, other.dim)?;
        dim_check("tensor add (degree)", self.degree, other.degree)?;
        Ok(Self {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|v| s * v).collect(),
        }
    }

    /// Symmetric product `s ⊙ t` (polynomial multiplication).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        dim_check("tensor product", self.dim, other.dim)?;
        let lb = SymBasis::new(self.dim, self.degree);
        let rb = SymBasis::new(self.dim, other.degree);
        let ob = SymBasis::new(self.dim, self.degree + other.degree);
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        let mut key = Vec::with_capacity(ob.degree());
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                key.clear();
                key.extend_from_slice(lb.multi_index(i));
                key.extend_from_slice(rb.multi_index(j));
                out.coeffs[ob.position(&key).expect("product index")] += a * b;
            }
        }
        Ok(out)
    }

    /// Symmetric multilinear form `T(w_1, …, w_k)` by polarization.
    pub fn evaluate(&self, vectors: &[LieVector]) -> Result<f64> {
        dim_check("tensor evaluation (arity)", vectors.len(), self.degree)?;
        for v in vectors {
            dim_check("tensor evaluation", v.dim(), self.dim)?;
        }
        let k = self.degree;
        let basis = SymBasis::new(self.dim, k);
        let perms = permutations(k);
        let k_fact: f64 = (1..=k).map(|i| i as f64).product();
        let mut total = 0.0;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let m = basis.multi_index(idx);
            let s: f64 = perms
                .iter()
                .map(|p| (0..k).map(|j| vectors[j].coeffs[m[p[j]]]).product::<f64>())
                .sum();
            total += c * s / k_fact;
        }
        Ok(total)
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=p.len()).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, i);
                    q
                })
            })
            .collect();
    }
    out
}

/// The Spencer extension operator `δ^λ : Sym^k → Sym^{k+1}` for a fixed `λ`,
/// truncated at `q_max`.
#[derive(Clone, Debug)]
pub struct SpencerExtension {
    algebra: LieAlgebraData,
    lambda: DualFunctional,
    q_max: usize,
    /// `δ^λ(e_a)` for each basis generator.
    generators: Vec<SymTensor>,
}

impl SpencerExtension {
    pub fn new(algebra: &LieAlgebraData, lambda: &DualFunctional, q_max: usize) -> Result<Self> {
        dim_check("spencer extension", lambda.dim(), algebra.dim())?;
        let generators = (0..algebra.dim())
            .map(|a| generator_image(algebra, lambda, &LieVector::basis(algebra.dim(), a)))
            .collect();
        Ok(Self {
            algebra: algebra.clone(),
            lambda: lambda.clone(),
            q_max,
            generators,
        })
    }

    pub fn lambda(&self) -> &DualFunctional {
        &self.lambda
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.algebra
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// Rule on generators: the symmetric 2-tensor
    /// `(w_1, w_2) ↦ ½(⟨λ,[w_1,[w_2,v]]⟩ + ⟨λ,[w_2,[w_1,v]]⟩)`.
    pub fn delta_on_generator(&self, v: &LieVector) -> Result<SymTensor> {
        dim_check("delta on generator", v.dim(), self.algebra.dim())?;
        Ok(generator_image(&self.algebra, &self.lambda, v))
    }

    /// `c ↦ (X ↦ c⟨λ, X⟩)`.
    pub fn delta_on_scalar(&self, c: f64) -> SymTensor {
        SymTensor {
            dim: self.algebra.dim(),
            degree: 1,
            coeffs: self.lambda.coeffs.iter().map(|l| c * l).collect(),
        }
    }

    /// Applies `δ^λ` to a homogeneous tensor. Each sorted monomial is
    /// differentiated factor by factor, left to right, with the sign `(−1)^j`
    /// for the `j` degree-1 factors already passed.
    pub fn apply(&self, s: &SymTensor) -> Result<SymTensor> {
        dim_check("spencer extension", s.dim(), self.algebra.dim())?;
        let k = s.degree();
        if k + 1 > self.q_max {
            return Err(Error::Capacity(format!(
                "degree {} exceeds q_max = {}",
                k + 1,
                self.q_max
            )));
        }
        if k == 0 {
            return Ok(self.delta_on_scalar(s.coeffs[0]));
        }
        let dim = self.algebra.dim();
        let in_basis = SymBasis::new(dim, k);
        let gen_basis = SymBasis::new(dim, 2);
        let out_basis = SymBasis::new(dim, k + 1);
        let mut out = SymTensor::zero(dim, k + 1);
        let mut key = Vec::with_capacity(k + 1);
        for (idx, &c) in s.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let m = in_basis.multi_index(idx);
            for j in 0..k {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let gen = &self.generators[m[j]];
                for (g_idx, &g) in gen.coeffs.iter().enumerate() {
                    if g == 0.0 {
                        continue;
                    }
                    key.clear();
                    key.extend(m.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &a)| a));
                    key.extend_from_slice(gen_basis.multi_index(g_idx));
                    out.coeffs[out_basis.position(&key).expect("output index")] += sign * c * g;
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `δ^λ : Sym^k → Sym^{k+1}`; rows are output multi-indices,
    /// columns input multi-indices, both in [`SymBasis`] order.
    pub fn matrix(&self, k: usize) -> Result<na::DMatrix<f64>> {
        let dim = self.algebra.dim();
        let in_basis = SymBasis::new(dim, k);
        let mut mat = na::DMatrix::zeros(sym_space_dim(dim, k + 1), in_basis.len());
        for (col, m) in in_basis.iter().enumerate() {
            let img = self.apply(&SymTensor::monomial(dim, m))?;
            mat.column_mut(col).copy_from_slice(img.coeffs());
        }
        Ok(mat)
    }
}

fn generator_image(alg: &LieAlgebraData, lambda: &DualFunctional, v: &LieVector) -> SymTensor {
    let n = alg.dim();
    let ads: Vec<_> = (0..n).map(|a| alg.ad(&LieVector::basis(n, a))).collect();
    let vv = na::DVector::from_column_slice(&v.coeffs);
    let basis = SymBasis::new(n, 2);
    let mut t = SymTensor::zero(n, 2);
    for (idx, m) in basis.iter().enumerate() {
        let (i, j) = (m[0], m[1]);
        let u = (&ads[i] * (&ads[j] * &vv) + &ads[j] * (&ads[i] * &vv)) * 0.5;
        let value: f64 = lambda.coeffs.iter().zip(u.iter()).map(|(l, u)| l * u).sum();
        // Off-diagonal monomial x_i x_j carries both T(e_i,e_j) and T(e_j,e_i).
        let mult = if i == j { 1.0 } else { 2.0 };
        t.coeffs[idx] = mult * value;
    }
    t
}
