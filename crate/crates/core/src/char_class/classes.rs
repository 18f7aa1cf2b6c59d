//! Chern roots, Chern characters, symmetric-power characters and Todd classes.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra as na;
use num_complex::Complex64;
use num_traits::Zero;

use super::ring::{exp_series, invert_series, q, CohomologyClass, GradedRing, Rational};
use crate::error::{Error, Result};

/// Formal Chern roots of a bundle, each a class in a common ring.
#[derive(Clone, Debug)]
pub struct ChernRoots {
    ring: Arc<GradedRing>,
    roots: Vec<CohomologyClass>,
    constraint_sum_zero: bool,
}

impl ChernRoots {
    /// `rank` formal roots `x_1, …, x_rank` of degree 1, truncated at `order`.
    /// With `constraint_sum_zero` the last root is replaced by `−Σ_{i<r} x_i`.
    pub fn formal(rank: usize, order: usize, constraint_sum_zero: bool) -> Result<Self> {
        let free = if constraint_sum_zero { rank.saturating_sub(1) } else { rank };
        let names: Vec<String> = (1..=free).map(|i| format!("x{i}")).collect();
        let gens: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 1)).collect();
        let ring = GradedRing::new(order, &gens)?;
        let mut roots: Vec<CohomologyClass> = names
            .iter()
            .map(|n| CohomologyClass::generator(&ring, n))
            .collect::<Result<_>>()?;
        if constraint_sum_zero && rank > 0 {
            let mut last = CohomologyClass::zero(&ring);
            for r in &roots {
                last = last.sub(r)?;
            }
            roots.push(last);
        }
        Ok(Self {
            ring,
            roots,
            constraint_sum_zero,
        })
    }

    /// Roots given explicitly as classes of one ring.
    pub fn from_classes(ring: &Arc<GradedRing>, roots: Vec<CohomologyClass>) -> Result<Self> {
        if roots.iter().any(|r| r.ring() != ring) {
            return Err(Error::Input("all roots must live in the given ring".into()));
        }
        let mut sum = CohomologyClass::zero(ring);
        for r in &roots {
            sum = sum.add(r)?;
        }
        Ok(Self {
            ring: ring.clone(),
            constraint_sum_zero: sum.is_zero(),
            roots,
        })
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn roots(&self) -> &[CohomologyClass] {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    pub fn constraint_sum_zero(&self) -> bool {
        self.constraint_sum_zero
    }

    /// Roots of a direct sum.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut roots = self.roots.clone();
        roots.extend(other.roots.iter().cloned());
        Self::from_classes(&self.ring, roots)
    }

    /// Elementary symmetric polynomial `e_j` of the roots, i.e. the Chern class `c_j`.
    pub fn chern_class(&self, j: usize) -> Result<CohomologyClass> {
        // e_j via the product ∏ (1 + x_i t), tracked as a list of t-coefficients.
        let mut coeffs = vec![CohomologyClass::one(&self.ring)];
        for x in &self.roots {
            let mut next = coeffs.clone();
            next.push(CohomologyClass::zero(&self.ring));
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(&c.mul(x)?)?;
            }
            coeffs = next;
        }
        Ok(coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| CohomologyClass::zero(&self.ring)))
    }
}

fn truncate_to(class: &CohomologyClass, order: usize) -> CohomologyClass {
    let mut out = CohomologyClass::zero(class.ring());
    for d in 0..=order.min(class.ring().n()) {
        out = out.add(&class.component(d)).expect("same ring");
    }
    out
}

/// Coefficients of `x / (1 − e^{−x})` through `order`.
pub fn todd_series(order: usize) -> Vec<Rational> {
    // (1 − e^{−x}) / x = Σ (−1)^j x^j / (j+1)!
    let exp = exp_series(order + 1);
    let denom: Vec<Rational> = (0..=order)
        .map(|j| if j % 2 == 0 { exp[j + 1].clone() } else { -exp[j + 1].clone() })
        .collect();
    invert_series(&denom).expect("constant term is 1")
}

/// `∏_i x_i / (1 − e^{−x_i})`, truncated at `order`.
pub fn todd_from_roots(roots: &ChernRoots, order: usize) -> Result<CohomologyClass> {
    let series = todd_series(order);
    let mut out = CohomologyClass::one(roots.ring());
    for x in roots.roots() {
        out = out.mul(&CohomologyClass::compose_series(&series, x)?)?;
    }
    Ok(truncate_to(&out, order))
}

/// `Σ_i e^{x_i}`, truncated at `order`.
pub fn chern_character(roots: &ChernRoots, order: usize) -> Result<CohomologyClass> {
    let exp = exp_series(order);
    let mut out = CohomologyClass::zero(roots.ring());
    for x in roots.roots() {
        out = out.add(&CohomologyClass::compose_series(&exp, x)?)?;
    }
    Ok(truncate_to(&out, order))
}

/// `ch(Sym^k)`: the `t^k` coefficient of `∏_i 1 / (1 − t e^{x_i})`.
pub fn ch_sym(roots: &ChernRoots, k: usize, order: usize) -> Result<CohomologyClass> {
    let ring = roots.ring();
    let exp = exp_series(order);
    // t-coefficients of the running product, truncated at t^k
    let mut acc: Vec<CohomologyClass> = (0..=k)
        .map(|j| {
            if j == 0 {
                CohomologyClass::one(ring)
            } else {
                CohomologyClass::zero(ring)
            }
        })
        .collect();
    for x in roots.roots() {
        let ex = CohomologyClass::compose_series(&exp, x)?;
        // geometric series Σ_j t^j (e^x)^j
        let mut factor = Vec::with_capacity(k + 1);
        let mut power = CohomologyClass::one(ring);
        for _ in 0..=k {
            factor.push(power.clone());
            power = power.mul(&ex)?;
        }
        let mut next = vec![CohomologyClass::zero(ring); k + 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, f) in factor.iter().enumerate().take(k + 1 - i) {
                next[i + j] = next[i + j].add(&a.mul(f)?)?;
            }
        }
        acc = next;
    }
    Ok(truncate_to(&acc[k], order))
}

/// Calabi–Yau Todd coefficients through degree 4 on the monomials
/// `c2`, `c3`, `c2^2`, `c4` (the `c1 = 0` specialization of the Todd polynomial).
pub fn todd_cy_coefficients() -> [(&'static str, Rational); 4] {
    [
        ("c2", q(1, 12)),
        ("c3", Rational::zero()),
        ("c2^2", q(3, 720)),
        ("c4", q(-1, 720)),
    ]
}

/// `1 + c2/12 + (3 c2² − c4)/720` evaluated on arbitrary classes `c2, c3, c4`.
pub fn todd_cy_from(c2: &CohomologyClass, c3: &CohomologyClass, c4: &CohomologyClass) -> Result<CohomologyClass> {
    let [(_, a2), (_, a3), (_, a22), (_, a4)] = todd_cy_coefficients();
    let ring = c2.ring();
    CohomologyClass::one(ring)
        .add(&c2.scale(&a2))?
        .add(&c3.scale(&a3))?
        .add(&c2.mul(c2)?.scale(&a22))?
        .add(&c4.scale(&a4))
}

/// Ring generated by `c2, c3, c4` (weights 2, 3, 4), truncated at `n`.
pub fn cy_ring(n: usize) -> Result<Arc<GradedRing>> {
    GradedRing::new(n, &[("c2", 2), ("c3", 3), ("c4", 4)])
}

/// CY Todd class in the generator ring of dimension `n`.
pub fn todd_cy(n: usize) -> Result<CohomologyClass> {
    if n == 0 {
        return Err(Error::Input("complex dimension must be at least 1".into()));
    }
    let ring = cy_ring(n)?;
    todd_cy_from(
        &CohomologyClass::generator(&ring, "c2")?,
        &CohomologyClass::generator(&ring, "c3")?,
        &CohomologyClass::generator(&ring, "c4")?,
    )
}

/// First and second Chern densities of a constant curvature matrix:
/// `tr F / 2πi` and `[½(tr F)² − ½ tr F²] / (2πi)²`.
pub fn chern_from_curvature(f: &na::DMatrix<Complex64>) -> Result<(Complex64, Complex64)> {
    if !f.is_square() {
        return Err(Error::Input(format!(
            "curvature matrix must be square (got {}×{})",
            f.nrows(),
            f.ncols()
        )));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let tr = f.trace();
    let tr_sq = (f * f).trace();
    let c1 = tr / two_pi_i;
    let c2 = (tr * tr * 0.5 - tr_sq * 0.5) / (two_pi_i * two_pi_i);
    Ok((c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_class::ring::qi;

    #[test]
    fn single_root_todd() {
        let roots = ChernRoots::formal(1, 4, false).unwrap();
        let td = todd_from_roots(&roots, 4).unwrap();
        assert_eq!(td.coeff("1").unwrap(), qi(1));
        assert_eq!(td.coeff("x1").unwrap(), q(1, 2));
        assert_eq!(td.coeff("x1^2").unwrap(), q(1, 12));
        assert_eq!(td.coeff("x1^3").unwrap(), qi(0));
        assert_eq!(td.coeff("x1^4").unwrap(), q(-1, 720));
    }

    #[test]
    fn empty_roots() {
        let roots = ChernRoots::formal(0, 4, false).unwrap();
        let td = todd_from_roots(&roots, 4).unwrap();
        assert_eq!(td, CohomologyClass::one(roots.ring()));
        assert!(chern_character(&roots, 4).unwrap().is_zero());
    }

    #[test]
    fn opposite_roots_degree_two() {
        let roots = ChernRoots::formal(2, 2, true).unwrap();
        let td = todd_from_roots(&roots, 2).unwrap();
        assert_eq!(td.coeff("x1^2").unwrap(), q(-1, 12));
        assert_eq!(td.coeff("x1").unwrap(), qi(0));
        // c2 = x·(−x) = −x²
        let c2 = roots.chern_class(2).unwrap();
        assert_eq!(c2.coeff("x1^2").unwrap(), qi(-1));
    }

    #[test]
    fn cy_coefficients() {
        let td = todd_cy(4).unwrap();
        assert_eq!(td.coeff("c2").unwrap(), q(1, 12));
        assert_eq!(td.coeff("c3").unwrap(), qi(0));
        assert_eq!(td.coeff("c2^2").unwrap(), q(1, 240));
        assert_eq!(td.coeff("c4").unwrap(), q(-1, 720));
        let r = cy_ring(4).unwrap();
        let z = CohomologyClass::zero(&r);
        assert_eq!(todd_cy_from(&z, &z, &z).unwrap(), CohomologyClass::one(&r));
        assert!(todd_cy(0).is_err());
    }

    #[test]
    fn chern_character_basics() {
        let roots = ChernRoots::formal(1, 2, false).unwrap();
        let ch = chern_character(&roots, 2).unwrap();
        assert_eq!(ch.coeff("1").unwrap(), qi(1));
        assert_eq!(ch.coeff("x1").unwrap(), qi(1));
        assert_eq!(ch.coeff("x1^2").unwrap(), q(1, 2));
        let ring = GradedRing::new(3, &[("h", 1)]).unwrap();
        let zeros = ChernRoots::from_classes(&ring, vec![CohomologyClass::zero(&ring); 4]).unwrap();
        assert_eq!(chern_character(&zeros, 3).unwrap(), CohomologyClass::constant(&ring, qi(4)));
    }

    #[test]
    fn sym_k0_is_one() {
        let roots = ChernRoots::formal(3, 4, false).unwrap();
        assert_eq!(ch_sym(&roots, 0, 4).unwrap(), CohomologyClass::one(roots.ring()));
        let r1 = ChernRoots::formal(1, 3, false).unwrap();
        let s2 = ch_sym(&r1, 2, 3).unwrap();
        assert_eq!(s2.coeff("x1").unwrap(), qi(2));
        assert_eq!(s2.coeff("x1^3").unwrap(), q(8, 6));
    }

    #[test]
    fn curvature_traceless_and_shape() {
        let f = na::DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 1.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(-0.3, 0.0),
                Complex64::new(0.0, -1.0),
            ],
        );
        let (c1, _) = chern_from_curvature(&f).unwrap();
        assert_eq!(c1, Complex64::zero());
        let bad = na::DMatrix::<Complex64>::zeros(2, 3);
        assert!(chern_from_curvature(&bad).is_err());
    }
}
