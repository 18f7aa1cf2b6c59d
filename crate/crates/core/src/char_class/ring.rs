//! Truncated graded polynomial rings with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Input(format!("not a rational number: {s:?}")));
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = digits
            .parse()
            .map_err(|_| Error::Input(format!("not a rational number: {s:?}")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(num, den));
    }
    s.parse::<BigRational>()
        .map_err(|_| Error::Input(format!("not a rational number: {s:?}")))
        .and_then(|r| {
            if r.denom().is_zero() {
                Err(Error::Input(format!("zero denominator in {s:?}")))
            } else {
                Ok(r)
            }
        })
}

/// Generators with cohomological weights (complex degree), truncated above `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    n: usize,
    names: Vec<String>,
    weights: Vec<usize>,
}

impl GradedRing {
    pub fn new(n: usize, generators: &[(&str, usize)]) -> Result<Arc<Self>> {
        let mut names = Vec::with_capacity(generators.len());
        let mut weights = Vec::with_capacity(generators.len());
        for (name, w) in generators {
            if *w == 0 {
                return Err(Error::Input(format!("generator {name} must have positive degree")));
            }
            if name.is_empty() || name.contains(['*', '^']) || *name == "1" {
                return Err(Error::Input(format!("invalid generator name {name:?}")));
            }
            if names.iter().any(|existing| existing == name) {
                return Err(Error::Input(format!("duplicate generator {name}")));
            }
            names.push(name.to_string());
            weights.push(*w);
        }
        Ok(Arc::new(Self { n, names, weights }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, exps: &[u32]) -> usize {
        exps.iter().zip(&self.weights).map(|(e, w)| *e as usize * w).sum()
    }

    /// Canonical monomial string: `1`, `c2`, `c2^2*h`.
    pub fn monomial_key(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(&self.names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Inverse of [`monomial_key`](Self::monomial_key); factor order is free
    /// and repeated factors accumulate.
    pub fn parse_monomial(&self, key: &str) -> Result<Vec<u32>> {
        let mut exps = vec![0u32; self.names.len()];
        let key = key.trim();
        if key == "1" {
            return Ok(exps);
        }
        for factor in key.split('*') {
            let factor = factor.trim();
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Input(format!("bad exponent in monomial {key:?}")))?,
                ),
                None => (factor, 1),
            };
            let idx = self
                .generator_index(name)
                .ok_or_else(|| Error::Input(format!("unknown generator {name:?} in monomial {key:?}")))?;
            exps[idx] += e;
        }
        Ok(exps)
    }
}

/// Element of a truncated graded ring.
#[derive(Clone, PartialEq)]
pub struct CohomologyClass {
    ring: Arc<GradedRing>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl fmt::Debug for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·{}", self.ring.monomial_key(exps))?;
        }
        Ok(())
    }
}

impl CohomologyClass {
    pub fn zero(ring: &Arc<GradedRing>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<GradedRing>, c: Rational) -> Self {
        let mut z = Self::zero(ring);
        z.add_term(vec![0; ring.names.len()], c);
        z
    }

    pub fn one(ring: &Arc<GradedRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn generator(ring: &Arc<GradedRing>, name: &str) -> Result<Self> {
        let idx = ring
            .generator_index(name)
            .ok_or_else(|| Error::Input(format!("unknown generator {name:?}")))?;
        let mut exps = vec![0; ring.names.len()];
        exps[idx] = 1;
        let mut z = Self::zero(ring);
        z.add_term(exps, Rational::one());
        Ok(z)
    }

    /// Builds a class from `monomial string → coefficient` pairs.
    pub fn from_terms<'a>(
        ring: &Arc<GradedRing>,
        terms: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<Self> {
        let mut z = Self::zero(ring);
        for (key, c) in terms {
            let exps = ring.parse_monomial(key)?;
            z.add_term(exps, c);
        }
        Ok(z)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() || self.ring.degree(&exps) > self.ring.n {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient of a monomial given by its string key.
    pub fn coeff(&self, key: &str) -> Result<Rational> {
        let exps = self.ring.parse_monomial(key)?;
        Ok(self.terms.get(&exps).cloned().unwrap_or_else(Rational::zero))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "classes live in different rings (n = {} vs n = {})",
                self.ring.n, other.ring.n
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * s);
        }
        out
    }

    /// Cup product, dropping everything above degree `n`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (ka, va) in &self.terms {
            let da = self.ring.degree(ka);
            for (kb, vb) in &other.terms {
                if da + self.ring.degree(kb) > self.ring.n {
                    continue;
                }
                let exps = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(exps, va * vb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, v) in &self.terms {
            if self.ring.degree(k) == d {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.ring.names.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Σ_j a_j y^j` for a class `y` without constant term.
    pub fn compose_series(series: &[Rational], y: &Self) -> Result<Self> {
        if !y.constant_term().is_zero() {
            return Err(Error::Input("series argument must have zero constant term".into()));
        }
        let mut out = Self::zero(&y.ring);
        let mut power = Self::one(&y.ring);
        for (j, a) in series.iter().enumerate() {
            if j > y.ring.n {
                break;
            }
            out = out.add(&power.scale(a))?;
            power = power.mul(y)?;
        }
        Ok(out)
    }

    /// Degree-`n` part paired against intersection numbers keyed by monomial string.
    pub fn integrate(&self, intersection: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (k, v) in &self.terms {
            if self.ring.degree(k) != self.ring.n {
                continue;
            }
            let key = self.ring.monomial_key(k);
            let value = intersection
                .get(&key)
                .ok_or_else(|| Error::Input(format!("missing intersection number for {key}")))?;
            total += v * value;
        }
        Ok(total)
    }

    /// Substitutes a class for every generator (ring homomorphism into `target`).
    pub fn substitute(&self, images: &[Self], target: &Arc<GradedRing>) -> Result<Self> {
        if images.len() != self.ring.names.len() {
            return Err(Error::Input("one image per generator is required".into()));
        }
        let mut out = Self::zero(target);
        for (k, v) in &self.terms {
            let mut term = Self::constant(target, v.clone());
            for (img, e) in images.iter().zip(k) {
                term = term.mul(&img.pow(*e)?)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// `exp(y) = Σ y^j / j!` coefficients through `order`.
pub fn exp_series(order: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(order + 1);
    let mut fact = BigInt::one();
    for j in 0..=order {
        if j > 0 {
            fact *= BigInt::from(j);
        }
        out.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    out
}

/// Multiplicative inverse of a power series with nonzero constant term.
pub fn invert_series(a: &[Rational]) -> Result<Vec<Rational>> {
    let a0 = a
        .first()
        .filter(|v| !v.is_zero())
        .ok_or_else(|| Error::Input("series with zero constant term is not invertible".into()))?;
    let mut b: Vec<Rational> = Vec::with_capacity(a.len());
    b.push(a0.recip());
    for j in 1..a.len() {
        let s: Rational = (1..=j).map(|i| &a[i] * &b[j - i]).sum();
        b.push(-s / a0);
    }
    Ok(b)
}
