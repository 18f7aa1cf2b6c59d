//! Riemann–Roch bookkeeping for Spencer bundles on Calabi–Yau manifolds.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize, Serializer};

use super::classes::{todd_cy_coefficients, todd_cy_from};
use super::ring::{parse_rational, qi, CohomologyClass, GradedRing, Rational};
use crate::error::{Error, Result};

pub const SRR_SCHEMA_VERSION: u32 = 1;

/// Chern generators every CY ring carries.
const CY_GENERATORS: [(&str, usize); 3] = [("c2", 2), ("c3", 3), ("c4", 4)];

/// Complex dimension, Chern generators and intersection numbers of a manifold with `c1 = 0`.
#[derive(Clone, Debug)]
pub struct CYManifoldData {
    ring: Arc<GradedRing>,
    pub intersection_numbers: BTreeMap<String, Rational>,
}

impl CYManifoldData {
    /// `extra` generators are added after `c2, c3, c4`.
    pub fn new(
        n: usize,
        extra: &[(&str, usize)],
        intersection_numbers: BTreeMap<String, Rational>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("n must be at least 1".into()));
        }
        let mut gens = CY_GENERATORS.to_vec();
        gens.extend_from_slice(extra);
        let ring = GradedRing::new(n, &gens)?;
        let mut normalized = BTreeMap::new();
        for (key, value) in intersection_numbers {
            let exps = ring.parse_monomial(&key)?;
            if ring.degree(&exps) != n {
                return Err(Error::Input(format!(
                    "intersection number {key} has degree {} (expected {n})",
                    ring.degree(&exps)
                )));
            }
            normalized.insert(ring.monomial_key(&exps), value);
        }
        Ok(Self {
            ring,
            intersection_numbers: normalized,
        })
    }

    /// K3 surface: `n = 2`, `∫c2 = 24`.
    pub fn k3() -> Self {
        Self::new(2, &[], BTreeMap::from([("c2".to_string(), qi(24))])).expect("valid preset")
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn generator(&self, name: &str) -> Result<CohomologyClass> {
        CohomologyClass::generator(&self.ring, name)
    }

    pub fn integrate(&self, class: &CohomologyClass) -> Result<Rational> {
        class.integrate(&self.intersection_numbers)
    }

    pub fn todd(&self) -> Result<CohomologyClass> {
        todd_cy_from(
            &self.generator("c2")?,
            &self.generator("c3")?,
            &self.generator("c4")?,
        )
    }
}

/// Which side of the mirror pair a report was produced for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LambdaTag {
    #[default]
    Plus,
    Minus,
}

fn as_string<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SRRReport {
    #[serde(rename = "A0", serialize_with = "as_string")]
    pub a0: Rational,
    #[serde(rename = "A2", serialize_with = "as_string")]
    pub a2: Rational,
    #[serde(rename = "A3", serialize_with = "as_string")]
    pub a3: Rational,
    #[serde(rename = "A4", serialize_with = "as_string")]
    pub a4: Rational,
    #[serde(serialize_with = "as_string")]
    pub chi: Rational,
    #[serde(skip)]
    pub lambda_tag: LambdaTag,
}

fn alternating_sum(manifold: &CYManifoldData, spencer_ch: &[CohomologyClass]) -> Result<CohomologyClass> {
    let n = manifold.n();
    if spencer_ch.len() != n + 1 {
        return Err(Error::Input(format!(
            "expected {} Chern characters (k = 0..{n}), got {}",
            n + 1,
            spencer_ch.len()
        )));
    }
    let mut alt = CohomologyClass::zero(manifold.ring());
    for (k, ch) in spencer_ch.iter().enumerate() {
        alt = if k % 2 == 0 { alt.add(ch)? } else { alt.sub(ch)? };
    }
    Ok(alt)
}

/// Splits `Σ_k (−1)^k ∫ ch_k · td` by Todd degree.
pub fn srr_decomposition(
    manifold: &CYManifoldData,
    spencer_ch: &[CohomologyClass],
    lambda_tag: LambdaTag,
) -> Result<SRRReport> {
    let alt = alternating_sum(manifold, spencer_ch)?;
    let [(_, w2), (_, w3), (_, w22), (_, w4)] = todd_cy_coefficients();
    let c2 = manifold.generator("c2")?;
    let c3 = manifold.generator("c3")?;
    let c4 = manifold.generator("c4")?;
    let a0 = manifold.integrate(&alt)?;
    let a2 = manifold.integrate(&alt.mul(&c2)?)? * w2;
    let a3 = manifold.integrate(&alt.mul(&c3)?.scale(&w3))?;
    let a4 = manifold.integrate(&alt.mul(&c2.mul(&c2)?.scale(&w22).add(&c4.scale(&w4))?)?)?;
    let chi = &a0 + &a2 + &a3 + &a4;
    Ok(SRRReport {
        a0,
        a2,
        a3,
        a4,
        chi,
        lambda_tag,
    })
}

/// `Σ_k (−1)^k ∫ ch_k · td` with the full Todd class in one product.
pub fn euler_srr(manifold: &CYManifoldData, spencer_ch: &[CohomologyClass]) -> Result<Rational> {
    let n = manifold.n();
    let td = manifold.todd()?;
    let mut total = qi(0);
    for (k, ch) in spencer_ch.iter().enumerate() {
        let term = manifold.integrate(&ch.mul(&td)?)?;
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    if spencer_ch.len() != n + 1 {
        return Err(Error::Input(format!(
            "expected {} Chern characters (k = 0..{n}), got {}",
            n + 1,
            spencer_ch.len()
        )));
    }
    Ok(total)
}

/// K3 Spencer bundle data with a flat rank-3 coefficient bundle:
/// `ch(Sym⁰) = 1`, `ch(Ω¹ ⊗ 𝒢) = 3(2 − c2)`, `ch(Ω² ⊗ Sym² 𝒢) = 6`.
pub fn k3_spencer_ch(manifold: &CYManifoldData) -> Result<Vec<CohomologyClass>> {
    let ring = manifold.ring();
    Ok(vec![
        CohomologyClass::one(ring),
        CohomologyClass::from_terms(ring, [("1", qi(6)), ("c2", qi(-3))])?,
        CohomologyClass::constant(ring, qi(6)),
    ])
}

/// Number given either as a JSON number or as a `"p/q"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Self::Int(i) => Ok(qi(*i)),
            Self::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: usize,
}

/// JSON input: manifold data plus one `monomial → coefficient` map per `k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiemannRochInput {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub n: usize,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    pub intersection_numbers: BTreeMap<String, RationalText>,
    pub spencer_ch: Vec<BTreeMap<String, RationalText>>,
}

fn schema_version() -> u32 {
    SRR_SCHEMA_VERSION
}

impl RiemannRochInput {
    pub fn from_json(text: &str) -> Result<Self> {
        let input: Self = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        if input.schema_version != SRR_SCHEMA_VERSION {
            return Err(Error::Input(format!(
                "schema_version: unsupported value {}",
                input.schema_version
            )));
        }
        Ok(input)
    }

    pub fn build(&self) -> Result<(CYManifoldData, Vec<CohomologyClass>)> {
        let extra: Vec<(&str, usize)> = self
            .generators
            .iter()
            .map(|g| (g.name.as_str(), g.degree))
            .collect();
        let numbers = self
            .intersection_numbers
            .iter()
            .map(|(k, v)| {
                v.value()
                    .map(|r| (k.clone(), r))
                    .map_err(|e| e.context(format!("intersection_numbers.{k}")))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let manifold = CYManifoldData::new(self.n, &extra, numbers)?;
        let mut chs = Vec::with_capacity(self.spencer_ch.len());
        for (k, map) in self.spencer_ch.iter().enumerate() {
            let terms = map
                .iter()
                .map(|(m, v)| v.value().map(|r| (m.as_str(), r)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.context(format!("spencer_ch[{k}]")))?;
            let class = CohomologyClass::from_terms(manifold.ring(), terms)
                .map_err(|e| e.context(format!("spencer_ch[{k}]")))?;
            chs.push(class);
        }
        Ok((manifold, chs))
    }
}
