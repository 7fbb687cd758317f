//! The curve catalog: named smooth plane curves with asserted invariants.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{CatalogInvariants, CurveError, PlaneCurve};
use crate::field::{Field, FieldSpec};
use crate::form::{monomials, Form};

/// The catalog shipped with the library.
pub const SHIPPED_CATALOG: &str = include_str!("../../catalog/curves.toml");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("catalog serialization error: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("unknown curve '{name}' (known: {known})")]
    UnknownCurve { name: String, known: String },
    #[error("duplicate curve name '{0}'")]
    Duplicate(String),
    #[error("curve '{name}': {msg}")]
    Inconsistent { name: String, msg: String },
    #[error("curve '{name}': {source}")]
    Curve { name: String, source: CurveError },
}

/// One catalog record; coefficients are `[i, j, k, c]` for `c x^i y^j z^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub characteristic: u64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub extension_degree: u32,
    pub degree: u32,
    pub genus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clifford_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_bielliptic: Option<bool>,
    /// Seed the coefficients were drawn with, for random curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Where the asserted invariants come from.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
    pub coefficients: Vec<[u64; 4]>,
}

fn one() -> u32 {
    1
}

fn is_one(v: &u32) -> bool {
    *v == 1
}

impl CatalogEntry {
    pub fn field_spec(&self) -> FieldSpec {
        FieldSpec { characteristic: self.characteristic, extension_degree: self.extension_degree, modulus: None }
    }

    pub fn invariants(&self) -> CatalogInvariants {
        CatalogInvariants { clifford_index: self.clifford_index, non_bielliptic: self.non_bielliptic }
    }

    /// Validates the entry and constructs the curve.
    pub fn build(&self) -> Result<PlaneCurve, CatalogError> {
        let err = |msg: String| CatalogError::Inconsistent { name: self.name.clone(), msg };
        let field = Field::from_spec(&self.field_spec())
            .map_err(|e| CatalogError::Curve { name: self.name.clone(), source: e.into() })?;
        let mut coeffs = Form::zero(self.degree);
        let mut seen = std::collections::BTreeSet::new();
        let mut raw = coeffs.coeffs().to_vec();
        for &[i, j, k, c] in &self.coefficients {
            if i + j + k != self.degree as u64 {
                return Err(CatalogError::Curve { name: self.name.clone(), source: CurveError::NotHomogeneous });
            }
            if !field.contains(c) || c == 0 {
                return Err(err(format!("coefficient {c} of x^{i} y^{j} z^{k} is not a nonzero field element")));
            }
            if !seen.insert((i, j, k)) {
                return Err(err(format!("monomial x^{i} y^{j} z^{k} listed twice")));
            }
            raw[crate::form::monomial_index([i as u32, j as u32, k as u32])] = c;
        }
        coeffs = Form::from_coeffs(self.degree, raw);
        let curve = PlaneCurve::new(field, coeffs)
            .map_err(|source| CatalogError::Curve { name: self.name.clone(), source })?
            .with_name(self.name.clone())
            .with_invariants(self.invariants());
        if curve.genus() != self.genus {
            return Err(err(format!("asserted genus {} but a smooth plane curve of degree {} has genus {}", self.genus, self.degree, curve.genus())));
        }
        Ok(curve)
    }

    /// The entry describing `curve` (coefficients in monomial order).
    pub fn from_curve(curve: &PlaneCurve, seed: Option<u64>, source: &str) -> CatalogEntry {
        let inv = curve.invariants();
        CatalogEntry {
            name: curve.name().to_string(),
            characteristic: curve.field().characteristic(),
            extension_degree: curve.field().degree(),
            degree: curve.degree(),
            genus: curve.genus(),
            clifford_index: inv.clifford_index,
            non_bielliptic: inv.non_bielliptic,
            seed,
            source: source.to_string(),
            coefficients: curve.form().terms().map(|(e, c)| [e[0] as u64, e[1] as u64, e[2] as u64, c]).collect(),
        }
    }
}

/// Draws random forms until one defines a smooth curve.
pub fn random_smooth_curve(field: &Field, degree: u32, seed: u64) -> Result<PlaneCurve, CurveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coeffs = monomials(degree).map(|_| field.random(&mut rng)).collect();
        match PlaneCurve::new(field.clone(), Form::from_coeffs(degree, coeffs)) {
            Ok(c) => return Ok(c),
            Err(CurveError::SingularCurve { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    #[serde(rename = "curve")]
    pub curves: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn shipped() -> Catalog {
        Catalog::from_toml(SHIPPED_CATALOG).expect("shipped catalog parses")
    }

    pub fn from_toml(text: &str) -> Result<Catalog, CatalogError> {
        let cat: Catalog = toml::from_str(text)?;
        let mut names = BTreeMap::new();
        for e in &cat.curves {
            if names.insert(e.name.clone(), ()).is_some() {
                return Err(CatalogError::Duplicate(e.name.clone()));
            }
        }
        Ok(cat)
    }

    pub fn to_toml(&self) -> Result<String, CatalogError> {
        Ok(toml::to_string(self)?)
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        let text = self.to_toml().expect("catalog serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.curves.iter().find(|e| e.name == name).ok_or_else(|| CatalogError::UnknownCurve {
            name: name.to_string(),
            known: self.curves.iter().map(|e| e.name.as_str()).collect::<Vec<_>>().join(", "),
        })
    }

    pub fn curve(&self, name: &str) -> Result<PlaneCurve, CatalogError> {
        self.get(name)?.build()
    }
}
