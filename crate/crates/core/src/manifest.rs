//! Versioned JSON manifests.
//!
//! A manifest is `{"format_version": 1, "payload": {<kind>: {...}}}`.
//! Unknown fields are rejected at every level. The canonical form is
//! pretty-printed with keys sorted, so serialize ∘ parse is the identity on
//! canonical text.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::contactcheck::{CollarFamily, CollarReport, GridSpec, RadialProfile};
use crate::embedder::{EmbeddingCertificate, EmbeddingTarget, PathSpec};
use crate::handle5::LedgerTarget;
use crate::lefschetz::{LefschetzDescriptor, LefschetzError, VanishingCycle};
use crate::mcg::{McgError, Sign, TwistLetter, TwistWord};
use crate::obstruct::{CohomologyElement, PullbackMap};
use crate::openbook::OpenBookDescriptor;
use crate::surface::{standard_registry, CurveClass, CurveRegistry, SurfaceError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("malformed manifest: {0}")]
    Json(String),
    #[error("unsupported format_version {found} (this build reads {FORMAT_VERSION})")]
    UnsupportedVersion { found: u32 },
    #[error("expected a {expected} manifest, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Mcg(#[from] McgError),
    #[error(transparent)]
    Lefschetz(#[from] LefschetzError),
}

pub type Result<T> = std::result::Result<T, ManifestError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    OpenBook(OpenBookSpec),
    Word(WordSpec),
    Certificate(CertificateSpec),
    Obstruction(ObstructionInstance),
    CollarProfile(CollarSpec),
    LedgerRequest(LedgerRequest),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::OpenBook(_) => "open_book",
            Payload::Word(_) => "word",
            Payload::Certificate(_) => "certificate",
            Payload::Obstruction(_) => "obstruction",
            Payload::CollarProfile(_) => "collar_profile",
            Payload::LedgerRequest(_) => "ledger_request",
        }
    }
}

/// Monodromy letters as `[curve, ±1]`; `curves` adds classes to (or
/// overrides classes of) the standard registry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordSpec {
    pub genus: usize,
    pub letters: Vec<(String, i64)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub curves: BTreeMap<String, Vec<i64>>,
}

impl WordSpec {
    pub fn registry(&self) -> Result<CurveRegistry> {
        let mut registry = standard_registry(self.genus)?;
        for (name, vector) in &self.curves {
            if registry.contains(name) {
                registry.replace(CurveClass::new(registry.surface(), name.clone(), vector.clone())?)?;
            } else {
                registry.register_vector(name, vector.clone())?;
            }
        }
        Ok(registry)
    }

    pub fn word_on(&self, registry: Arc<CurveRegistry>) -> Result<TwistWord> {
        let letters = self
            .letters
            .iter()
            .map(|(name, s)| Ok(TwistLetter::new(name.clone(), Sign::from_value(*s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistWord::new(registry, letters)?)
    }

    pub fn word(&self) -> Result<TwistWord> {
        self.word_on(Arc::new(self.registry()?))
    }

    /// Records only the curves that differ from the standard registry.
    pub fn from_word(word: &TwistWord) -> Self {
        let standard = standard_registry(word.genus()).ok();
        let curves = word
            .registry()
            .iter()
            .filter(|c| standard.as_ref().and_then(|s| s.get(c.name()).ok()).map(|s| s.vector()) != Some(c.vector()))
            .map(|c| (c.name().to_string(), c.vector().to_vec()))
            .collect();
        WordSpec {
            genus: word.genus(),
            letters: word.letters().iter().map(|l| (l.curve.clone(), l.sign.value())).collect(),
            curves,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenBookSpec {
    pub genus: usize,
    pub letters: Vec<(String, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub curves: BTreeMap<String, Vec<i64>>,
}

impl OpenBookSpec {
    fn word_spec(&self) -> WordSpec {
        WordSpec { genus: self.genus, letters: self.letters.clone(), curves: self.curves.clone() }
    }

    pub fn descriptor(&self) -> Result<OpenBookDescriptor> {
        Ok(OpenBookDescriptor::new(self.word_spec().word()?, self.label.clone()))
    }

    pub fn from_descriptor(ob: &OpenBookDescriptor) -> Self {
        let w = WordSpec::from_word(ob.word());
        OpenBookSpec { genus: w.genus, letters: w.letters, label: ob.label().map(str::to_string), curves: w.curves }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    pub source: OpenBookSpec,
    pub target: EmbeddingTarget,
    pub fibration_label: String,
    pub cycles: Vec<VanishingCycle>,
    pub path: PathSpec,
    pub contact: bool,
    pub theorem_tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collar: Option<CollarReport>,
}

impl CertificateSpec {
    pub fn from_certificate(cert: &EmbeddingCertificate) -> Self {
        CertificateSpec {
            source: OpenBookSpec::from_descriptor(&cert.source),
            target: cert.target,
            fibration_label: cert.target_fibration.label().to_string(),
            cycles: cert.target_fibration.cycles().to_vec(),
            path: cert.path.clone(),
            contact: cert.contact,
            theorem_tag: cert.theorem_tag.clone(),
            collar: cert.collar.clone(),
        }
    }

    /// The fibration's cycles are resolved in the source registry.
    pub fn certificate(&self) -> Result<EmbeddingCertificate> {
        let source = self.source.descriptor()?;
        let preset = self.target.preset();
        let fibration = LefschetzDescriptor::new(
            source.registry().clone(),
            self.cycles.clone(),
            self.fibration_label.clone(),
            preset.total_space(),
            preset.boundary(),
        )?;
        Ok(EmbeddingCertificate {
            source,
            target: self.target,
            target_fibration: fibration,
            path: self.path.clone(),
            contact: self.contact,
            theorem_tag: self.theorem_tag.clone(),
            collar: self.collar.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObstructionInstance {
    Pullback { c1_w: CohomologyElement, e_star: PullbackMap, c1_m: CohomologyElement },
    S2s3Target { witnesses: Vec<i128> },
    Difference { c1_eta: i128, c1_eta_prime: i128 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CollarSpec {
    /// A built-in family by name.
    Named {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridSpec>,
    },
    Family {
        family: CollarFamily,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridSpec>,
    },
    /// `radius[i][j]`, `angle[i][j]` at `t_i`, `s_j`.
    Sampled { s_min: f64, s_max: f64, radius: Vec<Vec<f64>>, angle: Vec<Vec<f64>> },
    Binding { h1: RadialProfile, h2: RadialProfile },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerRequest {
    pub target: LedgerTarget,
    pub genus: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub obstructions: Vec<i64>,
}

impl Manifest {
    pub fn new(payload: Payload) -> Self {
        Manifest { format_version: FORMAT_VERSION, payload }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| ManifestError::Json(e.to_string()))?;
        let version = value.get("format_version").and_then(Value::as_u64);
        if let Some(v) = version {
            if v != u64::from(FORMAT_VERSION) {
                return Err(ManifestError::UnsupportedVersion { found: u32::try_from(v).unwrap_or(u32::MAX) });
            }
        }
        serde_json::from_value(value).map_err(|e| ManifestError::Json(e.to_string()))
    }

    pub fn to_canonical_string(&self) -> String {
        let value = serde_json::to_value(self).expect("manifest types serialize to JSON");
        let mut text = serde_json::to_string_pretty(&canonicalize(value)).expect("JSON values serialize");
        text.push('\n');
        text
    }

    pub fn open_book(&self) -> Result<OpenBookDescriptor> {
        match &self.payload {
            Payload::OpenBook(spec) => spec.descriptor(),
            Payload::Word(spec) => Ok(OpenBookDescriptor::new(spec.word()?, None)),
            other => Err(ManifestError::WrongKind { expected: "open_book", found: other.kind() }),
        }
    }

    pub fn certificate(&self) -> Result<EmbeddingCertificate> {
        match &self.payload {
            Payload::Certificate(spec) => spec.certificate(),
            other => Err(ManifestError::WrongKind { expected: "certificate", found: other.kind() }),
        }
    }
}

/// Recursively sorts object keys.
pub fn canonicalize(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedder::{self, certify};

    fn trefoil() -> Manifest {
        Manifest::new(Payload::OpenBook(OpenBookSpec {
            genus: 3,
            letters: vec![("gamma1".into(), 1), ("gamma2".into(), -1)],
            label: Some("trefoil-like".into()),
            curves: BTreeMap::new(),
        }))
    }

    #[test]
    fn round_trip_is_canonical() {
        let text = trefoil().to_canonical_string();
        let parsed = Manifest::parse(&text).unwrap();
        assert_eq!(parsed, trefoil());
        assert_eq!(parsed.to_canonical_string(), text);
        let f = text.find("format_version").unwrap();
        assert!(f < text.find("payload").unwrap());
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let text = r#"{"format_version":1,"payload":{"open_book":{"genus":3,"letters":[],"colour":1}}}"#;
        assert!(matches!(Manifest::parse(text), Err(ManifestError::Json(_))));
        let text = r#"{"format_version":2,"payload":{"open_book":{"genus":3,"letters":[]}}}"#;
        assert_eq!(Manifest::parse(text), Err(ManifestError::UnsupportedVersion { found: 2 }));
        let text = r#"{"format_version":1,"payload":{"open_book":{"genus":3,"letters":[["gamma1",2]]}}}"#;
        assert!(Manifest::parse(text).unwrap().open_book().is_err());
    }

    #[test]
    fn certificate_round_trip_still_verifies() {
        let ob = trefoil().open_book().unwrap();
        let cert = certify(&ob, EmbeddingTarget::S2xS3).unwrap();
        let m = Manifest::new(Payload::Certificate(CertificateSpec::from_certificate(&cert)));
        let back = Manifest::parse(&m.to_canonical_string()).unwrap().certificate().unwrap();
        assert!(embedder::verify(&back).passed(), "{}", embedder::verify(&back));
        assert_eq!(back.path, cert.path);
    }

    #[test]
    fn custom_curves_survive() {
        let mut spec = OpenBookSpec {
            genus: 3,
            letters: vec![("d".into(), 1)],
            label: None,
            curves: BTreeMap::new(),
        };
        spec.curves.insert("d".into(), vec![1, 0, 1, 0, 0, 0]);
        let ob = spec.descriptor().unwrap();
        assert_eq!(OpenBookSpec::from_descriptor(&ob), spec);
    }
}
