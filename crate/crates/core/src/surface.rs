//! The page surface `Σ_{g,1}`: its symplectic first homology and the registry
//! of marked curves `γ₁ … γ_{2g+2}`.
//!
//! Homology is written in the interleaved basis `(a₁, b₁, …, a_g, b_g)` with
//! `⟨a_i, b_i⟩ = 1`. Curves are modelled only through their homology class.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest genus handled; mod 2 classes are packed into a `u64`.
pub const MAX_GENUS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("genus must be between 1 and {MAX_GENUS}, got {0}")]
    InvalidGenus(usize),
    #[error("class `{name}` has {found} coordinates, surface of genus {genus} needs {}", 2 * genus)]
    WrongLength { name: String, genus: usize, found: usize },
    #[error("class `{0}` is zero but not flagged as separating")]
    UnflaggedZero(String),
    #[error("curve `{0}` is already registered")]
    DuplicateName(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("vector lengths differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("curve {name} requires genus at least {required}, got {genus}")]
    GenusTooSmall { name: String, required: usize, genus: usize },
}

pub type Result<T> = std::result::Result<T, SurfaceError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceModel {
    genus: usize,
}

impl SurfaceModel {
    pub fn new(genus: usize) -> Result<Self> {
        if genus == 0 || genus > MAX_GENUS {
            return Err(SurfaceError::InvalidGenus(genus));
        }
        Ok(SurfaceModel { genus })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn homology_rank(&self) -> usize {
        2 * self.genus
    }

    pub fn boundary_components(&self) -> usize {
        1
    }

    pub fn a(&self, i: usize) -> Vec<i64> {
        self.basis_vector(2 * (i - 1))
    }

    pub fn b(&self, i: usize) -> Vec<i64> {
        self.basis_vector(2 * (i - 1) + 1)
    }

    pub fn basis_vector(&self, index: usize) -> Vec<i64> {
        let mut v = vec![0; self.homology_rank()];
        v[index] = 1;
        v
    }
}

/// A named integral homology class on `Σ_{g,1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveClass {
    name: String,
    vector: Vec<i64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    separating: bool,
}

impl CurveClass {
    pub fn new(surface: SurfaceModel, name: impl Into<String>, vector: Vec<i64>) -> Result<Self> {
        Self::build(surface, name.into(), vector, false)
    }

    /// A class that may legitimately be zero (a separating curve).
    pub fn separating(surface: SurfaceModel, name: impl Into<String>, vector: Vec<i64>) -> Result<Self> {
        Self::build(surface, name.into(), vector, true)
    }

    fn build(surface: SurfaceModel, name: String, vector: Vec<i64>, separating: bool) -> Result<Self> {
        if vector.len() != surface.homology_rank() {
            return Err(SurfaceError::WrongLength { name, genus: surface.genus(), found: vector.len() });
        }
        if !separating && vector.iter().all(|&x| x == 0) {
            return Err(SurfaceError::UnflaggedZero(name));
        }
        Ok(CurveClass { name, vector, separating })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    pub fn is_separating(&self) -> bool {
        self.separating
    }

    pub fn genus(&self) -> usize {
        self.vector.len() / 2
    }

    /// Same unoriented class: a twist about `c` and about `-c` coincide.
    pub fn same_class(&self, other: &CurveClass) -> bool {
        self.vector == other.vector || self.vector.iter().zip(&other.vector).all(|(a, b)| *a == -b)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.name, format_class(&self.vector))
    }
}

/// Renders a class as a combination of `a_i`, `b_i`.
pub fn format_class(v: &[i64]) -> String {
    let mut out = String::new();
    for (idx, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let basis = if idx % 2 == 0 { "a" } else { "b" };
        let label = format!("{basis}{}", idx / 2 + 1);
        let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        match c.abs() {
            1 => out.push_str(&format!("{sign}{label}")),
            n => out.push_str(&format!("{sign}{n}{label}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Symplectic intersection pairing in the interleaved basis.
pub fn pairing_vectors(x: &[i64], y: &[i64]) -> Result<i64> {
    if x.len() != y.len() || !x.len().is_multiple_of(2) {
        return Err(SurfaceError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(x.chunks(2).zip(y.chunks(2)).map(|(p, q)| p[0] * q[1] - p[1] * q[0]).sum())
}

pub fn pairing(x: &CurveClass, y: &CurveClass) -> Result<i64> {
    pairing_vectors(&x.vector, &y.vector)
}

/// Coordinates of `H₁(Σ; Z₂)` packed into bits, bit `i` for basis index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Z2Vector {
    len: usize,
    bits: u64,
}

impl Z2Vector {
    pub fn zero(len: usize) -> Self {
        assert!(len <= 64, "Z2Vector holds at most 64 coordinates");
        Z2Vector { len, bits: 0 }
    }

    pub fn from_bits(len: usize, bits: u64) -> Self {
        assert!(len <= 64, "Z2Vector holds at most 64 coordinates");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Z2Vector { len, bits: bits & mask }
    }

    pub fn from_slice(values: &[u8]) -> Self {
        let bits = values
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &v)| acc | (u64::from(v & 1) << i));
        Z2Vector::from_bits(values.len(), bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn add(&self, other: &Z2Vector) -> Z2Vector {
        debug_assert_eq!(self.len, other.len);
        Z2Vector { len: self.len, bits: self.bits ^ other.bits }
    }

    /// Mod 2 intersection pairing.
    pub fn pairing(&self, other: &Z2Vector) -> u8 {
        debug_assert_eq!(self.len, other.len);
        (self.bits & swap_pairs(other.bits)).count_ones() as u8 & 1
    }
}

impl fmt::Display for Z2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;

/// Exchanges each `a_i` bit with its `b_i` partner.
pub(crate) fn swap_pairs(bits: u64) -> u64 {
    ((bits & EVEN_BITS) << 1) | ((bits >> 1) & EVEN_BITS)
}

/// Bits at the `a_i` positions whose `b_i` partner is also set.
pub(crate) fn paired_bits(bits: u64) -> u64 {
    bits & (bits >> 1) & EVEN_BITS
}

pub fn mod2_vector(v: &[i64]) -> Z2Vector {
    let bits = v
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | (u64::from(x.rem_euclid(2) as u8) << i));
    Z2Vector::from_bits(v.len(), bits)
}

pub fn mod2_class(x: &CurveClass) -> Z2Vector {
    mod2_vector(&x.vector)
}

/// The two non-chain curves of the marked surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtraCurve {
    /// `γ_{2g+1}`, cobounding a pair of pants with `γ₁`, `γ₃`.
    Odd,
    /// `γ_{2g+2}`, cobounding a four-holed sphere with `γ₁`, `γ₃`, `γ₅`.
    Even,
}

impl ExtraCurve {
    /// Indices of the chain curves whose signed sum gives this class.
    pub fn chain_terms(self) -> &'static [usize] {
        match self {
            ExtraCurve::Odd => &[1, 3],
            ExtraCurve::Even => &[1, 3, 5],
        }
    }

    /// Calibrated signs for [`ExtraCurve::chain_terms`]. These are the output
    /// of `lefschetz::calibrate_extra_curve_signs`, frozen here.
    pub fn calibrated_signs(self) -> &'static [i64] {
        match self {
            ExtraCurve::Odd => &[1, -1],
            ExtraCurve::Even => &[1, -1, 1],
        }
    }

    pub fn minimum_genus(self) -> usize {
        match self {
            ExtraCurve::Odd => 2,
            ExtraCurve::Even => 3,
        }
    }

    pub fn index(self, genus: usize) -> usize {
        match self {
            ExtraCurve::Odd => 2 * genus + 1,
            ExtraCurve::Even => 2 * genus + 2,
        }
    }
}

pub fn gamma_name(index: usize) -> String {
    format!("gamma{index}")
}

/// Class of chain curve `γ_k`, `1 ≤ k ≤ 2g`: `γ₁ = a₁`, `γ_{2i} = b_i`,
/// `γ_{2i+1} = a_i + a_{i+1}`.
pub fn chain_class(surface: SurfaceModel, k: usize) -> Vec<i64> {
    assert!((1..=2 * surface.genus()).contains(&k), "chain index {k} out of range");
    let mut v = vec![0; surface.homology_rank()];
    if k == 1 {
        v[0] = 1;
    } else if k.is_multiple_of(2) {
        v[2 * (k / 2 - 1) + 1] = 1;
    } else {
        let i = (k - 1) / 2;
        v[2 * (i - 1)] = 1;
        v[2 * i] = 1;
    }
    v
}

/// Class of an extra curve built from chain classes with the given signs.
pub fn extra_class_with_signs(surface: SurfaceModel, which: ExtraCurve, signs: &[i64]) -> Result<Vec<i64>> {
    let genus = surface.genus();
    if genus < which.minimum_genus() {
        return Err(SurfaceError::GenusTooSmall {
            name: gamma_name(which.index(genus)),
            required: which.minimum_genus(),
            genus,
        });
    }
    let mut v = vec![0; surface.homology_rank()];
    for (&k, &s) in which.chain_terms().iter().zip(signs) {
        for (acc, x) in v.iter_mut().zip(chain_class(surface, k)) {
            *acc += s * x;
        }
    }
    Ok(v)
}

pub fn extra_class(surface: SurfaceModel, which: ExtraCurve) -> Result<Vec<i64>> {
    extra_class_with_signs(surface, which, which.calibrated_signs())
}

/// Named curves on one surface, in registration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRegistry {
    surface: SurfaceModel,
    curves: IndexMap<String, CurveClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

impl CurveRegistry {
    pub fn empty(surface: SurfaceModel) -> Self {
        CurveRegistry { surface, curves: IndexMap::new(), warning: None }
    }

    pub fn surface(&self) -> SurfaceModel {
        self.surface
    }

    pub fn genus(&self) -> usize {
        self.surface.genus()
    }

    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    pub fn register(&mut self, class: CurveClass) -> Result<()> {
        if class.vector.len() != self.surface.homology_rank() {
            return Err(SurfaceError::WrongLength {
                name: class.name,
                genus: self.genus(),
                found: class.vector.len(),
            });
        }
        if self.curves.contains_key(&class.name) {
            return Err(SurfaceError::DuplicateName(class.name));
        }
        self.curves.insert(class.name.clone(), class);
        Ok(())
    }

    pub fn register_vector(&mut self, name: &str, vector: Vec<i64>) -> Result<()> {
        let class = CurveClass::new(self.surface, name, vector)?;
        self.register(class)
    }

    /// Overwrites the class stored under an existing name.
    pub fn replace(&mut self, class: CurveClass) -> Result<()> {
        match self.curves.get_mut(&class.name) {
            Some(slot) => {
                *slot = class;
                Ok(())
            }
            None => Err(SurfaceError::UnknownCurve(class.name)),
        }
    }

    pub fn get(&self, name: &str) -> Result<&CurveClass> {
        self.curves.get(name).ok_or_else(|| SurfaceError::UnknownCurve(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.curves.contains_key(name)
    }

    pub fn gamma(&self, index: usize) -> Result<&CurveClass> {
        self.get(&gamma_name(index))
    }

    pub fn iter(&self) -> impl Iterator<Item = &CurveClass> {
        self.curves.values()
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Classes of `γ₁ … γ_{2g}`.
    pub fn chain(&self) -> Vec<CurveClass> {
        (1..=2 * self.genus()).filter_map(|k| self.gamma(k).ok().cloned()).collect()
    }
}

/// The marked curves `γ₁ … γ_{2g+2}`.
///
/// For `g < 3` only the chain `γ₁ … γ_{2g}` is registered and the registry
/// carries a warning.
pub fn standard_registry(genus: usize) -> Result<CurveRegistry> {
    let surface = SurfaceModel::new(genus)?;
    let mut registry = CurveRegistry::empty(surface);
    for k in 1..=2 * genus {
        registry.register_vector(&gamma_name(k), chain_class(surface, k))?;
    }
    if genus < 3 {
        registry.warning = Some(format!(
            "genus {genus} < 3: only the chain gamma1..gamma{} is registered",
            2 * genus
        ));
        return Ok(registry);
    }
    for which in [ExtraCurve::Odd, ExtraCurve::Even] {
        registry.register_vector(&gamma_name(which.index(genus)), extra_class(surface, which)?)?;
    }
    Ok(registry)
}
