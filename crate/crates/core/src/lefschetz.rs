//! Lefschetz fibrations over the disk, recorded by fiber genus and an ordered
//! list of vanishing cycles with chirality.
//!
//! Ordinary critical points contribute right-handed twists to the boundary
//! monodromy, achiral ones left-handed twists.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mcg::{McgError, Sign, TwistLetter, TwistWord};
use crate::openbook::{self, OpenBookDescriptor, OpenBookError};
use crate::surface::{
    extra_class_with_signs, gamma_name, standard_registry, CurveClass, CurveRegistry, ExtraCurve,
    SurfaceError, SurfaceModel,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("unknown preset `{0}` (expected E_MINUS_3, E_MINUS_4, DISK or S5_PAGE)")]
    UnknownPreset(String),
    #[error("preset {preset} needs genus at least {required}, got {genus}")]
    GenusTooSmall { preset: Preset, required: usize, genus: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Mcg(#[from] McgError),
    #[error(transparent)]
    OpenBook(#[from] OpenBookError),
}

pub type Result<T> = std::result::Result<T, LefschetzError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Ordinary,
    Achiral,
}

impl Chirality {
    pub fn sign(self) -> Sign {
        match self {
            Chirality::Ordinary => Sign::Positive,
            Chirality::Achiral => Sign::Negative,
        }
    }
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Ordinary => "ordinary",
            Chirality::Achiral => "achiral",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VanishingCycle {
    pub curve: String,
    pub chirality: Chirality,
}

impl VanishingCycle {
    pub fn ordinary(curve: impl Into<String>) -> Self {
        VanishingCycle { curve: curve.into(), chirality: Chirality::Ordinary }
    }

    pub fn achiral(curve: impl Into<String>) -> Self {
        VanishingCycle { curve: curve.into(), chirality: Chirality::Achiral }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "E_MINUS_3")]
    EMinus3,
    #[serde(rename = "E_MINUS_4")]
    EMinus4,
    #[serde(rename = "DISK")]
    Disk,
    #[serde(rename = "S5_PAGE")]
    S5Page,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::EMinus3, Preset::EMinus4, Preset::Disk, Preset::S5Page];

    pub fn name(self) -> &'static str {
        match self {
            Preset::EMinus3 => "E_MINUS_3",
            Preset::EMinus4 => "E_MINUS_4",
            Preset::Disk => "DISK",
            Preset::S5Page => "S5_PAGE",
        }
    }

    pub fn minimum_genus(self) -> usize {
        match self {
            Preset::Disk => 1,
            _ => 3,
        }
    }

    pub fn total_space(self) -> &'static str {
        match self {
            Preset::EMinus3 => "D2-bundle over S2 with Euler number -3",
            Preset::EMinus4 => "D2-bundle over S2 with Euler number -4",
            Preset::Disk => "B4",
            Preset::S5Page => "(S2xS2)#(S2xS2) minus an open ball",
        }
    }

    pub fn boundary(self) -> &'static str {
        match self {
            Preset::EMinus3 => "L(3,1)",
            Preset::EMinus4 => "L(4,1)",
            Preset::Disk | Preset::S5Page => "S3",
        }
    }

    /// `|H₁|` of the boundary 3-manifold.
    pub fn expected_boundary_order(self) -> i128 {
        match self {
            Preset::EMinus3 => 3,
            Preset::EMinus4 => 4,
            Preset::Disk | Preset::S5Page => 1,
        }
    }

    pub fn expected_euler_characteristic(self) -> i64 {
        match self {
            Preset::EMinus3 | Preset::EMinus4 => 2,
            Preset::Disk => 1,
            Preset::S5Page => 5,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = LefschetzError;

    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LefschetzError::UnknownPreset(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzDescriptor {
    registry: Arc<CurveRegistry>,
    cycles: Vec<VanishingCycle>,
    label: String,
    target_total_space: String,
    target_boundary: String,
}

impl LefschetzDescriptor {
    pub fn new(
        registry: Arc<CurveRegistry>,
        cycles: Vec<VanishingCycle>,
        label: impl Into<String>,
        target_total_space: impl Into<String>,
        target_boundary: impl Into<String>,
    ) -> Result<Self> {
        for c in &cycles {
            registry.get(&c.curve)?;
        }
        Ok(LefschetzDescriptor {
            registry,
            cycles,
            label: label.into(),
            target_total_space: target_total_space.into(),
            target_boundary: target_boundary.into(),
        })
    }

    pub fn fiber_genus(&self) -> usize {
        self.registry.genus()
    }

    pub fn registry(&self) -> &Arc<CurveRegistry> {
        &self.registry
    }

    pub fn cycles(&self) -> &[VanishingCycle] {
        &self.cycles
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn target_total_space(&self) -> &str {
        &self.target_total_space
    }

    pub fn target_boundary(&self) -> &str {
        &self.target_boundary
    }

    pub fn cycle_class(&self, index: usize) -> Option<&CurveClass> {
        self.cycles.get(index).and_then(|c| self.registry.get(&c.curve).ok())
    }

    pub fn is_chiral(&self) -> bool {
        self.cycles.iter().all(|c| c.chirality == Chirality::Ordinary)
    }

    pub fn achiral_count(&self) -> usize {
        self.cycles.iter().filter(|c| c.chirality == Chirality::Achiral).count()
    }
}

impl fmt::Display for LefschetzDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<String> = self
            .cycles
            .iter()
            .map(|c| match c.chirality {
                Chirality::Ordinary => c.curve.clone(),
                Chirality::Achiral => format!("{}*", c.curve),
            })
            .collect();
        write!(f, "{} (fiber genus {}): [{}]", self.label, self.fiber_genus(), cycles.join(", "))
    }
}

/// The preset fibration on the standard registry of the given genus.
pub fn preset(which: Preset, genus: usize) -> Result<LefschetzDescriptor> {
    if genus < which.minimum_genus() {
        return Err(LefschetzError::GenusTooSmall { preset: which, required: which.minimum_genus(), genus });
    }
    preset_on(Arc::new(standard_registry(genus)?), which)
}

/// The preset fibration on an arbitrary registry carrying the `gammaK` names.
pub fn preset_on(registry: Arc<CurveRegistry>, which: Preset) -> Result<LefschetzDescriptor> {
    let genus = registry.genus();
    if genus < which.minimum_genus() {
        return Err(LefschetzError::GenusTooSmall { preset: which, required: which.minimum_genus(), genus });
    }
    let chain = |achiral: &[usize]| -> Vec<VanishingCycle> {
        (1..=2 * genus)
            .map(|k| {
                if achiral.contains(&k) {
                    VanishingCycle::achiral(gamma_name(k))
                } else {
                    VanishingCycle::ordinary(gamma_name(k))
                }
            })
            .collect()
    };
    let cycles = match which {
        Preset::Disk => chain(&[]),
        Preset::EMinus3 => {
            let mut c = chain(&[]);
            c.push(VanishingCycle::ordinary(gamma_name(2 * genus + 1)));
            c
        }
        Preset::EMinus4 => {
            let mut c = chain(&[]);
            c.push(VanishingCycle::ordinary(gamma_name(2 * genus + 2)));
            c
        }
        Preset::S5Page => {
            // Only the multiset is prescribed; this order is the one whose
            // boundary monodromy has trivial H₁ (the order matters).
            let mut c = chain(&[3]);
            c.push(VanishingCycle::achiral(gamma_name(6)));
            c.push(VanishingCycle::achiral(gamma_name(6)));
            c.push(VanishingCycle::achiral(gamma_name(2 * genus + 2)));
            c.push(VanishingCycle::achiral(gamma_name(2 * genus + 2)));
            c
        }
    };
    LefschetzDescriptor::new(
        registry,
        cycles,
        format!("{}({genus})", which.name()),
        which.total_space(),
        which.boundary(),
    )
}

/// `χ = χ(Σ_{g,1}) + #critical points = (1 - 2g) + #cycles`.
pub fn euler_characteristic(l: &LefschetzDescriptor) -> i64 {
    1 - 2 * l.fiber_genus() as i64 + l.cycles.len() as i64
}

/// Boundary open book: one twist per cycle, right-handed for ordinary and
/// left-handed for achiral critical points.
pub fn boundary_open_book(l: &LefschetzDescriptor) -> OpenBookDescriptor {
    let letters = l
        .cycles
        .iter()
        .map(|c| TwistLetter::new(c.curve.clone(), c.chirality.sign()))
        .collect();
    let word = TwistWord::new(l.registry.clone(), letters).expect("cycles reference registered curves");
    OpenBookDescriptor::new(word, Some(format!("boundary of {}", l.label)))
}

/// `|H₁|` of the boundary open book; `None` when infinite.
pub fn boundary_homology_order(l: &LefschetzDescriptor) -> Result<Option<i128>> {
    Ok(openbook::first_homology(&boundary_open_book(l))?.order())
}

/// One calibration probe: `(preset, genus, expected, observed)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationProbe {
    pub preset: Preset,
    pub genus: usize,
    pub expected: i128,
    pub observed: Option<i128>,
}

impl CalibrationProbe {
    pub fn passed(&self) -> bool {
        self.observed == Some(self.expected)
    }
}

/// Genera on which the extra-curve classes are calibrated.
pub const CALIBRATION_GENERA: [usize; 3] = [3, 4, 5];

/// Boundary `|H₁|` of E_MINUS_3, E_MINUS_4 and DISK on the given registries.
pub fn calibration_probes(registries: &[Arc<CurveRegistry>]) -> Result<Vec<CalibrationProbe>> {
    let mut probes = Vec::new();
    for registry in registries {
        for p in [Preset::EMinus3, Preset::EMinus4, Preset::Disk] {
            let l = preset_on(registry.clone(), p)?;
            probes.push(CalibrationProbe {
                preset: p,
                genus: registry.genus(),
                expected: p.expected_boundary_order(),
                observed: boundary_homology_order(&l)?,
            });
        }
    }
    Ok(probes)
}

/// Signs `s` such that `γ_extra = Σ s_i γ_{k_i}` reproduces the boundary
/// homology of the corresponding preset on every calibration genus.
///
/// All sign tuples are tried (`+` before `-`, first term slowest); among the
/// admissible ones the class of smallest coefficient weight wins, ties going
/// to the earliest tuple.
pub fn calibrate_extra_curve_signs(which: ExtraCurve) -> Result<Vec<i64>> {
    let target = match which {
        ExtraCurve::Odd => Preset::EMinus3,
        ExtraCurve::Even => Preset::EMinus4,
    };
    let terms = which.chain_terms().len();
    let mut best: Option<(i64, Vec<i64>)> = None;
    for code in 0..1u32 << terms {
        let signs: Vec<i64> = (0..terms).map(|i| if code >> (terms - 1 - i) & 1 == 0 { 1 } else { -1 }).collect();
        let mut admissible = true;
        for genus in CALIBRATION_GENERA {
            let registry = registry_with_extra(genus, which, &signs)?;
            let l = preset_on(Arc::new(registry), target)?;
            if boundary_homology_order(&l)? != Some(target.expected_boundary_order()) {
                admissible = false;
                break;
            }
        }
        if !admissible {
            continue;
        }
        let surface = SurfaceModel::new(CALIBRATION_GENERA[0])?;
        let weight: i64 = extra_class_with_signs(surface, which, &signs)?.iter().map(|x| x.abs()).sum();
        if best.as_ref().is_none_or(|(w, _)| weight < *w) {
            best = Some((weight, signs));
        }
    }
    Ok(best.map(|(_, s)| s).unwrap_or_default())
}

fn registry_with_extra(genus: usize, which: ExtraCurve, signs: &[i64]) -> Result<CurveRegistry> {
    let mut registry = standard_registry(genus)?;
    let surface = registry.surface();
    let class = CurveClass::new(surface, gamma_name(which.index(genus)), extra_class_with_signs(surface, which, signs)?)?;
    registry.replace(class)?;
    Ok(registry)
}
