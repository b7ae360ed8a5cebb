//! Chern-class obstructions to contact embeddings.
//!
//! If `(M, ξ)` embeds in `(W, ξ′)` with trivial normal bundle then
//! `c₁(ξ) = e*c₁(ξ′)`. Elements live in explicit presentations
//! `Z^r ⊕ Z/d₁ ⊕ …`; for the five-manifold targets `H²(W) ≅ Z` on a
//! generator `h`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{self, AbelianGroupPresentation, AlgebraError, IntMatrix};

pub const PULLBACK_TAG: &str = "chern-class-pullback";
pub const S2S3_TAG: &str = "S2xS3-target-chern-class";
pub const DIFFERENCE_TAG: &str = "almost-contact-difference-class";

/// Name of the generator of `H²(S²×S³) ≅ H²(S²⊠S³) ≅ Z`.
pub const GENERATOR_NAME: &str = "h";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("element lives in {found}, expected {expected}")]
    IncompatibleGroups { expected: AbelianGroupPresentation, found: AbelianGroupPresentation },
    #[error("map is not well defined: generator {generator} has order {order} but its image does not")]
    NotWellDefined { generator: usize, order: i128 },
    #[error("odd difference {0}: both Chern classes of almost-contact structures are even")]
    OddDifference(i128),
}

pub type Result<T> = std::result::Result<T, ObstructError>;

/// `H²(W)` for both five-manifold targets.
pub fn five_manifold_h2() -> AbelianGroupPresentation {
    AbelianGroupPresentation::free(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CohomologyElement {
    group: AbelianGroupPresentation,
    coords: Vec<i128>,
}

impl CohomologyElement {
    /// Torsion coordinates are reduced.
    pub fn new(group: AbelianGroupPresentation, coords: Vec<i128>) -> Result<Self> {
        let coords = group.reduce(&coords)?;
        Ok(CohomologyElement { group, coords })
    }

    pub fn zero(group: AbelianGroupPresentation) -> Self {
        let coords = vec![0; group.generator_count()];
        CohomologyElement { group, coords }
    }

    /// `n·h` in `H²(W) ≅ Z`.
    pub fn multiple_of_generator(n: i128) -> Self {
        CohomologyElement { group: five_manifold_h2(), coords: vec![n] }
    }

    pub fn group(&self) -> &AbelianGroupPresentation {
        &self.group
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for CohomologyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {}", self.coords, self.group)
    }
}

impl<'de> Deserialize<'de> for CohomologyElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            group: AbelianGroupPresentation,
            coords: Vec<i128>,
        }
        let raw = Raw::deserialize(d)?;
        let group = AbelianGroupPresentation::new(raw.group.free_rank(), raw.group.torsion().to_vec())
            .map_err(serde::de::Error::custom)?;
        CohomologyElement::new(group, raw.coords).map_err(serde::de::Error::custom)
    }
}

/// Column `j` is the image of source generator `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackMap {
    source: AbelianGroupPresentation,
    target: AbelianGroupPresentation,
    matrix: IntMatrix,
}

impl PullbackMap {
    /// Checks that every torsion generator of order `d` maps to an element
    /// killed by `d`.
    pub fn new(source: AbelianGroupPresentation, target: AbelianGroupPresentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.generator_count() {
            return Err(AlgebraError::DimensionMismatch { expected: target.generator_count(), found: matrix.rows() }.into());
        }
        if matrix.cols() != source.generator_count() {
            return Err(AlgebraError::DimensionMismatch { expected: source.generator_count(), found: matrix.cols() }.into());
        }
        for j in source.free_rank()..source.generator_count() {
            let order = source.modulus(j);
            let image = matrix
                .column(j)
                .into_iter()
                .map(|x| x.checked_mul(order).ok_or(AlgebraError::Overflow("pullback check")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if target.reduce(&image)?.iter().any(|&x| x != 0) {
                return Err(ObstructError::NotWellDefined { generator: j, order });
            }
        }
        Ok(PullbackMap { source, target, matrix })
    }

    /// `e*(h) = image` from `H²(W) ≅ Z`.
    pub fn from_generator_image(target: AbelianGroupPresentation, image: Vec<i128>) -> Result<Self> {
        let matrix = IntMatrix::from_rows(image.into_iter().map(|x| vec![x]).collect())?;
        PullbackMap::new(five_manifold_h2(), target, matrix)
    }

    pub fn source(&self) -> &AbelianGroupPresentation {
        &self.source
    }

    pub fn target(&self) -> &AbelianGroupPresentation {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &CohomologyElement) -> Result<CohomologyElement> {
        if x.group != self.source {
            return Err(ObstructError::IncompatibleGroups { expected: self.source.clone(), found: x.group.clone() });
        }
        CohomologyElement::new(self.target.clone(), self.matrix.mul_vec(&x.coords)?)
    }
}

impl<'de> Deserialize<'de> for PullbackMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            source: AbelianGroupPresentation,
            target: AbelianGroupPresentation,
            matrix: IntMatrix,
        }
        let raw = Raw::deserialize(d)?;
        let revalidate = |g: AbelianGroupPresentation| AbelianGroupPresentation::new(g.free_rank(), g.torsion().to_vec());
        let source = revalidate(raw.source).map_err(serde::de::Error::custom)?;
        let target = revalidate(raw.target).map_err(serde::de::Error::custom)?;
        PullbackMap::new(source, target, raw.matrix).map_err(serde::de::Error::custom)
    }
}

/// Whether `e*(c1_w) = c1_m`.
pub fn pullback_condition(c1_w: &CohomologyElement, e_star: &PullbackMap, c1_m: &CohomologyElement) -> Result<bool> {
    if c1_m.group != e_star.target {
        return Err(ObstructError::IncompatibleGroups { expected: e_star.target.clone(), found: c1_m.group.clone() });
    }
    Ok(e_star.apply(c1_w)? == *c1_m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackVerdict {
    pub holds: bool,
    pub pulled_back: CohomologyElement,
    pub theorem_tag: String,
    pub reason: String,
}

pub fn pullback_verdict(c1_w: &CohomologyElement, e_star: &PullbackMap, c1_m: &CohomologyElement) -> Result<PullbackVerdict> {
    let holds = pullback_condition(c1_w, e_star, c1_m)?;
    let pulled_back = e_star.apply(c1_w)?;
    let reason = if holds {
        format!("e*c1(W) = {:?} equals c1(M)", pulled_back.coords())
    } else {
        format!(
            "e*c1(W) = {:?} differs from c1(M) = {:?}: no contact embedding with trivial normal bundle",
            pulled_back.coords(),
            c1_m.coords()
        )
    };
    Ok(PullbackVerdict { holds, pulled_back, theorem_tag: PULLBACK_TAG.to_string(), reason })
}

/// Admissible `k` in `c₁(ξ′) = 2k·h` for a contact structure on an
/// `S²×S³` target into which the witnesses embed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetConstraint {
    /// Every witness is zero; every `k`, including `0`, remains possible.
    Inconclusive,
    /// `k ≠ 0` with `2k` dividing every witness. Empty if the gcd is odd.
    Admissible(BTreeSet<i128>),
}

impl TargetConstraint {
    pub fn admits(&self, k: i128) -> bool {
        match self {
            TargetConstraint::Inconclusive => true,
            TargetConstraint::Admissible(ks) => ks.contains(&k),
        }
    }

    /// Whether `k = 0` (an `h`-free Chern class) is ruled out.
    pub fn excludes_zero(&self) -> bool {
        matches!(self, TargetConstraint::Admissible(_))
    }

    pub fn chern_classes(&self) -> Option<Vec<i128>> {
        match self {
            TargetConstraint::Inconclusive => None,
            TargetConstraint::Admissible(ks) => Some(ks.iter().map(|k| 2 * k).collect()),
        }
    }
}

impl fmt::Display for TargetConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetConstraint::Inconclusive => f.write_str("inconclusive: every k admissible"),
            TargetConstraint::Admissible(ks) if ks.is_empty() => f.write_str("no admissible k"),
            TargetConstraint::Admissible(ks) => {
                let parts: Vec<String> = ks.iter().map(|k| format!("{k}")).collect();
                write!(f, "k in {{{}}}, c1 = 2k{GENERATOR_NAME}", parts.join(", "))
            }
        }
    }
}

pub fn s2s3_target_constraint(witnesses: &[i128]) -> TargetConstraint {
    let g = witnesses.iter().fold(0, |acc, &w| algebra::gcd(acc, w)).unsigned_abs();
    if g == 0 {
        return TargetConstraint::Inconclusive;
    }
    if g % 2 == 1 {
        return TargetConstraint::Admissible(BTreeSet::new());
    }
    let half = g / 2;
    let mut ks = BTreeSet::new();
    let mut d: u128 = 1;
    while d <= half / d {
        if half % d == 0 {
            for k in [d, half / d] {
                let k = k as i128;
                ks.insert(k);
                ks.insert(-k);
            }
        }
        d += 1;
    }
    TargetConstraint::Admissible(ks)
}

/// `d(η, η′)` with `2d = c₁(η) − c₁(η′)`, on the fixed generator.
pub fn difference_class(c1_eta: i128, c1_eta_prime: i128) -> Result<i128> {
    let diff = algebra::checked_sub(c1_eta, c1_eta_prime)?;
    if diff % 2 != 0 {
        return Err(ObstructError::OddDifference(diff));
    }
    Ok(diff / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> AbelianGroupPresentation {
        AbelianGroupPresentation::free(1)
    }

    #[test]
    fn pullback_examples() {
        let e = PullbackMap::from_generator_image(z(), vec![1]).unwrap();
        let two_h = CohomologyElement::multiple_of_generator(2);
        assert!(pullback_condition(&two_h, &e, &CohomologyElement::new(z(), vec![2]).unwrap()).unwrap());
        let zero_w = CohomologyElement::multiple_of_generator(0);
        assert!(!pullback_condition(&zero_w, &e, &CohomologyElement::new(z(), vec![2]).unwrap()).unwrap());
        assert!(pullback_condition(&zero_w, &e, &CohomologyElement::zero(z())).unwrap());
    }

    #[test]
    fn torsion_is_reduced() {
        let g = AbelianGroupPresentation::new(1, vec![3]).unwrap();
        let e = PullbackMap::from_generator_image(g.clone(), vec![2, 1]).unwrap();
        let c = CohomologyElement::new(g, vec![4, 5]).unwrap();
        assert_eq!(c.coords(), &[4, 2]);
        assert!(pullback_condition(&CohomologyElement::multiple_of_generator(2), &e, &c).unwrap());
    }

    #[test]
    fn ill_defined_map_rejected() {
        let z3 = AbelianGroupPresentation::new(0, vec![3]).unwrap();
        let z2 = AbelianGroupPresentation::new(0, vec![2]).unwrap();
        let m = IntMatrix::from_rows(vec![vec![1]]).unwrap();
        assert!(matches!(PullbackMap::new(z3.clone(), z2, m.clone()), Err(ObstructError::NotWellDefined { .. })));
        let z6 = AbelianGroupPresentation::new(0, vec![6]).unwrap();
        let two = IntMatrix::from_rows(vec![vec![2]]).unwrap();
        assert!(PullbackMap::new(z3.clone(), z6.clone(), two).is_ok());
        assert!(PullbackMap::new(z3.clone(), z(), m.clone()).is_err());
        assert!(PullbackMap::new(z(), z3, m).is_ok());
    }

    #[test]
    fn incompatible_groups() {
        let e = PullbackMap::from_generator_image(z(), vec![1]).unwrap();
        let wrong = CohomologyElement::zero(AbelianGroupPresentation::free(2));
        assert!(pullback_condition(&CohomologyElement::multiple_of_generator(1), &e, &wrong).is_err());
        assert!(pullback_condition(&wrong, &e, &CohomologyElement::zero(z())).is_err());
    }

    #[test]
    fn target_constraint_examples() {
        assert_eq!(s2s3_target_constraint(&[2]), TargetConstraint::Admissible([-1, 1].into()));
        assert_eq!(s2s3_target_constraint(&[4]), TargetConstraint::Admissible([-2, -1, 1, 2].into()));
        assert_eq!(s2s3_target_constraint(&[0]), TargetConstraint::Inconclusive);
        assert_eq!(s2s3_target_constraint(&[4, 6]), TargetConstraint::Admissible([-1, 1].into()));
        assert_eq!(s2s3_target_constraint(&[3]), TargetConstraint::Admissible(BTreeSet::new()));
        assert_eq!(s2s3_target_constraint(&[-36]).chern_classes().unwrap().len(), 12);
        assert_eq!(s2s3_target_constraint(&[2]).chern_classes(), Some(vec![-2, 2]));
    }

    #[test]
    fn difference_examples() {
        assert_eq!(difference_class(2, 0).unwrap(), 1);
        assert_eq!(difference_class(-2, 0).unwrap(), -1);
        assert_eq!(difference_class(0, 0).unwrap(), 0);
        assert_eq!(difference_class(3, 0), Err(ObstructError::OddDifference(3)));
    }

    #[test]
    fn serde_revalidates() {
        let bad = r#"{"group":{"free_rank":0,"torsion":[1]},"coords":[0]}"#;
        assert!(serde_json::from_str::<CohomologyElement>(bad).is_err());
        let ok = r#"{"group":{"free_rank":0,"torsion":[3]},"coords":[7]}"#;
        assert_eq!(serde_json::from_str::<CohomologyElement>(ok).unwrap().coords(), &[1]);
        let map = r#"{"source":{"free_rank":0,"torsion":[3]},"target":{"free_rank":0,"torsion":[2]},"matrix":[[1]]}"#;
        assert!(serde_json::from_str::<PullbackMap>(map).is_err());
    }
}
