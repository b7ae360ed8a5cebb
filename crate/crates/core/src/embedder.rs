//! Spun-embedding certificates.
//!
//! An open book whose monodromy is a word in twists about the vanishing
//! cycles of a Lefschetz fibration `X → D²` embeds, page into page, in the
//! open book `(X, id)`. The embedding is recorded as a path of loops around
//! the critical values: a `c` loop around an ordinary critical value yields a
//! right-handed twist, its reverse `c'` a left-handed one, and achiral
//! critical values swap the two.
//!
//! A certificate carries exactly what can be recomputed: alphabet membership,
//! the path and its replay, the homology actions, chirality consistency, the
//! target's boundary invariants and, for contact targets, the collar check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contactcheck::{self, CollarReport, ContactError};
use crate::lefschetz::{self, Chirality, LefschetzDescriptor, LefschetzError, Preset};
use crate::mcg::{self, McgError, Sign, TwistLetter, TwistWord};
use crate::openbook::{self, OpenBookDescriptor, OpenBookError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("letter {position} ({curve}) is not a vanishing cycle of {fibration}")]
    NotAVanishingCycle { position: usize, curve: String, fibration: String },
    #[error(
        "monodromy uses {} outside the {target} alphabet; applicable targets: {}",
        offending.join(", "),
        if applicable.is_empty() { "none".to_string() } else {
            applicable.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
        }
    )]
    AlphabetViolation { target: EmbeddingTarget, offending: Vec<String>, applicable: Vec<EmbeddingTarget> },
    #[error("open book has genus {source_genus}, fibration has fiber genus {target_genus}")]
    GenusMismatch { source_genus: usize, target_genus: usize },
    #[error("unknown target `{0}` (expected S5-contact, S5-smooth, S2xS3 or S2xtS3)")]
    UnknownTarget(String),
    #[error(transparent)]
    Lefschetz(#[from] LefschetzError),
    #[error(transparent)]
    Mcg(#[from] McgError),
    #[error(transparent)]
    OpenBook(#[from] OpenBookError),
    #[error(transparent)]
    Contact(#[from] ContactError),
}

pub type Result<T> = std::result::Result<T, EmbedError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetManifold {
    S5,
    S2xS3,
    S2xtS3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EmbeddingTarget {
    /// Twisted `S³`-bundle over `S²`, Stein fillable, via E_MINUS_3.
    #[serde(rename = "S2xtS3")]
    S2xtS3,
    /// `S² × S³`, Stein fillable, via E_MINUS_4.
    #[serde(rename = "S2xS3")]
    S2xS3,
    /// Standard contact `S⁵`, via DISK (hyperelliptic monodromy).
    #[serde(rename = "S5-contact")]
    S5Contact,
    /// Smooth `S⁵`, via the achiral S5_PAGE fibration.
    #[serde(rename = "S5-smooth")]
    S5Smooth,
}

impl EmbeddingTarget {
    pub const ALL: [EmbeddingTarget; 4] =
        [EmbeddingTarget::S2xtS3, EmbeddingTarget::S2xS3, EmbeddingTarget::S5Contact, EmbeddingTarget::S5Smooth];

    pub fn name(self) -> &'static str {
        match self {
            EmbeddingTarget::S2xtS3 => "S2xtS3",
            EmbeddingTarget::S2xS3 => "S2xS3",
            EmbeddingTarget::S5Contact => "S5-contact",
            EmbeddingTarget::S5Smooth => "S5-smooth",
        }
    }

    pub fn manifold(self) -> TargetManifold {
        match self {
            EmbeddingTarget::S2xtS3 => TargetManifold::S2xtS3,
            EmbeddingTarget::S2xS3 => TargetManifold::S2xS3,
            EmbeddingTarget::S5Contact | EmbeddingTarget::S5Smooth => TargetManifold::S5,
        }
    }

    pub fn preset(self) -> Preset {
        match self {
            EmbeddingTarget::S2xtS3 => Preset::EMinus3,
            EmbeddingTarget::S2xS3 => Preset::EMinus4,
            EmbeddingTarget::S5Contact => Preset::Disk,
            EmbeddingTarget::S5Smooth => Preset::S5Page,
        }
    }

    /// Whether the certificate asserts a contact embedding.
    pub fn contact(self) -> bool {
        !matches!(self, EmbeddingTarget::S5Smooth)
    }

    pub fn theorem_tag(self) -> &'static str {
        match self {
            EmbeddingTarget::S2xtS3 => "stein-fillable-embedding:twisted-S3-bundle-over-S2",
            EmbeddingTarget::S2xS3 => "stein-fillable-embedding:S2xS3",
            EmbeddingTarget::S5Contact => "contact-embedding:standard-S5:hyperelliptic",
            EmbeddingTarget::S5Smooth => "smooth-embedding:S5",
        }
    }
}

impl fmt::Display for EmbeddingTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmbeddingTarget {
    type Err = EmbedError;

    fn from_str(s: &str) -> Result<Self> {
        EmbeddingTarget::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EmbedError::UnknownTarget(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LoopKind {
    #[serde(rename = "c")]
    C,
    #[serde(rename = "c'")]
    CPrime,
}

impl LoopKind {
    fn sign(self) -> Sign {
        match self {
            LoopKind::C => Sign::Positive,
            LoopKind::CPrime => Sign::Negative,
        }
    }

    pub fn flip(self) -> LoopKind {
        match self {
            LoopKind::C => LoopKind::CPrime,
            LoopKind::CPrime => LoopKind::C,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathStep {
    pub cycle: usize,
    pub loop_kind: LoopKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathSpec {
    pub steps: Vec<PathStep>,
}

impl PathSpec {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Twist produced by traversing `kind` around a critical value of the given
/// chirality.
pub fn twist_sign(kind: LoopKind, chirality: Chirality) -> Sign {
    kind.sign().times(chirality.sign())
}

/// One step per letter, using the first vanishing cycle whose class matches.
pub fn path_spec(fibration: &LefschetzDescriptor, word: &TwistWord) -> Result<PathSpec> {
    if fibration.fiber_genus() != word.genus() {
        return Err(EmbedError::GenusMismatch { source_genus: word.genus(), target_genus: fibration.fiber_genus() });
    }
    let steps = word
        .letters()
        .iter()
        .enumerate()
        .map(|(position, letter)| {
            let class = word.class_of(letter);
            let cycle = (0..fibration.cycles().len())
                .find(|&i| fibration.cycle_class(i).is_some_and(|c| c.same_class(class)))
                .ok_or_else(|| EmbedError::NotAVanishingCycle {
                    position,
                    curve: letter.curve.clone(),
                    fibration: fibration.label().to_string(),
                })?;
            let chirality = fibration.cycles()[cycle].chirality;
            let loop_kind = if letter.sign.times(chirality.sign()) == Sign::Positive { LoopKind::C } else { LoopKind::CPrime };
            Ok(PathStep { cycle, loop_kind })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathSpec { steps })
}

/// The word the path induces on the fiber, or the index of the first step
/// naming a missing cycle.
pub fn replay_path(fibration: &LefschetzDescriptor, path: &PathSpec) -> std::result::Result<TwistWord, usize> {
    let letters = path
        .steps
        .iter()
        .enumerate()
        .map(|(i, step)| {
            let cycle = fibration.cycles().get(step.cycle).ok_or(i)?;
            Ok(TwistLetter::new(cycle.curve.clone(), twist_sign(step.loop_kind, cycle.chirality)))
        })
        .collect::<std::result::Result<Vec<_>, usize>>()?;
    Ok(TwistWord::new(fibration.registry().clone(), letters).expect("cycles reference registered curves"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCertificate {
    pub source: OpenBookDescriptor,
    pub target: EmbeddingTarget,
    pub target_fibration: LefschetzDescriptor,
    pub path: PathSpec,
    pub contact: bool,
    pub theorem_tag: String,
    pub collar: Option<CollarReport>,
}

impl EmbeddingCertificate {
    pub fn target_manifold(&self) -> TargetManifold {
        self.target.manifold()
    }
}

/// Metadata recorded with every certificate; these steps are not re-proved.
pub const STRUCTURAL_NOTES: [&str; 3] = [
    "page embeddings are isotoped to be independent of the boundary and extended over the binding; recorded, not recomputed",
    "normal bundle of the embedded 3-manifold: trivial",
    "curve membership is decided by homology class",
];

fn offending_curves(ob: &OpenBookDescriptor, fibration: &LefschetzDescriptor) -> Vec<String> {
    let word = ob.word();
    word.curve_names()
        .into_iter()
        .filter(|name| {
            let class = ob.registry().get(name).expect("word curves are registered");
            !(0..fibration.cycles().len()).any(|i| fibration.cycle_class(i).is_some_and(|c| c.same_class(class)))
        })
        .map(str::to_string)
        .collect()
}

pub fn certify(ob: &OpenBookDescriptor, target: EmbeddingTarget) -> Result<EmbeddingCertificate> {
    let fibration = lefschetz::preset(target.preset(), ob.genus())?;
    let offending = offending_curves(ob, &fibration);
    if !offending.is_empty() {
        let applicable = applicable_targets(ob).applicable().map(|a| a.target).collect();
        return Err(EmbedError::AlphabetViolation { target, offending, applicable });
    }
    let path = path_spec(&fibration, ob.word())?;
    let contact = target.contact();
    let collar = if contact { Some(contactcheck::default_collar_report()?) } else { None };
    Ok(EmbeddingCertificate {
        source: ob.clone(),
        target,
        target_fibration: fibration,
        path,
        contact,
        theorem_tag: target.theorem_tag().to_string(),
        collar,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{:<24} {}  {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
        }
        Ok(())
    }
}

/// Relative tolerance when re-deriving the stored collar `k*`.
const COLLAR_REPLAY_TOLERANCE: f64 = 1e-9;

/// Re-derives every claim in the certificate. Never errors: failures are
/// report entries.
pub fn verify(cert: &EmbeddingCertificate) -> VerificationReport {
    let mut checks = Vec::new();
    let fibration = &cert.target_fibration;
    let source = cert.source.word();

    let offending = offending_curves(&cert.source, fibration);
    checks.push(CheckResult::new(
        "alphabet",
        offending.is_empty() && fibration.fiber_genus() == source.genus(),
        if offending.is_empty() {
            format!("every monodromy curve is a vanishing cycle of {}", fibration.label())
        } else {
            format!("not vanishing cycles: {}", offending.join(", "))
        },
    ));

    let preset_match = lefschetz::preset(cert.target.preset(), fibration.fiber_genus())
        .map(|expected| same_cycles(&expected, fibration))
        .unwrap_or(false);
    checks.push(CheckResult::new(
        "target-fibration",
        preset_match,
        format!("fibration matches preset {}({})", cert.target.preset(), fibration.fiber_genus()),
    ));

    let replayed = replay_path(fibration, &cert.path);
    let (replay_ok, replay_detail) = match &replayed {
        Err(i) => (false, format!("step {i} names a missing cycle")),
        Ok(w) if w.len() != source.len() => (false, format!("path has {} steps, word has {} letters", w.len(), source.len())),
        Ok(w) => match (0..w.len()).find(|&i| !letters_agree(w, source, i)) {
            Some(i) => (false, format!("step {i} replays {} but the word has {}", w.letters()[i], source.letters()[i])),
            None => (true, format!("{} steps replay the monodromy letter for letter", w.len())),
        },
    };
    checks.push(CheckResult::new("path-replay", replay_ok, replay_detail));

    let action_ok = match &replayed {
        Ok(w) if w.genus() == source.genus() => match (mcg::word_action(w), mcg::word_action(source)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        },
        _ => false,
    };
    checks.push(CheckResult::new(
        "homology-action",
        action_ok,
        if action_ok { "replayed and source monodromies act identically on H1" } else { "homology actions differ" },
    ));

    let chiral = fibration.is_chiral();
    let contact_ok = cert.contact == cert.target.contact() && (!cert.contact || chiral);
    checks.push(CheckResult::new(
        "contact-consistency",
        contact_ok,
        format!("contact={}, achiral cycles={}", cert.contact, fibration.achiral_count()),
    ));

    let preset = cert.target.preset();
    let chi = lefschetz::euler_characteristic(fibration);
    let order = openbook::first_homology(&lefschetz::boundary_open_book(fibration)).map(|h| h.order());
    let boundary_ok = chi == preset.expected_euler_characteristic() && order == Ok(Some(preset.expected_boundary_order()));
    checks.push(CheckResult::new(
        "boundary-facts",
        boundary_ok,
        format!(
            "chi={chi} (expected {}), |H1(boundary)|={} (expected {})",
            preset.expected_euler_characteristic(),
            match order {
                Ok(Some(n)) => n.to_string(),
                Ok(None) => "infinite".into(),
                Err(e) => e.to_string(),
            },
            preset.expected_boundary_order()
        ),
    ));

    checks.push(collar_check(cert));

    checks.push(CheckResult::new(
        "theorem-tag",
        cert.theorem_tag == cert.target.theorem_tag(),
        cert.theorem_tag.clone(),
    ));
    VerificationReport { checks }
}

fn collar_check(cert: &EmbeddingCertificate) -> CheckResult {
    if !cert.contact {
        return CheckResult::new("collar", cert.collar.is_none(), "smooth certificate: no contact form to check");
    }
    let Some(stored) = &cert.collar else {
        return CheckResult::new("collar", false, "contact certificate without a collar report");
    };
    let recomputed = contactcheck::default_collar_report();
    let positive = contactcheck::CollarFamily::circle()
        .sample(&stored.grid)
        .and_then(|p| contactcheck::verify_form_positive(stored.k_star, &p, &stored.grid));
    match (recomputed, positive) {
        (Ok(fresh), Ok(pos)) => {
            let agrees = (fresh.k_star - stored.k_star).abs() <= COLLAR_REPLAY_TOLERANCE * fresh.k_star.abs().max(1.0);
            CheckResult::new(
                "collar",
                agrees && pos.passed,
                format!("k*={:.9} (recomputed {:.9}), min(k*+dB/dt)={:.3e}", stored.k_star, fresh.k_star, pos.min_value),
            )
        }
        (Err(e), _) | (_, Err(e)) => CheckResult::new("collar", false, e.to_string()),
    }
}

fn letters_agree(replayed: &TwistWord, source: &TwistWord, i: usize) -> bool {
    let (a, b) = (&replayed.letters()[i], &source.letters()[i]);
    a.sign == b.sign && replayed.class_of(a).same_class(source.class_of(b))
}

fn same_cycles(a: &LefschetzDescriptor, b: &LefschetzDescriptor) -> bool {
    a.cycles().len() == b.cycles().len()
        && (0..a.cycles().len()).all(|i| {
            a.cycles()[i].chirality == b.cycles()[i].chirality
                && match (a.cycle_class(i), b.cycle_class(i)) {
                    (Some(x), Some(y)) => x.same_class(y),
                    _ => false,
                }
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetAssessment {
    pub target: EmbeddingTarget,
    pub theorem_tag: String,
    pub contact: bool,
    pub applicable: bool,
    pub offending: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TargetSurvey {
    pub assessments: Vec<TargetAssessment>,
}

impl TargetSurvey {
    pub fn applicable(&self) -> impl Iterator<Item = &TargetAssessment> {
        self.assessments.iter().filter(|a| a.applicable)
    }

    pub fn targets(&self) -> Vec<EmbeddingTarget> {
        self.applicable().map(|a| a.target).collect()
    }

    /// Why nothing applies, when nothing does.
    pub fn explanation(&self) -> Option<String> {
        if self.applicable().next().is_some() {
            return None;
        }
        let reasons: Vec<String> = self.assessments.iter().map(|a| format!("{}: {}", a.target, a.reason)).collect();
        Some(format!("no preset alphabet contains the monodromy curves ({})", reasons.join("; ")))
    }
}

pub fn applicable_targets(ob: &OpenBookDescriptor) -> TargetSurvey {
    let assessments = EmbeddingTarget::ALL
        .into_iter()
        .map(|target| {
            let (applicable, offending, reason) = match lefschetz::preset(target.preset(), ob.genus()) {
                Err(e) => (false, Vec::new(), e.to_string()),
                Ok(fibration) => {
                    let offending = offending_curves(ob, &fibration);
                    if offending.is_empty() {
                        (true, offending, format!("monodromy lies in the {} alphabet", target.preset()))
                    } else {
                        let reason = format!("{} not in the {} alphabet", offending.join(", "), target.preset());
                        (false, offending, reason)
                    }
                }
            };
            TargetAssessment {
                target,
                theorem_tag: target.theorem_tag().to_string(),
                contact: target.contact(),
                applicable,
                offending,
                reason,
            }
        })
        .collect();
    TargetSurvey { assessments }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::standard_registry;
    use std::sync::Arc;

    fn ob(g: usize, letters: Vec<TwistLetter>) -> OpenBookDescriptor {
        let r = Arc::new(standard_registry(g).unwrap());
        OpenBookDescriptor::new(TwistWord::new(r, letters).unwrap(), None)
    }

    #[test]
    fn path_examples() {
        let disk = lefschetz::preset(Preset::Disk, 3).unwrap();
        assert!(path_spec(&disk, &TwistWord::empty(disk.registry().clone())).unwrap().is_empty());
        let w = ob(3, vec![TwistLetter::positive("gamma1")]);
        assert_eq!(path_spec(&disk, w.word()).unwrap().steps, vec![PathStep { cycle: 0, loop_kind: LoopKind::C }]);
        let s5 = lefschetz::preset(Preset::S5Page, 3).unwrap();
        let w = ob(3, vec![TwistLetter::positive("gamma3"), TwistLetter::negative("gamma3")]);
        let p = path_spec(&s5, w.word()).unwrap();
        assert_eq!(p.steps[0], PathStep { cycle: 2, loop_kind: LoopKind::CPrime });
        assert_eq!(p.steps[1], PathStep { cycle: 2, loop_kind: LoopKind::C });
        let bad = ob(3, vec![TwistLetter::positive("gamma7")]);
        assert!(matches!(path_spec(&disk, bad.word()), Err(EmbedError::NotAVanishingCycle { .. })));
    }

    #[test]
    fn certify_examples() {
        let trefoil = ob(3, vec![TwistLetter::positive("gamma1"), TwistLetter::positive("gamma2")]);
        let cert = certify(&trefoil, EmbeddingTarget::S5Contact).unwrap();
        assert!(cert.contact);
        assert!(verify(&cert).passed(), "{}", verify(&cert));

        let w = ob(3, vec![TwistLetter::positive("gamma1"), TwistLetter::negative("gamma2"), TwistLetter::positive("gamma7")]);
        let cert = certify(&w, EmbeddingTarget::S2xtS3).unwrap();
        assert!(cert.contact);
        assert_eq!(cert.target_manifold(), TargetManifold::S2xtS3);
        assert!(verify(&cert).passed(), "{}", verify(&cert));

        let w = ob(3, vec![TwistLetter::positive("gamma8"), TwistLetter::positive("gamma2")]);
        match certify(&w, EmbeddingTarget::S2xtS3) {
            Err(EmbedError::AlphabetViolation { offending, applicable, .. }) => {
                assert_eq!(offending, vec!["gamma8".to_string()]);
                assert_eq!(applicable, vec![EmbeddingTarget::S2xS3, EmbeddingTarget::S5Smooth]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let smooth = certify(&w, EmbeddingTarget::S5Smooth).unwrap();
        assert!(!smooth.contact);
        assert!(smooth.collar.is_none());
        assert!(verify(&smooth).passed(), "{}", verify(&smooth));
    }

    #[test]
    fn mutations_fail() {
        let w = ob(3, vec![TwistLetter::positive("gamma1"), TwistLetter::negative("gamma4"), TwistLetter::positive("gamma8")]);
        let cert = certify(&w, EmbeddingTarget::S2xS3).unwrap();
        let mut flipped = cert.clone();
        flipped.path.steps[1].loop_kind = flipped.path.steps[1].loop_kind.flip();
        let report = verify(&flipped);
        assert!(!report.check("path-replay").unwrap().passed);
        assert!(!report.check("homology-action").unwrap().passed);

        let mut achiral = cert.clone();
        achiral.target_fibration = lefschetz::preset(Preset::S5Page, 3).unwrap();
        assert!(!verify(&achiral).check("contact-consistency").unwrap().passed);

        let mut tag = cert;
        tag.theorem_tag = "bogus".into();
        assert!(!verify(&tag).passed());
    }

    #[test]
    fn applicable_examples() {
        let chain = ob(3, vec![TwistLetter::positive("gamma1"), TwistLetter::negative("gamma6")]);
        assert_eq!(applicable_targets(&chain).targets().len(), 4);
        let odd = ob(3, vec![TwistLetter::positive("gamma7")]);
        assert_eq!(applicable_targets(&odd).targets(), vec![EmbeddingTarget::S2xtS3]);
        let both = ob(3, vec![TwistLetter::positive("gamma7"), TwistLetter::positive("gamma8")]);
        let survey = applicable_targets(&both);
        assert!(survey.targets().is_empty());
        assert!(survey.explanation().unwrap().contains("gamma8"));
    }

    #[test]
    fn low_genus_only_hyperelliptic() {
        let trefoil = ob(1, vec![TwistLetter::positive("gamma1"), TwistLetter::positive("gamma2")]);
        assert_eq!(applicable_targets(&trefoil).targets(), vec![EmbeddingTarget::S5Contact]);
        assert!(certify(&trefoil, EmbeddingTarget::S2xS3).is_err());
    }

    #[test]
    fn user_duplicates_are_accepted() {
        let mut r = standard_registry(3).unwrap();
        r.register_vector("my_b1", vec![0, -1, 0, 0, 0, 0]).unwrap();
        let w = TwistWord::new(Arc::new(r), vec![TwistLetter::positive("my_b1")]).unwrap();
        let cert = certify(&OpenBookDescriptor::new(w, None), EmbeddingTarget::S5Contact).unwrap();
        assert!(verify(&cert).passed());
    }

    #[test]
    fn target_names_parse() {
        for t in EmbeddingTarget::ALL {
            assert_eq!(t.name().parse::<EmbeddingTarget>().unwrap(), t);
        }
        assert!("S6".parse::<EmbeddingTarget>().is_err());
    }
}
