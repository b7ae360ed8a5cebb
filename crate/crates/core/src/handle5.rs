//! Handle ledgers for embedding a closed 3-manifold in `S⁵` or `S²×S³`.
//!
//! `M = h⁰ ∪ g·h¹ ∪ g·h² ∪ h³` thickens to `M × D²` with handles
//! `Hⁱ = hⁱ × D²`. Added handles cancel these down to a standard
//! decomposition of the target. Geometric attaching data is provenance text;
//! the pairing, residue, Euler characteristic and obstruction arithmetic are
//! checkable.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedder::{CheckResult, VerificationReport};

/// The group housing the almost-contact obstruction over each attaching
/// sphere.
pub const OBSTRUCTION_GROUP: &str = "π₂(SO(5)/U(2)) ≅ Z";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("expected {expected} obstruction integers (one per genus), found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LedgerTarget {
    #[serde(rename = "s5")]
    S5,
    #[serde(rename = "s2xs3")]
    S2xS3,
}

impl LedgerTarget {
    pub fn euler_characteristic(self) -> i64 {
        0
    }

    /// Handle indices of the standard decomposition of the target.
    pub fn residue_indices(self) -> &'static [u8] {
        match self {
            LedgerTarget::S5 => &[0, 5],
            LedgerTarget::S2xS3 => &[0, 2, 3, 5],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    Thicken,
    CancelOneHandles,
    CancelTwoHandles,
    CancelThreeHandle,
    Cap,
    CoreSphere,
}

impl Step {
    pub fn tag(self) -> &'static str {
        match self {
            Step::Thicken => "thicken",
            Step::CancelOneHandles => "cancel-1-handles",
            Step::CancelTwoHandles => "cancel-2-handles",
            Step::CancelThreeHandle => "cancel-3-handle",
            Step::Cap => "cap",
            Step::CoreSphere => "core-sphere",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandleRecord {
    pub id: String,
    pub index: u8,
    pub step: Step,
    pub attaches_along: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<i64>,
    /// Obstruction `o_j` of the almost-contact structure over the attaching
    /// sphere, before correction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<i64>,
    /// Signed intersection `k_j` with the co-core of the core 2-handle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<i64>,
}

impl HandleRecord {
    fn new(id: impl Into<String>, index: u8, step: Step, attaches_along: impl Into<String>) -> Self {
        HandleRecord {
            id: id.into(),
            index,
            step,
            attaches_along: attaches_along.into(),
            framing: None,
            obstruction: None,
            correction: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandleLedger {
    pub target: LedgerTarget,
    pub genus: usize,
    pub entries: Vec<HandleRecord>,
    pub cancellations: Vec<(String, String)>,
    pub final_residue: Vec<String>,
}

impl HandleLedger {
    pub fn entry(&self, id: &str) -> Option<&HandleRecord> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn entry_mut(&mut self, id: &str) -> Option<&mut HandleRecord> {
        self.entries.iter_mut().find(|e| e.id == id)
    }

    /// `Σ (−1)ⁱ nᵢ` over the given ids.
    pub fn signed_count<'a>(&self, ids: impl IntoIterator<Item = &'a String>) -> i64 {
        ids.into_iter()
            .filter_map(|id| self.entry(id))
            .map(|e| if e.index % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn corrections(&self) -> Vec<i64> {
        self.entries.iter().filter_map(|e| e.correction).collect()
    }

    /// Deterministic text table.
    pub fn render(&self) -> String {
        let partner: HashMap<&str, &str> = self
            .cancellations
            .iter()
            .flat_map(|(a, b)| [(a.as_str(), b.as_str()), (b.as_str(), a.as_str())])
            .collect();
        let residue: HashSet<&str> = self.final_residue.iter().map(String::as_str).collect();
        let opt = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
        let mut out = String::new();
        let _ = writeln!(out, "target: {:?}  genus: {}  obstruction group: {OBSTRUCTION_GROUP}", self.target, self.genus);
        let _ = writeln!(
            out,
            "{:<8} {:>3}  {:<17} {:<9} {:>7} {:>4} {:>4}  attaches along",
            "id", "idx", "step", "cancels", "framing", "o", "k"
        );
        for e in &self.entries {
            let cancels = match partner.get(e.id.as_str()) {
                Some(p) => p.to_string(),
                None if residue.contains(e.id.as_str()) => "residue".to_string(),
                None => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{:<8} {:>3}  {:<17} {:<9} {:>7} {:>4} {:>4}  {}",
                e.id,
                e.index,
                e.step.tag(),
                cancels,
                opt(e.framing),
                opt(e.obstruction),
                opt(e.correction),
                e.attaches_along
            );
        }
        let _ = writeln!(out, "residue: {}", self.final_residue.join(" "));
        out
    }
}

impl fmt::Display for HandleLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn core_ledger(g: usize, target: LedgerTarget) -> (Vec<HandleRecord>, Vec<(String, String)>) {
    let mut entries = vec![HandleRecord::new("H0", 0, Step::Thicken, "h0 x D2")];
    entries.extend((1..=g).map(|j| HandleRecord::new(format!("H1_{j}"), 1, Step::Thicken, format!("h1_{j} x D2"))));
    entries.extend((1..=g).map(|j| HandleRecord::new(format!("H2_{j}"), 2, Step::Thicken, format!("h2_{j} x D2"))));
    entries.push(HandleRecord::new("H3_M", 3, Step::Thicken, "h3 x D2"));
    entries.extend((1..=g).map(|j| {
        let mut r = HandleRecord::new(
            format!("C2_{j}"),
            2,
            Step::CancelOneHandles,
            format!("gamma_{j} x {{theta}}, meeting the belt sphere of H1_{j} once"),
        );
        r.framing = Some(0);
        r
    }));
    entries.extend((1..=g).map(|j| {
        let note = match target {
            LedgerTarget::S5 => format!("sphere tubing the S2 x S2 summand to H2_{j}'s belt sphere"),
            LedgerTarget::S2xS3 => {
                format!("sphere tubing the S2 x S2 summand to H2_{j}'s belt sphere, plus k_{j} copies of the core 2-handle co-core")
            }
        };
        HandleRecord::new(format!("C3_{j}"), 3, Step::CancelTwoHandles, note)
    }));
    let mut cancellations = Vec::new();
    for j in 1..=g {
        cancellations.push((format!("H1_{j}"), format!("C2_{j}")));
    }
    for j in 1..=g {
        cancellations.push((format!("H2_{j}"), format!("C3_{j}")));
    }
    (entries, cancellations)
}

fn finish(entries: &mut Vec<HandleRecord>, cancellations: &mut Vec<(String, String)>) {
    entries.push(HandleRecord::new("H2_IV", 2, Step::CancelThreeHandle, "unknotted circle, isotoped by the light bulb theorem"));
    entries.push(HandleRecord::new("H3_IV", 3, Step::CancelThreeHandle, "sphere meeting the belt of H2_IV once"));
    entries.push(HandleRecord::new("H4", 4, Step::CancelThreeHandle, "sphere meeting the belt of H3_M once"));
    cancellations.push(("H3_M".into(), "H4".into()));
    cancellations.push(("H2_IV".into(), "H3_IV".into()));
}

pub fn build_s5_ledger(g: usize) -> HandleLedger {
    let (mut entries, mut cancellations) = core_ledger(g, LedgerTarget::S5);
    finish(&mut entries, &mut cancellations);
    entries.push(HandleRecord::new("H5", 5, Step::Cap, "boundary S4"));
    HandleLedger {
        target: LedgerTarget::S5,
        genus: g,
        entries,
        cancellations,
        final_residue: vec!["H0".into(), "H5".into()],
    }
}

/// `k_j = −o_j` so the obstruction over each attaching sphere vanishes.
pub fn build_s2s3_ledger(g: usize, obstructions: &[i64]) -> Result<HandleLedger, LedgerError> {
    if obstructions.len() != g {
        return Err(LedgerError::LengthMismatch { expected: g, found: obstructions.len() });
    }
    let (mut entries, mut cancellations) = core_ledger(g, LedgerTarget::S2xS3);
    for (j, &o) in obstructions.iter().enumerate() {
        let r = entries.iter_mut().find(|e| e.id == format!("C3_{}", j + 1)).expect("built above");
        r.obstruction = Some(o);
        r.correction = Some(-o);
    }
    let core = format!("H2_{}", g + 1);
    let mut core_handle = HandleRecord::new(core.clone(), 2, Step::CoreSphere, "unknot, generating H2(S2 x S3)");
    core_handle.framing = Some(0);
    entries.push(core_handle);
    finish(&mut entries, &mut cancellations);
    entries.push(HandleRecord::new("H3_f", 3, Step::CoreSphere, "dual of the core 2-handle"));
    entries.push(HandleRecord::new("H5", 5, Step::Cap, "boundary S4"));
    Ok(HandleLedger {
        target: LedgerTarget::S2xS3,
        genus: g,
        entries,
        cancellations,
        final_residue: vec!["H0".into(), core, "H3_f".into(), "H5".into()],
    })
}

pub fn verify_ledger(l: &HandleLedger) -> VerificationReport {
    let mut checks = Vec::new();

    let mut seen = HashSet::new();
    let duplicates: Vec<&str> = l.entries.iter().filter(|e| !seen.insert(e.id.as_str())).map(|e| e.id.as_str()).collect();
    let bad_index: Vec<&str> = l.entries.iter().filter(|e| e.index > 5).map(|e| e.id.as_str()).collect();
    checks.push(CheckResult::new(
        "entries",
        duplicates.is_empty() && bad_index.is_empty(),
        format!("{} entries, duplicate ids {:?}, indices out of range {:?}", l.entries.len(), duplicates, bad_index),
    ));

    let mut used = HashSet::new();
    let mut pairing_problems = Vec::new();
    for (a, b) in &l.cancellations {
        for id in [a, b] {
            if !used.insert(id.as_str()) {
                pairing_problems.push(format!("{id} cancelled twice"));
            }
        }
        match (l.entry(a), l.entry(b)) {
            (Some(x), Some(y)) if x.index.abs_diff(y.index) == 1 => {}
            (Some(x), Some(y)) => pairing_problems.push(format!("{a}/{b} has indices {}/{}", x.index, y.index)),
            _ => pairing_problems.push(format!("{a}/{b} names a missing handle")),
        }
    }
    checks.push(CheckResult::new(
        "pairing",
        pairing_problems.is_empty(),
        if pairing_problems.is_empty() {
            format!("{} cancelling pairs of consecutive index", l.cancellations.len())
        } else {
            pairing_problems.join("; ")
        },
    ));

    let expected: Vec<String> = l.entries.iter().filter(|e| !used.contains(e.id.as_str())).map(|e| e.id.clone()).collect();
    let mut declared = l.final_residue.clone();
    declared.sort();
    let mut computed = expected.clone();
    computed.sort();
    checks.push(CheckResult::new(
        "residue",
        declared == computed,
        format!("entries minus cancelled: {}", expected.join(" ")),
    ));

    let mut indices: Vec<u8> = l.final_residue.iter().filter_map(|id| l.entry(id)).map(|e| e.index).collect();
    indices.sort_unstable();
    checks.push(CheckResult::new(
        "standard-decomposition",
        indices == l.target.residue_indices(),
        format!("residue indices {:?}, expected {:?}", indices, l.target.residue_indices()),
    ));

    let residue_count = l.signed_count(&l.final_residue);
    let all_ids: Vec<String> = l.entries.iter().map(|e| e.id.clone()).collect();
    let total_count = l.signed_count(&all_ids);
    let chi = l.target.euler_characteristic();
    checks.push(CheckResult::new(
        "signed-count",
        residue_count == chi && total_count == chi,
        format!("residue {residue_count}, full ledger {total_count}, expected {chi}"),
    ));

    checks.push(obstruction_check(l));
    VerificationReport { checks }
}

fn obstruction_check(l: &HandleLedger) -> CheckResult {
    let carriers: Vec<&HandleRecord> =
        l.entries.iter().filter(|e| e.obstruction.is_some() || e.correction.is_some()).collect();
    match l.target {
        LedgerTarget::S5 => CheckResult::new(
            "obstruction",
            carriers.is_empty(),
            "no core 2-handle: corrections must be absent",
        ),
        LedgerTarget::S2xS3 => {
            let totals: BTreeMap<&str, Option<i64>> = carriers
                .iter()
                .map(|e| (e.id.as_str(), e.obstruction.zip(e.correction).and_then(|(o, k)| o.checked_add(k))))
                .collect();
            let bad: Vec<String> =
                totals.iter().filter(|(_, t)| **t != Some(0)).map(|(id, t)| format!("{id}: {t:?}")).collect();
            let ok = bad.is_empty() && carriers.len() == l.genus;
            CheckResult::new(
                "obstruction",
                ok,
                if ok {
                    format!("o_j + k_j = 0 in {OBSTRUCTION_GROUP} over all {} attaching spheres", l.genus)
                } else {
                    format!("{} carriers for genus {}; nonzero totals {}", carriers.len(), l.genus, bad.join(", "))
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s5_counts() {
        let l = build_s5_ledger(1);
        assert_eq!(l.entries.len(), 10);
        assert_eq!(l.entries.iter().filter(|e| e.index < 5).count(), 9);
        assert_eq!(l.final_residue, vec!["H0", "H5"]);
        assert!(verify_ledger(&l).passed(), "{}", verify_ledger(&l));
        let l0 = build_s5_ledger(0);
        assert_eq!(l0.cancellations.len(), 2);
        assert!(verify_ledger(&l0).passed());
    }

    #[test]
    fn s2s3_corrections() {
        assert_eq!(build_s2s3_ledger(1, &[0]).unwrap().corrections(), vec![0]);
        let l = build_s2s3_ledger(2, &[3, -1]).unwrap();
        assert_eq!(l.corrections(), vec![-3, 1]);
        assert_eq!(l.final_residue, vec!["H0", "H2_3", "H3_f", "H5"]);
        assert!(verify_ledger(&l).passed(), "{}", verify_ledger(&l));
        assert!(build_s2s3_ledger(2, &[1]).is_err());
    }

    #[test]
    fn mutations() {
        let mut l = build_s5_ledger(2);
        l.cancellations.push(("H1_1".into(), "H3_M".into()));
        assert!(!verify_ledger(&l).check("pairing").unwrap().passed);

        let mut l = build_s2s3_ledger(2, &[3, -1]).unwrap();
        l.entry_mut("C3_1").unwrap().correction = Some(-2);
        assert!(!verify_ledger(&l).check("obstruction").unwrap().passed);

        let mut l = build_s5_ledger(1);
        l.final_residue.pop();
        assert!(!verify_ledger(&l).check("residue").unwrap().passed);
    }

    #[test]
    fn render_is_stable() {
        let a = build_s2s3_ledger(1, &[2]).unwrap().render();
        assert_eq!(a, build_s2s3_ledger(1, &[2]).unwrap().render());
        assert!(a.contains("C3_1"));
        assert!(a.contains(OBSTRUCTION_GROUP));
    }
}
