//! The ten acceptance criteria, runnable from tests and the CLI.
//!
//! Random inputs come from a ChaCha stream seeded by [`SuiteConfig::seed`];
//! the seed is part of the report. The config can also unset registry curves
//! or flip the stabilizing value, which must turn the dependent criteria red.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contactcheck::{self, CollarFamily, GridSpec, RadialProfile};
use crate::embedder::{self, EmbeddingTarget};
use crate::handle5::{self, LedgerTarget};
use crate::lefschetz::{self, Preset};
use crate::manifest::{CertificateSpec, Manifest, Payload};
use crate::mcg::{self, Sign, TwistLetter, TwistWord};
use crate::obstruct::{self, CohomologyElement, PullbackMap, TargetConstraint};
use crate::openbook::{self, OpenBookDescriptor};
use crate::spin::{self, QuadraticForm, STABILIZING_VALUE};
use crate::surface::{
    gamma_name, standard_registry, CurveClass, CurveRegistry, ExtraCurve, SurfaceError,
};

pub const DEFAULT_SEED: u64 = 0x5eed_b00c;

pub const RANDOM_WORDS: usize = 1000;
pub const CONJUGATION_PAIRS: usize = 200;
pub const WORDS_PER_TARGET: usize = 500;
pub const RANDOM_OBSTRUCTIONS: usize = 100;
pub const MAX_LEDGER_GENUS: usize = 10;
pub const MAX_WORD_LENGTH: usize = 50;
pub const MAX_CERTIFIED_LENGTH: usize = 30;
/// Relative drift of `k*` allowed under one grid refinement.
pub const REFINEMENT_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Value of `q(c)` for which a twist about `c` is claimed to fix `q`.
    pub stabilizing_value: u8,
    /// Extra curves left out of every registry.
    pub unset: Vec<ExtraCurve>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, stabilizing_value: STABILIZING_VALUE, unset: Vec::new() }
    }
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig { seed, ..SuiteConfig::default() }
    }

    pub fn registry(&self, genus: usize) -> Result<CurveRegistry, SurfaceError> {
        let standard = standard_registry(genus)?;
        if self.unset.is_empty() {
            return Ok(standard);
        }
        let dropped: Vec<String> = self.unset.iter().map(|e| gamma_name(e.index(genus))).collect();
        let mut registry = CurveRegistry::empty(standard.surface());
        for c in standard.iter().filter(|c| !dropped.iter().any(|d| d == c.name())) {
            registry.register(c.clone())?;
        }
        Ok(registry)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, id: u8) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed: {:#x}", self.seed)?;
        for c in &self.criteria {
            writeln!(f, "{c}")?;
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} criteria passed", self.criteria.len())
    }
}

pub type Criterion = fn(&SuiteConfig, &mut ChaCha8Rng) -> Result<String, String>;

pub const CRITERIA: [(u8, &str, Criterion); 10] = [
    (1, "calibration", calibration),
    (2, "s5-page-preset", s5_page),
    (3, "spin-obstruction", spin_obstruction),
    (4, "orbit-partition", orbit_partition),
    (5, "fix-iff-law", fix_iff),
    (6, "transvection-symplectic", transvections),
    (7, "embedding-round-trips", embedding_round_trips),
    (8, "obstruction-calculus", obstruction_calculus),
    (9, "handle-ledgers", ledgers),
    (10, "contact-verifier", contact_verifier),
];

/// Each criterion draws from its own stream so they can run in isolation.
pub fn run_criterion(config: &SuiteConfig, id: u8) -> Option<CriterionResult> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(u64::from(id));
    let (passed, detail) = match check(config, &mut rng) {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionResult { id, name, passed, detail })
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let criteria = CRITERIA.iter().filter_map(|c| run_criterion(config, c.0)).collect();
    SuiteReport { seed: config.seed, criteria }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn registry(config: &SuiteConfig, genus: usize) -> Result<Arc<CurveRegistry>, String> {
    config.registry(genus).map(Arc::new).map_err(|e| e.to_string())
}

fn calibration(config: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<String, String> {
    let mut failures = Vec::new();
    for preset in [Preset::EMinus3, Preset::EMinus4, Preset::Disk] {
        let mut orders = BTreeSet::new();
        for g in lefschetz::CALIBRATION_GENERA {
            let outcome = registry(config, g).and_then(|r| {
                let l = lefschetz::preset_on(r, preset).map_err(|e| e.to_string())?;
                lefschetz::boundary_homology_order(&l).map_err(|e| e.to_string())
            });
            match outcome {
                Ok(Some(n)) => {
                    orders.insert(n);
                    if n != preset.expected_boundary_order() {
                        failures.push(format!("{preset}(g={g}): |H1| = {n}"));
                    }
                }
                Ok(None) => failures.push(format!("{preset}(g={g}): H1 infinite")),
                Err(e) => failures.push(format!("{preset}(g={g}): {e}")),
            }
        }
        if orders.len() > 1 {
            failures.push(format!("{preset}: orders depend on genus {orders:?}"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("|H1| = 3, 4, 1 for E_MINUS_3, E_MINUS_4, DISK at g = 3, 4, 5".into())
}

fn s5_page(config: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<String, String> {
    for g in [3, 4] {
        let l = lefschetz::preset_on(registry(config, g)?, Preset::S5Page).map_err(|e| format!("S5_PAGE(g={g}): {e}"))?;
        let chi = lefschetz::euler_characteristic(&l);
        ensure(chi == 5, || format!("S5_PAGE(g={g}): chi = {chi}"))?;
        let h = openbook::first_homology(&lefschetz::boundary_open_book(&l)).map_err(|e| e.to_string())?;
        ensure(h.is_trivial(), || format!("S5_PAGE(g={g}): H1 = {h}"))?;
    }
    Ok("chi = 5 and H1(boundary) = 0 at g = 3, 4".into())
}

fn chain_plus(r: &CurveRegistry, extra: ExtraCurve) -> Result<Vec<CurveClass>, String> {
    let mut alphabet = r.chain();
    alphabet.push(r.gamma(extra.index(r.genus())).map_err(|e| e.to_string())?.clone());
    Ok(alphabet)
}

fn spin_obstruction(config: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<String, String> {
    for g in [3, 4] {
        let r = registry(config, g)?;
        let even = chain_plus(&r, ExtraCurve::Even)?;
        let fixed = spin::fixed_forms(&even).map_err(|e| e.to_string())?;
        ensure(fixed.len() == 1, || format!("g={g}: {} forms fixed by chain + gamma{}", fixed.len(), 2 * g + 2))?;
        let cert = spin::non_generation_certificate(&even).map_err(|e| e.to_string())?;
        ensure(cert.as_ref().is_some_and(|c| c.replay() && c.fixed_form == fixed[0]), || {
            format!("g={g}: non-generation certificate missing or does not replay")
        })?;
        let odd = chain_plus(&r, ExtraCurve::Odd)?;
        let fixed = spin::fixed_forms(&odd).map_err(|e| e.to_string())?;
        ensure(fixed.is_empty(), || format!("g={g}: chain + gamma{} fixes {} forms", 2 * g + 1, fixed.len()))?;
    }
    Ok("chain + gamma(2g+2) fixes one form (certificate replays); chain + gamma(2g+1) fixes none, g = 3, 4".into())
}

fn orbit_partition(config: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<String, String> {
    let mut sizes = Vec::new();
    for g in 1..=3usize {
        let alphabet = spin::orbit_alphabet(&*registry(config, g)?).map_err(|e| e.to_string())?;
        let orbits = spin::orbit_partition(&alphabet).map_err(|e| e.to_string())?;
        ensure(orbits.len() == 2, || format!("g={g}: {} orbits", orbits.len()))?;
        let half = 1usize << (g - 1);
        let full = 1usize << g;
        let mut got: Vec<(usize, u8)> = Vec::new();
        for o in &orbits {
            let arfs: BTreeSet<u8> = o.iter().map(QuadraticForm::arf).collect();
            ensure(arfs.len() == 1, || format!("g={g}: orbit of size {} mixes Arf invariants", o.len()))?;
            got.push((o.len(), *arfs.iter().next().expect("non-empty orbit")));
        }
        got.sort_unstable();
        let want = vec![(half * (full - 1), 1), (half * (full + 1), 0)];
        ensure(got == want, || format!("g={g}: orbits {got:?}, expected {want:?}"))?;
        sizes.push(format!("{}/{}", want[1].0, want[0].0));
    }
    Ok(format!("two Arf-constant orbits of sizes {}", sizes.join(", ")))
}

fn fix_iff(config: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<String, String> {
    let mut checked = 0u64;
    for g in 1..=3 {
        let r = registry(config, g)?;
        for q in QuadraticForm::all(g) {
            for c in r.iter() {
                let value = q.evaluate_class(c).map_err(|e| e.to_string())?;
                for sign in [Sign::Positive, Sign::Negative] {
                    let w = TwistWord::new(r.clone(), vec![TwistLetter::new(c.name(), sign)]).map_err(|e| e.to_string())?;
                    let fixed = spin::pushforward(&q, &w).map_err(|e| e.to_string())? == q;
                    ensure(fixed == (value == config.stabilizing_value), || {
                        format!(
                            "g={g}, q={:?}, {}{sign}: fixed={fixed} but q(c)={value} (stabilizing value {})",
                            q.basis_values(),
                            c.name(),
                            config.stabilizing_value
                        )
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} single twists over g <= 3 fix q iff q(c) = {}", config.stabilizing_value))
}

fn random_word(rng: &mut ChaCha8Rng, r: &Arc<CurveRegistry>, names: &[String], max_len: usize) -> TwistWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let name = names.choose(rng).expect("non-empty alphabet").clone();
            TwistLetter::new(name, if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative })
        })
        .collect();
    TwistWord::new(r.clone(), letters).expect("names come from the registry")
}

fn transvections(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let registries: Vec<Arc<CurveRegistry>> = (1..=4).map(|g| registry(config, g)).collect::<Result<_, _>>()?;
    let names: Vec<Vec<String>> =
        registries.iter().map(|r| r.iter().map(|c| c.name().to_string()).collect()).collect();
    for i in 0..RANDOM_WORDS {
        let g = rng.gen_range(0..4);
        let w = random_word(rng, &registries[g], &names[g], MAX_WORD_LENGTH);
        let phi = mcg::word_action(&w).map_err(|e| e.to_string())?;
        ensure(mcg::is_symplectic(&phi).map_err(|e| e.to_string())?, || format!("word {i} ({w}) is not symplectic"))?;
    }
    for i in 0..CONJUGATION_PAIRS {
        let g = rng.gen_range(0..4);
        let w = random_word(rng, &registries[g], &names[g], MAX_WORD_LENGTH);
        let u = random_word(rng, &registries[g], &names[g], MAX_WORD_LENGTH / 2);
        let conj = w.conjugate_by(&u).map_err(|e| e.to_string())?;
        let h = |w: &TwistWord| openbook::first_homology(&OpenBookDescriptor::new(w.clone(), None)).map_err(|e| e.to_string());
        let (a, b) = (h(&w)?, h(&conj)?);
        ensure(a == b, || format!("pair {i}: coker(Phi-I) {a} vs {b} after conjugating {w} by {u}"))?;
    }
    Ok(format!("{RANDOM_WORDS} words symplectic; {CONJUGATION_PAIRS} conjugations preserve coker(Phi-I)"))
}

fn embedding_round_trips(config: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut mutants = 0;
    for target in EmbeddingTarget::ALL {
        for i in 0..WORDS_PER_TARGET {
            let g = rng.gen_range(3..=4);
            let r = registry(config, g)?;
            let fibration =
                lefschetz::preset_on(r.clone(), target.preset()).map_err(|e| format!("{target}: {e}"))?;
            let names: Vec<String> = fibration.cycles().iter().map(|c| c.curve.clone()).collect();
            let w = random_word(rng, &r, &names, MAX_CERTIFIED_LENGTH);
            let ob = OpenBookDescriptor::new(w, None);
            let cert = embedder::certify(&ob, target).map_err(|e| format!("{target} word {i}: {e}"))?;
            let report = embedder::verify(&cert);
            ensure(report.passed(), || format!("{target} word {i}: {}", report))?;

            let text = Manifest::new(Payload::Certificate(CertificateSpec::from_certificate(&cert))).to_canonical_string();
            let back = Manifest::parse(&text).and_then(|m| m.certificate()).map_err(|e| e.to_string())?;
            ensure(embedder::verify(&back).passed(), || format!("{target} word {i}: manifest round trip fails"))?;

            if !cert.path.is_empty() {
                let mut bad = cert.clone();
                let k = rng.gen_range(0..bad.path.len());
                bad.path.steps[k].loop_kind = bad.path.steps[k].loop_kind.flip();
                let r = embedder::verify(&bad);
                ensure(r.check("path-replay").is_some_and(|c| !c.passed), || {
                    format!("{target} word {i}: flipped loop {k} still verifies")
                })?;
                mutants += 1;
            }
            let mut bad = cert.clone();
            bad.contact = !bad.contact;
            ensure(!embedder::verify(&bad).passed(), || format!("{target} word {i}: flipped contact flag verifies"))?;
            mutants += 1;
        }
    }
    Ok(format!("{} certificates verify and round-trip; {mutants} mutants rejected", 4 * WORDS_PER_TARGET))
}

fn obstruction_calculus(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let z = obstruct::five_manifold_h2;
    for _ in 0..50 {
        let u = rng.gen_range(-5..=5i128);
        let e = PullbackMap::from_generator_image(z(), vec![u]).map_err(|e| e.to_string())?;
        let zero = CohomologyElement::multiple_of_generator(0);
        let c1m = rng.gen_range(-6..=6i128);
        let holds = obstruct::pullback_condition(&zero, &e, &CohomologyElement::new(z(), vec![c1m]).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(holds == (c1m == 0), || format!("c1(W)=0, e*(h)={u}, c1(M)={c1m}: condition {holds}"))?;
        let k = rng.gen_range(-4..=4i128);
        let two_k = CohomologyElement::multiple_of_generator(2 * k);
        let image = CohomologyElement::new(z(), vec![2 * k * u]).map_err(|e| e.to_string())?;
        ensure(obstruct::pullback_condition(&two_k, &e, &image).map_err(|e| e.to_string())?, || {
            format!("c1(W)={}h does not pull back to {}", 2 * k, 2 * k * u)
        })?;
    }
    let c = obstruct::s2s3_target_constraint(&[2]);
    ensure(c == TargetConstraint::Admissible([-1, 1].into()), || format!("witness 2 gives {c}"))?;
    ensure(obstruct::difference_class(2, 0) == Ok(1), || "d(2,0) != 1".into())?;
    ensure(obstruct::difference_class(-2, 0) == Ok(-1), || "d(-2,0) != -1".into())?;
    for odd in [-3, -1, 1, 3, 5] {
        ensure(obstruct::difference_class(odd, 0).is_err(), || format!("odd difference {odd} accepted"))?;
    }
    Ok("c1(W)=0 forces c1(M)=0; witness 2 gives k = +-1; d(+-2, 0) = +-1; odd differences rejected".into())
}

fn ledgers(_: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let ids = |l: &handle5::HandleLedger| {
        let mut idx: Vec<u8> = l.final_residue.iter().filter_map(|id| l.entry(id)).map(|e| e.index).collect();
        idx.sort_unstable();
        idx
    };
    for g in 0..=MAX_LEDGER_GENUS {
        let l = handle5::build_s5_ledger(g);
        let report = handle5::verify_ledger(&l);
        ensure(report.passed(), || format!("S5 ledger g={g}: {report}"))?;
        ensure(l.final_residue == ["H0", "H5"], || format!("S5 ledger g={g}: residue {:?}", l.final_residue))?;
        ensure(l.signed_count(&l.final_residue) == 0, || format!("S5 ledger g={g}: signed count"))?;
        let o: Vec<i64> = (0..g).map(|_| rng.gen_range(-9..=9)).collect();
        let l = handle5::build_s2s3_ledger(g, &o).map_err(|e| e.to_string())?;
        let report = handle5::verify_ledger(&l);
        ensure(report.passed(), || format!("S2xS3 ledger g={g}: {report}"))?;
        ensure(ids(&l) == LedgerTarget::S2xS3.residue_indices(), || format!("S2xS3 ledger g={g}: residue {:?}", l.final_residue))?;
        ensure(l.signed_count(&l.final_residue) == 0, || format!("S2xS3 ledger g={g}: signed count"))?;
    }
    for i in 0..RANDOM_OBSTRUCTIONS {
        let g = rng.gen_range(0..=MAX_LEDGER_GENUS);
        let o: Vec<i64> = (0..g).map(|_| rng.gen_range(-1000..=1000)).collect();
        let l = handle5::build_s2s3_ledger(g, &o).map_err(|e| e.to_string())?;
        let negated: Vec<i64> = o.iter().map(|x| -x).collect();
        ensure(l.corrections() == negated, || format!("sample {i}: k = {:?} for o = {o:?}", l.corrections()))?;
        ensure(handle5::verify_ledger(&l).passed(), || format!("sample {i}: ledger fails"))?;
    }
    Ok(format!(
        "ledgers verify for g <= {MAX_LEDGER_GENUS} with signed count 0; k = -o on {RANDOM_OBSTRUCTIONS} samples"
    ))
}

fn contact_verifier(_: &SuiteConfig, _: &mut ChaCha8Rng) -> Result<String, String> {
    let grid = GridSpec::default();
    let mut lines = Vec::new();
    for name in CollarFamily::NAMES {
        let family = CollarFamily::named(name).expect("built-in name");
        let coarse = contactcheck::collar_min_k(&family.sample(&grid).map_err(|e| e.to_string())?, &grid)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(coarse.coefficient_disagreement <= coarse.coefficient_tolerance, || {
            format!("{name}: disagreement {:e} > {:e}", coarse.coefficient_disagreement, coarse.coefficient_tolerance)
        })?;
        let fine_grid = grid.refined();
        let fine = contactcheck::collar_min_k(&family.sample(&fine_grid).map_err(|e| e.to_string())?, &fine_grid)
            .map_err(|e| format!("{name} refined: {e}"))?;
        let drift = (coarse.k_star - fine.k_star).abs() / fine.k_star.abs();
        ensure(drift <= REFINEMENT_TOLERANCE, || format!("{name}: k* {} -> {} ({:.3}%)", coarse.k_star, fine.k_star, 100.0 * drift))?;
        let p = contactcheck::verify_form_positive(coarse.k_star, &family.sample(&grid).map_err(|e| e.to_string())?, &grid)
            .map_err(|e| e.to_string())?;
        ensure(p.passed, || format!("{name}: k* + dB/dt reaches {:e}", p.min_value))?;
        lines.push(format!("{name} k*={:.6} ({:.3}%)", coarse.k_star, 100.0 * drift));
    }
    let h1 = RadialProfile::from_fn(1.0, 64, |r| 2.0 - r * r);
    let h2 = RadialProfile::from_fn(1.0, 64, |r| r * r);
    let good = contactcheck::binding_check(&h1, &h2).map_err(|e| e.to_string())?;
    ensure(good.passed, || format!("binding model h2 = r^2 fails: {:?}", good.violations))?;
    let reversed = contactcheck::binding_check(&h2, &h1).map_err(|e| e.to_string())?;
    ensure(!reversed.passed, || "reversed binding model passes".into())?;
    Ok(format!("{}; binding model passes, reversed fails", lines.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_override_drops_curves() {
        let cfg = SuiteConfig { unset: vec![ExtraCurve::Odd], ..SuiteConfig::default() };
        let r = cfg.registry(3).unwrap();
        assert!(!r.contains("gamma7"));
        assert!(r.contains("gamma8"));
    }

    #[test]
    fn cheap_criteria_pass() {
        let cfg = SuiteConfig::default();
        for id in [1, 2, 3, 4, 5, 8, 9, 10] {
            let r = run_criterion(&cfg, id).unwrap();
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn unset_odd_curve_fails_calibration_naming_presets() {
        let cfg = SuiteConfig { unset: vec![ExtraCurve::Odd], ..SuiteConfig::default() };
        let r = run_criterion(&cfg, 1).unwrap();
        assert!(!r.passed);
        assert!(r.detail.contains("E_MINUS_3") && !r.detail.contains("E_MINUS_4"), "{}", r.detail);
        let cfg = SuiteConfig { unset: vec![ExtraCurve::Odd, ExtraCurve::Even], ..SuiteConfig::default() };
        let r = run_criterion(&cfg, 1).unwrap();
        assert!(r.detail.contains("E_MINUS_3") && r.detail.contains("E_MINUS_4"), "{}", r.detail);
    }

    #[test]
    fn flipped_convention_fails_fix_iff() {
        let cfg = SuiteConfig { stabilizing_value: 0, ..SuiteConfig::default() };
        assert!(!run_criterion(&cfg, 5).unwrap().passed);
    }
}
