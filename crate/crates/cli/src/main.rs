//! `spunbook` command-line front end.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or manifest error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spunbook::algebra::{self, IntMatrix};
use spunbook::contactcheck::{self, CollarFamily, CollarProfile, GridSpec};
use spunbook::embedder::{self, EmbeddingTarget};
use spunbook::handle5::{self, LedgerTarget};
use spunbook::lefschetz::{self, Preset};
use spunbook::manifest::{CertificateSpec, CollarSpec, Manifest, ObstructionInstance, Payload};
use spunbook::obstruct::{self, TargetConstraint};
use spunbook::openbook;
use spunbook::spin::{self, QuadraticForm};
use spunbook::suite::{self, SuiteConfig, DEFAULT_SEED};
use spunbook::surface::{standard_registry, CurveClass, CurveRegistry};

/// Environment variable overriding the fixture directory.
const FIXTURES_ENV: &str = "SPUNBOOK_FIXTURES";

#[derive(Parser)]
#[command(name = "spunbook", version, about = "Open books, spun embeddings and their obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of an integer matrix given as rows `1,2;3,4`.
    Snf {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// First homology of an open book, from a manifest or a preset's boundary.
    H1Openbook {
        #[arg(long, conflicts_with_all = ["preset", "genus"])]
        manifest: Option<PathBuf>,
        #[arg(long, requires = "genus")]
        preset: Option<Preset>,
        #[arg(long)]
        genus: Option<usize>,
    },
    /// Arf invariant of a form given by its values on `a1,b1,...,ag,bg`.
    Arf {
        #[arg(long)]
        form: String,
    },
    /// Orbits of spin structures under the chain plus `gamma(2g+1)`.
    Orbit {
        #[arg(long)]
        genus: usize,
        /// Report only the orbit of this form.
        #[arg(long)]
        form: Option<String>,
    },
    /// Forms fixed by every twist in an alphabet.
    FixedForms {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        curves: Vec<String>,
    },
    /// Replayable certificate that an alphabet fixes a spin structure.
    CertifyNongeneration {
        #[arg(long)]
        genus: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        curves: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a spun embedding of an open book into a target.
    Embed {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        target: EmbeddingTarget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate manifest.
    VerifyCert {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Which targets an open book's monodromy alphabet admits.
    Targets {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Chern-class obstruction instance from a manifest.
    ObstructChern {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Handle ledger embedding a genus-g Heegaard split 3-manifold in S5.
    LedgerS5 {
        #[arg(long)]
        genus: usize,
    },
    /// Handle ledger for S2xS3 with the given obstruction integers.
    LedgerS2s3 {
        #[arg(long, required_unless_present = "manifest")]
        genus: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        obstructions: Vec<i64>,
        #[arg(long, conflicts_with_all = ["genus", "obstructions"])]
        manifest: Option<PathBuf>,
    },
    /// Contact condition on a collar profile, or the binding model.
    ContactCheck {
        #[arg(long, conflicts_with = "manifest")]
        family: Option<String>,
        /// Grid as `TxS`, e.g. `65x65`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Check positivity at this `k` instead of only reporting `k*`.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
    },
    /// Run every acceptance criterion and the fixture round trips.
    PaperVerify {
        /// Hexadecimal seed for the randomized criteria.
        #[arg(long)]
        seed: Option<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Manifest(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Manifest(m) => write!(f, "manifest error: {m}"),
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn manifest_err(e: impl ToString) -> CliError {
    CliError::Manifest(e.to_string())
}

/// Report text and whether the checks passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { text, passed: true }
    }

    fn judged(text: String, passed: bool) -> Self {
        Outcome { text, passed }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn fixtures_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
}

/// Relative paths that do not exist are looked up in the fixture directory.
fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        let candidate = fixtures_dir().join(path);
        if candidate.exists() {
            return candidate;
        }
    }
    path.to_path_buf()
}

fn load(path: &Path) -> Result<Manifest, CliError> {
    let resolved = resolve(path);
    let text = std::fs::read_to_string(&resolved).map_err(|e| manifest_err(format!("{}: {e}", resolved.display())))?;
    Manifest::parse(&text).map_err(|e| manifest_err(format!("{}: {e}", resolved.display())))
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| usage(format!("invalid {what} entry `{x}`"))))
        .collect()
}

fn parse_form(s: &str) -> Result<QuadraticForm, CliError> {
    let values: Vec<u8> = parse_list(s, "form")?;
    if values.is_empty() || !values.len().is_multiple_of(2) {
        return Err(usage(format!("a form needs 2g values, got {}", values.len())));
    }
    QuadraticForm::new(values.len() / 2, &values).map_err(usage)
}

fn alphabet(genus: usize, names: &[String]) -> Result<Vec<CurveClass>, CliError> {
    let r = standard_registry(genus).map_err(usage)?;
    names.iter().map(|n| r.get(n).cloned().map_err(usage)).collect()
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Snf { matrix } => snf(&matrix),
        Command::H1Openbook { manifest, preset, genus } => h1(manifest, preset, genus),
        Command::Arf { form } => {
            let q = parse_form(&form)?;
            Ok(Outcome::pass(format!("{q}\nArf = {}\n", q.arf())))
        }
        Command::Orbit { genus, form } => orbit(genus, form),
        Command::FixedForms { genus, curves } => {
            let forms = spin::fixed_forms(&alphabet(genus, &curves)?).map_err(usage)?;
            let mut text = format!("{} fixed form(s) under {{{}}}\n", forms.len(), curves.join(", "));
            for q in &forms {
                let _ = writeln!(text, "{q}  Arf = {}", q.arf());
            }
            Ok(Outcome::pass(text))
        }
        Command::CertifyNongeneration { genus, curves, out } => {
            let cert = spin::non_generation_certificate(&alphabet(genus, &curves)?).map_err(usage)?;
            match cert {
                None => Ok(Outcome::judged(
                    format!("no spin structure is fixed by {{{}}}: no certificate\n", curves.join(", ")),
                    false,
                )),
                Some(cert) => {
                    let json = serde_json::to_string_pretty(&cert).expect("certificate serializes") + "\n";
                    let replay = cert.replay();
                    let mut text = format!(
                        "theorem: spin-obstruction-non-generation\nfixed form {} (Arf {}), replay {}\n",
                        cert.fixed_form,
                        cert.arf,
                        if replay { "PASS" } else { "FAIL" }
                    );
                    match out {
                        Some(path) => {
                            write_out(&path, &json)?;
                            let _ = writeln!(text, "certificate written to {}", path.display());
                        }
                        None => text.push_str(&json),
                    }
                    Ok(Outcome::judged(text, replay))
                }
            }
        }
        Command::Embed { manifest, target, out } => embed(&manifest, target, out),
        Command::VerifyCert { manifest } => {
            let cert = load(&manifest)?.certificate().map_err(manifest_err)?;
            let report = embedder::verify(&cert);
            let text = format!("theorem: {}\ntarget: {}\n{report}", cert.theorem_tag, cert.target);
            Ok(Outcome::judged(text, report.passed()))
        }
        Command::Targets { manifest } => {
            let ob = load(&manifest)?.open_book().map_err(manifest_err)?;
            let survey = embedder::applicable_targets(&ob);
            let mut text = format!("{ob}\n");
            for a in &survey.assessments {
                let _ = writeln!(
                    text,
                    "{:<11} {:<10} {}  [{}]",
                    a.target.name(),
                    if a.applicable { "applicable" } else { "rejected" },
                    a.reason,
                    a.theorem_tag
                );
            }
            if let Some(why) = survey.explanation() {
                let _ = writeln!(text, "{why}");
            }
            Ok(Outcome::pass(text))
        }
        Command::ObstructChern { manifest } => obstruct_chern(&manifest),
        Command::LedgerS5 { genus } => ledger_outcome(handle5::build_s5_ledger(genus)),
        Command::LedgerS2s3 { genus, obstructions, manifest } => {
            let (target, genus, obstructions) = match manifest {
                Some(path) => match load(&path)?.payload {
                    Payload::LedgerRequest(r) => (r.target, r.genus, r.obstructions),
                    other => return Err(manifest_err(format!("expected a ledger_request manifest, found {}", other.kind()))),
                },
                None => (LedgerTarget::S2xS3, genus.expect("clap requires genus"), obstructions),
            };
            let ledger = match target {
                LedgerTarget::S5 => handle5::build_s5_ledger(genus),
                LedgerTarget::S2xS3 => handle5::build_s2s3_ledger(genus, &obstructions).map_err(usage)?,
            };
            ledger_outcome(ledger)
        }
        Command::ContactCheck { family, grid, manifest, k } => contact_check(family, grid, manifest, k),
        Command::PaperVerify { seed } => paper_verify(seed),
    }
}

fn snf(matrix: &str) -> Result<Outcome, CliError> {
    let rows: Vec<Vec<i128>> = matrix
        .split(';')
        .map(|row| parse_list(row, "matrix"))
        .collect::<Result<_, _>>()?;
    let m = IntMatrix::from_rows(rows).map_err(usage)?;
    let d = algebra::smith_normal_form(&m).map_err(usage)?;
    let coker = algebra::cokernel_presentation(&m).map_err(usage)?;
    Ok(Outcome::pass(format!(
        "invariant factors: {:?}\nrank: {}\ncokernel: {coker}\n",
        d.invariant_factors(),
        d.rank()
    )))
}

fn h1(manifest: Option<PathBuf>, preset: Option<Preset>, genus: Option<usize>) -> Result<Outcome, CliError> {
    let ob = match (manifest, preset, genus) {
        (Some(path), _, _) => load(&path)?.open_book().map_err(manifest_err)?,
        (None, Some(p), Some(g)) => lefschetz::boundary_open_book(&lefschetz::preset(p, g).map_err(usage)?),
        _ => return Err(usage("give --manifest, or --preset with --genus")),
    };
    let h = openbook::first_homology(&ob).map_err(usage)?;
    let mut text = String::new();
    if let Some(w) = ob.registry().warning() {
        let _ = writeln!(text, "warning: {w}");
    }
    let _ = writeln!(text, "{ob}\nH₁ = {h}");
    Ok(Outcome::pass(text))
}

fn orbit(genus: usize, form: Option<String>) -> Result<Outcome, CliError> {
    let registry: CurveRegistry = standard_registry(genus).map_err(usage)?;
    let alphabet = spin::orbit_alphabet(&registry).map_err(usage)?;
    let names: Vec<&str> = alphabet.iter().map(CurveClass::name).collect();
    let mut text = format!("alphabet: {{{}}}\n", names.join(", "));
    match form {
        Some(f) => {
            let q = parse_form(&f)?;
            if q.genus() != genus {
                return Err(usage(format!("form has genus {}, expected {genus}", q.genus())));
            }
            let o = spin::orbit(&q, &alphabet).map_err(usage)?;
            let _ = writeln!(text, "orbit of {q}: {} forms, Arf = {}", o.len(), q.arf());
        }
        None => {
            for o in spin::orbit_partition(&alphabet).map_err(usage)? {
                let first = o.iter().next().expect("orbits are non-empty");
                let _ = writeln!(text, "orbit of size {} (Arf = {}), least element {first}", o.len(), first.arf());
            }
        }
    }
    Ok(Outcome::pass(text))
}

fn embed(manifest: &Path, target: EmbeddingTarget, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let ob = load(manifest)?.open_book().map_err(manifest_err)?;
    let cert = match embedder::certify(&ob, target) {
        Ok(c) => c,
        Err(e @ embedder::EmbedError::AlphabetViolation { .. }) => {
            return Ok(Outcome::judged(format!("{ob}\nno certificate: {e}\n"), false));
        }
        Err(e) => return Err(usage(e)),
    };
    let report = embedder::verify(&cert);
    let json = Manifest::new(Payload::Certificate(CertificateSpec::from_certificate(&cert))).to_canonical_string();
    let mut text = format!("theorem: {}\ntarget: {} via {}\n{report}", cert.theorem_tag, target, cert.target_fibration);
    match out {
        Some(path) => {
            write_out(&path, &json)?;
            let _ = writeln!(text, "certificate written to {}", path.display());
        }
        None => text.push_str(&json),
    }
    Ok(Outcome::judged(text, report.passed()))
}

fn obstruct_chern(manifest: &Path) -> Result<Outcome, CliError> {
    let instance = match load(manifest)?.payload {
        Payload::Obstruction(i) => i,
        other => return Err(manifest_err(format!("expected an obstruction manifest, found {}", other.kind()))),
    };
    match instance {
        ObstructionInstance::Pullback { c1_w, e_star, c1_m } => {
            let v = obstruct::pullback_verdict(&c1_w, &e_star, &c1_m).map_err(manifest_err)?;
            let text = format!("theorem: {}\n{}: {}\n", v.theorem_tag, if v.holds { "PASS" } else { "FAIL" }, v.reason);
            Ok(Outcome::judged(text, v.holds))
        }
        ObstructionInstance::S2s3Target { witnesses } => {
            let c = obstruct::s2s3_target_constraint(&witnesses);
            let mut text = format!("theorem: {}\nwitnesses {witnesses:?}: {c}\n", obstruct::S2S3_TAG);
            let passed = match &c {
                TargetConstraint::Inconclusive => true,
                TargetConstraint::Admissible(ks) => !ks.is_empty(),
            };
            if !passed {
                text.push_str("no contact structure on S2xS3 admits all witnesses\n");
            }
            Ok(Outcome::judged(text, passed))
        }
        ObstructionInstance::Difference { c1_eta, c1_eta_prime } => {
            let tag = obstruct::DIFFERENCE_TAG;
            Ok(match obstruct::difference_class(c1_eta, c1_eta_prime) {
                Ok(d) => Outcome::pass(format!("theorem: {tag}\nd = ({c1_eta} - {c1_eta_prime})/2 = {d}\n")),
                Err(e) => Outcome::judged(format!("theorem: {tag}\nFAIL: {e}\n"), false),
            })
        }
    }
}

fn ledger_outcome(ledger: handle5::HandleLedger) -> Result<Outcome, CliError> {
    let report = handle5::verify_ledger(&ledger);
    Ok(Outcome::judged(format!("{}{report}", ledger.render()), report.passed()))
}

fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let (t, s) = s.split_once(['x', 'X']).ok_or_else(|| usage(format!("grid `{s}` is not TxS")))?;
    let t = t.parse().map_err(|_| usage(format!("invalid t samples `{t}`")))?;
    let s = s.parse().map_err(|_| usage(format!("invalid s samples `{s}`")))?;
    GridSpec::new(t, s).map_err(usage)
}

fn contact_check(
    family: Option<String>,
    grid: Option<String>,
    manifest: Option<PathBuf>,
    k: Option<f64>,
) -> Result<Outcome, CliError> {
    let cli_grid = grid.as_deref().map(parse_grid).transpose()?;
    let spec = match (family, manifest) {
        (_, Some(path)) => match load(&path)?.payload {
            Payload::CollarProfile(spec) => spec,
            other => return Err(manifest_err(format!("expected a collar_profile manifest, found {}", other.kind()))),
        },
        (family, None) => CollarSpec::Named { name: family.unwrap_or_else(|| "circle".into()), grid: None },
    };
    let (profile, grid): (CollarProfile, GridSpec) = match spec {
        CollarSpec::Named { name, grid } => {
            let f = CollarFamily::named(&name)
                .ok_or_else(|| usage(format!("unknown family `{name}` (expected {})", CollarFamily::NAMES.join(", "))))?;
            let g = cli_grid.or(grid).unwrap_or_default();
            (f.sample(&g).map_err(usage)?, g)
        }
        CollarSpec::Family { family, grid } => {
            let g = cli_grid.or(grid).unwrap_or_default();
            (family.sample(&g).map_err(manifest_err)?, g)
        }
        CollarSpec::Sampled { s_min, s_max, radius, angle } => {
            let p = CollarProfile::sampled(s_min, s_max, radius, angle).map_err(manifest_err)?;
            let g = GridSpec::new(p.t_samples(), p.s_samples()).map_err(manifest_err)?;
            (p, g)
        }
        CollarSpec::Binding { h1, h2 } => {
            let r = contactcheck::binding_check(&h1, &h2).map_err(manifest_err)?;
            let mut text = format!(
                "theorem: binding-contact-condition\nmin(h1 h2' - h2 h1') = {:.6e} at r = {:.4}\n",
                r.min_coefficient, r.min_r
            );
            for v in &r.violations {
                let _ = writeln!(text, "violation: {v}");
            }
            let _ = writeln!(text, "{}", if r.passed { "PASS" } else { "FAIL" });
            return Ok(Outcome::judged(text, r.passed));
        }
    };
    let report = match contactcheck::collar_min_k(&profile, &grid) {
        Ok(r) => r,
        Err(e @ contactcheck::ContactError::GridTooCoarse { .. }) => {
            return Ok(Outcome::judged(format!("FAIL: {e}\n"), false));
        }
        Err(e) => return Err(usage(e)),
    };
    let mut text = format!(
        "theorem: collar-contact-condition\ngrid {}x{}\nmin dB/dt = {:.9} at (t, s) = ({:.4}, {:.4})\nfd error estimate = {:.3e}\nmargin = {:.3e}\nk* = {:.9}\ncoefficient disagreement {:.3e} <= {:.3e}\n",
        grid.t_samples,
        grid.s_samples,
        report.grid_min,
        report.min_t,
        report.min_s,
        report.fd_error_estimate,
        report.margin,
        report.k_star,
        report.coefficient_disagreement,
        report.coefficient_tolerance
    );
    let passed = match k {
        None => true,
        Some(k) => {
            let p = contactcheck::verify_form_positive(k, &profile, &grid).map_err(usage)?;
            let _ = writeln!(
                text,
                "k = {k}: min(k + dB/dt) = {:.6e} at (t, s) = ({:.4}, {:.4}) {}",
                p.min_value,
                p.min_t,
                p.min_s,
                if p.passed { "PASS" } else { "FAIL" }
            );
            p.passed
        }
    };
    Ok(Outcome::judged(text, passed))
}

/// Bundled fixtures must parse and already be in canonical form.
fn fixture_round_trips() -> (bool, String) {
    let dir = fixtures_dir();
    let entries = match std::fs::read_dir(&dir) {
        Ok(e) => e,
        Err(e) => return (false, format!("{}: {e}", dir.display())),
    };
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut problems = Vec::new();
    for p in &paths {
        match std::fs::read_to_string(p).map_err(|e| e.to_string()).and_then(|t| {
            let m = Manifest::parse(&t).map_err(|e| e.to_string())?;
            Ok(m.to_canonical_string() == t)
        }) {
            Ok(true) => {}
            Ok(false) => problems.push(format!("{} is not canonical", p.display())),
            Err(e) => problems.push(format!("{}: {e}", p.display())),
        }
    }
    if paths.is_empty() {
        problems.push(format!("no fixtures in {}", dir.display()));
    }
    if problems.is_empty() {
        (true, format!("{} manifests round-trip canonically", paths.len()))
    } else {
        (false, problems.join("; "))
    }
}

fn paper_verify(seed: Option<String>) -> Result<Outcome, CliError> {
    let seed = match seed {
        Some(s) => u64::from_str_radix(s.trim_start_matches("0x"), 16).map_err(|_| usage(format!("invalid seed `{s}`")))?,
        None => DEFAULT_SEED,
    };
    let report = suite::run_suite(&SuiteConfig::with_seed(seed));
    let (fixtures_ok, detail) = fixture_round_trips();
    let text = format!("{report}\n[{}] fixtures: {detail}\n", if fixtures_ok { "PASS" } else { "FAIL" });
    Ok(Outcome::judged(text, report.passed() && fixtures_ok))
}
