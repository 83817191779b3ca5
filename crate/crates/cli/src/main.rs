//! Command-line front end: every verification and enumeration of the
//! workbench as a subcommand emitting a JSON report. Exit code 0 means the
//! report verdict is true, 1 means it is false, 2 means the invocation
//! itself was unusable.

use clap::{Parser, Subcommand};
use germoid::action::{FiniteAction, ShiftAction};
use germoid::bisect::{join_closed_correspondence, reconstruction_iso, BisectError, FiniteGroupoid};
use germoid::clopen::Point;
use germoid::germ::{
    enumerate_correspondence, shift_closedness_report, shift_germ, ShiftGerm,
    ShiftSubsemigroup,
};
use germoid::isg::InverseSemigroup;
use germoid::polycyclic::{classify, Classification, PolyElement};
use germoid::report::Report;
use germoid::selftest;
use germoid::spectrum::{orthogonal_family, spectrum_counts, verify_characterization};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "germoid", version, about = "exact inverse-semigroup and groupoid workbench")]
struct Cli {
    /// Pretty-print the JSON report
    #[arg(long, global = true)]
    pretty: bool,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trial count for randomized checks
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an inverse semigroup table document
    ValidateSemigroup { file: PathBuf },
    /// Enumerate the subsemigroup/subgroupoid correspondence of a finite action
    Correspondence { file: PathBuf },
    /// Classify the join closure of the diagonal part plus generators
    ClassifyPn {
        #[arg(long)]
        n: u8,
        /// Comma-separated elements in mu/nu syntax, e.g. "1/e,11/2"
        #[arg(long)]
        gens: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Three-way closedness report for a symbolic wide subsemigroup
    Closedness {
        #[arg(long)]
        n: u8,
        /// Either "Pnm:m" or "gens:mu/nu,..."
        #[arg(long)]
        subsemigroup: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Randomized cover-criterion trials over cylinder ideals
    CoverLemma {
        #[arg(long, default_value_t = 2)]
        n: u8,
    },
    /// Character counts of a semilattice or an orthogonal family
    Spectrum {
        /// Built-in family name; only "orthogonal" is known
        #[arg(long)]
        family: Option<String>,
        /// Truncation size of the family
        #[arg(long = "N")]
        n: Option<usize>,
        /// Adjoin a unit to the family
        #[arg(long)]
        with_unit: bool,
        /// Load the semilattice from a table document instead
        #[arg(long)]
        semilattice: Option<PathBuf>,
    },
    /// Verify the point-to-ultracharacter identification of a finite action
    Characterize { file: PathBuf },
    /// Rebuild a groupoid from its bisection monoid acting on the units
    Reconstruct { file: PathBuf },
    /// Join-closed subsemigroups of the bisection monoid vs wide subgroupoids
    BisectCorrespondence { file: PathBuf },
    /// Run the full verification suite
    Selftest,
}

enum Failure {
    /// Unusable invocation or unreadable input: exit code 2.
    Usage(String),
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_action(path: &Path) -> Result<FiniteAction, Failure> {
    let text = read_file(path)?;
    match FiniteAction::from_json(&text) {
        Ok(a) => Ok(a),
        Err(germoid::action::ActionError::Json(e)) => {
            Err(Failure::Usage(format!("malformed action document: {e}")))
        }
        Err(e) => Err(Failure::Usage(format!("invalid action: {e}"))),
    }
}

fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, Failure> {
    let text = read_file(path)?;
    match FiniteGroupoid::from_json(&text) {
        Ok(g) => Ok(g),
        Err(BisectError::Json(e)) => {
            Err(Failure::Usage(format!("malformed groupoid document: {e}")))
        }
        Err(e) => Err(Failure::Usage(format!("invalid groupoid: {e}"))),
    }
}

fn parse_gens(n: u8, text: &str) -> Result<Vec<PolyElement>, Failure> {
    text.split(',')
        .filter(|part| !part.is_empty())
        .map(|part| {
            PolyElement::parse(n, part.trim())
                .map_err(|e| Failure::Usage(format!("bad generator {part:?}: {e}")))
        })
        .collect()
}

fn seeded_germ_samples(n: u8, seed: u64, count: usize) -> Vec<ShiftGerm> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let beta = ShiftAction::new(n);
    (0..count)
        .map(|_| {
            let word = |rng: &mut rand_chacha::ChaCha8Rng, min: usize, max: usize| {
                let len = rng.random_range(min..=max);
                germoid::clopen::Word::new(n, (0..len).map(|_| rng.random_range(1..=n)).collect())
                    .expect("letters in range")
            };
            let mu = word(&mut rng, 0, 3);
            let nu = word(&mut rng, 0, 3);
            let pre = nu.concat(&word(&mut rng, 0, 2));
            let period = word(&mut rng, 1, 3);
            let x = Point::new(n, pre.letters().to_vec(), period.letters().to_vec())
                .expect("valid point");
            shift_germ(&beta, &PolyElement::Pair(mu, nu), &x).expect("x lies in the domain")
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let command_echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match &cli.command {
        Command::ValidateSemigroup { file } => {
            let text = read_file(file)?;
            let mut report = Report::new(command_echo, "inverse semigroup table validation")
                .instance(file.display().to_string());
            match InverseSemigroup::from_json(&text) {
                Ok(sg) => {
                    report.count("elements", sg.len() as i64);
                    report.count("idempotents", sg.idempotents().count() as i64);
                    report.check("table is an inverse semigroup with zero", true, "");
                    let round = InverseSemigroup::from_json(&sg.to_json())
                        .map(|back| back.to_json() == sg.to_json())
                        .unwrap_or(false);
                    report.check("save/load round trip is byte-exact", round, "");
                }
                Err(germoid::isg::SemigroupError::Json(e)) => {
                    return Err(Failure::Usage(format!("malformed table document: {e}")))
                }
                Err(e) => report.check("table is an inverse semigroup with zero", false, e.to_string()),
            }
            Ok(report)
        }

        Command::Correspondence { file } => {
            let action = load_action(file)?;
            let mut report = Report::new(command_echo, "correspondence between join-closed wide subsemigroups and open wide subgroupoids")
                .instance(file.display().to_string());
            match enumerate_correspondence(&action) {
                Ok(r) => {
                    report.count("subgroupoids", r.subgroupoids as i64);
                    report.count("subsemigroups", r.subsemigroups as i64);
                    report.check("counts equal", r.subgroupoids == r.subsemigroups, "");
                    report.check("subsemigroup round trips", r.semigroup_round_trips, "");
                    report.check("subgroupoid round trips", r.groupoid_round_trips, "");
                    report.check("maps are mutually inverse bijections", r.bijection, "");
                }
                Err(e) => report.check("hypotheses hold", false, e.to_string()),
            }
            Ok(report)
        }

        Command::ClassifyPn { n, gens, bound } => {
            let generators = parse_gens(*n, gens)?;
            let mut report = Report::new(command_echo, "classification of join-closed subsemigroups over the diagonal part")
                .instance(format!("n={n} gens={gens}"))
                .truncation(*bound);
            match classify(*n, &generators, *bound) {
                Ok(Classification::Graded(m)) => {
                    report.count("m", m as i64);
                    report.check("closure equals the graded subsemigroup", true, format!("m={m}"));
                }
                Ok(Classification::NotProper) => {
                    report.check("closure equals a graded subsemigroup", false, "closure is not graded");
                }
                Err(e) => report.check("closure stabilizes at this bound", false, e.to_string()),
            }
            Ok(report)
        }

        Command::Closedness { n, subsemigroup, bound } => {
            let t = if let Some(m) = subsemigroup.strip_prefix("Pnm:") {
                let m: u32 = m
                    .parse()
                    .map_err(|_| Failure::Usage(format!("bad modulus {m:?}")))?;
                ShiftSubsemigroup::graded(*n, m)
            } else if let Some(g) = subsemigroup.strip_prefix("gens:") {
                let generators = parse_gens(*n, g)?;
                ShiftSubsemigroup::closure(*n, generators, *bound)
                    .map_err(|e| Failure::Usage(format!("closure failed: {e}")))?
            } else {
                return Err(Failure::Usage(
                    "expected --subsemigroup Pnm:m or gens:mu/nu,...".into(),
                ));
            };
            let beta = ShiftAction::new(*n);
            let samples = seeded_germ_samples(*n, cli.seed, 20);
            let mut report = Report::new(command_echo, "closedness of the subgroupoid of a wide subsemigroup")
                .instance(t.describe())
                .truncation(*bound)
                .seeded(cli.seed, 20);
            match shift_closedness_report(&beta, &t, *bound, &samples) {
                Ok(r) => {
                    report.check("restriction domains relatively closed", r.cases.iter().all(|c| c.domain_relatively_closed), "");
                    report.check("restriction ideals have finite covers", r.cases.iter().all(|c| c.has_finite_cover), "");
                    report.check("cover criterion agrees with domains", r.cases.iter().all(|c| c.cover_lemma_agrees), "");
                    if let Some(agrees) = r.cocycle_preimage_agrees {
                        report.check("subgroupoid is the cocycle preimage", agrees, "");
                    }
                    report.check("membership decided exactly", r.exact, if r.exact { "".into() } else { format!("up to bound {bound}") });
                }
                Err(e) => report.check("hypotheses hold", false, e.to_string()),
            }
            Ok(report)
        }

        Command::CoverLemma { n } => {
            let (agreed, total) = selftest::cover_trials(*n, cli.seed, cli.trials);
            let mut report = Report::new(command_echo, "cover criterion for cylinder ideals")
                .instance(format!("random cylinder ideals over {n} letters"))
                .seeded(cli.seed, cli.trials);
            report.count("agreed", agreed as i64);
            report.check(
                "combinatorial cover test agrees with domain union",
                agreed == total,
                format!("{agreed}/{total}"),
            );
            Ok(report)
        }

        Command::Spectrum { family, n, with_unit, semilattice } => {
            let mut report = Report::new(command_echo, "characters, ultracharacters and tight characters");
            let sg = match (family, semilattice) {
                (Some(name), None) => {
                    if name != "orthogonal" {
                        return Err(Failure::Usage(format!("unknown family {name:?}")));
                    }
                    let k = n.ok_or_else(|| Failure::Usage("--family needs --N".into()))?;
                    report = report.instance(format!(
                        "orthogonal family, N={k}{}",
                        if *with_unit { ", with unit" } else { "" }
                    ));
                    orthogonal_family(k, *with_unit)
                }
                (None, Some(path)) => {
                    let text = read_file(path)?;
                    let sg = match InverseSemigroup::from_json(&text) {
                        Ok(sg) => sg,
                        Err(germoid::isg::SemigroupError::Json(e)) => {
                            return Err(Failure::Usage(format!("malformed table document: {e}")))
                        }
                        Err(e) => return Err(Failure::Usage(format!("invalid table: {e}"))),
                    };
                    if !sg.is_semilattice() {
                        let mut r = report.instance(path.display().to_string());
                        r.check("input is a semilattice", false, "non-idempotent element present");
                        return Ok(r);
                    }
                    report = report.instance(path.display().to_string());
                    sg
                }
                _ => {
                    return Err(Failure::Usage(
                        "use exactly one of --family or --semilattice".into(),
                    ))
                }
            };
            match spectrum_counts(&sg) {
                Ok(c) => {
                    report.count("characters", c.characters as i64);
                    report.count("ultra", c.ultra as i64);
                    report.count("tight", c.tight as i64);
                    report.check("tight characters equal ultracharacters", c.tight_equals_ultra, "finite spectra are discrete");
                }
                Err(e) => report.check("character space enumerable", false, e.to_string()),
            }
            Ok(report)
        }

        Command::Characterize { file } => {
            let action = load_action(file)?;
            let mut report = Report::new(command_echo, "identification of the space with the ultracharacter spectrum")
                .instance(file.display().to_string());
            match verify_characterization(&action) {
                Ok(r) => {
                    report.count("points", r.points as i64);
                    report.count("ultracharacters", r.ultracharacters as i64);
                    report.check("point map is a bijection onto ultracharacters", r.point_map_bijective, "");
                    report.check("idempotent domains carried onto spectral domains", r.domains_match, "");
                    report.check("ultracharacters invariant under the spectral action", r.spectrum_invariant, "");
                    report.check("induced germ map is an isomorphism", r.germ_map_well_defined && r.germ_map_bijective && r.germ_map_multiplicative, "");
                }
                Err(e) => report.check("hypotheses hold", false, e.to_string()),
            }
            Ok(report)
        }

        Command::Reconstruct { file } => {
            let groupoid = load_groupoid(file)?;
            let mut report = Report::new(command_echo, "reconstruction of a groupoid from its compact bisections")
                .instance(file.display().to_string());
            match reconstruction_iso(&groupoid) {
                Ok(r) => {
                    report.count("groupoid_size", r.groupoid_size as i64);
                    report.count("bisections", r.bisections as i64);
                    report.count("germ_groupoid_size", r.germ_groupoid_size as i64);
                    report.check("translation action strongly tight", r.translation_strongly_tight, "");
                    report.check("germ independent of enclosing bisection", r.choice_independent, "");
                    report.check("arrow/germ maps mutually inverse", r.mutually_inverse, "");
                    report.check("isomorphism preserves products, inverses, units", r.multiplicative && r.preserves_inverses && r.preserves_units, "");
                }
                Err(e) => report.check("bisection monoid enumerable", false, e.to_string()),
            }
            Ok(report)
        }

        Command::BisectCorrespondence { file } => {
            let groupoid = load_groupoid(file)?;
            let mut report = Report::new(command_echo, "join-closed wide subsemigroups of the bisection monoid vs wide subgroupoids")
                .instance(file.display().to_string());
            match join_closed_correspondence(&groupoid) {
                Ok(r) => {
                    report.count("wide_subsemigroups", r.wide_subsemigroups as i64);
                    report.count("join_closed", r.join_closed as i64);
                    report.count("wide_subgroupoids", r.wide_subgroupoids as i64);
                    report.check("join-closed agrees with action join-closed", r.lemma_agreement, "");
                    report.check("union map is a bijection onto subgroupoids", r.union_map_bijective, "");
                    report.check("round trips are the identity", r.round_trips, "");
                }
                Err(e) => report.check("enumeration feasible", false, e.to_string()),
            }
            Ok(report)
        }

        Command::Selftest => {
            let suite = selftest::run_all(cli.seed, cli.trials);
            let mut report = Report::new(command_echo, "full verification suite")
                .seeded(cli.seed, cli.trials);
            for c in &suite.criteria {
                report.check(format!("{:02} {}", c.id, c.name), c.passed, c.details.clone());
            }
            report.count("criteria", suite.criteria.len() as i64);
            Ok(report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            report.wall_ms = start.elapsed().as_millis() as u64;
            for check in &report.checks {
                eprintln!(
                    "{} {}{}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    if check.note.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", check.note)
                    }
                );
            }
            println!("{}", report.to_json(cli.pretty));
            if report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

