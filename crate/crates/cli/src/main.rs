//! `rcat`: command-line checks for finite restriction categories,
//! M-categories and (restriction) presheaves.
//!
//! Exit codes: 0 when every requested check passes (not-applicable counts as
//! passing), 1 when a check fails, 2 on malformed input or usage errors.

mod fixtures;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rcat_core::cocheck::{check_cocompleteness_conditions, check_m_extensive, DEFAULT_SHAPE_BOUND};
use rcat_core::equiv::{cockett_lack_check, default_family, verify_equivalence};
use rcat_core::error::{Error, Result};
use rcat_core::fincat::FinCat;
use rcat_core::format::{BaseRef, CategoryFile, FamilyFile, LoadedCategory, PresheafFile};
use rcat_core::mcat::{check_msystem, mtotal, MSystem, Par};
use rcat_core::presheaf::{sigma_classifier, yoneda};
use rcat_core::report::CheckReport;
use rcat_core::restriction::{mutation_survives, restriction_mutations, RestrCat};
use rcat_core::rpsh::{infer_restriction_structure, yoneda_r};
use rcat_core::splitting::kr;

#[derive(Parser)]
#[command(
    name = "rcat",
    version,
    about = "Exhaustive checks for finite restriction categories and presheaves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest diagram shape, in objects, for colimit checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SHAPE_BOUND)]
    shape_bound: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Category inputs are file paths or `builtin:<name>`.
#[derive(Subcommand)]
enum Command {
    /// Check category laws and any restriction structure or system of monics.
    Check {
        input: String,
        /// Also try this many random single-entry mutations and report survivors.
        #[arg(long, default_value_t = 0)]
        mutations: usize,
    },
    /// Split the restriction idempotents: emit Kr(X).
    Kr { input: String },
    /// Emit the partial-map category of an M-category.
    Par { input: String },
    /// Emit the total maps of a split restriction category with restriction monics.
    Mtotal { input: String },
    /// Emit the subcategory of total maps.
    Total { input: String },
    /// Check that the `msystem` key is a stable system of monics.
    MsystemCheck { input: String },
    /// Check a presheaf file, including element restrictions if given.
    PshCheck { input: PathBuf },
    /// Check a restriction presheaf file and that its restriction is the only one.
    RpshCheck { input: PathBuf },
    /// Emit the representable presheaf at an object (with restrictions if the base has them).
    Yoneda { input: String, object: String },
    /// Build the subobject classifier and classify the generated inclusions.
    Classifier { input: String },
    /// Check the coproduct, coequalizer and pullback-stability conditions.
    Cocheck { input: String },
    /// Check M-extensivity.
    Extensive { input: String },
    /// Certify the presheaf / restriction-presheaf equivalence on a family.
    EquivVerify {
        input: String,
        /// Family file listing presheaves; defaults to the generated family.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Compare y_r with the composite through Kr, Par and F.
    ClCheck { input: String },
    /// List the bundled fixtures.
    Fixtures,
}

/// What a command produced.
enum Output {
    Report(CheckReport),
    /// A JSON document whose success is `ok`, with a text rendering.
    Document {
        json: String,
        text: String,
        ok: bool,
    },
}

fn load_category_file(input: &str) -> Result<CategoryFile> {
    match input.strip_prefix("builtin:") {
        Some(name) => CategoryFile::parse(fixtures::source(name)?),
        None => CategoryFile::read(Path::new(input)),
    }
}

fn load_category(input: &str) -> Result<LoadedCategory> {
    load_category_file(input)?.load()
}

fn resolve_base(base: &BaseRef, dir: &Path) -> Result<CategoryFile> {
    match base {
        BaseRef::Path(p) if p.starts_with("builtin:") => load_category_file(p),
        other => other.resolve(dir),
    }
}

fn parent(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn document(json: String) -> Output {
    Output::Document {
        text: json.clone(),
        json,
        ok: true,
    }
}

fn mutation_report(file: &CategoryFile, count: usize, seed: u64) -> Result<CheckReport> {
    let loaded = file.load()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = CheckReport::new("mutations");
    match &loaded.restr {
        Some(x) => {
            let pool = restriction_mutations(x);
            let c = x.cat();
            for &(f, e) in pool.choose_multiple(&mut rng, count) {
                let survives = mutation_survives(x, f, e)?;
                r.expect("restriction-mutation-detected", !survives, || {
                    vec![("f", c.mor_name(f).to_string()), ("bar", c.mor_name(e).to_string())]
                });
            }
        }
        None => {
            let c = &loaded.cat;
            let pool: Vec<_> = c
                .composition_entries()
                .into_iter()
                .flat_map(|(g, f, gf)| {
                    c.hom(c.dom(f), c.cod(g))
                        .iter()
                        .copied()
                        .filter(move |&h| h != gf)
                        .map(move |h| (g, f, h))
                })
                .collect();
            for &(g, f, h) in pool.choose_multiple(&mut rng, count) {
                let survives = c.with_entry(g, f, h).check_laws().passed();
                r.expect("composition-mutation-detected", !survives, || {
                    vec![
                        ("g", c.mor_name(g).to_string()),
                        ("f", c.mor_name(f).to_string()),
                        ("composite", c.mor_name(h).to_string()),
                    ]
                });
            }
        }
    }
    Ok(r.finish())
}

fn need_msystem(loaded: &LoadedCategory) -> Result<(&FinCat, &MSystem)> {
    Ok((&loaded.cat, loaded.m_system()?))
}

fn need_restriction(loaded: &LoadedCategory) -> Result<&RestrCat> {
    loaded.restriction()
}

fn run(cli: &Cli) -> Result<Output> {
    Ok(match &cli.command {
        Command::Check { input, mutations } => {
            let file = load_category_file(input)?;
            let mut r = file.check()?;
            if *mutations > 0 && r.passed() {
                r.absorb("", mutation_report(&file, *mutations, cli.seed)?);
                r = r.finish();
            }
            Output::Report(r)
        }
        Command::Kr { input } => {
            let x = load_category(input)?;
            let k = kr(need_restriction(&x)?)?;
            document(CategoryFile::from_restr(&k.result).to_json())
        }
        Command::Par { input } => {
            let x = load_category(input)?;
            let (c, ms) = need_msystem(&x)?;
            let par = Par::new(c, ms)?;
            document(CategoryFile::from_restr(par.restr()).to_json())
        }
        Command::Mtotal { input } => {
            let x = load_category(input)?;
            let mt = mtotal(need_restriction(&x)?)?;
            document(CategoryFile::from_cat(&mt.cat).with_msystem(&mt.cat, &mt.ms).to_json())
        }
        Command::Total { input } => {
            let x = load_category(input)?;
            let (t, _) = need_restriction(&x)?.total_subcategory()?;
            document(CategoryFile::from_cat(&t).to_json())
        }
        Command::MsystemCheck { input } => {
            let file = load_category_file(input)?;
            let members = file
                .msystem
                .clone()
                .ok_or_else(|| Error::Input("the category file has no `msystem` key".into()))?;
            let mut plain = file;
            plain.msystem = None;
            let c = plain.load()?.cat;
            let ids = members.iter().map(|m| c.mor(m)).collect::<Result<Vec<_>>>()?;
            Output::Report(check_msystem(&c, &ids)?)
        }
        Command::PshCheck { input } => {
            let file = PresheafFile::read(input)?;
            let base = resolve_base(&file.base, parent(input))?.load()?;
            Output::Report(file.check(&base.cat, base.restr.as_ref())?)
        }
        Command::RpshCheck { input } => {
            let file = PresheafFile::read(input)?;
            let base = resolve_base(&file.base, parent(input))?.load()?;
            let x = need_restriction(&base)?;
            if file.restriction.is_none() {
                return Err(Error::Input("the presheaf file has no `restriction` key".into()));
            }
            let mut r = file.check(x.cat(), Some(x))?;
            if r.passed() {
                let q = file.load_restriction(x)?;
                let found = infer_restriction_structure(x, q.psh())?;
                r.expect(
                    "unique-restriction",
                    found == [q.elbars().to_vec()],
                    Vec::<(String, String)>::new,
                );
                r = r.finish();
            }
            Output::Report(r)
        }
        Command::Yoneda { input, object } => {
            let loaded = load_category(input)?;
            let c = &loaded.cat;
            let a = c.obj(object)?;
            let base = BaseRef::Inline(Box::new(load_category_file(input)?));
            let file = match &loaded.restr {
                Some(x) => PresheafFile::from_restriction_presheaf(x, &yoneda_r(x, a)?, base),
                None => PresheafFile::from_presheaf(c, &yoneda(c, a)?, base),
            };
            document(file.to_json())
        }
        Command::Classifier { input } => {
            let x = load_category(input)?;
            let (c, ms) = need_msystem(&x)?;
            Output::Report(sigma_classifier(c, ms)?.1)
        }
        Command::Cocheck { input } => {
            let x = load_category(input)?;
            let (c, ms) = need_msystem(&x)?;
            Output::Report(check_cocompleteness_conditions(c, ms, cli.shape_bound)?)
        }
        Command::Extensive { input } => {
            let x = load_category(input)?;
            let (c, ms) = need_msystem(&x)?;
            Output::Report(check_m_extensive(c, ms, cli.shape_bound)?)
        }
        Command::EquivVerify { input, family } => {
            let x = load_category(input)?;
            let (c, ms) = need_msystem(&x)?;
            let fam = match family {
                Some(path) => FamilyFile::read(path)?.load(parent(path), c)?,
                None => default_family(c, ms)?,
            };
            let par = Par::new(c, ms)?;
            let w = verify_equivalence(&par, &fam)?;
            Output::Document {
                json: serde_json::to_string_pretty(&w)?,
                text: w.report.to_text(),
                ok: w.report.passed(),
            }
        }
        Command::ClCheck { input } => {
            let x = load_category(input)?;
            Output::Report(cockett_lack_check(need_restriction(&x)?)?)
        }
        Command::Fixtures => document(fixtures::MANIFEST.trim_end().to_string()),
    })
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, ok) = match run(&cli) {
        Ok(Output::Report(r)) => {
            let text = match cli.format {
                Format::Json => r.to_json(),
                Format::Text => r.to_text().trim_end().to_string(),
            };
            (text, r.passed())
        }
        Ok(Output::Document { json, text, ok }) => {
            let text = match cli.format {
                Format::Json => json,
                Format::Text => text.trim_end().to_string(),
            };
            (text, ok)
        }
        Err(Error::Laws(report)) => {
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text().trim_end().to_string(),
            };
            (text, false)
        }
        Err(e) if e.is_input_error() => {
            eprintln!("rcat: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("rcat: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&text, cli.output.as_deref()) {
        eprintln!("rcat: {e}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
