use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bihom_core::catalog::{self, EntryStatus};
use bihom_core::construct::{self, Strictness, TensorKind, TwistSpec};
use bihom_core::identity::{default_grid, ExponentTuple, Status};
use bihom_core::io::{load_bundle, report_json, report_text, save_bundle, to_canonical_string};
use bihom_core::structures::{
    check_def_set, check_exponent_laws, check_overlap_3lie, check_overlap_tbp_bp, check_structure,
    check_tbp_consequences, overall_status, parse_idl, AlgebraBundle, Mode, Registry, Report,
};
use bihom_core::{Error, Result};

// stdout writes that end the process quietly when the reader has gone away (e.g. `| head`)
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if write!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "bihom", version, about = "Exact checks and constructions for BiHom-type algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "symbolic")]
    mode: ModeKind,
    /// Number of sampled parameter points.
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeKind {
    Symbolic,
    Sampled,
}

impl ModeArgs {
    fn mode(&self, b: &AlgebraBundle) -> Result<Mode> {
        match self.mode {
            ModeKind::Symbolic => Ok(Mode::Symbolic),
            ModeKind::Sampled => Mode::sampled(b, self.samples, self.seed),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentitySet {
    #[value(name = "tbp-consequences", alias = "thm25")]
    TbpConsequences,
    #[value(name = "exponents", alias = "lemma31")]
    Exponents,
    #[value(name = "exp-regular", alias = "eq3.3")]
    ExpRegular,
    #[value(name = "overlap", alias = "eq2.20")]
    Overlap,
    #[value(name = "overlap-ternary", alias = "eq3.15")]
    OverlapTernary,
    #[value(name = "involution-ternary", alias = "eq3.18")]
    InvolutionTernary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    DerivationTbp,
    PreLie,
    NpCommutator,
    TernaryD,
    TernaryF,
    TernaryM,
    Twist,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    BpTbp,
    PreLiePoisson,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a bundle against a named structure.
    Check {
        bundle: PathBuf,
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        mode: ModeArgs,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check one of the shipped identity families.
    Identities {
        bundle: PathBuf,
        #[arg(long, value_enum)]
        set: IdentitySet,
        /// Exponent tuple `p,q,m,n,l,s,k,t`; may be repeated. Defaults to the seeded grid.
        #[arg(long, allow_hyphen_values = true)]
        exponents: Vec<String>,
        /// Extra random tuples in the default grid.
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long, default_value_t = 31)]
        grid_seed: u64,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build a new bundle from an existing one.
    Construct {
        #[arg(value_enum)]
        kind: Construction,
        input: PathBuf,
        /// Derivation map name (derivation-tbp, pre-lie, ternary-d).
        #[arg(long, default_value = "D")]
        derivation: String,
        /// Involution map name (ternary-f).
        #[arg(long, default_value = "f")]
        involution: String,
        /// Twist spec `op:m1,m2,..` with optional powers `m^k`; may be repeated.
        #[arg(long)]
        twist: Vec<String>,
        /// Build even when hypotheses fail; failures are kept in the provenance notes.
        #[arg(long)]
        relaxed: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Tensor product of two bundles over one parameter ring.
    Tensor {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Rename the right factor's parameters first, e.g. `k3,k4`.
        #[arg(long)]
        rename_right: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// The two-dimensional example catalog.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Identity-definition files.
    Dsl {
        #[command(subcommand)]
        cmd: DslCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show {
        entry: u32,
    },
    Verify {
        /// e.g. `26`, `24-26` or `1,3,20-22`.
        #[arg(long, default_value = "1-26")]
        entries: String,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DslCmd {
    /// Check every structure of an .idl file against a bundle.
    Check { idl: PathBuf, bundle: PathBuf },
}

fn exit_for(status: &Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Inapplicable(_) => 2,
    }
}

fn emit(r: &Report, b: &AlgebraBundle, path: Option<&Path>) -> Result<u8> {
    out!("{}", report_text(r, b));
    if let Some(p) = path {
        std::fs::write(p, to_canonical_string(&report_json(r, b)))?;
    }
    Ok(exit_for(&r.overall))
}

fn parse_tuple(s: &str) -> Result<ExponentTuple> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<i32>().map_err(|_| Error::Invalid(format!("bad exponent `{x}`"))))
        .collect::<Result<Vec<_>>>()?;
    ExponentTuple::from_slice(&v).ok_or_else(|| Error::Invalid(format!("expected 8 exponents, got {}", v.len())))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Check { bundle, structure, mode, report } => {
            let b = load_bundle(&bundle)?;
            let r = check_structure(&structure, &b, &mode.mode(&b)?)?;
            emit(&r, &b, report.as_deref())
        }
        Cmd::Identities { bundle, set, exponents, grid, grid_seed, mode, report } => {
            let b = load_bundle(&bundle)?;
            let m = mode.mode(&b)?;
            let r = match set {
                IdentitySet::TbpConsequences => check_tbp_consequences(&b, &m)?,
                IdentitySet::Exponents => {
                    let tuples = if exponents.is_empty() {
                        default_grid(grid_seed, grid)
                    } else {
                        exponents.iter().map(|s| parse_tuple(s)).collect::<Result<_>>()?
                    };
                    check_exponent_laws(&b, &tuples, &m)?
                }
                IdentitySet::ExpRegular => check_exponent_laws(&b, &[], &m)?,
                IdentitySet::Overlap => check_overlap_tbp_bp(&b, &m)?,
                IdentitySet::OverlapTernary => check_overlap_3lie(&b, &m)?,
                IdentitySet::InvolutionTernary => check_structure("involution-ternary-tbp", &b, &m)?,
            };
            emit(&r, &b, report.as_deref())
        }
        Cmd::Construct { kind, input, derivation, involution, twist, relaxed, output } => {
            let b = load_bundle(&input)?;
            let s = if relaxed { Strictness::Relaxed } else { Strictness::Strict };
            let out = match kind {
                Construction::DerivationTbp => construct::derivation_tbp(&b, &derivation, s)?,
                Construction::PreLie => construct::pre_lie_from_derivation(&b, &derivation, s)?,
                Construction::NpCommutator => construct::np_commutator(&b, s)?,
                Construction::TernaryD => construct::ternary_from_derivation(&b, &derivation, s)?,
                Construction::TernaryF => construct::ternary_from_involution(&b, &involution, s)?,
                Construction::TernaryM => construct::ternary_from_product(&b, s)?,
                Construction::Twist => {
                    if twist.is_empty() {
                        return Err(Error::Invalid("twist needs at least one --twist op:maps".into()));
                    }
                    let specs = twist.iter().map(|t| TwistSpec::parse(t)).collect::<Result<Vec<_>>>()?;
                    construct::yau_twist(&b, &specs, s)?
                }
            };
            save_bundle(&out, &output)?;
            outln!("wrote {} ({})", output.display(), out.id);
            for n in out.provenance.iter().flat_map(|p| &p.notes) {
                outln!("  note: {n}");
            }
            Ok(0)
        }
        Cmd::Tensor { left, right, kind, rename_right, output } => {
            let mut a = load_bundle(&left)?;
            let mut b = load_bundle(&right)?;
            if let Some(names) = rename_right {
                let names: Vec<&str> = names.split(',').map(str::trim).collect();
                b = construct::rename_params(&b, &names)?;
                (a, b) = construct::join_params(&a, &b)?;
            }
            let kind = match kind {
                Kind::BpTbp => TensorKind::BpTbp,
                Kind::PreLiePoisson => TensorKind::PreLiePoisson,
            };
            let out = construct::tensor_bundle(&a, &b, kind)?;
            save_bundle(&out, &output)?;
            outln!("wrote {} ({}, dim {})", output.display(), out.id, out.dim());
            for n in out.provenance.iter().flat_map(|p| &p.notes) {
                outln!("  note: {n}");
            }
            Ok(0)
        }
        Cmd::Catalog { cmd } => run_catalog(cmd),
        Cmd::Dsl { cmd: DslCmd::Check { idl, bundle } } => {
            let text = std::fs::read_to_string(&idl)?;
            let stem = idl.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let defs = parse_idl(&text, &stem)?;
            let mut reg = Registry::builtin().clone();
            for d in &defs {
                reg.insert(d.clone());
            }
            let b = load_bundle(&bundle)?;
            let mut verdicts = Vec::new();
            for d in &defs {
                let r = check_def_set(&reg.resolve(&d.name)?, &b, &Mode::Symbolic)?;
                out!("{}", report_text(&r, &b));
                verdicts.extend(r.verdicts);
            }
            Ok(exit_for(&overall_status(&verdicts)))
        }
    }
}

fn run_catalog(cmd: CatalogCmd) -> Result<u8> {
    match cmd {
        CatalogCmd::List => {
            for e in catalog::all_entries()? {
                let status = match e.status {
                    EntryStatus::AssertedPass => "asserted-pass",
                    EntryStatus::ReportOnly => "report-only",
                };
                outln!(
                    "{:>2}  case {:<3} params [{}]  {}",
                    e.entry,
                    format!("{:?}", e.case),
                    e.params.join(","),
                    status
                );
            }
            Ok(0)
        }
        CatalogCmd::Show { entry } => {
            let e = catalog::entry(entry)?;
            out!("{}", bihom_core::io::bundle_to_string(&e.bundle()?));
            for n in &e.notes {
                outln!("note: {n}");
            }
            Ok(0)
        }
        CatalogCmd::Verify { entries, mode, report } => {
            let ids = catalog::parse_range(&entries)?;
            let sampled = match mode.mode {
                ModeKind::Symbolic => None,
                ModeKind::Sampled => Some((mode.samples, mode.seed)),
            };
            let run = catalog::verify_all(&ids, sampled)?;
            out!("{}", run.summary_table());
            if let Some(p) = report {
                std::fs::write(p, to_canonical_string(&run.report_json()))?;
            }
            let bad = run.regressions();
            if bad.is_empty() {
                Ok(0)
            } else {
                eprintln!("asserted-pass entries not passing: {bad:?}");
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
