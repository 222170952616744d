use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use equisym_core::equivalence::{topological_classes, ClassRecord};
use equisym_core::restriction::induced_action;
use equisym_core::ske::{self, VectorRecord};
use equisym_core::strata::{detect, family_check, scan_genus, verify_catalog, Catalog, Family, StratumReport};
use equisym_core::{Budget, Error, FiniteGroup, GeneratingVector, Signature, Subgroup};

mod render;

#[derive(Parser)]
#[command(name = "equisym", version, about = "Finite group actions on Riemann surfaces and their equisymmetric strata")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Largest group order that may be built.
    #[arg(long, env = "EQUISYM_MAX_ORDER", default_value_t = 512, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_order: u64,

    /// Largest number of generating vectors one enumeration may produce.
    #[arg(long, env = "EQUISYM_MAX_VECTORS", default_value_t = 2_000_000, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_vectors: u64,

    /// Largest orbit one equivalence search may explore.
    #[arg(long, env = "EQUISYM_MAX_ORBIT", default_value_t = 4_000_000, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_orbit: u64,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// List every generating vector of a signature.
    Enumerate(GroupSig),
    /// Topological classes of actions with a signature.
    Classes(GroupSig),
    /// Induced action of a subgroup.
    Restrict {
        #[command(flatten)]
        vector: VectorArgs,
        /// Subgroup generators, separated by `;`.
        #[arg(long, value_delimiter = ';', required = true)]
        subgroup: Vec<String>,
    },
    /// Look for isomorphic non-conjugate subgroups with equivalent induced actions.
    Detect {
        #[command(flatten)]
        vector: VectorArgs,
        /// Only compare subgroups isomorphic to this group.
        #[arg(long)]
        target: Option<String>,
    },
    /// Scan every catalog action of a genus.
    Scan {
        #[arg(long)]
        genus: u32,
        /// Catalog file; the built-in catalog when absent.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Check one member of a known family of non-normal strata.
    Family {
        #[arg(long, value_enum)]
        name: FamilyName,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Verify the catalog rows of one genus, or all of them.
    CatalogVerify {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GroupSig {
    #[arg(long)]
    group: String,
    #[arg(long)]
    signature: String,
}

#[derive(Args)]
struct VectorArgs {
    #[arg(long)]
    group: String,
    /// Elliptic entries, separated by `;`.
    #[arg(long, value_delimiter = ';', required = true)]
    elliptic: Vec<String>,
    /// Handle entries a1;b1;a2;b2;...
    #[arg(long, value_delimiter = ';')]
    handles: Vec<String>,
    /// Generator names for words, comma separated; g1, g2, ... by default.
    #[arg(long, value_delimiter = ',')]
    names: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    #[value(name = "hyperelliptic_klein", alias = "hyperelliptic-klein")]
    HyperellipticKlein,
    #[value(name = "dihedral_8n", alias = "dihedral-8n")]
    Dihedral8n,
    #[value(name = "cyclic_2n", alias = "cyclic-2n")]
    Cyclic2n,
    #[value(name = "generalized_fermat", alias = "generalized-fermat")]
    GeneralizedFermat,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("error[{}]: {0}", .0.module())]
    Core(#[from] Error),
    #[error("error[io]: {0}")]
    Io(#[from] std::io::Error),
    #[error("error[output]: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                Error::InvalidVector(_)
                | Error::NonIntegralGenus
                | Error::GenusTooSmall(_)
                | Error::NotIsomorphic
                | Error::Catalog(_),
            ) => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 2,
        }
    }
}

#[derive(Serialize)]
struct EnumerateReport {
    group: String,
    signature: Signature,
    genus: u32,
    count: usize,
    vectors: Vec<VectorRecord>,
}

#[derive(Serialize)]
struct DetectReport {
    vector: VectorRecord,
    target: Option<String>,
    reports: Vec<StratumReport>,
}

/// A rendered report plus whether it records a mathematical failure.
struct Output {
    json: String,
    md: String,
    failed: bool,
}

fn output<T: Serialize>(value: &T, md: String, failed: bool) -> Result<Output, CliError> {
    Ok(Output { json: serde_json::to_string_pretty(value)?, md, failed })
}

fn build_group(spec: &str, budget: &Budget) -> Result<Arc<FiniteGroup>, Error> {
    let mut g = FiniteGroup::from_spec(spec, budget.max_order)?;
    g.set_name(spec);
    Ok(Arc::new(g))
}

fn build_vector(args: &VectorArgs, budget: &Budget) -> Result<GeneratingVector, Error> {
    let g = build_group(&args.group, budget)?;
    let handles: Vec<&str> = args.handles.iter().map(String::as_str).collect();
    let elliptic: Vec<&str> = args.elliptic.iter().map(String::as_str).collect();
    if handles.len() % 2 != 0 {
        return Err(Error::Usage("handle entries come in pairs".into()));
    }
    if args.names.is_empty() {
        GeneratingVector::parse(g, &handles, &elliptic)
    } else {
        let names: Vec<&str> = args.names.iter().map(String::as_str).collect();
        GeneratingVector::from_words(g, &names, &handles, &elliptic)
    }
}

fn parse_elem(g: &FiniteGroup, names: &[String], text: &str) -> Result<u16, Error> {
    if names.is_empty() {
        g.parse_element(text)
    } else {
        let n: Vec<&str> = names.iter().map(String::as_str).collect();
        g.parse_word(&n, text)
    }
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog, CliError> {
    match path {
        Some(p) => Ok(Catalog::from_toml(&std::fs::read_to_string(p)?)?),
        None => Ok(Catalog::builtin()),
    }
}

fn family(name: FamilyName, g: Option<u32>, n: Option<u32>, k: Option<u32>) -> Result<Family, Error> {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| Error::Usage(format!("--{flag} is required for this family")));
    Ok(match name {
        FamilyName::HyperellipticKlein => Family::HyperellipticKlein { g: need(g, "g")? },
        FamilyName::Dihedral8n => Family::Dihedral8n { g: need(g, "g")? },
        FamilyName::Cyclic2n => Family::Cyclic2n { n: need(n, "n")? },
        FamilyName::GeneralizedFermat => Family::GeneralizedFermat { k: need(k, "k")?, n: need(n, "n")? },
    })
}

fn run(cli: &Cli, budget: &Budget) -> Result<Output, CliError> {
    match &cli.command {
        Command::Enumerate(a) => {
            let g = build_group(&a.group, budget)?;
            let sig: Signature = a.signature.parse()?;
            let genus = sig.riemann_hurwitz_genus(g.order())?;
            let vectors: Vec<VectorRecord> = ske::enumerate(&g, &sig, budget)?.iter().map(|v| v.record()).collect();
            let report = EnumerateReport {
                group: a.group.clone(),
                signature: sig,
                genus,
                count: vectors.len(),
                vectors,
            };
            output(&report, render::enumerate(&report.group, &report.signature, genus, &report.vectors), false)
        }
        Command::Classes(a) => {
            let g = build_group(&a.group, budget)?;
            let sig: Signature = a.signature.parse()?;
            sig.riemann_hurwitz_genus(g.order())?;
            let classes: Vec<ClassRecord> = topological_classes(&g, &sig, budget)?.iter().map(|c| c.record()).collect();
            output(&classes, render::classes(&a.group, &sig, &classes), false)
        }
        Command::Restrict { vector, subgroup } => {
            let v = build_vector(vector, budget)?;
            let g = v.group();
            let gens = subgroup.iter().map(|w| parse_elem(g, &vector.names, w)).collect::<Result<Vec<_>, _>>()?;
            let h = Subgroup::generated_by(g, &gens);
            let report = induced_action(&v, &h, budget)?.report(&v, &h);
            output(&report, render::restriction(&report), false)
        }
        Command::Detect { vector, target } => {
            let v = build_vector(vector, budget)?;
            let t = match target {
                Some(spec) => Some(FiniteGroup::from_spec(spec, budget.max_order)?),
                None => None,
            };
            let reports = detect(&v, t.as_ref(), budget)?;
            let report = DetectReport { vector: v.record(), target: target.clone(), reports };
            output(&report, render::detect(&report.vector, &report.reports), false)
        }
        Command::Scan { genus, catalog } => {
            let c = load_catalog(catalog)?;
            let report = scan_genus(&c, *genus, budget)?;
            output(&report, render::scan(&report), false)
        }
        Command::Family { name, g, n, k } => {
            let report = family_check(family(*name, *g, *n, *k)?, budget)?;
            output(&report, render::family(&report), !report.passed)
        }
        Command::CatalogVerify { genus, catalog } => {
            let c = load_catalog(catalog)?;
            let report = verify_catalog(&c, *genus, budget);
            output(&report, render::catalog(&report), !report.passed)
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
    let budget = Budget {
        max_order: cli.max_order as usize,
        max_vectors: cli.max_vectors as usize,
        max_orbit: cli.max_orbit as usize,
        ..Budget::default()
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error[usage]: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli, &budget) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => out.json,
                Format::Md => out.md,
            };
            let mut stdout = std::io::stdout().lock();
            if writeln!(stdout, "{text}").is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
