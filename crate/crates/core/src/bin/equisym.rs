use std::process::ExitCode;

use clap::{Parser, Subcommand};
use equisym::commands::{self, Format};
use equisym::{Error, Result};

#[derive(Parser)]
#[command(name = "equisym", version, about = "Group actions on Riemann surfaces of genus q-1 with lambda*q automorphisms")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct VectorArgs {
    /// Group spec, e.g. D7, C5xC2, D:5x2, CqC4:q=13,rho=5, AM:q=5
    #[arg(long)]
    group: String,
    /// Signature in the order of the vector, e.g. "(0;2,4,10)"
    #[arg(long)]
    sigma: String,
    /// Comma separated element words, e.g. "z,zx,x^-1"
    #[arg(long, conflicts_with = "all")]
    vector: Option<String>,
    /// One representative per topological class (the default).
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Which lambda occur for prime q, with strata per family.
    Classify {
        #[arg(long)]
        q: u32,
    },
    /// Braid orbits of generating vectors.
    Orbits {
        #[arg(long)]
        group: String,
        #[arg(long)]
        sigma: String,
    },
    /// Complex and rational irreducible characters.
    Characters {
        #[arg(long)]
        group: String,
    },
    /// Chevalley-Weil and the group algebra decomposition of the Jacobian.
    Decompose {
        #[command(flatten)]
        v: VectorArgs,
        /// Generators of H for the decomposition of J(S/H).
        #[arg(long)]
        quotient: Option<String>,
    },
    /// Dimension N of the fixed locus in Siegel space.
    Ns {
        #[command(flatten)]
        v: VectorArgs,
        /// Generators of a subgroup H; N is computed for H.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Period matrix as a common fixed point of symplectic generators.
    PeriodMatrix {
        /// Use the published genus 4 Accola-Maclachlan generators (default).
        #[arg(long)]
        accola_maclachlan: bool,
        #[arg(long, default_value_t = 4)]
        genus: u32,
        /// JSON file with a list of integer matrices instead.
        #[arg(long, conflicts_with = "accola_maclachlan")]
        generators: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = equisym::siegel::DEFAULT_STARTS)]
        starts: usize,
    },
    /// Equation template of a family: C_g, X4, X3, X2k, K_g or X8.
    CurveModel {
        tag: String,
        #[arg(long)]
        q: u32,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("SA_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Error::Invalid(format!("SA_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Invalid(e.to_string()))
}

fn run(cli: Cli) -> Result<String> {
    configure_threads()?;
    let f = cli.format;
    match cli.command {
        Command::Classify { q } => commands::render_classify(&commands::classify(q)?, f),
        Command::Orbits { group, sigma } => commands::render_orbits(&commands::orbit_report(&group, &sigma)?, f),
        Command::Characters { group } => commands::render_characters(&commands::characters(&group)?, f),
        Command::Decompose { v, quotient } => {
            commands::render_decompose(&commands::decompose(&v.group, &v.sigma, v.vector.as_deref(), quotient.as_deref())?, f)
        }
        Command::Ns { v, subgroup } => commands::render_ns(&commands::ns(&v.group, &v.sigma, v.vector.as_deref(), subgroup.as_deref())?, f),
        Command::PeriodMatrix { genus, generators, seed, starts, .. } => {
            let report = match generators {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
                    commands::period_matrix_from(&text, starts, seed)?
                }
                None => commands::period_matrix_am(genus, starts, seed)?,
            };
            let text = commands::render_period_matrix(&report, f)?;
            if report.passes == Some(false) {
                eprint!("{text}");
                return Err(Error::CrossCheck("period matrix checks failed".into()));
            }
            Ok(text)
        }
        Command::CurveModel { tag, q } => commands::render_curve(&commands::curve(&tag, q)?, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(text) => match out {
            Some(path) => match std::fs::write(&path, text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(2)
                }
            },
            None => {
                print!("{text}");
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
