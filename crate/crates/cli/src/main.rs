use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kleinrec::io::{self, CommandOutput, Format, DEFAULT_SEED};
use kleinrec::reconstruction::ReconstructOptions;

#[derive(Parser)]
#[command(
    name = "kleinrec",
    version,
    about = "Exact reconstruction of Lie algebras from isotropy data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Structured,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology H^k(h, V) of a module expression over m, h and 1.
    Cohomology {
        /// A JSON document or `catalog:<name>`.
        #[arg(long)]
        input: String,
        /// e.g. "m*⊗h" or "wedge2 m^* tensor m"; defaults to the three
        /// reconstruction modules.
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Isotropy data and bracket components of an algebra split along a subalgebra.
    Extract {
        #[arg(long)]
        input: String,
        /// Comma-separated basis indices of h (defaults to the document's `h_indices`).
        #[arg(long, value_delimiter = ',')]
        h_indices: Option<Vec<usize>>,
        /// Comma-separated basis indices spanning the complement m.
        #[arg(long, value_delimiter = ',')]
        complement: Option<Vec<usize>>,
    },
    /// Enumerate every Lie algebra compatible with the isotropy data.
    Reconstruct {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 6)]
        branch_depth: usize,
        /// Keep free scalable parameters instead of normalizing them to 0 and ±1.
        #[arg(long)]
        no_normalize: bool,
    },
    /// Jacobi check and, for a pair, the isotropy checks.
    Verify {
        #[arg(long)]
        input: String,
    },
    /// Check the cochain identities behind the constraint system on random samples.
    Lemmas {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Built-in fixtures.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show {
        name: String,
    },
    /// Print the importable JSON document.
    Export {
        name: String,
    },
}

fn run(cli: &Cli) -> kleinrec::Result<CommandOutput> {
    match &cli.command {
        Command::Cohomology { input, module, degree } => io::cmd_cohomology(input, module.as_deref(), *degree),
        Command::Extract {
            input,
            h_indices,
            complement,
        } => io::cmd_extract(input, h_indices.as_deref(), complement.as_deref()),
        Command::Reconstruct {
            input,
            branch_depth,
            no_normalize,
        } => io::cmd_reconstruct(
            input,
            &ReconstructOptions {
                branch_depth: *branch_depth,
                normalize: !no_normalize,
            },
        ),
        Command::Verify { input } => io::cmd_verify(input),
        Command::Lemmas { input, samples, seed } => io::cmd_lemmas(input, *samples, *seed),
        Command::Catalog { action } => match action {
            CatalogAction::List => Ok(io::cmd_catalog_list()),
            CatalogAction::Show { name } => io::cmd_catalog_entry(name, false),
            CatalogAction::Export { name } => io::cmd_catalog_entry(name, true),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(io::error_exit_code(&e) as u8);
        }
    };
    let format = match cli.format {
        OutputFormat::Structured => Format::Structured,
        OutputFormat::Text => Format::Text,
    };
    // export is the document itself in either format
    let body = if matches!(
        cli.command,
        Command::Catalog {
            action: CatalogAction::Export { .. }
        }
    ) {
        out.text.clone()
    } else {
        out.render(format)
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    eprintln!("{}: {:.3} s", out.manifest.command, out.manifest.timing.as_secs_f64());
    ExitCode::from(out.exit_code() as u8)
}
