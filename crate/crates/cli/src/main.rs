use clap::{Parser, Subcommand, ValueEnum};
use cdsite_cli::{parse, run, CheckKind, Command, Options};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Complete,
    Regular,
    Bounded,
}

/// Verify cd-structures on finite sites described by `.site` files.
#[derive(Parser, Debug)]
#[command(name = "cdsite", version, about)]
struct Cli {
    /// Simplicial truncation level for kq / cech-nerve.
    #[arg(long, global = true, default_value_t = 3)]
    truncation: usize,
    /// Maximum cohomological degree reported.
    #[arg(long, global = true, default_value_t = 3)]
    max_degree: usize,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check that every block of the site file is internally consistent.
    Validate { file: PathBuf },
    /// List the covering sieves of the generated cd-topology.
    Topology { file: PathBuf },
    /// List the simple coverings of every object.
    SimpleCoverings { file: PathBuf },
    /// Decide completeness, regularity or boundedness.
    Check {
        #[arg(value_enum)]
        property: Property,
        file: PathBuf,
    },
    /// Test the sheaf condition for a named set presheaf.
    SheafCheck { file: PathBuf, presheaf: String },
    /// Sheafify a named set presheaf and report section counts.
    Sheafify { file: PathBuf, presheaf: String },
    /// Mayer–Vietoris checks for a distinguished square and an abelian
    /// presheaf.
    Mv {
        file: PathBuf,
        square: String,
        sheaf: String,
    },
    /// Compute H^degree(object, sheaf).
    Cohomology {
        file: PathBuf,
        object: String,
        sheaf: String,
        degree: usize,
    },
    /// Verify cohomological-dimension vanishing for all supplied
    /// abelian presheaves.
    Cohdim { file: PathBuf },
    /// Build K_Q for a distinguished square and verify its identities.
    Kq { file: PathBuf, square: String },
    /// Build the Čech nerve of a morphism and verify its identities.
    CechNerve { file: PathBuf, morphism: String },
    /// Decide chunkiness and verify the additive cd-structure.
    Chunky { file: PathBuf },
    /// Radditivize a named set presheaf and compare with sheafification.
    Radditivize { file: PathBuf, presheaf: String },
    /// Run every applicable check.
    Suite { file: PathBuf },
}

impl Cmd {
    fn split(self) -> (PathBuf, Command) {
        match self {
            Cmd::Validate { file } => (file, Command::Validate),
            Cmd::Topology { file } => (file, Command::Topology),
            Cmd::SimpleCoverings { file } => (file, Command::SimpleCoverings),
            Cmd::Check { property, file } => (
                file,
                Command::Check(match property {
                    Property::Complete => CheckKind::Complete,
                    Property::Regular => CheckKind::Regular,
                    Property::Bounded => CheckKind::Bounded,
                }),
            ),
            Cmd::SheafCheck { file, presheaf } => (file, Command::SheafCheck(presheaf)),
            Cmd::Sheafify { file, presheaf } => (file, Command::Sheafify(presheaf)),
            Cmd::Mv { file, square, sheaf } => (file, Command::Mv(square, sheaf)),
            Cmd::Cohomology {
                file,
                object,
                sheaf,
                degree,
            } => (file, Command::Cohomology(object, sheaf, degree)),
            Cmd::Cohdim { file } => (file, Command::Cohdim),
            Cmd::Kq { file, square } => (file, Command::Kq(square)),
            Cmd::CechNerve { file, morphism } => (file, Command::CechNerve(morphism)),
            Cmd::Chunky { file } => (file, Command::Chunky),
            Cmd::Radditivize { file, presheaf } => (file, Command::Radditivize(presheaf)),
            Cmd::Suite { file } => (file, Command::Suite),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        truncation: cli.truncation,
        max_degree: cli.max_degree,
    };
    let (file, command) = cli.command.split();
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::FAILURE;
        }
    };
    let doc = match parse(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::FAILURE;
        }
    };
    let report = run(&doc, &command, &opts);
    match cli.format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => print!("{}", report.render_json()),
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
