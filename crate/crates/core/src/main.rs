use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hho::cases::{
    analyze_mesh, diagnostics_text, run_case, write_atomic, ConfigBuilder, MeshFamily,
};
use hho::mesh::{save_mesh, MeshFormat};
use hho::HhoError;

#[derive(Parser)]
#[command(
    name = "hho",
    version,
    about = "HHO solver for anisotropic diffusion on polygonal meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
#[command(allow_negative_numbers = true)]
struct CaseFlags {
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// A | B | C | custom
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// Level list, `1,2,3` or `1-4`.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    /// Fixed stretch of a hexagonal family.
    #[arg(long)]
    stretch: Option<String>,
    /// cartesian | locref | hexagonal | skewed
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated mesh files, one per level.
    #[arg(long)]
    mesh: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// direct | cg
    #[arg(long)]
    solver: Option<String>,
    /// cosine | polyN
    #[arg(long)]
    exact: Option<String>,
    /// Skip the condition number estimate.
    #[arg(long)]
    no_cn: bool,
}

impl CaseFlags {
    fn builder(&self) -> hho::Result<ConfigBuilder> {
        let mut b = ConfigBuilder::default();
        if let Some(p) = &self.config {
            b.read_file(p)?;
        }
        let pairs = [
            ("case", &self.case),
            ("k", &self.k),
            ("levels", &self.levels),
            ("lambda", &self.lambda),
            ("stretch", &self.stretch),
            ("family", &self.family),
            ("mesh", &self.mesh),
            ("out", &self.out),
            ("solver", &self.solver),
            ("exact", &self.exact),
        ];
        for (key, v) in pairs {
            if let Some(v) = v {
                b.set(key, v)?;
            }
        }
        if self.no_cn {
            b.set("cn", "false")?;
        }
        Ok(b)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve every level of a case and write its convergence table.
    Run(CaseFlags),
    /// Per-cell skewness diagnostics of one mesh of a family.
    Analyze {
        #[command(flatten)]
        flags: CaseFlags,
        /// Level of the family to analyse.
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Write one mesh of a family to a file.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        stretch: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// native | fvca5
        #[arg(long, default_value = "native")]
        format: String,
    },
}

fn is_config(e: &HhoError) -> bool {
    matches!(e, HhoError::Config(_) | HhoError::Parse { .. })
}

fn exit_for(e: &HhoError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if is_config(e) { 1 } else { 2 })
}

fn run(flags: &CaseFlags) -> Result<bool, HhoError> {
    let config = flags.builder()?.build()?;
    let table = run_case(&config)?;
    if config.out.is_none() {
        print!("{}", table.to_text());
    }
    Ok(!table.has_failures())
}

fn analyze(flags: &CaseFlags, level: usize) -> Result<(), HhoError> {
    let mut b = flags.builder()?;
    if flags.levels.is_none() {
        b.set("levels", &level.to_string())?;
    }
    let config = b.build()?;
    let mesh = config.family.mesh(level)?;
    let d = analyze_mesh(&mesh, &config.diffusion.field())?;
    let text = diagnostics_text(&d);
    match &config.out {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(
    family: &str,
    level: usize,
    stretch: Option<f64>,
    out: &PathBuf,
    format: &str,
) -> Result<(), HhoError> {
    let fam = MeshFamily::parse(family, stretch)?;
    let format: MeshFormat = format.parse()?;
    let mesh = fam.mesh(level)?;
    save_mesh(&mesh, out, format)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Run(flags) => match run(flags) {
            Ok(true) => return ExitCode::SUCCESS,
            Ok(false) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
        Command::Analyze { flags, level } => analyze(flags, *level),
        Command::Generate {
            family,
            level,
            stretch,
            out,
            format,
        } => generate(family, *level, *stretch, out, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => exit_for(&e),
    }
}
