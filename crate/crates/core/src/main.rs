use clap::{Args, Parser, Subcommand};
use quadremap::harness::{self, HarnessError, RunConfig};
use quadremap::mesh::{read_mesh, validate_assumptions, write_mesh, StructuredQuadMesh};
use std::collections::BTreeMap;
use std::io::BufReader;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "quadremap",
    version,
    about = "Conservative remapping between two quadrilateral meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Run settings; each one overrides the same key in `--config`.
#[derive(Args, Default)]
struct Settings {
    /// key=value file
    #[arg(long)]
    config: Option<String>,
    /// tensor | random
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    /// comma-separated list of nx values
    #[arg(long)]
    sizes: Option<String>,
    /// franke | tanh | peak | uniform
    #[arg(long)]
    function: Option<String>,
    /// fb | cib
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// on | off
    #[arg(long)]
    rescale: Option<String>,
    /// on | off
    #[arg(long)]
    strict: Option<String>,
}

impl Settings {
    fn pairs(&self) -> BTreeMap<String, String> {
        [
            ("config", &self.config),
            ("family", &self.family),
            ("nx", &self.nx),
            ("sizes", &self.sizes),
            ("function", &self.function),
            ("method", &self.method),
            ("seed", &self.seed),
            ("t", &self.t),
            ("gamma", &self.gamma),
            ("out", &self.out),
            ("rescale", &self.rescale),
            ("strict", &self.strict),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
        .collect()
    }

    fn resolve(&self) -> Result<RunConfig, HarnessError> {
        RunConfig::layered(&self.pairs())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write one grid of a test family
    Generate(Settings),
    /// Check the admissibility assumptions between two mesh files
    Validate {
        #[arg(long)]
        old: String,
        #[arg(long)]
        new: String,
    },
    /// Remap one test density between a grid pair
    Remap(Settings),
    /// Error norms and observed orders over a list of sizes
    Convergence(Settings),
    /// Edge classification and swap-polygon census of a grid pair
    Census(Settings),
}

fn load(path: &str) -> Result<StructuredQuadMesh, HarnessError> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::Io(format!("{path}: {e}")))?;
    Ok(read_mesh(BufReader::new(file))?)
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Generate(s) => {
            let cfg = s.resolve()?;
            let mesh = harness::generate_grid(&cfg)?;
            let mut buf = Vec::new();
            write_mesh(&mesh, &mut buf).map_err(|e| HarnessError::Io(e.to_string()))?;
            harness::write_file(&cfg.out, &String::from_utf8_lossy(&buf))?;
            println!("wrote {} ({}x{} vertices)", cfg.out.display(), mesh.m(), mesh.n());
        }
        Command::Validate { old, new } => {
            let (old, new) = (load(&old)?, load(&new)?);
            let r = validate_assumptions(&old, &new)?;
            println!("a1_violations={}", r.a1_violations.len());
            println!("boundary_mismatch={}", r.boundary_mismatch.len());
            println!("boundary_slides={}", r.boundary_slides.len());
            println!("a2_violations={}", r.a2_violations.len());
            println!("a3_violations={}", r.a3_violations.len());
            println!("common_edges={}", r.common_edges);
            println!("count_formula_applicable={}", r.count_formula_applicable());
        }
        Command::Remap(s) => {
            let cfg = s.resolve()?;
            let report = harness::run_remap(&cfg)?;
            println!("{}", harness::SUMMARY_HEADER.join(","));
            println!("{}", report.summary);
        }
        Command::Convergence(s) => {
            let cfg = s.resolve()?;
            let report = harness::run_convergence(&cfg)?;
            print!("{}", report.table().render());
            print!("{}", report.orders_table().render());
        }
        Command::Census(s) => {
            let cfg = s.resolve()?;
            let out = harness::run_census(&cfg)?;
            print!("{}", out.summary_table().render());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let detail = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {detail}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::FAILURE
        }
    }
}
