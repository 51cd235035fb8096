use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use molpea_cli::{read_config_file, run_pipeline, RunConfig};

/// Phase estimation of molecular Hamiltonians.
///
/// Settings come from `--config` (`key = value` lines) and the flags below;
/// flags win.
#[derive(Debug, Parser)]
#[command(name = "molpea", version)]
struct Args {
    #[arg(long)]
    config: Option<PathBuf>,
    /// H2-nospin, H2-spin, He2-nospin, or custom (with --h-matrix).
    #[arg(long)]
    molecule: Option<String>,
    /// Pauli-sum text file, one `<coeff> <string>` per line.
    #[arg(long)]
    hamiltonian_file: Option<String>,
    /// One-body matrix in the atomic-orbital basis.
    #[arg(long)]
    h_matrix: Option<String>,
    #[arg(long)]
    overlap_file: Option<String>,
    #[arg(long = "S")]
    s: Option<String>,
    #[arg(long = "S1")]
    s1: Option<String>,
    #[arg(long = "S2")]
    s2: Option<String>,
    /// Taylor order k, or `exact`.
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    segments: Option<String>,
    #[arg(long)]
    time: Option<String>,
    /// Phase register size N.
    #[arg(long)]
    registers: Option<String>,
    /// uniform | eigenstate:<i> | basis:<i> | vector:<path>
    #[arg(long)]
    initial_state: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    metadata_out: Option<String>,
}

impl Args {
    fn flags(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("molecule", &self.molecule),
            ("hamiltonian-file", &self.hamiltonian_file),
            ("h-matrix", &self.h_matrix),
            ("overlap-file", &self.overlap_file),
            ("S", &self.s),
            ("S1", &self.s1),
            ("S2", &self.s2),
            ("order", &self.order),
            ("segments", &self.segments),
            ("time", &self.time),
            ("registers", &self.registers),
            ("initial-state", &self.initial_state),
            ("out", &self.out),
            ("metadata-out", &self.metadata_out),
        ]
    }
}

fn run(args: &Args) -> molpea_cli::Result<String> {
    let mut settings = match &args.config {
        Some(path) => read_config_file(path)?,
        None => Default::default(),
    };
    for (key, value) in args.flags() {
        if let Some(v) = value {
            settings.insert(key.to_string(), v.clone());
        }
    }
    let cfg = RunConfig::from_settings(&settings)?;
    let run = run_pipeline(&cfg)?;
    let (k, p) = molpea::pea::find_peaks(&run.distribution, 1)[0];
    Ok(format!(
        "wrote {} ({} rows) and {}; peak K={k} p={p:.6}",
        cfg.out.display(),
        run.distribution.registers,
        cfg.metadata_path().display()
    ))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
