use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};

use rigiditylab::commands::{self, CommandOutput, ModelSource};
use rigiditylab_core::models::Backend;
use rigiditylab_core::rat::{self, Rat};

/// Exact calculus for line homeomorphisms commuting with integer
/// translation: spectra, lemma suites, conjugacy synthesis, and orbit-space
/// figures. Set RIGIDITYLAB_THREADS to cap parallelism.
#[derive(Parser)]
#[command(name = "rigiditylab", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Model file (JSON).
    #[arg(long)]
    model: Option<String>,
    /// Builtin model: geodesic_genus2, triangle_237, or random_pl(k).
    #[arg(long)]
    builtin: Option<String>,
    /// Backend for builtin models.
    #[arg(long, value_parser = ["pl", "moebius"], default_value = "moebius")]
    backend: String,
    /// Grid size for the PL backend.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Seed for randomized builtins and suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModelArgs {
    fn source(&self) -> ModelSource {
        let backend = if self.backend == "pl" {
            Backend::Pl { grid: self.grid }
        } else {
            Backend::Moebius
        };
        ModelSource {
            path: self.model.clone(),
            builtin: self.builtin.clone(),
            backend,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fixed-point spectrum of word classes up to a length bound.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Word-length bound.
        #[arg(short = 'L', long = "length", default_value_t = 3)]
        l: usize,
        /// Distinguish classes from their inverses.
        #[arg(long)]
        oriented: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two models' spectra; synthesize the conjugacy when they agree.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        /// Second model file (JSON).
        #[arg(long)]
        model2: Option<String>,
        /// Second builtin model name.
        #[arg(long)]
        builtin2: Option<String>,
        /// Seed for the second builtin.
        #[arg(long, default_value_t = 0)]
        seed2: u64,
        #[arg(short = 'L', long = "length", default_value_t = 3)]
        l: usize,
        #[arg(long)]
        oriented: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded verification suites for the linking and density lemmas.
    Lemmas {
        #[command(flatten)]
        model: ModelArgs,
        /// Scan bound for the linked-words oracle.
        #[arg(short = 'N', long, default_value_t = 5)]
        n: i64,
        /// Number of seeded pair cases per suite.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Number of density-search targets.
        #[arg(long, default_value_t = 20)]
        density_cases: usize,
        /// Verification radius for density searches.
        #[arg(long, default_value = "1/1000")]
        epsilon: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an orbit-space figure (figure1..figure4) or a scene file.
    Render {
        /// Preset name.
        preset: Option<String>,
        /// Scene description (JSON).
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Output SVG path.
        #[arg(long, default_value = "figure.svg")]
        out: PathBuf,
    },
}

fn parse_eps(s: &str) -> Result<Rat> {
    rat::parse(s).ok_or_else(|| anyhow!("bad epsilon `{s}`"))
}

fn init_threads() {
    if let Ok(v) = std::env::var("RIGIDITYLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn emit(output: CommandOutput, out: Option<PathBuf>, elapsed_ms: u128) -> Result<i32> {
    let text = serde_json::to_string_pretty(&output.report)? + "\n";
    match out {
        Some(path) => std::fs::write(&path, text)?,
        None => print!("{text}"),
    }
    let mut err = std::io::stderr();
    writeln!(err, "{} ({} ms)", output.summary, elapsed_ms)?;
    Ok(output.exit)
}

fn run() -> Result<i32> {
    init_threads();
    let cli = Cli::parse();
    let started = Instant::now();
    match cli.command {
        Command::Spectrum {
            model,
            l,
            oriented,
            out,
        } => {
            let output = commands::cmd_spectrum(&model.source(), l, oriented)?;
            emit(output, out, started.elapsed().as_millis())
        }
        Command::Compare {
            model,
            model2,
            builtin2,
            seed2,
            l,
            oriented,
            out,
        } => {
            let source1 = model.source();
            let source2 = ModelSource {
                path: model2,
                builtin: builtin2,
                backend: source1.backend,
                seed: seed2,
            };
            let output = commands::cmd_compare(&source1, &source2, l, oriented)?;
            emit(output, out, started.elapsed().as_millis())
        }
        Command::Lemmas {
            model,
            n,
            cases,
            density_cases,
            epsilon,
            out,
        } => {
            let eps = parse_eps(&epsilon)?;
            let source = model.source();
            let seed = source.seed;
            let output =
                commands::cmd_lemmas(&source, seed, cases, n, 20, &eps, density_cases)?;
            emit(output, out, started.elapsed().as_millis())
        }
        Command::Render { preset, scene, out } => {
            let output = commands::cmd_render(preset.as_deref(), scene.as_deref(), &out)?;
            emit(output, None, started.elapsed().as_millis())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let msg = format!("{e}");
            if msg.starts_with("usage:") {
                ExitCode::from(commands::EXIT_USAGE as u8)
            } else {
                ExitCode::from(commands::EXIT_VALIDATION as u8)
            }
        }
    }
}
