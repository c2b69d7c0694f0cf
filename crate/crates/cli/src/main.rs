use std::path::PathBuf;

use clap::{Parser, Subcommand};
use hcs_cli::args::{parse_angle, parse_families, parse_n_list, parse_theta_grid};
use hcs_cli::commands::{self, Mode};
use hcs_cli::exit;
use hcs_cli::sweep::SweepConfig;
use hcs_core::css::Family;

#[derive(Parser)]
#[command(name = "hcs", version, about = "Hidden code sampling: instances, sampling, verification and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a preset instance and write it as JSON.
    GenInstance {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gallager")]
        family: Family,
        /// Rotation angle; accepts forms like `pi/8`.
        #[arg(long, default_value = "pi/8", value_parser = parse_angle)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample shots as Bob, reading only the public section.
    BobSample {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "ideal")]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score samples against an instance with its secret section.
    Verify {
        instance: PathBuf,
        samples: PathBuf,
        /// Reference laws for the relative-entropy score.
        #[arg(long, default_value = "pauli,uniform", value_delimiter = ',')]
        refs: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact relative-entropy sweep written as CSV.
    RedSweep {
        /// Sizes; `family:n` pins a size to one family.
        #[arg(long, default_value = "gallager:18,gallager:36,random:12,random:18,random:24")]
        n_list: String,
        #[arg(long, default_value = "gallager,random")]
        family: String,
        /// Angles and inclusive `start:stop:step` ranges, comma separated.
        #[arg(long, default_value = "0.05:0.7854:0.05")]
        thetas: String,
        #[arg(long, default_value_t = 10)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check fast tables against dense and brute-force oracles.
    OracleCheck {
        #[arg(long)]
        n: usize,
        /// Use a preset of this family instead of a generic random instance.
        #[arg(long)]
        family: Option<Family>,
        #[arg(long, default_value = "pi/8", value_parser = parse_angle)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile an H/T/CNOT circuit into a postselected rotated code state.
    CompileHardness {
        circuit: PathBuf,
        /// Register size; defaults to the largest qubit index used.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulation and verification cost of an instance.
    CostModel {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::GenInstance {
            n,
            family,
            theta,
            seed,
            out,
        } => commands::gen_instance(n, family, theta, seed, out.as_deref()),
        Command::BobSample {
            instance,
            mode,
            shots,
            seed,
            out,
        } => commands::bob_sample(&instance, mode, shots, seed, out.as_deref()),
        Command::Verify {
            instance,
            samples,
            refs,
            out,
        } => commands::verify(&instance, &samples, &refs, out.as_deref()),
        Command::RedSweep {
            n_list,
            family,
            thetas,
            draws,
            seed,
            out,
        } => {
            let families = parse_families(&family)?;
            let config = SweepConfig {
                sizes: parse_n_list(&n_list, &families)?,
                thetas: parse_theta_grid(&thetas)?,
                draws,
                seed,
            };
            commands::red_sweep(&config, out.as_deref())
        }
        Command::OracleCheck {
            n,
            family,
            theta,
            seed,
            out,
        } => commands::oracle_check(n, family, theta, seed, out.as_deref()),
        Command::CompileHardness { circuit, n, out } => commands::compile_hardness(&circuit, n, out.as_deref()),
        Command::CostModel { instance, out } => commands::cost_model_cmd(&instance, out.as_deref()),
    }
}

fn main() {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit::INPUT
        }
    };
    std::process::exit(code);
}
