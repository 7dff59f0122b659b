//! `advect-bc-lab`: command-line front end for the advection
//! boundary-condition experiments.
//!
//! Exit codes: 0 success, 1 config/usage error, 2 numerical instability,
//! 3 assumption violation (analyze with --strict).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use advect_bc_lab::config::{echo, parse_config, ExperimentConfig};
use advect_bc_lab::presets::{preset, preset_description, preset_names};
use advect_bc_lab::runner::{converge, run_single, LabError};
use advect_bc_lab::analyze::analyze;

#[derive(Parser)]
#[command(
    name = "advect-bc-lab",
    version,
    about = "Finite-difference advection schemes on bounded domains: runs, convergence studies and scheme analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single run (one refinement entry) and write per-step errors
    Run(CommonArgs),
    /// Execute the whole refinement study and write the convergence table
    Converge(CommonArgs),
    /// Analyze the configured scheme (consistency, stability, roots, correctors)
    Analyze(CommonArgs),
    /// List the built-in presets
    Presets,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a TOML experiment config
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Name of a built-in preset (see `presets`)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Output directory (overrides the config's output.dir; default "out")
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for refinement rows (default: all cores)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Exit with code 3 when an analysis assumption is violated
    #[arg(long)]
    strict: bool,
}

/// Loaded config plus the stem used for output file names.
fn load_config(args: &CommonArgs) -> Result<(ExperimentConfig, String), LabError> {
    match (&args.config, &args.preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
            let config = parse_config(&text)?;
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "experiment".to_string());
            Ok((config, stem))
        }
        (None, Some(name)) => {
            let config = preset(name).ok_or_else(|| {
                LabError::Io(format!(
                    "unknown preset `{name}`; available: {}",
                    preset_names().join(", ")
                ))
            })?;
            Ok((config, name.clone()))
        }
        (Some(_), Some(_)) => Err(LabError::Io(
            "pass either --config or --preset, not both".to_string(),
        )),
        (None, None) => Err(LabError::Io(
            "one of --config or --preset is required".to_string(),
        )),
    }
}

fn output_dir(args: &CommonArgs, config: &ExperimentConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, LabError> {
    fs::create_dir_all(dir).map_err(|e| LabError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn cmd_run(args: &CommonArgs) -> Result<(), LabError> {
    let (config, stem) = load_config(args)?;
    if config.refinement.cells.len() != 1 {
        return Err(LabError::NotSingleRun(config.refinement.cells.len()));
    }
    let cells = config.refinement.cells[0];
    let outcome = run_single(&config, cells)?;
    let report = &outcome.report;
    let dir = output_dir(args, &config);
    if config.output.csv {
        let dt = config.problem.length / cells as f64 * config.problem.lambda.expect("resolved");
        let mut steps_csv = String::from("n,t,linf,l2\n");
        for (n, (linf, l2)) in report
            .per_step_linf
            .iter()
            .zip(&report.per_step_l2)
            .enumerate()
        {
            steps_csv.push_str(&format!(
                "{n},{:.16e},{linf:.16e},{l2:.16e}\n",
                n as f64 * dt
            ));
        }
        let path = write_file(&dir, &format!("{stem}_steps.csv"), &steps_csv)?;
        eprintln!("wrote {}", path.display());
        write_file(&dir, &format!("{stem}.meta.toml"), &meta_for(&config, outcome.wall_ms))?;
    }
    println!(
        "J={cells} dx={:.3e} steps={} linf_nj={:.2e} sup_l2={:.2e} wall_ms={:.1}",
        report.dx,
        report.per_step_linf.len().saturating_sub(1),
        report.linf_nj,
        report.sup_l2,
        outcome.wall_ms
    );
    Ok(())
}

fn meta_for(config: &ExperimentConfig, total_ms: f64) -> String {
    format!(
        "# experiment metadata (config echo + timing)\n{}\n[timing]\ntotal_ms = {total_ms:.3}\n",
        echo(config)
    )
}

fn cmd_converge(args: &CommonArgs) -> Result<(), LabError> {
    let (config, stem) = load_config(args)?;
    let table = converge(&config, args.jobs)?;
    print!("{}", table.console());
    let dir = output_dir(args, &config);
    if config.output.csv {
        let path = write_file(&dir, &format!("{stem}.csv"), &table.csv())?;
        eprintln!("wrote {}", path.display());
        write_file(&dir, &format!("{stem}.meta.toml"), &table.meta())?;
    }
    if config.output.plot_data {
        let path = write_file(&dir, &format!("{stem}.dat"), &table.plot_data())?;
        eprintln!("wrote {}", path.display());
    }
    // any unstable row surfaces the solver diagnostic through the exit code
    if let Some(row) = table.rows.iter().find(|r| r.unstable) {
        return Err(LabError::RowInstability(
            row.error.clone().unwrap_or_default(),
        ));
    }
    Ok(())
}

fn cmd_analyze(args: &CommonArgs) -> Result<bool, LabError> {
    let (config, stem) = load_config(args)?;
    let report = analyze(&config)?;
    print!("{}", report.console());
    let dir = output_dir(args, &config);
    let path = write_file(&dir, &format!("{stem}_analysis.json"), &report.to_json())?;
    eprintln!("wrote {}", path.display());
    Ok(report.has_violation())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version go to stdout with success; usage errors are
            // config errors (exit 1)
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result: Result<i32, LabError> = match &cli.command {
        Command::Run(args) => cmd_run(args).map(|()| 0),
        Command::Converge(args) => cmd_converge(args).map(|()| 0),
        Command::Analyze(args) => cmd_analyze(args).map(|violated| {
            if violated && args.strict {
                3
            } else {
                0
            }
        }),
        Command::Presets => {
            for name in preset_names() {
                println!("{name:24}  {}", preset_description(name).unwrap_or(""));
            }
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
