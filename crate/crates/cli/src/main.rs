//! Command-line harness: randomized verification campaigns, the two-spin
//! worked example, gap computation on user-supplied operators, and
//! separable-witness sweeps.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage/IO/schema error.

mod io;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use impq_core::campaign::{run_campaign, CampaignConfig, CampaignReport};
use impq_core::nonlocality::{self, TwoParticleScene};

#[derive(Parser)]
#[command(
    name = "impq",
    version,
    about = "Interval-valued joint quantum probability: verification campaigns, \
             the two-spin worked example, and upper-probability gap analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Run a randomized verification campaign over all modules
    Verify {
        /// Campaign config (JSON); defaults apply when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed override
        #[arg(long)]
        seed: Option<u64>,
        /// Write the full report as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reproduce the two-spin worked example
    SpinExample {
        /// Write the report as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the four 4x4 operators as matrix files into this directory
        #[arg(long)]
        emit_matrices: Option<PathBuf>,
    },
    /// Upper-probability gap for four user-supplied projector files
    Gap {
        #[arg(long)]
        p1: PathBuf,
        #[arg(long)]
        q1: PathBuf,
        #[arg(long)]
        p2: PathBuf,
        #[arg(long)]
        q2: PathBuf,
        /// Write the gap report as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sweep the separable witness over a parameter grid
    Sweep {
        /// Grid, e.g. a:0:1:11,b:auto,phi:0:6.283:12
        #[arg(long)]
        grid: String,
        /// Output CSV path
        #[arg(long)]
        csv: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Commands::Verify { config, seed, json } => {
            cmd_verify(config.as_deref(), seed, json.as_deref())
        }
        Commands::SpinExample { json, emit_matrices } => {
            cmd_spin(json.as_deref(), emit_matrices.as_deref())
        }
        Commands::Gap { p1, q1, p2, q2, json } => cmd_gap(&p1, &q1, &p2, &q2, json.as_deref()),
        Commands::Sweep { grid, csv } => cmd_sweep(&grid, &csv),
    }
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<CampaignConfig> {
    let mut config = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("{}: invalid config", p.display()))?
        }
        None => CampaignConfig::default(),
    };
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    Ok(config)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).context("serializing report")?;
    bytes.push(b'\n');
    // self-validation: must parse back under the same schema
    serde_json::from_slice::<serde_json::Value>(&bytes).context("report self-validation")?;
    std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_verify(config: Option<&Path>, seed: Option<u64>, json: Option<&Path>) -> Result<bool> {
    let config = load_config(config, seed)?;
    let report = run_campaign(&config)?;
    print_campaign_summary(&report);
    if let Some(path) = json {
        std::fs::write(path, report.to_json_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
        // self-validation: the bytes must parse back to a report
        let text = std::fs::read(path)?;
        serde_json::from_slice::<CampaignReport>(&text).context("report self-validation")?;
    }
    Ok(report.all_pass())
}

fn print_campaign_summary(report: &CampaignReport) {
    println!(
        "campaign: {} samples, {} passed, {} failed (seed {:#x})",
        report.total_samples, report.passed_samples, report.failed_samples, report.master_seed
    );
    println!(
        "monotonicity violations observed: {} (expected >= 1 for non-commuting draws)",
        report.monotonicity_violations
    );
    println!(
        "{:<32} {:>7} {:>9} {:>13}",
        "check", "count", "failures", "worst"
    );
    for (name, agg) in &report.per_check {
        println!(
            "{:<32} {:>7} {:>9} {:>13.3e}",
            name, agg.count, agg.failures, agg.worst_residual
        );
    }
    if !report.failure_seeds.is_empty() {
        println!("failure seeds: {:?}", report.failure_seeds);
    }
    if let Some(spin) = &report.spin {
        println!("spin example: {}", if spin.pass() { "pass" } else { "FAIL" });
    }
}

fn cmd_spin(json: Option<&Path>, emit_matrices: Option<&Path>) -> Result<bool> {
    let report = nonlocality::spin_half_report()?;
    println!("spectrum of the direct pairing: {:?}", report.direct_spectrum);
    println!("spectrum of the cross pairing:  {:?}", report.cross_spectrum);
    println!("trace difference: {:.3e}", report.trace_difference);
    for (name, check) in &report.checks.checks {
        println!(
            "{:<24} residual {:>12.3e}  tol {:>8.1e}  {}",
            name,
            check.residual,
            check.tolerance,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    println!(
        "chained equality (gap of one pairing = other pairing, entrywise): {} \
         (residuals {:.3e}, {:.3e}; the spectra agree either way)",
        if report.chain_agrees {
            "holds"
        } else {
            "does not hold"
        },
        report.chain_residual_direct,
        report.chain_residual_cross
    );
    if let Some(path) = json {
        write_json(path, &report)?;
    }
    if let Some(dir) = emit_matrices {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))?;
        io::save_matrix(&dir.join("direct_upper.json"), &report.direct_upper)?;
        io::save_matrix(&dir.join("cross_upper.json"), &report.cross_upper)?;
        io::save_matrix(&dir.join("reference_direct.json"), &report.reference_direct)?;
        io::save_matrix(&dir.join("reference_cross.json"), &report.reference_cross)?;
        println!("matrices written to {}", dir.display());
    }
    Ok(report.pass())
}

fn cmd_gap(p1: &Path, q1: &Path, p2: &Path, q2: &Path, json: Option<&Path>) -> Result<bool> {
    let p1 = io::load_projector(p1)?;
    let q1 = io::load_projector(q1)?;
    let p2 = io::load_projector(p2)?;
    let q2 = io::load_projector(q2)?;
    let scene = TwoParticleScene::new(&p1, &q1, &p2, &q2)?;
    let report = nonlocality::upper_gap(&scene)?;
    println!("gap max-norm:        {:.6e}", report.max_norm);
    println!("gap min eigenvalue:  {:.6e}", report.min_eigenvalue);
    println!("block-form residual: {:.6e}", report.residual);
    if scene.pair_commutes(1) || scene.pair_commutes(2) {
        println!(
            "a pair commutes: gap {} (<= {:.0e} required)",
            if report.max_norm <= impq_core::tolerance::GAP_VANISH_TOL {
                "vanishes"
            } else {
                "DOES NOT vanish"
            },
            impq_core::tolerance::GAP_VANISH_TOL
        );
    }
    let pass = report.psd_ok() && report.block_form_ok();
    println!("verdict: {}", if pass { "pass" } else { "FAIL" });
    if let Some(path) = json {
        write_json(path, &report)?;
    }
    Ok(pass)
}

fn cmd_sweep(grid: &str, csv: &Path) -> Result<bool> {
    let spec = sweep::parse_grid(grid)?;
    let result = sweep::run_sweep(&spec)?;
    sweep::write_csv(csv, &result)?;
    println!(
        "{} rows, max |numeric - closed_form| = {:.3e}, min value = {:.3e}",
        result.rows.len(),
        result.max_abs_diff,
        result.min_value
    );
    Ok(result.max_abs_diff <= impq_core::tolerance::WITNESS_TOL
        && result.min_value >= -impq_core::tolerance::WITNESS_TOL)
}
