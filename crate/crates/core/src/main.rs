use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cluster_chain::correlators::{SumMode, XStateRdm};
use cluster_chain::measures::{report, DiscordMode, ReportOptions};
use cluster_chain::sweep::{self, Format, ScanSpec, SweepSpec};
use cluster_chain::{ed, validation, ModelParams, Result, Sector};

#[derive(Parser)]
#[command(name = "cluster-chain", version, about = "Ground-state correlations of the XZX/YZY cluster chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate observables over a two-axis parameter grid
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the output path in the config ("-" for stdout)
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_parser = parse_format)]
        format: Option<Format>,
    },
    /// All observables at one parameter point, as JSON
    Report {
        #[arg(long, allow_negative_numbers = true)]
        jx: f64,
        #[arg(long, allow_negative_numbers = true)]
        jy: f64,
        #[arg(long = "h", allow_negative_numbers = true)]
        field: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "even")]
        sector: Sector,
        /// Add exact-diagonalization values (N <= 12)
        #[arg(long)]
        ed: bool,
        /// Minimize the discord over all measurement bases
        #[arg(long)]
        grid_discord: bool,
        /// Integrate over the Brillouin zone instead of summing the finite grid
        #[arg(long)]
        thermodynamic: bool,
    },
    /// List grid points with vanishing mode energies
    ScanDegeneracy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_parser = parse_format)]
        format: Option<Format>,
    },
    /// Compare the analytic solution with exact diagonalization
    Validate {
        /// Random nondegenerate points per chain length
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 10, 12])]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "jsonl" => Ok(Format::Jsonl),
        _ => Err(format!("unknown format `{s}` (csv, jsonl)")),
    }
}

fn open_output(path: Option<&str>) -> Result<Box<dyn Write>> {
    Ok(match path {
        None | Some("-") => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
    })
}

fn complex(c: nalgebra::Complex<f64>) -> Value {
    json!([c.re, c.im])
}

fn rdm_json(r: &XStateRdm) -> Value {
    json!({ "u": r.u, "v": r.v, "w": r.w, "x": complex(r.x), "z": complex(r.z) })
}

fn run_report(params: ModelParams, options: ReportOptions, with_ed: bool) -> Result<Value> {
    let r = report(&params, &options)?;
    let mut out = json!({
        "jx": params.jx(), "jy": params.jy(), "h": params.h(), "n": params.n(),
        "sector": params.sector().name(),
        "energy": r.energy,
        "energy_even": r.energy_even,
        "energy_odd": r.energy_odd,
        "ground_multiplicity": r.ground_multiplicity,
        "sector_competition": r.sector_competition,
        "degenerate": r.degenerate,
        "occupation": r.n,
        "Mz": r.mz,
        "C12": r.c12, "C13": r.c13,
        "I12": r.i12, "I13": r.i13,
        "D12": r.d12, "D13": r.d13,
        "Eglobal": r.e_global,
        "rdm12": rdm_json(&r.rdm12),
        "rdm13": rdm_json(&r.rdm13),
    });
    if with_ed {
        let o = ed::report(&params)?;
        out["ed"] = json!({
            "energy": o.energy,
            "multiplicity": o.multiplicity,
            "occupation": o.n,
            "Mz": o.mz,
            "C12": o.nearest.concurrence, "C13": o.next_nearest.concurrence,
            "I12": o.nearest.mutual_information, "I13": o.next_nearest.mutual_information,
            "D12": o.nearest.discord, "D13": o.next_nearest.discord,
            "Eglobal": o.e_global,
            "rdm12": rdm_json(&XStateRdm::from_matrix(&o.nearest.rdm, 1)),
            "rdm13": rdm_json(&XStateRdm::from_matrix(&o.next_nearest.rdm, 2)),
        });
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep { config, output, format } => {
            let spec = SweepSpec::from_json(&std::fs::read_to_string(&config)?)?;
            let table = sweep::run_sweep(&spec)?;
            let path = output.map(|p| p.to_string_lossy().into_owned()).or(spec.output.path.clone());
            let mut out = open_output(path.as_deref())?;
            sweep::write_table(&table, format.unwrap_or(spec.output.format), &mut out)?;
            out.flush()?;
        }
        Command::Report { jx, jy, field, n, sector, ed, grid_discord, thermodynamic } => {
            let params = ModelParams::new(jx, jy, field, n)?.with_sector(sector);
            let options = ReportOptions {
                discord: if grid_discord { DiscordMode::GridMinimize } else { DiscordMode::FixedBasis },
                sum_mode: if thermodynamic { SumMode::Thermodynamic } else { SumMode::Grid },
                ..ReportOptions::default()
            };
            let value = run_report(params, options, ed)?;
            writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(&value)?)?;
        }
        Command::ScanDegeneracy { config, output, format } => {
            let spec = ScanSpec::from_json(&std::fs::read_to_string(&config)?)?;
            let hits = sweep::scan_degeneracy(&spec)?;
            let path = output.map(|p| p.to_string_lossy().into_owned()).or(spec.output.path.clone());
            let mut out = open_output(path.as_deref())?;
            sweep::write_scan(&spec, &hits, format.unwrap_or(spec.output.format), &mut out)?;
            out.flush()?;
        }
        Command::Validate { points, seed, lengths, tolerance } => {
            let summary = validation::run(&lengths, points, seed)?;
            let mut out = io::stdout().lock();
            writeln!(
                out,
                "compared {} points ({} degenerate skipped) in {:.2?}",
                summary.compared, summary.skipped_degenerate, summary.elapsed
            )?;
            for (name, dev) in &summary.max_deviation {
                writeln!(out, "{name:>8}  {dev:.3e}")?;
            }
            let worst = summary.worst();
            if worst > tolerance {
                writeln!(out, "FAIL: max deviation {worst:.3e} exceeds {tolerance:.1e}")?;
                return Ok(ExitCode::FAILURE);
            }
            writeln!(out, "ok: max deviation {worst:.3e}")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
