//! Thin command-line front end over the demo drivers.
//!
//! Thread count follows rayon's default; set RAYON_NUM_THREADS to pin it.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use panelquad::config::{Scheme, UpsampleMode};
use panelquad::demo::output::save_bench;
use panelquad::demo::{parabola, slender, starfish};

#[derive(Parser)]
#[command(name = "panelquad", version, about = "Nearly singular panel quadrature demos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Direct,
    Ho,
    Ssq,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Direct => Scheme::Direct,
            SchemeArg::Ho => Scheme::HelsingOjala,
            SchemeArg::Ssq => Scheme::SingularitySwap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    None,
    Upsample,
    UpsampleDirect,
}

impl From<ModeArg> for UpsampleMode {
    fn from(m: ModeArg) -> UpsampleMode {
        match m {
            ModeArg::None => UpsampleMode::None,
            ModeArg::Upsample => UpsampleMode::Upsample,
            ModeArg::UpsampleDirect => UpsampleMode::UpsampleWithUpsampledDirect,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for grids.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Error grid for the Laplace double layer on a parabolic panel.
    Parabola {
        #[arg(long, default_value_t = 0.25)]
        k: f64,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Ssq)]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value_t = ModeArg::None)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Grid as WxH.
        #[arg(long, default_value = "120x100")]
        grid: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Interior Laplace Dirichlet problem on the starfish domain.
    Starfish {
        #[arg(long, default_value_t = 1e-6)]
        eps_panel: f64,
        #[arg(long, value_enum, default_value_t = SchemeArg::Ssq)]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Upsample)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Critical Bernstein radius (1.8 for coarse, 3 for fine runs).
        #[arg(long, default_value_t = 1.8)]
        rho_eps: f64,
        #[arg(long, default_value = "100x100")]
        grid: String,
        /// Evaluate the near-boundary grid down to this parameter distance
        /// instead of the global interior grid.
        #[arg(long)]
        near: Option<f64>,
        /// Grade the near grid geometrically in the boundary distance.
        #[arg(long, default_value_t = false)]
        log_grade: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Slender-body Stokes field accuracy/efficiency benchmark.
    Slender {
        #[arg(long, default_value_t = 1e-10)]
        eps_panel: f64,
        /// Fiber radius.
        #[arg(long, default_value_t = 1e-3)]
        eps_fiber: f64,
        /// Comma-separated target distances.
        #[arg(long, default_value = "1e-2,1e-4", value_delimiter = ',')]
        d: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        targets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3.0)]
        rho_eps: f64,
        /// Also evaluate the planar slice error grid.
        #[arg(long, default_value_t = false)]
        slice: bool,
        #[arg(long, default_value = "100x100")]
        grid: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Weight-computation throughput sanity check.
    Bench {
        #[arg(long, default_value_t = 20000)]
        targets: usize,
    },
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| format!("grid must look like 120x100, got {s}"))?;
    let w = w.parse().map_err(|e| format!("bad grid width: {e}"))?;
    let h = h.parse().map_err(|e| format!("bad grid height: {e}"))?;
    if w < 2 || h < 2 {
        return Err("grid must be at least 2x2".into());
    }
    Ok((w, h))
}

fn run() -> Result<(), String> {
    match Cli::parse().command {
        Command::Parabola {
            k,
            n,
            scheme,
            mode,
            tol,
            grid,
            out,
        } => {
            let (grid_w, grid_h) = parse_grid(&grid)?;
            let cfg = parabola::ParabolaConfig {
                k,
                n,
                scheme: scheme.into(),
                mode: mode.into(),
                tol,
                grid_w,
                grid_h,
            };
            let res = parabola::run(&cfg).map_err(|e| e.to_string())?;
            eprintln!(
                "parabola k={k} n={n}: max E_rel = {:.3e} ({} points)",
                res.grid.max_err(),
                res.grid.points.len()
            );
            write_grid(&res.grid, &out)?;
        }
        Command::Starfish {
            eps_panel,
            scheme,
            mode,
            tol,
            rho_eps,
            grid,
            near,
            log_grade,
            out,
        } => {
            let (grid_w, grid_h) = parse_grid(&grid)?;
            let gridkind = match near {
                None => starfish::GridKind::Global,
                Some(bmin) => starfish::GridKind::Near {
                    bmin,
                    log_grade,
                },
            };
            let cfg = starfish::StarfishConfig {
                eps_panel,
                scheme: scheme.into(),
                mode: mode.into(),
                rho_eps,
                tol,
                grid_w,
                grid_h,
                grid: gridkind,
            };
            let res = starfish::run(&cfg).map_err(|e| e.to_string())?;
            eprintln!(
                "starfish eps_panel={eps_panel}: {} panels, max E_rel = {:.3e}",
                res.panels, res.max_err
            );
            write_grid(&res.grid, &out)?;
        }
        Command::Slender {
            eps_panel,
            eps_fiber,
            d,
            targets,
            seed,
            rho_eps,
            slice,
            grid,
            out,
        } => {
            let (grid_w, grid_h) = parse_grid(&grid)?;
            let cfg = slender::SlenderConfig {
                eps_panel,
                eps_fiber,
                d_list: d,
                targets,
                seed,
                rho_eps,
                slice,
                grid_w,
                grid_h,
            };
            let res = slender::run(&cfg).map_err(|e| e.to_string())?;
            eprintln!(
                "slender: {} panels ({} reference panels)",
                res.panels, res.ref_panels
            );
            for r in &res.bench {
                eprintln!(
                    "  d={:.1e} {:>8}: N_eval={:>9} t_eval={:.3}s t_w/i={:.3}s max_err={:.2e}",
                    r.d, r.scheme, r.n_eval, r.t_eval_s, r.t_weights_s, r.max_rel_err
                );
            }
            for (d, ratio) in &res.ratios {
                eprintln!("  d={d:.1e}: N_eval ratio adaptive/SSQ = {ratio:.2}");
            }
            match &out.out {
                Some(path) => save_bench(&res.bench, path).map_err(|e| e.to_string())?,
                None => {
                    let s = serde_json::to_string_pretty(&res.bench)
                        .map_err(|e| e.to_string())?;
                    println!("{s}");
                }
            }
            if let Some(sl) = &res.slice {
                let path = out
                    .out
                    .as_ref()
                    .map(|p| p.with_extension("slice.csv"))
                    .unwrap_or_else(|| PathBuf::from("slice.csv"));
                sl.save(&path, "csv").map_err(|e| e.to_string())?;
                eprintln!("  slice grid: max E_rel = {:.2e} -> {}", sl.max_err(), path.display());
            }
        }
        Command::Bench { targets } => {
            let rate = slender::weight_throughput(targets);
            println!("weight computation: {rate:.3e} targets/second at n=16");
            if rate < 1e5 {
                eprintln!("warning: throughput below 1e5 targets/second");
            }
        }
    }
    Ok(())
}

fn write_grid(
    grid: &panelquad::demo::output::ErrorGrid,
    out: &OutArgs,
) -> Result<(), String> {
    match &out.out {
        Some(path) => grid.save(path, &out.format).map_err(|e| e.to_string()),
        None => {
            if out.format == "json" {
                let s = serde_json::to_string(grid).map_err(|e| e.to_string())?;
                println!("{s}");
                Ok(())
            } else {
                grid.write_csv(std::io::stdout().lock())
                    .map_err(|e| e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
