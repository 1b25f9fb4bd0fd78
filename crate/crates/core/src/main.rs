//! CLI harness: per-polytope computations and the experiment drivers, with
//! JSON/CSV report emission.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gstress::complex::SimplicialComplex;
use gstress::enumeration::{check_dehn_sommerville, g_from_h, h_from_f, is_m_sequence, FaceVector};
use gstress::error::Result;
use gstress::geometry::Polytope;
use gstress::harness::{self, ExperimentReport};
use gstress::homology::betti;
use gstress::stress;

#[derive(Parser)]
#[command(name = "gstress", version, about = "g-vectors, stress spaces, and polytope approximation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed override for the experiment subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config file for the experiment subcommands.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports (default: print to stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// f/h/g-vectors plus admissibility checks for a polytope file.
    Compute { file: PathBuf },
    /// Reduced Betti numbers of a complex file.
    Betti { file: PathBuf },
    /// Affine k-stress dimension (both backends) for a polytope file.
    StressDim {
        file: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Also emit a basis of the stress space (support faces plus
        /// coefficient vectors).
        #[arg(long)]
        basis: bool,
    },
    /// beta_{d-k-1}(Delta_W) <= g_k over sampled vertex subsets.
    VerifyQlbt,
    /// Witness-strip pipeline around spherical caps.
    WitnessStrips {
        /// Dimension (3 or 4 presets).
        #[arg(short, long, default_value_t = 3)]
        d: usize,
    },
    /// g_k vs Hausdorff-distance scaling on net hulls.
    Scaling {
        #[arg(short, long, default_value_t = 3)]
        d: usize,
    },
    /// Random-polytope trends for uniform ball samples.
    RandomTrends {
        #[arg(short, long, default_value_t = 3)]
        d: usize,
    },
    /// Local-stress lower bounds on g_2 for hulls approximating the 4-ball.
    D4Ball,
}

fn load_config<T: serde::de::DeserializeOwned>(path: &Option<PathBuf>, default: T) -> Result<T> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
        None => Ok(default),
    }
}

fn emit_report(report: &ExperimentReport, out: &Option<PathBuf>, format: Format) -> Result<()> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let json_path = dir.join(format!("{}.json", report.experiment));
        report.write_json(&json_path)?;
        eprintln!("wrote {}", json_path.display());
        if format == Format::Csv {
            let csv_path = dir.join(format!("{}.csv", report.experiment));
            std::fs::write(&csv_path, report.to_csv())?;
            eprintln!("wrote {}", csv_path.display());
            // Scaling series get their own CSV with the fixed column layout.
            if let Some(series) = report.summary.get("series") {
                let series: harness::ScalingSeries = serde_json::from_value(series.clone())?;
                let path = dir.join(format!("{}_series.csv", report.experiment));
                std::fs::write(&path, series.to_csv())?;
                eprintln!("wrote {}", path.display());
            }
        }
    } else {
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(report)?),
            Format::Csv => println!("{}", report.to_csv()),
        }
    }
    eprintln!(
        "{}: {} ({} trials, {} violations, {:.2}s)",
        report.experiment,
        match report.verdict {
            harness::Verdict::Pass => "PASS",
            harness::Verdict::Fail => "FAIL",
            harness::Verdict::Indeterminate => "INDETERMINATE",
        },
        report.trials.len(),
        report
            .summary
            .get("violations")
            .and_then(|v| v.as_u64())
            .unwrap_or(0),
        report.wall_clock_secs,
    );
    Ok(())
}

fn read_polytope(path: &Path) -> Result<Polytope> {
    Polytope::from_text(&std::fs::read_to_string(path)?)
}

fn run(cli: Cli) -> Result<i32> {
    let mut failed = false;
    match cli.command {
        Command::Compute { file } => {
            let p = read_polytope(&file)?;
            let f = FaceVector::of_complex(&p.boundary_complex());
            let h = h_from_f(&f);
            let g = g_from_h(&h);
            let value = json!({
                "d": p.d(),
                "f": f.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "h": h.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "g": g.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "dehn_sommerville": check_dehn_sommerville(&h),
                "m_sequence": is_m_sequence(&g),
            });
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
                Format::Csv => {
                    println!("quantity,values");
                    for key in ["f", "h", "g"] {
                        let vals: Vec<String> = value[key]
                            .as_array()
                            .unwrap()
                            .iter()
                            .map(|v| v.as_str().unwrap().to_string())
                            .collect();
                        println!("{key},{}", vals.join(" "));
                    }
                    println!("dehn_sommerville,{}", value["dehn_sommerville"]);
                    println!("m_sequence,{}", value["m_sequence"]);
                }
            }
        }
        Command::Betti { file } => {
            let k = SimplicialComplex::from_text(&std::fs::read_to_string(&file)?)?;
            let b = betti(&k);
            let value = json!({
                "dim": k.dim(),
                "f": k.face_counts(),
                "reduced_betti_from_dim_minus_1": b.values(),
            });
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
                Format::Csv => {
                    println!("dim,{}", k.dim());
                    println!(
                        "betti,{}",
                        b.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                    );
                }
            }
        }
        Command::StressDim { file, k, basis } => {
            let p = read_polytope(&file)?;
            let bc = p.boundary_complex();
            let coords = p.vertices().points().to_vec();
            let dim = stress::affine_stress_dim_checked(&bc, &coords, k)?;
            let g = g_from_h(&h_from_f(&FaceVector::of_complex(&bc)));
            let mut value = json!({
                "k": k,
                "stress_dim": dim,
                "g_k": g.entry(k).to_string(),
            });
            if basis {
                let sb = stress::affine_stress_space(&bc, &coords, k)?;
                value["basis"] = sb.to_json();
            }
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Command::VerifyQlbt => {
            let mut cfg: harness::QlbtConfig = load_config(&cli.config, Default::default())?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let report = harness::verify_qlbt(&cfg)?;
            failed = report.verdict == harness::Verdict::Fail;
            emit_report(&report, &cli.out, cli.format)?;
        }
        Command::WitnessStrips { d } => {
            let default = match d {
                3 => harness::WitnessStripConfig::default_d3(),
                4 => harness::WitnessStripConfig::default_d4(),
                _ => {
                    return Err(gstress::Error::InvalidGenerator(format!(
                        "no witness-strip preset for d = {d}"
                    )))
                }
            };
            let mut cfg = load_config(&cli.config, default)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let report = harness::witness_strips(&cfg)?;
            failed = report.verdict == harness::Verdict::Fail;
            emit_report(&report, &cli.out, cli.format)?;
        }
        Command::Scaling { d } => {
            let default = match d {
                3 => harness::ScalingConfig::default_d3(),
                4 => harness::ScalingConfig::default_d4(),
                _ => {
                    return Err(gstress::Error::InvalidGenerator(format!(
                        "no scaling preset for d = {d}"
                    )))
                }
            };
            let mut cfg = load_config(&cli.config, default)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let report = harness::scaling_fit(&cfg)?;
            failed = report.verdict == harness::Verdict::Fail;
            emit_report(&report, &cli.out, cli.format)?;
        }
        Command::RandomTrends { d } => {
            let default = match d {
                3 => harness::RandomTrendsConfig::default_d3(),
                4 => harness::RandomTrendsConfig::default_d4(),
                _ => {
                    return Err(gstress::Error::InvalidGenerator(format!(
                        "no random-trends preset for d = {d}"
                    )))
                }
            };
            let mut cfg = load_config(&cli.config, default)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let report = harness::random_body_trends(&cfg)?;
            failed = report.verdict == harness::Verdict::Fail;
            emit_report(&report, &cli.out, cli.format)?;
        }
        Command::D4Ball => {
            let mut cfg: harness::D4BallConfig = load_config(&cli.config, Default::default())?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let report = harness::d4_ball_experiment(&cfg)?;
            failed = report.verdict == harness::Verdict::Fail;
            emit_report(&report, &cli.out, cli.format)?;
        }
    }
    Ok(if failed { 1 } else { 0 })
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
