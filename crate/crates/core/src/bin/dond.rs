use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use dond::api::{self, BenefitRequest, BoardRequest, Descriptor, InvertRequest, SolveRequest};
use dond::inversion::{Constraint, GammaRange};
use dond::replication::replicate_case_study;
use dond::{Error, Trajectory};

const EXIT_INVALID: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "dond", version, about = "Exact Deal or No Deal decisions and risk-aversion bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value the Deal and No Deal actions at a state.
    Solve {
        /// Prizes on the board, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        prizes: Vec<f64>,
        /// Prizes still in play (defaults to all).
        #[arg(long, value_delimiter = ',')]
        remaining: Option<Vec<f64>>,
        /// `ev`, `online` or `multipliers:<m1>,<m2>,...`.
        #[arg(long, default_value = "ev")]
        banker: String,
        /// `log`, `crra:<gamma>` or `exppower:<alpha>,<gamma>,<wealth>`.
        #[arg(long, default_value = "log")]
        utility: String,
        /// Cases opened after each refused offer.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        /// Also solve under CRRA for each of these gammas.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma_grid: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
    },
    /// Bound risk aversion from a recorded trajectory.
    Invert {
        #[arg(long)]
        trajectory: PathBuf,
        /// Search range for gamma, `lo,hi`.
        #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
        gamma_range: Option<Vec<f64>>,
        /// First show round to analyse.
        #[arg(long)]
        from_round: Option<usize>,
        /// Banker for unobserved states (defaults to multipliers calibrated from the offers).
        #[arg(long)]
        banker: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce a bundled case study.
    Replicate {
        /// `suzanne` or `frank`.
        name: String,
        /// Directory for the report JSON and figure CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Non-monetary benefit needed to justify refusing a final offer.
    Benefit {
        #[arg(long)]
        offer: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        prizes: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory of static UI assets.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("payload serializes"));
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            prizes,
            remaining,
            banker,
            utility,
            schedule,
            gamma_grid,
            json,
        } => {
            let req = SolveRequest {
                board: BoardRequest {
                    ladder: prizes,
                    remaining,
                    schedule,
                    banker: Descriptor::Text(banker),
                },
                utility: Descriptor::Text(utility),
                gamma_grid,
            };
            let res = api::solve(&req)?;
            if json {
                print_json(&res);
            } else {
                let r = &res.result;
                println!("remaining: {:?}", res.remaining);
                println!("offer:     {}", r.offer);
                println!("q_deal:    {:.6}", r.q_deal);
                println!("q_nodeal:  {:.6}", r.q_nodeal);
                println!("ce_nodeal: {:.4}", r.ce_nodeal);
                println!("action:    {}", r.action);
                for p in res.grid.iter().flatten() {
                    println!(
                        "gamma {:>8}: {} (offer {}, ce_nodeal {:.4})",
                        p.gamma, p.result.action, p.result.offer, p.result.ce_nodeal
                    );
                }
            }
        }
        Command::Invert {
            trajectory,
            gamma_range,
            from_round,
            banker,
            json,
        } => {
            let doc = std::fs::read_to_string(&trajectory)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", trajectory.display())))?;
            let traj: Trajectory = dond::parse_trajectory(&doc)?;
            let req = InvertRequest {
                trajectory: traj,
                banker: banker.map(Descriptor::Text),
                gamma_range: gamma_range.map(|r| GammaRange { lo: r[0], hi: r[1] }),
                from_round,
                schedule: None,
            };
            let res = api::invert(&req)?;
            if json {
                print_json(&res);
            } else {
                print_invert(&res);
            }
        }
        Command::Replicate { name, out } => {
            let study = replicate_case_study(&name)?;
            let stem = name.to_ascii_lowercase();
            match out {
                Some(dir) => {
                    let io = |e: std::io::Error| Failure::Io(format!("cannot write to {}: {e}", dir.display()));
                    std::fs::create_dir_all(&dir).map_err(io)?;
                    let report = dir.join(format!("{stem}_report.json"));
                    let figure = dir.join(format!("{stem}_figure.csv"));
                    std::fs::write(&report, study.report_json()).map_err(io)?;
                    std::fs::write(&figure, &study.figure_csv).map_err(io)?;
                    println!("wrote {}", report.display());
                    println!("wrote {}", figure.display());
                }
                None => print!("{}", study.report_json()),
            }
        }
        Command::Benefit {
            offer,
            prizes,
            gamma,
            json,
        } => {
            let res = api::benefit(&BenefitRequest { offer, prizes, gamma })?;
            if json {
                print_json(&res);
            } else {
                println!("{:.2}", res.benefit);
            }
        }
        Command::Serve {
            port,
            host,
            static_dir,
        } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Failure::Domain(Error::Invalid(format!("bad address {host}:{port}: {e}"))))?;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
            eprintln!("listening on http://{addr}");
            runtime
                .block_on(api::http::serve(addr, static_dir))
                .map_err(|e| Failure::Io(format!("cannot serve on {addr}: {e}")))?;
        }
    }
    Ok(())
}

fn print_invert(res: &api::InvertResponse) {
    let report = &res.report;
    println!("contestant: {}", report.contestant);
    println!("multipliers (offer / mean):");
    for m in &res.multipliers {
        println!("  round {:>2}: {:.4}", m.round, m.multiplier);
    }
    println!("analysis from round {}:", res.window_start);
    for r in &report.per_round {
        let c = match &r.constraint {
            Constraint::Below { bound } => format!("gamma < {bound:.5}"),
            Constraint::Above { bound } => format!("gamma > {bound:.5}"),
            Constraint::None => "no constraint on gamma > 0".into(),
            Constraint::InfeasibleForPositiveGamma => "infeasible for gamma > 0".into(),
            Constraint::Union { intervals } => intervals
                .iter()
                .map(|i| format!("({:.5}, {:.5})", i.lo, i.hi))
                .collect::<Vec<_>>()
                .join(" or "),
        };
        println!("  round {:>2} {:<8} offer {:>10}: {c}", r.round, r.action.to_string(), r.offer);
    }
    let bounds = match (report.lower_bound, report.upper_bound) {
        (Some(lo), Some(hi)) => format!("{lo:.5} < gamma < {hi:.5}"),
        (Some(lo), None) => format!("gamma > {lo:.5}"),
        (None, Some(hi)) => format!("gamma < {hi:.5}"),
        (None, None) if report.intersection.is_empty() => "no gamma > 0 fits every round".into(),
        (None, None) => "unbounded".into(),
    };
    println!("bound: {bounds}");
    for f in &report.flags {
        println!("note: {f}");
    }
    println!("note: {}", report.note);
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
