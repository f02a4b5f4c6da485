use std::io;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use abspm::pipeline::{self, AssessInput, DiscoverOverrides, FilterOverrides, Outcome, SimOverrides};
use abspm::project::Project;
use abspm::{server, Error, Result};
use abspm_core::chrono::NaiveDate;
use abspm_core::discovery::{AbstractionMode, Indicator};
use clap::{Parser, Subcommand, ValueEnum};

/// Assess agent-based simulations with process mining.
#[derive(Debug, Parser)]
#[command(name = "abspm", version)]
struct Cli {
    /// Project directory.
    #[arg(long, global = true, env = "ABSPM_PROJECT", default_value = ".")]
    project: PathBuf,
    /// Random seed; recorded in the project file by `init` and `simulate`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    FrequencyRank,
    Fuzzy,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create a project file with default settings.
    Init {
        #[arg(long)]
        force: bool,
    },
    /// Run the simulation and store the raw records.
    Simulate {
        #[arg(long)]
        tolerance: Option<f64>,
        /// Grid size, `N` or `WxH`.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(u32, u32)>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// Convert raw records into an event log (XES and CSV).
    Convert,
    /// Describe the event log.
    Stats,
    /// Keep whole cases matching the filter.
    Filter {
        /// Start from a named preset such as `paper-outlier`.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        from: Option<NaiveDate>,
        #[arg(long)]
        to: Option<NaiveDate>,
        #[arg(long)]
        max_duration_days: Option<f64>,
        #[arg(long)]
        max_events: Option<usize>,
    },
    /// Discover the process model and the observations to assess.
    Discover {
        /// Percent of activities to keep.
        #[arg(long)]
        activities: Option<f64>,
        /// Percent of paths to keep.
        #[arg(long)]
        paths: Option<f64>,
        #[arg(long, value_parser = parse_indicator)]
        metric: Option<Indicator>,
        #[arg(long, value_parser = parse_indicator)]
        secondary: Option<Indicator>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Record verdicts and write the assessment report.
    Assess {
        /// Verdict CSV (`obs_id,question_1,question_2[,assessor,note,recorded_at]`);
        /// prompts on the terminal when omitted.
        #[arg(long)]
        from_file: Option<PathBuf>,
    },
    /// Assemble the project report.
    Report,
    /// Serve the JSON API and the explorer UI.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        /// Directory with the built UI assets.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

fn parse_grid(s: &str) -> std::result::Result<(u32, u32), String> {
    let bad = || format!("invalid grid `{s}`; expected N or WxH");
    match s.split_once(['x', 'X']) {
        Some((w, h)) => Ok((
            w.trim().parse().map_err(|_| bad())?,
            h.trim().parse().map_err(|_| bad())?,
        )),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn parse_indicator(s: &str) -> std::result::Result<Indicator, String> {
    s.parse()
        .map_err(|e: abspm_core::discovery::UnknownIndicator| e.to_string())
}

fn open(cli: &Cli) -> Result<Project> {
    let (project, warnings) = Project::open(&cli.project)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(project)
}

fn run(cli: Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Init { force } => pipeline::init(&cli.project, *force, seed),
        Command::Simulate {
            tolerance,
            grid,
            density,
            max_steps,
        } => {
            let o = SimOverrides {
                seed,
                tolerance: *tolerance,
                grid: *grid,
                density: *density,
                max_steps: *max_steps,
            };
            pipeline::simulate(&mut open(&cli)?, &o)
        }
        Command::Convert => pipeline::convert_cmd(&mut open(&cli)?, seed),
        Command::Stats => pipeline::stats_cmd(&mut open(&cli)?, seed),
        Command::Filter {
            preset,
            from,
            to,
            max_duration_days,
            max_events,
        } => {
            let o = FilterOverrides {
                preset: preset.clone(),
                from: *from,
                to: *to,
                max_duration_days: *max_duration_days,
                max_events: *max_events,
            };
            pipeline::filter_cmd(&mut open(&cli)?, &o, seed)
        }
        Command::Discover {
            activities,
            paths,
            metric,
            secondary,
            mode,
        } => {
            let o = DiscoverOverrides {
                activities: *activities,
                paths: *paths,
                metric: *metric,
                secondary: *secondary,
                mode: mode.map(|m| match m {
                    Mode::FrequencyRank => AbstractionMode::FrequencyRank,
                    Mode::Fuzzy => AbstractionMode::Fuzzy,
                }),
            };
            pipeline::discover_cmd(&mut open(&cli)?, &o, seed)
        }
        Command::Assess { from_file } => {
            let mut project = open(&cli)?;
            let now = chrono::Utc::now().naive_utc();
            match from_file {
                Some(path) => pipeline::assess(&mut project, AssessInput::File(path), now),
                None => {
                    let stdin = io::stdin();
                    let mut input = stdin.lock();
                    let mut output = io::stdout();
                    pipeline::assess(
                        &mut project,
                        AssessInput::Interactive {
                            input: &mut input,
                            output: &mut output,
                        },
                        now,
                    )
                }
            }
        }
        Command::Report => pipeline::report_cmd(&mut open(&cli)?, seed),
        Command::Serve { port, host, ui_dir } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Error::Internal(e.to_string()))?;
            rt.block_on(server::serve(
                &cli.project,
                SocketAddr::new(*host, *port),
                ui_dir.clone(),
            ))?;
            Ok(Outcome::default())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            for l in &out.lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
