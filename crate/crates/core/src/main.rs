use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rollup_da::algebra::{Bls12Backend, PairingBackend, Toy7919};
use rollup_da::experiments::{
    exp_cost, exp_detect, exp_hidden_state_size, exp_pol, exp_recover, DetectParams, PolParams,
    RecoverParams, ResultTable, DEFAULT_PART_SIZES,
};
use rollup_da::sim::{SimConfig, World};
use rollup_da::Error;

/// Monte Carlo experiments and simulations for the rollup data-availability
/// protocol.
#[derive(Parser, Debug)]
#[command(name = "rollup-sim", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Master seed for every random choice.
    #[arg(long, global = true, env = "ROLLUP_SIM_SEED", default_value_t = 0)]
    seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detection probability of a builder that deletes stored parts.
    Detect {
        #[arg(long, value_delimiter = ',', default_values_t = DetectParams::default().s)]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = DetectParams::default().p)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
    },
    /// Probability that the network can reassemble a batch.
    Recover {
        #[arg(long, value_delimiter = ',', default_values_t = RecoverParams::default().n)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = RecoverParams::default().k)]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = RecoverParams::default().f)]
        f: Vec<f64>,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
    },
    /// Difficulty ratio of a builder colluding with a share of proposers.
    Pol {
        #[arg(long, value_delimiter = ',', default_values_t = PolParams::default().a)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = PolParams::default().fractions)]
        fractions: Vec<f64>,
        /// Number of proposers on the ID ring.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
    },
    /// Challenge response size against part size for both proof backends.
    Cost {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PART_SIZES.to_vec())]
        sizes: Vec<usize>,
    },
    /// Encoded hidden-state size against payload size.
    HiddenStateSize {
        #[arg(long, value_delimiter = ',', default_values_t = vec![64, 4096, 1 << 20])]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 8])]
        k: Vec<usize>,
    },
    /// Runs the full protocol simulation.
    Simulate {
        /// JSON file with simulation settings; missing keys take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the number of build rounds.
        #[arg(long)]
        rounds: Option<u64>,
        #[arg(long, value_enum, default_value_t = Backend::Bls12)]
        backend: Backend,
        /// Challenge rounds to run after building.
        #[arg(long, default_value_t = 0)]
        challenge_rounds: usize,
        /// Challenges per challenge round.
        #[arg(long, default_value_t = 10)]
        challenges: usize,
        /// Write the chain dump (JSON lines) here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Backend {
    Bls12,
    Toy,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidPartCount { .. } | Error::MaxPartsTooSmall(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Io(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let Common { seed, out, json } = cli.common;
    let render = |t: &ResultTable| if json { t.to_json() } else { t.to_csv() };
    let text = match cli.command {
        Command::Detect { s, p, trials } => {
            let (_, table) = exp_detect(&DetectParams { s, p, trials, seed })?;
            render(&table)
        }
        Command::Recover { n, k, f, trials } => {
            let (_, table) = exp_recover(&RecoverParams { n, k, f, trials, seed })?;
            render(&table)
        }
        Command::Pol {
            a,
            fractions,
            n,
            b,
            trials,
        } => {
            let params = PolParams {
                a,
                fractions,
                n_proposers: n,
                b,
                trials,
                seed,
            };
            let (report, table) = exp_pol(&params)?;
            for (a, ok) in report.monotone {
                eprintln!("a={a}: ratio non-increasing in fraction: {ok}");
            }
            render(&table)
        }
        Command::Cost { sizes } => {
            let (report, table) = exp_cost(&sizes, seed)?;
            eprintln!(
                "reveal bytes = {:.6} * part + {:.6} (R^2 {:.6}); stub flat: {}",
                report.slope, report.intercept, report.r_squared, report.stub_flat
            );
            match report.crossover {
                Some(c) => eprintln!("stub smaller from {c} bytes per part (unique: {})", report.crossover_unique),
                None => eprintln!("no crossover"),
            }
            render(&table)
        }
        Command::HiddenStateSize { sizes, k } => {
            let (_, table) = exp_hidden_state_size(&sizes, &k, seed)?;
            render(&table)
        }
        Command::Simulate {
            config,
            rounds,
            backend,
            challenge_rounds,
            challenges,
            dump,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let raw = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    serde_json::from_str::<SimConfig>(&raw)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
                }
                None => SimConfig::default(),
            };
            cfg.seed = seed;
            if let Some(r) = rounds {
                cfg.rounds = r;
            }
            let (summary, chain) = match backend {
                Backend::Bls12 => simulate::<Bls12Backend>(cfg, challenge_rounds, challenges, json)?,
                Backend::Toy => simulate::<Toy7919>(cfg, challenge_rounds, challenges, json)?,
            };
            if let Some(path) = dump {
                write_file(&path, &chain)?;
            }
            summary
        }
    };
    match out {
        Some(path) => write_file(&path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn simulate<B: PairingBackend>(
    cfg: SimConfig,
    challenge_rounds: usize,
    challenges: usize,
    json: bool,
) -> Result<(String, String), Failure> {
    let mut world = World::<B>::new(cfg)?;
    world.run_rounds()?;
    for _ in 0..challenge_rounds {
        world.run_challenge_round(challenges)?;
        world.finalize_challenges()?;
    }
    let m = world.metrics();
    eprintln!(
        "{} build rounds, {} batches, {} empty, {} challenges, {} slashes, conservation {}",
        m.build_rounds,
        m.batches,
        m.empty_rounds,
        m.challenges_opened,
        m.slashes,
        if m.conservation_ok { "ok" } else { "VIOLATED" }
    );
    let text = if json {
        let mut s = serde_json::to_string_pretty(m).expect("metrics serialize");
        s.push('\n');
        s
    } else {
        let mut t = ResultTable::new(&[
            "builder",
            "strategy",
            "rounds_searched",
            "attempts",
            "successes",
            "expected_successes",
            "wins",
            "slashes",
            "deposit",
        ]);
        for b in &m.builders {
            t.push(vec![
                (b.id as u64).into(),
                b.strategy.clone().into(),
                b.rounds_searched.into(),
                b.attempts.into(),
                b.successes.into(),
                b.expected_successes.into(),
                b.wins.into(),
                b.slashes.into(),
                world.arbiter().deposit_of(b.id).into(),
            ]);
        }
        t.to_csv()
    };
    Ok((text, world.chain_dump()))
}
