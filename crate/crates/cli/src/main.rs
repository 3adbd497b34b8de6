mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use powerlocale_core::Config;

#[derive(Parser)]
#[command(name = "powerlocale", version, about = "T-powerlocales of finite frames: constructions and audits")]
struct Cli {
    /// Largest carrier any single enumeration may produce
    #[arg(long, global = true, default_value_t = 1 << 20)]
    cap_carrier: u128,

    /// Most generators handed to the free-frame oracle
    #[arg(long, global = true, default_value_t = 5)]
    cap_free_frame: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for every sampled check
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cross-run the independent oracle where one exists (lift, srd)
    #[arg(long, global = true)]
    oracle: bool,

    /// Run batch evaluations on one thread
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameAction {
    Validate,
    Show,
    Classify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Audit {
    Structure,
    Carioca,
    Basic,
    Stability,
    Preservation,
    VietorisCompare,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Validate, display or classify a frame (a JSON path or one of two, c3, b2, chainN)
    Frame { action: FrameAction, frame: String },
    /// Parse a functor expression; optionally enumerate its carrier over n atoms
    Functor {
        expr: String,
        #[arg(long)]
        carrier: Option<usize>,
    },
    /// Lift a relation file along a functor; answers its queries if present
    Lift { functor: String, relation: String },
    /// Base of a value (inline JSON or @path)
    Base { functor: String, value: String },
    /// Lifted members λ(Φ) of a value whose leaves are sets
    Lambda { functor: String, value: String },
    /// Slim redistributions of a JSON array of values
    Srd { functor: String, gamma: String },
    /// Build V_T L and run audits
    Powerlocale {
        functor: String,
        frame: String,
        #[arg(long, value_enum)]
        audit: Vec<Audit>,
        /// Use the clopen generators T C_L
        #[arg(long)]
        clopen: bool,
    },
    /// The □/◇ presentation of V L and its comparison with V_P L
    Vietoris { frame: String },
    /// Every audit over the fixture functors and frames
    CheckAll,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = Config { carrier_cap: cli.cap_carrier, free_frame_cap: cli.cap_free_frame, ..Config::default() };
    if cli.sequential {
        cfg = cfg.with_exec(powerlocale_core::Exec::Sequential);
    }
    let opts = commands::Opts { cfg, format: cli.format, seed: cli.seed, oracle: cli.oracle };
    let result = match cli.command {
        Command::Frame { action, frame } => commands::frame(&opts, action, &frame),
        Command::Functor { expr, carrier } => commands::functor(&opts, &expr, carrier),
        Command::Lift { functor, relation } => commands::lift(&opts, &functor, &relation),
        Command::Base { functor, value } => commands::base(&opts, &functor, &value),
        Command::Lambda { functor, value } => commands::lambda(&opts, &functor, &value),
        Command::Srd { functor, gamma } => commands::srd(&opts, &functor, &gamma),
        Command::Powerlocale { functor, frame, audit, clopen } => commands::powerlocale(&opts, &functor, &frame, &audit, clopen),
        Command::Vietoris { frame } => commands::vietoris(&opts, &frame),
        Command::CheckAll => commands::check_all(&opts),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let cap = e.downcast_ref::<powerlocale_core::Error>().is_some_and(|e| e.is_cap());
            ExitCode::from(if cap { 3 } else { 2 })
        }
    }
}
