use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::{Arc, Mutex};

use clap::{Parser, Subcommand};
use swapsim::fmi::ConsentDecision;
use swapsim::scenario::{standard_clock_start, SwapTerms};
use swapsim::store::{EventStore, SubscriptionFilter};
use swapsim::{api, sim, SimError, Simulator, SimulatorConfig, StorageBackend};

#[derive(Parser)]
#[command(name = "swapsim", version, about = "Post-trade lifecycle simulator for interest rate swaps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Directory holding the event log, party registry and run metadata.
    #[arg(long, env = "SWAPSIM_DATA_DIR", default_value = "data")]
    data_dir: PathBuf,
    /// Seed for simulated rate fixings.
    #[arg(long, env = "SWAPSIM_SEED", default_value_t = sim::DEFAULT_SEED)]
    seed: u64,
    /// memory or file
    #[arg(long, env = "SWAPSIM_STORAGE", default_value = "memory")]
    storage: StorageBackend,
}

impl RunArgs {
    fn config(&self) -> SimulatorConfig {
        SimulatorConfig { seed: self.seed, storage: self.storage, data_dir: Some(self.data_dir.clone()) }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "SWAPSIM_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "SWAPSIM_BIND", default_value = "127.0.0.1")]
        bind: String,
        /// Allowed browser origin; any origin when omitted.
        #[arg(long, env = "SWAPSIM_CORS_ORIGIN")]
        cors_origin: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the reference one-year swap to maturity and print the blotter row.
    Scenario {
        #[command(flatten)]
        run: RunArgs,
        /// Print the full event log instead of the blotter row.
        #[arg(long)]
        events: bool,
    },
    /// Print the envelopes of a file-backed event log as JSON lines.
    Events {
        #[arg(long, env = "SWAPSIM_DATA_DIR", default_value = "data")]
        data_dir: PathBuf,
        #[arg(long)]
        cdm_only: bool,
    },
    /// Write the endpoint reference as JSON.
    Openapi {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

fn scenario(config: SimulatorConfig, print_events: bool) -> Result<(), CliError> {
    let mut sim = Simulator::open(config)?;
    sim.reset(None)?;
    let a = sim.create_party("Bank A", "LEI-BANK-A")?;
    let b = sim.create_party("Dealer B", "LEI-DEALER-B")?;
    sim.create_clock(standard_clock_start())?;
    let trade = SwapTerms::standard().to_trade("IRS-1", &a.party_id, &b.party_id);
    let trade_id = trade.trade_id.clone();
    sim.submit_trade(trade)?;
    sim.consent(&trade_id, ConsentDecision::Confirm)?;
    sim.play()?;
    let mut out = std::io::stdout().lock();
    if print_events {
        for envelope in sim.store().iter() {
            writeln!(out, "{}", serde_json::to_string(envelope)?)?;
        }
    } else {
        writeln!(out, "{}", serde_json::to_string_pretty(&sim.trade(&trade_id)?)?)?;
    }
    Ok(())
}

fn print_events(data_dir: PathBuf, cdm_only: bool) -> Result<(), CliError> {
    let store = EventStore::open_file(data_dir.join(sim::EVENT_LOG_FILE)).map_err(SimError::from)?;
    let filter = if cdm_only { SubscriptionFilter::cdm_only() } else { SubscriptionFilter::all() };
    let mut out = std::io::stdout().lock();
    for envelope in store.read_all(1, &filter, usize::MAX) {
        writeln!(out, "{}", serde_json::to_string(&envelope)?)?;
    }
    Ok(())
}

async fn serve(bind: String, port: u16, cors_origin: Option<String>, config: SimulatorConfig) -> Result<(), CliError> {
    let sim = Arc::new(Mutex::new(Simulator::open(config)?));
    let app = api::app(sim, cors_origin.as_deref())?;
    let listener = tokio::net::TcpListener::bind((bind.as_str(), port)).await?;
    eprintln!("swapsim listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Serve { port, bind, cors_origin, run } => {
            tokio::runtime::Runtime::new()?.block_on(serve(bind, port, cors_origin, run.config()))
        }
        Command::Scenario { run, events } => scenario(run.config(), events),
        Command::Events { data_dir, cdm_only } => print_events(data_dir, cdm_only),
        Command::Openapi { output } => {
            let doc = serde_json::to_string_pretty(&api::openapi())? + "\n";
            match output {
                Some(path) => std::fs::write(path, doc)?,
                None => std::io::stdout().lock().write_all(doc.as_bytes())?,
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
