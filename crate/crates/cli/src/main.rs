use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use laxalg_cli::commands::{run, Command};
use laxalg_cli::config::RunConfig;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "laxalg", version, about = "Exact computations on Lax operator algebras")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Degree window `LO:HI`, overriding the configuration.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<[i64; 2]>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for `report.json` and the artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_window(s: &str) -> Result<[i64; 2], String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([p(a)?, p(b)?])
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let Format::Json = args.format;
    if let Some(n) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(e);
        }
    }
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", args.config.display())),
    };
    let mut cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Some(w) = args.window {
        cfg.window = w;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Err(e) = cfg.validate() {
        return fail(e);
    }
    let outcome = match run(args.command, &cfg) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    println!("{text}");
    if let Some(dir) = &args.out {
        let write = || -> std::io::Result<()> {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.json"), format!("{text}\n"))?;
            for (name, value) in &outcome.artifacts {
                let body = serde_json::to_string_pretty(value).expect("artifact serializes");
                std::fs::write(dir.join(name), format!("{body}\n"))?;
            }
            Ok(())
        };
        if let Err(e) = write() {
            return fail(format!("{}: {e}", dir.display()));
        }
    }
    if outcome.report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
