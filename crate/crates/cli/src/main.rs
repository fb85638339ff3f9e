mod args;
mod commands;
mod config;
mod error;
mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{CommandFactory, FromArgMatches};
use serde_json::Value;

use args::Cli;
use error::CliError;
use output::{manifest_path_for, sha256_hex, write_atomic, OutputDigest, RunManifest, Versions};

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    match real_main(&argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("threeprimes: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn parse(argv: &[OsString]) -> Result<(Cli, BTreeMap<String, String>), CliError> {
    let values = match config::config_path(argv) {
        Some(p) => config::load(&p)?,
        None => BTreeMap::new(),
    };
    let cmd = config::apply(Cli::command(), &values);
    let matches = match cmd.clone().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            // help and version go to stdout with status 0; the rest are usage errors
            let code = e.exit_code();
            let _ = e.print();
            std::process::exit(if code == 0 { 0 } else { 2 });
        }
    };
    let mut path = Vec::new();
    let mut cur = &matches;
    while let Some((name, sub)) = cur.subcommand() {
        path.push(name.to_string());
        cur = sub;
    }
    for key in config::unused(&cmd, &path, &values) {
        eprintln!("threeprimes: warning: config key `{key}` is not an option of `{}`", path.join(" "));
    }
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((cli, values))
}

fn real_main(argv: &[OsString]) -> Result<(), CliError> {
    let (cli, values) = parse(argv)?;
    let g = &cli.global;
    let threads = if g.deterministic { 1 } else { g.threads };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;

    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let t0 = Instant::now();
    let rep = commands::run(&cli.command, g.seed)?;
    let bytes = rep.artifact.render()?;

    let mut outputs = Vec::new();
    match &g.out {
        Some(path) => {
            write_atomic(path, &bytes)?;
            outputs.push(OutputDigest {
                path: path.clone(),
                bytes: bytes.len(),
                sha256: sha256_hex(&bytes),
            });
        }
        None => std::io::stdout().write_all(&bytes)?,
    }

    let manifest_path = g.manifest.clone().or_else(|| g.out.as_deref().map(manifest_path_for));
    if let Some(mp) = manifest_path {
        let manifest = RunManifest {
            command_line: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
            config_file: g.config.clone(),
            config_values: serde_json::to_value(&values)?,
            options: serde_json::to_value(&cli)?,
            seed: g.seed,
            threads: rayon::current_num_threads(),
            deterministic: g.deterministic,
            versions: Versions {
                threeprimes: threeprimes::VERSION,
                threeprimes_cli: env!("CARGO_PKG_VERSION"),
            },
            started_unix_s: started,
            wall_time_s: t0.elapsed().as_secs_f64(),
            outputs,
            summary: rep.summary,
        };
        let mut text = serde_json::to_vec_pretty(&manifest)?;
        text.push(b'\n');
        write_atomic(&mp, &text)?;
    } else if !matches!(rep.summary, Value::Null) {
        eprintln!("{}", serde_json::to_string(&rep.summary)?);
    }
    Ok(())
}
