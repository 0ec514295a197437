//! Command-line driver: config decoding, dispatch and provenance.

pub mod args;
pub mod config;
pub mod error;
pub mod manifest;
pub mod run;
pub mod verify;

pub use args::{load_config, Cli, CommandArgs, Params, OUT_DIR_ENV};
pub use config::{parse_config_text, Command, ConfigError, RunConfig, SKEW_CONSTRAINT};
pub use error::CliError;
pub use manifest::{FileEntry, RunManifest, MANIFEST_NAME};
pub use run::{run, sweep_failures, RunOutcome};

/// Parses flags, runs the command and returns the process exit code.
/// Errors are reported on stderr as one JSON object.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let err = serde_json::json!({ "error": "config", "message": e.to_string().trim_end(), "exit_code": 2 });
            eprintln!("{err}");
            return 2;
        }
    };
    let (command, params) = cli.command.split();
    let result = load_config(command, params, std::env::var(OUT_DIR_ENV).ok())
        .map_err(CliError::from)
        .and_then(|cfg| run(&cfg))
        .and_then(RunOutcome::into_result);
    match result {
        Ok(m) => {
            for f in &m.files {
                println!("{}  {}", f.sha256, f.name);
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
