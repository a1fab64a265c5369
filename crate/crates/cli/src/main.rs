use std::process::ExitCode;

use clap::Parser;
use env_logger::Env;

use spectrograph_cli::{error_json, exit_code, run_pipeline, PipelineConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(Env::new().filter_or("SPECTROGRAPH_LOG", "warn")).init();
    let config = PipelineConfig::parse();
    match run_pipeline(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
