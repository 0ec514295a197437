#![no_main]

use clap::Parser;
use fraclab_cli::{load_config, Cli};
use libfuzzer_sys::fuzz_target;

// Newline-separated arguments after the program name.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("fraclab").chain(text.split('\n'));
    if let Ok(cli) = Cli::try_parse_from(args) {
        let (command, params) = cli.command.split();
        if params.config.is_none() {
            let _ = load_config(command, params, None);
        }
    }
});
