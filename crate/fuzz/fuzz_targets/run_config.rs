#![no_main]

use fraclab_cli::config::{parse_config_text, Command, RunConfig};
use libfuzzer_sys::fuzz_target;

// First byte picks the command, the rest is config text.
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let command = Command::ALL[pick as usize % Command::ALL.len()];
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(cfg) = parse_config_text(text) {
        if let Ok(run) = RunConfig::from_kv(command, &cfg.values_for(command), "out".into()) {
            // A decoded config must survive its own validation again.
            run.validate().expect("decoded config revalidates");
        }
    }
});
