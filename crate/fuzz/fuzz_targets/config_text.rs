#![no_main]

use fraclab_cli::config::{parse_config_text, Command};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config_text(text) {
            for c in Command::ALL {
                let _ = cfg.values_for(c);
            }
        }
    }
});
