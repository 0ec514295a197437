#![no_main]

use fraclab_core::symbols::SymbolGrid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(grid) = SymbolGrid::from_csv(text) {
            for i in 0..grid.len() {
                let _ = grid.point(i);
            }
            let _ = grid.to_json();
        }
    }
});
