#![no_main]

use fraclab_core::sampling::SampleBatch;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(batch) = SampleBatch::from_csv(text) {
            let _ = batch.to_csv(None);
            let _ = batch.norms();
        }
    }
});
