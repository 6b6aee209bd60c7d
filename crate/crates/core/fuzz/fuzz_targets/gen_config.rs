#![no_main]

use libfuzzer_sys::fuzz_target;
use trendcast::experiment;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(settings) = experiment::parse_gen_config(text) {
            let _ = settings.network.validate();
        }
    }
});
