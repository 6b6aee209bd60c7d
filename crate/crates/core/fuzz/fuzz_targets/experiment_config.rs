#![no_main]

use libfuzzer_sys::fuzz_target;
use trendcast::experiment;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = experiment::parse_experiment_config(text, None) {
            let _ = config.predictor_grid();
        }
    }
});
