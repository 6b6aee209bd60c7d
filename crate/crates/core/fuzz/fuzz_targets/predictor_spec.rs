#![no_main]

use libfuzzer_sys::fuzz_target;
use trendcast::PredictorSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = text.parse::<PredictorSpec>() {
            let again: PredictorSpec = spec.to_string().parse().expect("display output parses");
            assert_eq!(again.to_string(), spec.to_string());
        }
    }
});
