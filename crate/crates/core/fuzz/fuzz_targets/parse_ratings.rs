#![no_main]

use libfuzzer_sys::fuzz_target;
use trendcast::ingestion;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = ingestion::parse_ratings(data) {
        let load = ingestion::apply_threshold(&records, 3.0);
        assert_eq!(load.events.len() + load.below_threshold, records.len());
        let _ = ingestion::subset_users(&load.events, 2, 1, 0);
    }
});
