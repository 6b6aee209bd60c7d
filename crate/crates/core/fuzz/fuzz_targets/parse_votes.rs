#![no_main]

use libfuzzer_sys::fuzz_target;
use trendcast::ingestion;
use trendcast::TemporalBipartiteGraph;

fuzz_target!(|data: &[u8]| {
    if let Ok(events) = ingestion::parse_votes(data) {
        if let Ok(g) = TemporalBipartiteGraph::build(events) {
            let _ = g.top_items_by_increase(g.last_timestamp(), 1 + g.last_timestamp() / 2, 10);
        }
    }
});
