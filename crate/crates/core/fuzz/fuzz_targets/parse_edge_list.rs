#![no_main]

use libfuzzer_sys::fuzz_target;
use trendcast::centrality::{self, Centrality};

fuzz_target!(|data: &[u8]| {
    if let Ok(graph) = centrality::parse_edge_list(data) {
        if graph.num_users() > 0 && graph.num_users() < 2000 {
            for c in Centrality::ALL {
                let v = centrality::influence(&graph, c).unwrap();
                assert!(v.values.iter().all(|x| x.is_finite() && *x >= 0.0));
            }
        }
    }
});
