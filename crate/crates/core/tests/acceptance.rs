//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails. Built with `harness = false` so the lines
//! show up in plain `cargo test` output.

mod common;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{ids, leaderrank_augmented, metrics, pagerank_dense, random_digraph, random_events, Links};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trendcast::centrality::{self, Centrality, SocialGraph};
use trendcast::evaluation::{self, EvalConfig};
use trendcast::experiment;
use trendcast::ingestion;
use trendcast::predictors::{self, Predictor, PredictorSpec};
use trendcast::synthgen::{self, GenConfig};
use trendcast::{TemporalBipartiteGraph, Timestamp, UserId};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed <= limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn social_from(n: usize, edges: &[(usize, usize)]) -> SocialGraph {
    SocialGraph::with_users(
        (0..n as u64).map(UserId),
        edges.iter().map(|&(f, l)| (UserId(f as u64), UserId(l as u64))),
    )
}

fn reduction_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for fixture in 0..100u64 {
        let users = rng.gen_range(5..=500);
        let items = rng.gen_range(2..=200);
        let count = rng.gen_range(10..=5000);
        let horizon = rng.gen_range(10..=10_000);
        let g = TemporalBipartiteGraph::build(random_events(fixture, users, items, count, horizon)).unwrap();
        let social = social_from(
            users as usize,
            &random_digraph(fixture, users as usize, 3.0 / users as f64),
        );
        let t_p = rng.gen_range(1..=horizon);
        let t = rng.gen_range(0..=horizon);
        let all = usize::MAX;
        let total = predictors::score_total_pop(&g, t).top_n(all);
        let recent = predictors::score_recent_pop(&g, t, t_p).unwrap().top_n(all);
        let mut same = vec![
            (
                "pbp(0) vs total",
                predictors::score_pbp(&g, t, t_p, 0.0).unwrap().top_n(all),
                &total,
            ),
            (
                "pbp(1) vs increase",
                predictors::score_pbp(&g, t, t_p, 1.0).unwrap().top_n(all),
                &recent,
            ),
            (
                "wpp(0) vs increase",
                predictors::score_wpp(&g, t, t_p, 0.0).unwrap().top_n(all),
                &recent,
            ),
        ];
        for c in Centrality::ALL {
            let r = predictors::score_ibp(&g, &social, t, t_p, 0.0, c).unwrap().top_n(all);
            same.push(("ibp(0) vs increase", r, &recent));
        }
        for (what, got, expected) in same {
            check(&got == expected, || format!("fixture {fixture}: {what} differ"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("100 fixtures, {:.2?}", start.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut queries = 0usize;
    for seed in 0..6u64 {
        let events = random_events(300 + seed, 400, 150, 10_000, 5000);
        let links = Links::new(&events);
        let g = TemporalBipartiteGraph::build(events).unwrap();
        for &item in g.items().iter().step_by(3) {
            for t in [-1, 0, 1234, 2500, 4999, 5000, 6000] {
                check(
                    g.item_degree_at(item, t).unwrap() == links.item_degree(item.0, t),
                    || format!("k({item}, {t})"),
                )?;
                for w in [1, 100, 2500] {
                    check(
                        g.item_degree_increase(item, t, w).unwrap() == links.increase(item.0, t, w),
                        || format!("Δk({item}, {t}, {w})"),
                    )?;
                    queries += 2;
                }
            }
        }
        for (t, w, n) in [(1000, 500, 10), (2500, 2500, 50), (5000, 100, 150)] {
            let got: Vec<(u64, usize)> = g
                .top_items_by_increase(t, w, n)
                .unwrap()
                .into_iter()
                .map(|(i, k)| (i.0, k))
                .collect();
            check(got == links.top_by_increase(t, w, n), || format!("top-{n} at {t}/{w}"))?;
        }
        let (t_p, t_f, n) = (600, 400, 20);
        let config = EvalConfig::regular(&g, n, t_p, t_f, 4).unwrap();
        for lambda in [0.0, 0.5, 1.0] {
            let spec = PredictorSpec::new(Predictor::Pbp { lambda }, t_p).unwrap();
            let report = evaluation::evaluate(&g, None, &spec, &config).unwrap();
            for d in &report.per_date {
                let predicted = ids(&links.pbp(d.t_star, t_p, lambda));
                let lib = predictors::score(&g, &spec, d.t_star, None).unwrap().top_n(n);
                check(lib == predicted[..n.min(predicted.len())], || {
                    format!("pbp({lambda}) list at {}", d.t_star)
                })?;
                let (p, e, c, q) = metrics(&links, &predicted, d.t_star, t_p, t_f, n);
                check(
                    (d.precision, d.new_entries, d.correct, d.new_entry_rate) == (p, e, c, q),
                    || format!("metrics at {} for λ={lambda}", d.t_star),
                )?;
                queries += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{queries} queries, {:.2?}", start.elapsed()))
}

fn centrality_correctness() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    for seed in 0..40u64 {
        let n = 2 + (seed as usize * 13) % 49;
        let p = [0.02, 0.08, 0.2, 0.5][seed as usize % 4];
        let edges = random_digraph(seed, n, p);
        let g = social_from(n, &edges);
        let value = |v: &trendcast::InfluenceVector| -> Vec<f64> {
            (0..n).map(|u| v.get(&g, UserId(u as u64)).unwrap()).collect()
        };
        let pr = value(&centrality::influence(&g, Centrality::PageRank).unwrap());
        for (a, b) in pr.iter().zip(pagerank_dense(n, &edges, 0.85)) {
            worst.0 = worst.0.max((a - b).abs());
        }
        let sum: f64 = pr.iter().sum();
        check((sum - 1.0).abs() <= 1e-8, || format!("seed {seed}: Σ PageRank = {sum}"))?;

        let lr = value(&centrality::influence(&g, Centrality::LeaderRank).unwrap());
        if !edges.is_empty() {
            for (a, b) in lr.iter().zip(leaderrank_augmented(n, &edges)) {
                worst.1 = worst.1.max((a - b).abs());
            }
        }
        let sum: f64 = lr.iter().sum();
        check((sum - n as f64).abs() <= 1e-6 * n as f64, || {
            format!("seed {seed}: Σ LeaderRank = {sum}")
        })?;
    }
    check(worst.0 <= 1e-8, || format!("PageRank off by {:e}", worst.0))?;
    check(worst.1 <= 1e-8, || format!("LeaderRank off by {:e}", worst.1))?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "max error PageRank {:.1e}, LeaderRank {:.1e}, {:.2?}",
        worst.0,
        worst.1,
        start.elapsed()
    ))
}

fn aging_config(seed: u64) -> GenConfig {
    GenConfig {
        num_users: 50_000,
        num_items: 6000,
        initial_items: 10,
        num_events: 100_000,
        item_arrival_rate: 0.05,
        decay_timescale: Some(2000.0),
        rng_seed: seed,
        ..GenConfig::default()
    }
}

fn pure_pa_config(seed: u64) -> GenConfig {
    GenConfig {
        num_users: 50_000,
        num_items: 1000,
        initial_items: 1000,
        num_events: 100_000,
        decay_timescale: None,
        rng_seed: seed,
        ..GenConfig::default()
    }
}

const AGING_T_P: Timestamp = 4000;
const PA_WINDOW: Timestamp = 20_000;
const SEEDS: u64 = 5;
const DEPTH: usize = 100;

fn mean_precision(g: &TemporalBipartiteGraph, predictor: Predictor, t_p: Timestamp, t_f: Timestamp) -> f64 {
    let config = EvalConfig::regular(g, DEPTH, t_p, t_f, 7).unwrap();
    let spec = PredictorSpec::new(predictor, t_p).unwrap();
    evaluation::evaluate(g, None, &spec, &config).unwrap().mean_precision
}

fn structural_q() -> Outcome {
    let mut dates = 0;
    let mut check_graph = |g: &TemporalBipartiteGraph, t_p, t_f, n| -> Result<(), String> {
        let config = EvalConfig::regular(g, n, t_p, t_f, 7).unwrap();
        let spec = PredictorSpec::new(Predictor::Pbp { lambda: 1.0 }, t_p).unwrap();
        for d in evaluation::evaluate(g, None, &spec, &config).unwrap().per_date {
            check(d.correct == 0, || format!("C_n = {} at t* = {}", d.correct, d.t_star))?;
            dates += 1;
        }
        Ok(())
    };
    for seed in 0..SEEDS {
        check_graph(
            &TemporalBipartiteGraph::build(synthgen::generate(&aging_config(seed)).unwrap()).unwrap(),
            AGING_T_P,
            AGING_T_P,
            DEPTH,
        )?;
        check_graph(
            &TemporalBipartiteGraph::build(synthgen::generate(&pure_pa_config(seed)).unwrap()).unwrap(),
            PA_WINDOW,
            PA_WINDOW,
            DEPTH,
        )?;
    }
    for seed in 0..20 {
        let g = TemporalBipartiteGraph::build(random_events(seed, 300, 120, 4000, 2000)).unwrap();
        check_graph(&g, 150, 200, 15)?;
    }
    Ok(format!("C_n = 0 at all {dates} test dates"))
}

fn regimes() -> Outcome {
    let start = Instant::now();
    let (mut aging_total, mut aging_recent, mut pa_total, mut pa_recent) = (0.0, 0.0, 0.0, 0.0);
    for seed in 0..SEEDS {
        let g = TemporalBipartiteGraph::build(synthgen::generate(&aging_config(seed)).unwrap()).unwrap();
        aging_total += mean_precision(&g, Predictor::TotalPop, AGING_T_P, AGING_T_P);
        aging_recent += mean_precision(&g, Predictor::RecentPop, AGING_T_P, AGING_T_P);
        let g = TemporalBipartiteGraph::build(synthgen::generate(&pure_pa_config(seed)).unwrap()).unwrap();
        pa_total += mean_precision(&g, Predictor::TotalPop, PA_WINDOW, PA_WINDOW);
        pa_recent += mean_precision(&g, Predictor::RecentPop, PA_WINDOW, PA_WINDOW);
    }
    let s = SEEDS as f64;
    let (at, ar, pt, pr) = (aging_total / s, aging_recent / s, pa_total / s, pa_recent / s);
    let summary = format!(
        "aging: recent {ar:.3} vs total {at:.3}; pure PA: recent {pr:.3} vs total {pt:.3} (|Δ| {:.3}), {:.1?}",
        (pr - pt).abs(),
        start.elapsed()
    );
    check(ar > at, || format!("(a) fails: {summary}"))?;
    check((pr - pt).abs() < 0.05, || format!("(b) fails: {summary}"))?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(summary)
}

fn window_effect() -> Outcome {
    let t_fs: [Timestamp; 5] = [1000, 2000, 4000, 8000, 16_000];
    let mut recent = [0.0; 5];
    let mut total = [0.0; 5];
    for seed in 0..SEEDS {
        let g = TemporalBipartiteGraph::build(synthgen::generate(&aging_config(seed)).unwrap()).unwrap();
        for (k, &t_f) in t_fs.iter().enumerate() {
            recent[k] += mean_precision(&g, Predictor::Pbp { lambda: 1.0 }, AGING_T_P, t_f) / SEEDS as f64;
            total[k] += mean_precision(&g, Predictor::Pbp { lambda: 0.0 }, AGING_T_P, t_f) / SEEDS as f64;
        }
    }
    let drop = recent[0] - recent[4];
    let fmt = |v: &[f64; 5]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ");
    let summary = format!(
        "P(λ=1) over T_F {t_fs:?}: {}; P(λ=0): {}; drop {drop:.3}",
        fmt(&recent),
        fmt(&total)
    );
    check(drop >= 0.05, || summary.clone())?;
    Ok(summary)
}

fn write_sweep_inputs(dir: &Path) {
    let config = GenConfig {
        num_users: 5000,
        num_items: 3000,
        initial_items: 10,
        num_events: 30_000,
        item_arrival_rate: 0.1,
        decay_timescale: Some(500.0),
        user_activity_exponent: 0.5,
        rng_seed: 17,
        ..GenConfig::default()
    };
    let events = synthgen::generate(&config).unwrap();
    ingestion::write_votes(&events, fs::File::create(dir.join("votes.csv")).unwrap()).unwrap();
    let social = synthgen::generate_social(5000, 20_000, 1.0, 17).unwrap();
    centrality::write_edge_list(&social, fs::File::create(dir.join("social.txt")).unwrap()).unwrap();
    fs::write(
        dir.join("sweep.conf"),
        "dataset = votes.csv\nsocial_graph = social.txt\n\
         predictor = total_pop, recent_pop, pbp, wpp, ibp\n\
         lambda = 0, 0.5, 0.9, 1\ngamma = -1, -0.5, 0.5, 1\neta = -1, 0, 1\n\
         t_p = 1000, 3000\nt_f = 1000, 3000\nn = 20, 100\ntest_date_count = 5\n",
    )
    .unwrap();
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    write_sweep_inputs(dir.path());
    let config = experiment::load_experiment_config(dir.path().join("sweep.conf")).unwrap();
    let mut outputs = Vec::new();
    for (run, threads) in [1, 4, 4].into_iter().enumerate() {
        let out = dir.path().join(format!("run{run}"));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| experiment::run_sweep(&config, Some(&out))).unwrap();
        let files: Vec<Vec<u8>> = ["sweep.csv", "heatmap.csv", "scatter.csv"]
            .iter()
            .map(|f| fs::read(out.join(f)).unwrap())
            .collect();
        outputs.push(files);
    }
    check(outputs.windows(2).all(|w| w[0] == w[1]), || {
        "CSV outputs differ between runs".into()
    })?;
    let bytes: usize = outputs[0].iter().map(Vec::len).sum();
    Ok(format!("3 runs (1, 4, 4 threads), {bytes} bytes each, identical"))
}

fn scale() -> Outcome {
    let config = GenConfig {
        num_users: 300_000,
        num_items: 40_000,
        initial_items: 100,
        num_events: 3_000_000,
        item_arrival_rate: 0.013,
        decay_timescale: Some(30_000.0),
        rng_seed: 99,
        ..GenConfig::default()
    };
    let gen_start = Instant::now();
    let events = synthgen::generate(&config).unwrap();
    let generated = gen_start.elapsed();

    let start = Instant::now();
    let g = TemporalBipartiteGraph::build(events).unwrap();
    let (t_p, t_f) = (100_000, 100_000);
    let eval = EvalConfig::regular(&g, DEPTH, t_p, t_f, 7).unwrap();
    let spec = PredictorSpec::new(Predictor::Pbp { lambda: 0.9 }, t_p).unwrap();
    let report = evaluation::evaluate(&g, None, &spec, &eval).unwrap();
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!(
        "{} events, {} users, {} items: build + 7-date evaluation {elapsed:.1?} (generation {generated:.1?}), P = {:.3}",
        g.num_links(),
        g.num_users(),
        g.num_items(),
        report.mean_precision
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 reduction identities", reduction_identities),
        ("2 oracle equivalence", oracle_equivalence),
        ("3 centrality correctness", centrality_correctness),
        ("4 structural Q_n for λ=1", structural_q),
        ("5 qualitative regimes", regimes),
        ("6 window effect", window_effect),
        ("7 determinism", determinism),
        ("8 scale", scale),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
