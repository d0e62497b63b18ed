//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::num::NonZeroUsize;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::Rng;

use tdham::decomposition::{balanced_path_decomposition, NiceTreeDecomposition};
use tdham::generators::{
    all_graphs, complete, complete_bipartite, cycle, path, petersen, random_connected,
    random_hamiltonian_partial_ktree, random_partial_ktree, rng, with_random_weights,
};
use tdham::oracle::{backtrack_count, held_karp};
use tdham::solve::{count_prepared, prepare, tsp_prepared, Engine, Prepared};
use tdham::transforms::{mobius, union_product, zeta, SubsetFunction};
use tdham::zeta::{verify_space_profile, EngineOptions, EngineStats};
use tdham::{Graph, SignedCount};

const SEED: u64 = 20_240_601;

const TRANSFORM_SAMPLES: usize = 1000;
const TRANSFORM_MAX_UNIVERSE: usize = 4;
const TRANSFORM_LIMIT: Duration = Duration::from_secs(10);

const EXHAUSTIVE_MAX_N: usize = 6;
const RANDOM_GRAPHS: usize = 200;
const RANDOM_MAX_N: usize = 10;
const COUNTING_LIMIT: Duration = Duration::from_secs(5 * 60);

const KTREES: usize = 100;
const KTREE_MAX_K: usize = 4;
const KTREE_MAX_N: usize = 30;
const KTREE_LIMIT: Duration = Duration::from_secs(10 * 60);

const TSP_GRAPHS: usize = 100;
const TSP_MAX_N: usize = 10;
const TSP_MAX_WEIGHT: u64 = 10;
const TSP_LIMIT: Duration = Duration::from_secs(10 * 60);

const PATH_SIZES: [usize; 3] = [15, 31, 63];
const PEAK_FACTOR: usize = 8;

const MAX_TERM_FANOUT: usize = 3;

/// Memo size for suites whose instances the cache-free engine cannot finish.
const SUITE_CACHE: usize = 1 << 20;

fn cached() -> EngineOptions {
    EngineOptions { cache_capacity: NonZeroUsize::new(SUITE_CACHE), ..EngineOptions::default() }
}

struct Outcome {
    pass: bool,
    detail: String,
}

/// Observations shared by criteria 6 and 7.
#[derive(Default)]
struct Ledger {
    max_term_fanout: usize,
    zeta_runs: usize,
    parity_checked: usize,
    parity_failures: Vec<String>,
}

impl Ledger {
    fn zeta(&mut self, stats: &Option<EngineStats>) {
        if let Some(s) = stats {
            self.zeta_runs += 1;
            self.max_term_fanout = self.max_term_fanout.max(s.max_term_fanout());
        }
    }

    /// `raw` must be even and halve to `expected`.
    fn parity(&mut self, what: &str, raw: &Option<SignedCount>, expected: &BigUint) {
        let Some(raw) = raw else { return };
        self.parity_checked += 1;
        let expected = BigInt::from(expected.clone());
        if raw % 2 != BigInt::from(0) || raw / 2 != expected {
            self.parity_failures.push(format!("{what}: raw {raw}, expected 2 × {expected}"));
        }
    }
}

fn random_table<R: Rng>(size: usize, r: &mut R) -> SubsetFunction<BigInt> {
    SubsetFunction::from_fn((0..size).collect(), |_| BigInt::from(r.gen_range(-50i64..=50))).unwrap()
}

fn transform_identities() -> Outcome {
    let mut r = rng(SEED);
    let start = Instant::now();
    let mut failures = 0;
    for t in 0..TRANSFORM_SAMPLES {
        let size = t % (TRANSFORM_MAX_UNIVERSE + 1);
        let f = random_table(size, &mut r);
        let g = random_table(size, &mut r);
        if mobius(&zeta(&f)) != f {
            failures += 1;
        }
        let lhs = zeta(&union_product(&f, &g).unwrap());
        if lhs != zeta(&f).pointwise_mul(&zeta(&g)).unwrap() {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures == 0 && elapsed < TRANSFORM_LIMIT,
        detail: format!("{TRANSFORM_SAMPLES} pairs, {failures} identity failures, {elapsed:.2?} (limit {TRANSFORM_LIMIT:?})"),
    }
}

fn end_to_end_counting(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut check = |g: &Graph, options: EngineOptions, ledger: &mut Ledger| {
        let oracle = backtrack_count(g).unwrap().cycle_count;
        let report = tdham::count_cycles(g, None, None, Engine::Zeta, options).unwrap();
        ledger.zeta(&report.stats.zeta);
        ledger.parity("counting", &report.raw_root, &oracle);
        if report.count != oracle {
            mismatches.push(format!("{} -> {} (oracle {oracle})", g.to_edge_list().replace('\n', ";"), report.count));
        }
    };
    let mut exhaustive = 0;
    for n in 1..=EXHAUSTIVE_MAX_N {
        for g in all_graphs(n).filter(Graph::is_connected) {
            check(&g, EngineOptions::default(), ledger);
            exhaustive += 1;
        }
    }
    let mut r = rng(SEED + 2);
    for _ in 0..RANDOM_GRAPHS {
        let n = r.gen_range(3..=RANDOM_MAX_N);
        let p = r.gen_range(0.1..0.7);
        let g = random_connected(n, p, &mut r);
        check(&g, cached(), ledger);
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: mismatches.is_empty() && elapsed < COUNTING_LIMIT,
        detail: format!(
            "{exhaustive} connected labeled graphs n<={EXHAUSTIVE_MAX_N} + {RANDOM_GRAPHS} random n<={RANDOM_MAX_N}, \
             {} mismatches{}, {elapsed:.2?} (limit {COUNTING_LIMIT:?})",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    }
}

fn engine_agreement(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED + 3);
    let mut mismatches = 0;
    let mut nonzero = 0;
    let mut widest = 0;
    for _ in 0..KTREES {
        let k = r.gen_range(1..=KTREE_MAX_K);
        let n = r.gen_range((k + 1).max(3)..=KTREE_MAX_N);
        let keep = r.gen_range(0.3..=1.0);
        let (g, td) = if k >= 2 {
            random_hamiltonian_partial_ktree(n, k, keep, &mut r)
        } else {
            random_partial_ktree(n, k, keep, &mut r)
        };
        let p = prepare(&g, Some(&td), None).unwrap().expect("generated graphs are connected");
        widest = widest.max(p.ntd.width());
        let reference = count_prepared(&p, Engine::Reference, EngineOptions::default()).unwrap();
        let zeta = count_prepared(&p, Engine::Zeta, cached()).unwrap();
        ledger.zeta(&zeta.stats.zeta);
        ledger.parity("k-tree", &zeta.raw_root, &reference.count);
        ledger.parity("k-tree reference", &reference.raw_root, &reference.count);
        if zeta.count != reference.count {
            mismatches += 1;
        }
        if reference.count > BigUint::from(0u32) {
            nonzero += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: mismatches == 0 && elapsed < KTREE_LIMIT,
        detail: format!(
            "{KTREES} partial k-trees (k<={KTREE_MAX_K}, n<={KTREE_MAX_N}, {nonzero} with cycles, anchored width <= {widest}), \
             {mismatches} mismatches, {elapsed:.2?} (limit {KTREE_LIMIT:?})"
        ),
    }
}

fn tsp_correctness(ledger: &mut Ledger) -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED + 4);
    let mut mismatches = Vec::new();
    let mut tours = 0;
    for t in 0..TSP_GRAPHS {
        let n = r.gen_range(3..=TSP_MAX_N);
        let p = r.gen_range(0.1..0.7);
        let g = with_random_weights(&random_connected(n, p, &mut r), TSP_MAX_WEIGHT, &mut r);
        let hk = held_karp(&g).unwrap();
        let bt = backtrack_count(&g).unwrap();
        let Some(prep) = prepare(&g, None, None).unwrap() else { continue };
        let report = tsp_prepared(&prep, Engine::Zeta, cached()).unwrap();
        ledger.zeta(&report.stats.zeta);
        if let Some(raw) = &report.raw_root {
            for (c, expected) in bt.cost_histogram.iter().enumerate() {
                ledger.parity("tsp coefficient", &Some(raw.coeff(c)), expected);
            }
        }
        if report.solution.min_cost != hk {
            mismatches.push(format!("instance {t}: min cost {:?}, Held-Karp {hk:?}", report.solution.min_cost));
        }
        if report.solution.histogram != bt.cost_histogram {
            mismatches.push(format!("instance {t}: histogram differs from backtracking"));
        }
        if hk.is_some() {
            tours += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: mismatches.is_empty() && elapsed < TSP_LIMIT,
        detail: format!(
            "{TSP_GRAPHS} weighted graphs (n<={TSP_MAX_N}, weights 0..={TSP_MAX_WEIGHT}, {tours} with tours), \
             {} mismatches{}, {elapsed:.2?} (limit {TSP_LIMIT:?})",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    }
}

fn path_instance(n: usize) -> Prepared {
    prepare(&path(n), Some(&balanced_path_decomposition(n)), Some(0)).unwrap().expect("paths are connected")
}

fn space_claim(ledger: &mut Ledger) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in PATH_SIZES {
        let p = path_instance(n);
        let zeta = count_prepared(&p, Engine::Zeta, EngineOptions::default()).unwrap();
        let reference = count_prepared(&p, Engine::Reference, EngineOptions::default()).unwrap();
        let stats = zeta.stats.zeta.clone().unwrap();
        ledger.zeta(&zeta.stats.zeta);
        let report = verify_space_profile(&stats, &p.ntd, 1);
        ok &= report.peak_ok() && report.strands_ok();
        ok &= report.peak_live_values <= PEAK_FACTOR * report.node_path_length;
        rows.push((n, report.node_path_length, report.peak_live_values, reference.stats.reference.unwrap().total_entries));
    }
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    // zeta peak grows no faster than the node-path length
    let peak_linear = last.2 * first.1 <= first.2 * last.1 * 2;
    // reference entries grow at least linearly in n, with a larger slope
    let ref_linear = rows.iter().all(|r| r.3 >= r.0) && last.3 - first.3 >= last.0 - first.0;
    let steeper = last.3.saturating_sub(first.3) > last.2.saturating_sub(first.2);
    ok &= peak_linear && ref_linear && steeper;
    let table: Vec<String> =
        rows.iter().map(|(n, l, p, e)| format!("n={n}: path length {l}, peak {p}, reference entries {e}")).collect();
    Outcome { pass: ok, detail: table.join("; ") }
}

fn known_instances(ledger: &mut Ledger) -> Outcome {
    let mut cases = vec![
        ("Petersen", petersen(), 0u32),
        ("K4", complete(4), 3),
        ("K3,3", complete_bipartite(3, 3), 6),
    ];
    for n in 3..=8 {
        cases.push(("C_n", cycle(n), 1));
    }
    let mut wrong = Vec::new();
    for (name, g, expected) in &cases {
        for engine in [Engine::Zeta, Engine::Reference] {
            let report = tdham::count_cycles(g, None, None, engine, EngineOptions::default()).unwrap();
            ledger.zeta(&report.stats.zeta);
            if report.count != BigUint::from(*expected) {
                wrong.push(format!("{name} n={} {engine:?} -> {}", g.vertex_count(), report.count));
            }
        }
    }
    Outcome {
        pass: wrong.is_empty(),
        detail: format!("{} instances x 2 engines, {} wrong {}", cases.len(), wrong.len(), wrong.join(", ")),
    }
}

fn depth_note(ntd: &NiceTreeDecomposition) -> String {
    format!("width {}, depth {}", ntd.width(), ntd.depth())
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "transform identities", transform_identities()),
        (2, "end-to-end counting vs backtracking", end_to_end_counting(&mut ledger)),
        (3, "zeta engine vs reference DP on partial k-trees", engine_agreement(&mut ledger)),
        (4, "TSP vs Held-Karp and cost histograms", tsp_correctness(&mut ledger)),
        (5, "space profile on balanced path decompositions", space_claim(&mut ledger)),
    ];
    let parity_runs = ledger.parity_checked;
    let parity = Outcome {
        pass: ledger.parity_failures.is_empty() && parity_runs > 0,
        detail: format!(
            "{parity_runs} root values checked, {} odd or off by the factor{}",
            ledger.parity_failures.len(),
            ledger.parity_failures.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    };
    results.push((8, "known instances, both engines", known_instances(&mut ledger)));
    let fanout = Outcome {
        pass: ledger.max_term_fanout <= MAX_TERM_FANOUT,
        detail: format!(
            "max child calls per pseudo-edge term {} over {} zeta runs (claimed <= {MAX_TERM_FANOUT})",
            ledger.max_term_fanout, ledger.zeta_runs
        ),
    };
    results.push((6, "forget fan-out per pseudo-edge term", fanout));
    results.push((7, "calibration factor 2", parity));
    results.sort_by_key(|r| r.0);

    let p = path_instance(PATH_SIZES[0]);
    println!("path family decomposition (n={}): {}", PATH_SIZES[0], depth_note(&p.ntd));
    let mut failed = 0;
    for (id, name, outcome) in &results {
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {verdict}  {name}: {}", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
