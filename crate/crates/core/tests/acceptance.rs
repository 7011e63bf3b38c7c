//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero when any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warmflow::grid::{make_separable_grid, sliding_bump_sequence, GridSpec};
use warmflow::io::{parse_dimacs, parse_flow, write_dimacs, write_flow};
use warmflow::learn::{CapacityLaw, InstanceDistribution};
use warmflow::segment::{beta, build_seg_network, two_region_frame, SeedSet, SegConfig};
use warmflow::warmstart::feasibility_projection_observed;
use warmflow::{
    canonical_optimum, eta, imbalance, max_flow, median_erm, min_cut, sample_instances,
    warm_start_solve, EtaMode, Flow, FlowNetwork, PathStats, ProjectionRound, Subroutine,
};

use common::*;

const SUBROUTINES: [Subroutine; 2] = [Subroutine::EdmondsKarp, Subroutine::Dinic];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// The random networks used by the oracle, accounting and consistency
/// criteria.
fn random_pool() -> Vec<FlowNetwork> {
    let mut rng = rng(0xA11CE);
    (0..200).map(|_| random_network(&mut rng, 12, 30, 8)).collect()
}

const GRID_SIDES: [usize; 3] = [20, 40, 80];
const GRID_FRAMES: usize = 6;

fn grid_networks(side: usize) -> Vec<FlowNetwork> {
    sliding_bump_sequence(side, GRID_FRAMES)
        .iter()
        .map(|spec| make_separable_grid(spec).unwrap())
        .collect()
}

const IMAGE_SIDE: usize = 64;
const IMAGE_FRAMES: usize = 10;

/// Object 24x24 at intensity 200 on 50, moving one pixel right per frame.
fn image_networks() -> Vec<FlowNetwork> {
    let seeds = SeedSet {
        object: vec![(28, 32)],
        background: vec![(2, 2), (61, 2), (2, 61), (61, 61)],
        radius: 2,
    };
    (0..IMAGE_FRAMES)
        .map(|k| {
            let img = two_region_frame(IMAGE_SIDE, IMAGE_SIDE, (12 + k, 20, 24, 24), 200, 50);
            build_seg_network(&img, &seeds, &SegConfig::default())
                .unwrap()
                .network
        })
        .collect()
}

/// Every network the suite solves.
fn all_networks() -> Vec<(String, FlowNetwork)> {
    let mut out: Vec<(String, FlowNetwork)> = random_pool()
        .into_iter()
        .enumerate()
        .map(|(i, n)| (format!("random-{i}"), n))
        .collect();
    for side in GRID_SIDES {
        for (k, n) in grid_networks(side).into_iter().enumerate() {
            out.push((format!("grid-{side}-{k}"), n));
        }
    }
    for (k, n) in image_networks().into_iter().enumerate() {
        out.push((format!("image-{k}"), n));
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut rng = rng(1);
    let (mut solves, mut mismatches) = (0, Vec::new());
    let (mut over_capacity, mut unbalanced) = (0, 0);
    for (i, net) in random_pool().iter().enumerate() {
        let expected = brute_force_max_flow(net) as i64;
        for kind in 0..5 {
            let f_hat = random_prediction(&mut rng, net, kind);
            let caps = net.capacities();
            if f_hat.iter().zip(&caps).any(|(f, c)| f > c) {
                over_capacity += 1;
            } else if excess_deficit_nodes(net, &f_hat) != (vec![], vec![]) {
                unbalanced += 1;
            }
            for sub in SUBROUTINES {
                let (_, report) = warm_start_solve(net, &f_hat, sub).unwrap();
                solves += 1;
                if report.optimal_value != expected {
                    mismatches.push(format!("network {i} {sub}: {} vs {expected}", report.optimal_value));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    Outcome::new(
        mismatches.is_empty() && over_capacity > 0 && unbalanced > 0 && elapsed < Duration::from_secs(60),
        format!(
            "{solves} warm solves over 200 networks ({over_capacity} capacity-violating and \
             {unbalanced} conservation-violating predictions), {} mismatches, {}{}",
            mismatches.len(),
            secs(elapsed),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

/// Minimum L1 distance from `f_hat` to a feasible maximum flow, by
/// enumerating the capacity box.
fn eta_oracle(net: &FlowNetwork, f_hat: &[u64]) -> u64 {
    let target = brute_force_max_flow(net) as i64;
    let (s, t) = (net.source(), net.sink());
    box_vectors(&net.capacities())
        .into_iter()
        .filter(|f| {
            let b = balances(net, f);
            (0..net.node_count()).all(|v| v == s || v == t || b[v] == 0) && b[t] == target
        })
        .map(|f| l1(&f, f_hat))
        .min()
        .unwrap()
}

fn projection_error_bounds() -> Outcome {
    const INSTANCES: usize = 300;
    let mut rng = rng(2);
    let mut violations = [0usize; 4];
    let mut first: [Option<String>; 4] = Default::default();
    let mut eta_mismatches = 0;
    let mut capacity_respecting = 0;
    for _ in 0..INSTANCES {
        let net = random_network(&mut rng, 5, 6, 3);
        let caps = net.capacities();
        let f_hat = Flow::new(caps.iter().map(|&c| rng.gen_range(0..=c + 2)).collect());
        let eta_value = eta_oracle(&net, &f_hat);
        if eta(&net, &f_hat, EtaMode::Exact).unwrap() != eta_value {
            eta_mismatches += 1;
        }
        let (_, report) = warm_start_solve(&net, &f_hat, Subroutine::EdmondsKarp).unwrap();

        let overflow: u64 = f_hat.iter().zip(&caps).map(|(&f, &c)| f.saturating_sub(c)).sum();
        let clamped: Vec<u64> = f_hat.iter().zip(&caps).map(|(&f, &c)| f.min(c)).collect();
        let ex_def = |f: &[u64]| -> u64 {
            balances(&net, f)
                .iter()
                .enumerate()
                .filter(|&(v, _)| !net.is_terminal(v))
                .map(|(_, b)| b.unsigned_abs())
                .sum()
        };
        let respects = overflow == 0;
        capacity_respecting += respects as usize;

        let gap = (report.optimal_value - report.feasible_value) as u64;
        let clamped_ex_def = ex_def(&clamped);
        let claims = [
            (gap <= eta_value, format!("value gap {gap}")),
            (
                clamped_ex_def <= eta_value + overflow,
                format!("clamped ex+def {clamped_ex_def}, clamp total {overflow}"),
            ),
            (overflow <= eta_value, format!("overflow {overflow}")),
            (
                !respects || ex_def(&f_hat) <= eta_value,
                format!("ex+def {}", ex_def(&f_hat)),
            ),
        ];
        for (k, (holds, what)) in claims.into_iter().enumerate() {
            if !holds {
                violations[k] += 1;
                first[k].get_or_insert_with(|| {
                    let edges: Vec<_> = net
                        .edges()
                        .iter()
                        .map(|e| format!("{}->{}:{}", e.tail, e.head, e.capacity))
                        .collect();
                    format!(
                        "{what} > eta {eta_value} on s={} t={} [{}] with f_hat {:?}",
                        net.source(),
                        net.sink(),
                        edges.join(" "),
                        &f_hat[..]
                    )
                });
            }
        }
    }
    let names = [
        "value gap <= eta",
        "clamped ex+def <= eta + clamp",
        "overflow <= eta",
        "ex+def <= eta (capacity-respecting)",
    ];
    let mut detail = format!(
        "{INSTANCES} instances ({capacity_respecting} capacity-respecting), exact eta oracle \
         mismatches {eta_mismatches}; violations:"
    );
    for (k, name) in names.iter().enumerate() {
        detail.push_str(&format!(" [{name}: {}]", violations[k]));
    }
    for (k, example) in first.iter().enumerate() {
        if let Some(example) = example {
            detail.push_str(&format!("\n        counterexample to `{}`: {example}", names[k]));
        }
    }
    Outcome::new(
        violations.iter().all(|&v| v == 0) && eta_mismatches == 0,
        detail,
    )
}

fn iteration_accounting() -> Outcome {
    let mut rng = rng(3);
    let (mut checked, mut failures) = (0, Vec::new());
    for (i, net) in random_pool().iter().enumerate() {
        for kind in 0..5 {
            let f_hat = random_prediction(&mut rng, net, kind);
            for sub in SUBROUTINES {
                let (_, r) = warm_start_solve(net, &f_hat, sub).unwrap();
                checked += 1;
                let imbalance = r.post_clamp_excess + r.post_clamp_deficit;
                if r.projection.total.path_count > imbalance {
                    failures.push(format!(
                        "network {i} {sub}: {} projection paths for imbalance {imbalance}",
                        r.projection.total.path_count
                    ));
                }
                let gap = (r.optimal_value - r.feasible_value) as u64;
                if r.augment.path_count > gap {
                    failures.push(format!(
                        "network {i} {sub}: {} augmenting paths for a gap of {gap}",
                        r.augment.path_count
                    ));
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{checked} fuzzed warm solves, {} violations{}",
            failures.len(),
            failures.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

fn projection_round_ordering() -> Outcome {
    const STATES: usize = 600;
    let mut rng = rng(4);
    let (mut states, mut searches, mut violations) = (0, 0, 0);
    while states < STATES {
        let net = random_network(&mut rng, 10, 25, 6);
        let f = random_capacity_flow(&mut rng, &net);
        if imbalance(&net, &f).unwrap().is_balanced() {
            continue;
        }
        states += 1;
        feasibility_projection_observed(&net, &f, |step| {
            if step.round == ProjectionRound::ExcessToDeficit {
                return;
            }
            searches += 1;
            if excess_reaches_deficit(&net, step.flow) {
                violations += 1;
            }
        })
        .unwrap();
    }
    Outcome::new(
        violations == 0 && searches > 0,
        format!(
            "{states} infeasible states, {searches} re-searches after source/sink pushes, \
             {violations} violations"
        ),
    )
}

fn subset_imbalance_identity() -> Outcome {
    const PAIRS: usize = 1500;
    let mut rng = rng(5);
    let mut failures = 0;
    for _ in 0..PAIRS {
        let net = random_network(&mut rng, 12, 30, 8);
        let f = random_capacity_flow(&mut rng, &net);
        let inside = random_inner_subset(&mut rng, &net);
        let imb = imbalance(&net, &f).unwrap();
        let lhs: i128 = (0..net.node_count())
            .filter(|&v| inside[v])
            .map(|v| imb.deficit[v] as i128 - imb.excess[v] as i128)
            .sum();
        let mut rhs = 0i128;
        for (edge, &x) in net.edges().iter().zip(f.iter()) {
            match (inside[edge.tail], inside[edge.head]) {
                (true, false) => rhs += x as i128,
                (false, true) => rhs -= x as i128,
                _ => {}
            }
        }
        failures += (lhs != rhs) as usize;
    }
    Outcome::new(
        failures == 0,
        format!("{PAIRS} (flow, subset) pairs, {failures} mismatches"),
    )
}

fn median_erm_optimality() -> Outcome {
    const SETS: usize = 120;
    let mut rng = rng(6);
    let mut failures = Vec::new();
    for set in 0..SETS {
        let net = random_network(&mut rng, 5, 5, 4);
        let law = if rng.gen_bool(0.5) {
            CapacityLaw::Uniform
        } else {
            CapacityLaw::Perturbed {
                k: rng.gen_range(0..=2),
                pattern: Vec::new(),
            }
        };
        let count = rng.gen_range(1..=8);
        let dist = InstanceDistribution::new(net.clone(), law, rng.gen());
        let samples = sample_instances(&dist, count).unwrap();
        let median = median_erm(&samples).unwrap();
        let risk = |f: &[u64]| -> u64 { samples.optima.iter().map(|o| l1(f, o)).sum() };
        let achieved = risk(&median);
        let best = box_vectors(&net.capacities())
            .iter()
            .map(|f| risk(f))
            .min()
            .unwrap();
        if achieved != best {
            failures.push(format!("set {set}: risk {achieved}/{count}, optimum {best}/{count}"));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{SETS} sample sets, {} non-minimal{}",
            failures.len(),
            failures.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

/// Largest Manhattan distance between two cells that change membership.
fn changed_spread(a: &GridSpec, b: &GridSpec) -> usize {
    let n = a.side();
    let changed: Vec<(usize, usize)> = (0..n * n)
        .filter(|&v| a.mask.cells()[v] != b.mask.cells()[v])
        .map(|v| (v / n, v % n))
        .collect();
    let mut spread = 0;
    for &(r1, c1) in &changed {
        for &(r2, c2) in &changed {
            spread = spread.max(r1.abs_diff(r2) + c1.abs_diff(c2));
        }
    }
    spread
}

struct SweepRow {
    projection: PathStats,
    cold: PathStats,
    warm_expansions: u64,
}

fn grid_pattern() -> Outcome {
    const D: usize = 3;
    let started = Instant::now();
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for side in GRID_SIDES {
        let specs = sliding_bump_sequence(side, GRID_FRAMES);
        let nets: Vec<FlowNetwork> = specs.iter().map(|s| make_separable_grid(s).unwrap()).collect();
        let mut row = SweepRow {
            projection: PathStats::default(),
            cold: PathStats::default(),
            warm_expansions: 0,
        };
        for k in 1..nets.len() {
            let spread = changed_spread(&specs[k - 1], &specs[k]);
            if spread > D {
                problems.push(format!("n={side} frame {k} changes cells {spread} apart"));
            }
            let prediction = canonical_optimum(&nets[k - 1]);
            let (_, cold) = max_flow(&nets[k], None, Subroutine::EdmondsKarp).unwrap();
            let (_, warm) = warm_start_solve(&nets[k], &prediction, Subroutine::EdmondsKarp).unwrap();
            if warm.optimal_value != cold.value {
                problems.push(format!("n={side} frame {k}: warm {} cold {}", warm.optimal_value, cold.value));
            }
            row.projection += warm.projection.total;
            row.cold += cold.stats;
            row.warm_expansions += warm.node_expansions();
        }
        rows.push(row);
    }
    let elapsed = started.elapsed();

    let mut passed = problems.is_empty() && elapsed < Duration::from_secs(300);
    let mut detail = String::new();
    for (side, row) in GRID_SIDES.iter().zip(&rows) {
        let mean = row.projection.mean_length();
        let expansions_ok = row.warm_expansions as f64 <= 0.5 * row.cold.node_expansions as f64;
        passed &= mean <= (4 * D) as f64 && expansions_ok;
        detail.push_str(&format!(
            "n={side}: projection mean {mean:.2}, cold augmenting mean {:.2}, expansions warm {} / cold {}; ",
            row.cold.mean_length(),
            row.warm_expansions,
            row.cold.node_expansions
        ));
    }
    let (small, large) = (&rows[0], &rows[rows.len() - 1]);
    let projection_ratio = large.projection.mean_length() / small.projection.mean_length();
    let cold_ratio = large.cold.mean_length() / small.cold.mean_length();
    passed &= projection_ratio <= 1.5 && cold_ratio >= 2.0;
    detail.push_str(&format!(
        "projection ratio 80/20 {projection_ratio:.2}, cold ratio 80/20 {cold_ratio:.2}, {}",
        secs(elapsed)
    ));
    if let Some(p) = problems.first() {
        detail.push_str(&format!("; {p}"));
    }
    Outcome::new(passed, detail)
}

fn image_pattern() -> Outcome {
    let nets = image_networks();
    let mut projection = PathStats::default();
    let mut cold_stats = PathStats::default();
    let mut recovery = 0.0;
    let mut problems = Vec::new();
    for k in 1..nets.len() {
        let prediction = max_flow(&nets[k - 1], None, Subroutine::EdmondsKarp).unwrap().0;
        let (_, cold) = max_flow(&nets[k], None, Subroutine::EdmondsKarp).unwrap();
        let (_, warm) = warm_start_solve(&nets[k], &prediction, Subroutine::EdmondsKarp).unwrap();
        if warm.optimal_value != cold.value {
            problems.push(format!("frame {}: warm {} cold {}", k + 1, warm.optimal_value, cold.value));
        }
        projection += warm.projection.total;
        cold_stats += cold.stats;
        recovery += warm.feasible_value as f64 / warm.optimal_value as f64;
    }
    let recovery = recovery / (nets.len() - 1) as f64;
    let (p, c) = (projection.mean_length(), cold_stats.mean_length());
    Outcome::new(
        problems.is_empty() && p < 0.5 * c && recovery >= 0.9,
        format!(
            "frames 2-{IMAGE_FRAMES}: projection mean {p:.2} vs cold augmenting mean {c:.2} \
             (ratio {:.2}), mean recovery {:.1}%{}",
            p / c,
            100.0 * recovery,
            problems.first().map(|m| format!("; {m}")).unwrap_or_default()
        ),
    )
}

fn beta_spot_values() -> Outcome {
    let cfg = SegConfig::default();
    let cases = [(0u8, 0u8, 100u64), (120, 120, 100), (100, 50, 60), (50, 100, 60), (200, 50, 1), (50, 200, 1)];
    let got: Vec<u64> = cases.iter().map(|&(a, b, _)| beta(a, b, &cfg)).collect();
    let passed = cases.iter().zip(&got).all(|(&(_, _, want), &g)| g == want);
    Outcome::new(
        passed && (cfg.c, cfg.sigma) == (100, 50),
        format!("dI=0 -> {}, dI=50 -> {}, dI=150 -> {}", got[0], got[2], got[4]),
    )
}

fn consistency() -> Outcome {
    let nets = all_networks();
    let mut runs = 0;
    let mut failures = Vec::new();
    for (id, net) in &nets {
        let optima = [
            canonical_optimum(net),
            max_flow(net, None, Subroutine::Dinic).unwrap().0,
        ];
        for optimum in &optima {
            for sub in SUBROUTINES {
                let (_, r) = warm_start_solve(net, optimum, sub).unwrap();
                runs += 1;
                if r.clamp_total != 0 || r.projection.total.path_count != 0 || r.augment.path_count != 0 {
                    failures.push(format!(
                        "{id} {sub}: clamp {}, projection {}, augmenting {}",
                        r.clamp_total, r.projection.total.path_count, r.augment.path_count
                    ));
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{} networks, {runs} warm solves from exact optima, {} with work{}",
            nets.len(),
            failures.len(),
            failures.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

fn agreement_and_codecs() -> Outcome {
    let nets = all_networks();
    let mut failures = Vec::new();
    let mut round_trips = 0;
    for (id, net) in &nets {
        let mut values = Vec::new();
        for sub in SUBROUTINES {
            let (flow, report) = max_flow(net, None, sub).unwrap();
            let cut = min_cut(net, &flow).unwrap();
            let crossing: u64 = net
                .edges()
                .iter()
                .filter(|e| cut.source_side[e.tail] && !cut.source_side[e.head])
                .map(|e| e.capacity)
                .sum();
            if crossing as i64 != report.value || cut.capacity != crossing {
                failures.push(format!("{id} {sub}: cut {crossing} vs flow {}", report.value));
            }
            values.push(report.value);

            let text = write_flow(&flow);
            let back = parse_flow(&text).unwrap();
            if back != flow || write_flow(&back) != text {
                failures.push(format!("{id}: flow file round-trip"));
            }
            round_trips += 1;
        }
        if values[0] != values[1] {
            failures.push(format!("{id}: Edmonds-Karp {} vs Dinic {}", values[0], values[1]));
        }
        let text = write_dimacs(net);
        let back = parse_dimacs(&text).unwrap();
        if &back != net || write_dimacs(&back) != text {
            failures.push(format!("{id}: DIMACS round-trip"));
        }
        round_trips += 1;
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{} networks solved by both subroutines, {round_trips} codec round-trips, {} failures{}",
            nets.len(),
            failures.len(),
            failures.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("projection error bounds", projection_error_bounds),
        ("iteration accounting", iteration_accounting),
        ("projection round ordering", projection_round_ordering),
        ("subset imbalance identity", subset_imbalance_identity),
        ("median ERM optimality", median_erm_optimality),
        ("d-local grid pattern", grid_pattern),
        ("image sequence pattern", image_pattern),
        ("boundary penalty spot values", beta_spot_values),
        ("consistency at the optimum", consistency),
        ("subroutine agreement and codecs", agreement_and_codecs),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (index, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|payload| {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {message}"))
        });
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", index + 1, outcome.detail);
        failed += !outcome.passed as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
