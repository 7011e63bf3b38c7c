//! Independent oracles and random instance generators shared by the
//! integration suites. Nothing here calls the solvers under test.

#![allow(dead_code)]

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use warmflow::{Edge, Flow, FlowNetwork};

/// Random network with `2..=max_nodes` nodes, source 0, sink `n - 1`.
pub fn random_network<R: Rng>(rng: &mut R, max_nodes: usize, max_edges: usize, max_cap: u64) -> FlowNetwork {
    let n = rng.gen_range(2..=max_nodes);
    let m = rng.gen_range(1..=max_edges);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let tail = rng.gen_range(0..n);
        let head = rng.gen_range(0..n);
        if tail != head {
            edges.push(Edge::new(tail, head, rng.gen_range(0..=max_cap)));
        }
    }
    FlowNetwork::new(n, 0, n - 1, edges).unwrap()
}

/// Max-flow value as the minimum over every s-t cut.
pub fn brute_force_max_flow(net: &FlowNetwork) -> u64 {
    let (s, t) = (net.source(), net.sink());
    let free: Vec<usize> = (0..net.node_count()).filter(|&v| v != s && v != t).collect();
    assert!(free.len() <= 20, "cut enumeration too large");
    let mut best = u64::MAX;
    for bits in 0u32..(1 << free.len()) {
        let mut side = vec![false; net.node_count()];
        side[s] = true;
        for (i, &v) in free.iter().enumerate() {
            side[v] = bits >> i & 1 == 1;
        }
        let cut: u64 = net
            .edges()
            .iter()
            .filter(|e| side[e.tail] && !side[e.head])
            .map(|e| e.capacity)
            .sum();
        best = best.min(cut);
    }
    best
}

/// Positive-residual adjacency computed straight from edges and flow.
fn residual_neighbours(net: &FlowNetwork, f: &[u64]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); net.node_count()];
    for (e, edge) in net.edges().iter().enumerate() {
        if f[e] < edge.capacity {
            adj[edge.tail].push(edge.head);
        }
        if f[e] > 0 {
            adj[edge.head].push(edge.tail);
        }
    }
    adj
}

/// Unweighted residual distances from `sources`; `None` for unreachable.
pub fn residual_distances(net: &FlowNetwork, f: &[u64], sources: &[usize]) -> Vec<Option<usize>> {
    let adj = residual_neighbours(net, f);
    let mut dist = vec![None; net.node_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = Some(0);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Per node in-flow minus out-flow.
pub fn balances(net: &FlowNetwork, f: &[u64]) -> Vec<i64> {
    let mut b = vec![0i64; net.node_count()];
    for (edge, &x) in net.edges().iter().zip(f) {
        b[edge.tail] -= x as i64;
        b[edge.head] += x as i64;
    }
    b
}

/// Excess and deficit node lists (terminals excluded).
pub fn excess_deficit_nodes(net: &FlowNetwork, f: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let b = balances(net, f);
    let excess = (0..net.node_count())
        .filter(|&v| !net.is_terminal(v) && b[v] > 0)
        .collect();
    let deficit = (0..net.node_count())
        .filter(|&v| !net.is_terminal(v) && b[v] < 0)
        .collect();
    (excess, deficit)
}

/// Whether some excess node reaches some deficit node in the residual graph.
pub fn excess_reaches_deficit(net: &FlowNetwork, f: &[u64]) -> bool {
    let (excess, deficit) = excess_deficit_nodes(net, f);
    if excess.is_empty() || deficit.is_empty() {
        return false;
    }
    let dist = residual_distances(net, f, &excess);
    deficit.iter().any(|&v| dist[v].is_some())
}

/// A random capacity-respecting flow (conservation usually violated).
pub fn random_capacity_flow<R: Rng>(rng: &mut R, net: &FlowNetwork) -> Flow {
    Flow::new(net.edges().iter().map(|e| rng.gen_range(0..=e.capacity)).collect())
}

/// A random prediction of one of several flavours: within capacities,
/// over capacities, wildly off, all-zero, or a perturbed feasible flow.
pub fn random_prediction<R: Rng>(rng: &mut R, net: &FlowNetwork, kind: usize) -> Flow {
    let caps = net.capacities();
    let values = match kind % 5 {
        0 => caps.iter().map(|&c| rng.gen_range(0..=c)).collect(),
        1 => caps.iter().map(|&c| rng.gen_range(0..=c + 3)).collect(),
        2 => caps.iter().map(|_| rng.gen_range(0..=40)).collect(),
        3 => vec![0; caps.len()],
        _ => {
            let mut v: Vec<u64> = caps.iter().map(|&c| c / 2).collect();
            for x in v.iter_mut() {
                if rng.gen_bool(0.3) {
                    *x += rng.gen_range(0..=2);
                }
            }
            v
        }
    };
    Flow::new(values)
}

/// Every integer vector in `prod_e [0, caps_e]`.
pub fn box_vectors(caps: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &c in caps {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=c).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn l1(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).sum()
}

/// A random node subset that excludes both terminals.
pub fn random_inner_subset<R: Rng>(rng: &mut R, net: &FlowNetwork) -> Vec<bool> {
    let mut inside: Vec<bool> = (0..net.node_count()).map(|_| rng.gen_bool(0.5)).collect();
    inside[net.source()] = false;
    inside[net.sink()] = false;
    inside
}

pub fn shuffled<R: Rng, T: Clone>(rng: &mut R, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}
