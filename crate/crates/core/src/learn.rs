//! Learning predicted flows from sampled instances.
//!
//! An instance shares the base network's graph and draws a capacity vector
//! `c^i` with `0 <= c^i_e <= c_e`. Each sample is solved canonically and
//! the prediction is the per-edge median of the sampled optima, which
//! minimizes the empirical L1 risk over the box `prod_e [0, c_e]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::augment::{max_flow, Subroutine};
use crate::error::{FlowError, Result};
use crate::network::{Flow, FlowNetwork};

/// The canonical optimum: deterministic Edmonds-Karp from the zero flow.
pub fn canonical_optimum(net: &FlowNetwork) -> Flow {
    max_flow(net, None, Subroutine::EdmondsKarp)
        .expect("the zero flow is always feasible")
        .0
}

/// How each sampled capacity is drawn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum CapacityLaw {
    /// Uniform over `[0, c_e]`.
    Uniform,
    /// `pattern_e + k'` with `k'` uniform in `[-k, k]`, clamped to
    /// `[0, c_e]`. An empty pattern means the base capacities.
    Perturbed {
        k: u64,
        #[serde(default)]
        pattern: Vec<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDistribution {
    pub base: FlowNetwork,
    pub law: CapacityLaw,
    pub seed: u64,
}

impl InstanceDistribution {
    pub fn new(base: FlowNetwork, law: CapacityLaw, seed: u64) -> Self {
        InstanceDistribution { base, law, seed }
    }

    /// Capacity vector of sample `index`. Each sample has its own stream
    /// derived from the seed, so samples are independent of one another.
    pub fn sample_capacities(&self, index: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let caps = self.base.capacities();
        match &self.law {
            CapacityLaw::Uniform => caps.iter().map(|&c| rng.gen_range(0..=c)).collect(),
            CapacityLaw::Perturbed { k, pattern } => caps
                .iter()
                .enumerate()
                .map(|(e, &c)| {
                    let centre = pattern.get(e).copied().unwrap_or(c) as i128;
                    let k = *k as i128;
                    let shifted = centre + rng.gen_range(-k..=k);
                    shifted.clamp(0, c as i128) as u64
                })
                .collect(),
        }
    }
}

/// Sampled capacity vectors and their canonical optima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    pub capacities: Vec<Vec<u64>>,
    pub optima: Vec<Flow>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.optima.len()
    }

    pub fn is_empty(&self) -> bool {
        self.optima.is_empty()
    }
}

pub fn sample_instances(dist: &InstanceDistribution, count: usize) -> Result<SampleSet> {
    if let CapacityLaw::Perturbed { pattern, .. } = &dist.law {
        if !pattern.is_empty() && pattern.len() != dist.base.edge_count() {
            return Err(FlowError::LengthMismatch {
                expected: dist.base.edge_count(),
                found: pattern.len(),
            });
        }
    }
    let mut capacities = Vec::with_capacity(count);
    let mut optima = Vec::with_capacity(count);
    for index in 0..count {
        let caps = dist.sample_capacities(index as u64);
        let instance = dist.base.with_capacities(&caps)?;
        optima.push(canonical_optimum(&instance));
        capacities.push(caps);
    }
    Ok(SampleSet { capacities, optima })
}

/// Per-edge lower median of the sampled optimal flows.
pub fn median_erm(samples: &SampleSet) -> Result<Flow> {
    let first = samples.optima.first().ok_or(FlowError::EmptySampleSet)?;
    let m = first.len();
    for f in &samples.optima {
        if f.len() != m {
            return Err(FlowError::LengthMismatch {
                expected: m,
                found: f.len(),
            });
        }
    }
    let mut column = Vec::with_capacity(samples.len());
    let median = (0..m)
        .map(|e| {
            column.clear();
            column.extend(samples.optima.iter().map(|f| f[e]));
            column.sort_unstable();
            column[(column.len() - 1) / 2]
        })
        .collect();
    Ok(Flow::new(median))
}

/// Exact empirical risk `numerator / denominator`, where the denominator
/// is the sample count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Risk {
    pub numerator: u64,
    pub denominator: u64,
}

pub fn empirical_risk(f: &Flow, samples: &SampleSet) -> Result<Risk> {
    if samples.is_empty() {
        return Err(FlowError::EmptySampleSet);
    }
    let mut numerator = 0u64;
    for opt in &samples.optima {
        numerator += crate::flow::l1_distance(f, opt)?;
    }
    Ok(Risk {
        numerator,
        denominator: samples.len() as u64,
    })
}
