//! Warm- versus cold-start runs over instance sequences, with CSV output.
//!
//! Every instance is solved from zero. From the second instance on it is
//! also solved warm, seeded with the previous instance's cold-start
//! optimum (for Edmonds-Karp that is the canonical optimum).

use std::io::Write;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::augment::{max_flow, Subroutine};
use crate::error::FlowError;
use crate::network::FlowNetwork;
use crate::warmstart::warm_start_solve;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance {index} (`{id}`) does not share the previous instance's edge list")]
    StructureMismatch { index: usize, id: String },
    #[error("warm and cold values differ on `{id}`: {warm} vs {cold}")]
    ValueMismatch { id: String, warm: i64, cold: i64 },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug)]
pub struct SequenceInstance {
    pub id: String,
    pub network: FlowNetwork,
}

impl SequenceInstance {
    pub fn new(id: impl Into<String>, network: FlowNetwork) -> Self {
        SequenceInstance {
            id: id.into(),
            network,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cold,
    Warm,
}

/// One solve. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub mode: Mode,
    pub subroutine: Subroutine,
    pub flow_value: i64,
    /// Value of the flow the optimization phase started from.
    pub feasible_value: i64,
    pub clamp_total: u64,
    pub post_clamp_excess: u64,
    pub post_clamp_deficit: u64,
    pub projection_paths: u64,
    pub projection_mean_length: f64,
    pub augmenting_paths: u64,
    pub augmenting_mean_length: f64,
    pub node_expansions: u64,
    pub clamp_ms: f64,
    pub projection_ms: f64,
    pub optimize_ms: f64,
}

/// CSV header, in column order.
pub const CSV_HEADER: &str = "instance,mode,subroutine,flow_value,feasible_value,clamp_total,\
post_clamp_excess,post_clamp_deficit,projection_paths,projection_mean_length,augmenting_paths,\
augmenting_mean_length,node_expansions,clamp_ms,projection_ms,optimize_ms";

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Runs every subroutine over the sequence and returns one record per
/// (instance, mode, subroutine), ordered by subroutine, then instance,
/// cold before warm.
pub fn run_sequence(
    instances: &[SequenceInstance],
    subroutines: &[Subroutine],
) -> Result<Vec<BenchRecord>, BenchError> {
    for (index, pair) in instances.windows(2).enumerate() {
        if !pair[0].network.same_structure(&pair[1].network) {
            return Err(BenchError::StructureMismatch {
                index: index + 1,
                id: pair[1].id.clone(),
            });
        }
    }

    let mut records = Vec::new();
    for &sub in subroutines {
        let mut previous = None;
        for inst in instances {
            let (cold_flow, cold) = max_flow(&inst.network, None, sub)?;
            records.push(BenchRecord {
                instance: inst.id.clone(),
                mode: Mode::Cold,
                subroutine: sub,
                flow_value: cold.value,
                feasible_value: 0,
                clamp_total: 0,
                post_clamp_excess: 0,
                post_clamp_deficit: 0,
                projection_paths: 0,
                projection_mean_length: 0.0,
                augmenting_paths: cold.stats.path_count,
                augmenting_mean_length: cold.stats.mean_length(),
                node_expansions: cold.stats.node_expansions,
                clamp_ms: 0.0,
                projection_ms: 0.0,
                optimize_ms: millis(cold.elapsed),
            });

            if let Some(prediction) = previous.replace(cold_flow) {
                let (_, warm) = warm_start_solve(&inst.network, &prediction, sub)?;
                if warm.optimal_value != cold.value {
                    return Err(BenchError::ValueMismatch {
                        id: inst.id.clone(),
                        warm: warm.optimal_value,
                        cold: cold.value,
                    });
                }
                records.push(BenchRecord {
                    instance: inst.id.clone(),
                    mode: Mode::Warm,
                    subroutine: sub,
                    flow_value: warm.optimal_value,
                    feasible_value: warm.feasible_value,
                    clamp_total: warm.clamp_total,
                    post_clamp_excess: warm.post_clamp_excess,
                    post_clamp_deficit: warm.post_clamp_deficit,
                    projection_paths: warm.projection.total.path_count,
                    projection_mean_length: warm.projection.total.mean_length(),
                    augmenting_paths: warm.augment.path_count,
                    augmenting_mean_length: warm.augment.mean_length(),
                    node_expansions: warm.node_expansions(),
                    clamp_ms: millis(warm.timings.clamp),
                    projection_ms: millis(warm.timings.projection),
                    optimize_ms: millis(warm.timings.optimize),
                });
            }
        }
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut writer = csv::Writer::from_writer(out);
    if records.is_empty() {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}
