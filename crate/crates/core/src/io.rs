//! Text formats: DIMACS max-flow instances and flow-vector files.
//!
//! DIMACS node ids are 1-based on disk and 0-based in memory.

use thiserror::Error;

use crate::network::{Edge, Flow, FlowNetwork};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing problem line `p max <nodes> <arcs>`")]
    MissingProblem,
    #[error("line {line}: duplicate problem line")]
    DuplicateProblem { line: usize },
    #[error("missing {0} designation")]
    MissingTerminal(&'static str),
    #[error("line {line}: node id {id} out of range 1..={node_count}")]
    NodeOutOfRange {
        line: usize,
        id: usize,
        node_count: usize,
    },
    #[error("problem line declares {declared} arcs, found {found}")]
    ArcCountMismatch { declared: usize, found: usize },
    #[error("flow file declares {declared} entries, found {found}")]
    FlowCountMismatch { declared: usize, found: usize },
    #[error("line {line}: negative flow value {value}")]
    NegativeFlow { line: usize, value: i64 },
    #[error("invalid network: {0}")]
    Network(String),
}

fn malformed(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| malformed(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| malformed(line, format!("invalid {what} `{tok}`")))
}

/// Parses a DIMACS max-flow instance. Arcs keep their file order.
pub fn parse_dimacs(text: &str) -> Result<FlowNetwork, FormatError> {
    let mut problem: Option<(usize, usize)> = None;
    let mut source = None;
    let mut sink = None;
    let mut edges = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let mut tokens = raw.split_whitespace();
        let Some(kind) = tokens.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if problem.is_some() {
                    return Err(FormatError::DuplicateProblem { line });
                }
                let format: String = field(tokens.next(), line, "problem type")?;
                if format != "max" {
                    return Err(malformed(line, format!("unsupported problem type `{format}`")));
                }
                let nodes = field(tokens.next(), line, "node count")?;
                let arcs = field(tokens.next(), line, "arc count")?;
                problem = Some((nodes, arcs));
            }
            "n" | "a" => {
                let (node_count, _) = problem.ok_or(FormatError::MissingProblem)?;
                let node = |tok: Option<&str>, what: &str| -> Result<usize, FormatError> {
                    let id: usize = field(tok, line, what)?;
                    if id == 0 || id > node_count {
                        return Err(FormatError::NodeOutOfRange {
                            line,
                            id,
                            node_count,
                        });
                    }
                    Ok(id - 1)
                };
                if kind == "n" {
                    let id = node(tokens.next(), "node id")?;
                    let slot = match tokens.next() {
                        Some("s") => &mut source,
                        Some("t") => &mut sink,
                        other => {
                            return Err(malformed(
                                line,
                                format!("expected `s` or `t`, found {other:?}"),
                            ))
                        }
                    };
                    if slot.replace(id).is_some() {
                        return Err(malformed(line, "terminal designated twice"));
                    }
                } else {
                    let tail = node(tokens.next(), "arc tail")?;
                    let head = node(tokens.next(), "arc head")?;
                    let capacity = field(tokens.next(), line, "capacity")?;
                    edges.push(Edge::new(tail, head, capacity));
                }
            }
            other => return Err(malformed(line, format!("unknown line type `{other}`"))),
        }
        if tokens.next().is_some() {
            return Err(malformed(line, "trailing fields"));
        }
    }

    let (node_count, arc_count) = problem.ok_or(FormatError::MissingProblem)?;
    if edges.len() != arc_count {
        return Err(FormatError::ArcCountMismatch {
            declared: arc_count,
            found: edges.len(),
        });
    }
    let source = source.ok_or(FormatError::MissingTerminal("source"))?;
    let sink = sink.ok_or(FormatError::MissingTerminal("sink"))?;
    FlowNetwork::new(node_count, source, sink, edges).map_err(|e| FormatError::Network(e.to_string()))
}

/// Canonical DIMACS text: problem line, source, sink, then arcs in order.
pub fn write_dimacs(net: &FlowNetwork) -> String {
    let mut out = format!(
        "p max {} {}\nn {} s\nn {} t\n",
        net.node_count(),
        net.edge_count(),
        net.source() + 1,
        net.sink() + 1
    );
    for e in net.edges() {
        out.push_str(&format!("a {} {} {}\n", e.tail + 1, e.head + 1, e.capacity));
    }
    out
}

/// Parses a flow file: `f <edge_count>`, then one value per line.
pub fn parse_flow(text: &str) -> Result<Flow, FormatError> {
    let mut declared = None;
    let mut values = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        match declared {
            None => {
                let mut tokens = trimmed.split_whitespace();
                if tokens.next() != Some("f") {
                    return Err(malformed(line, "expected header `f <edge_count>`"));
                }
                declared = Some(field::<usize>(tokens.next(), line, "edge count")?);
                if tokens.next().is_some() {
                    return Err(malformed(line, "trailing fields"));
                }
            }
            Some(_) => {
                let value: i64 = field(Some(trimmed), line, "flow value")?;
                if value < 0 {
                    return Err(FormatError::NegativeFlow { line, value });
                }
                values.push(value as u64);
            }
        }
    }
    let declared = declared.ok_or_else(|| malformed(1, "empty flow file"))?;
    if values.len() != declared {
        return Err(FormatError::FlowCountMismatch {
            declared,
            found: values.len(),
        });
    }
    Ok(Flow::new(values))
}

pub fn write_flow(f: &Flow) -> String {
    let mut out = format!("f {}\n", f.len());
    for v in f.iter() {
        out.push_str(&format!("{v}\n"));
    }
    out
}
