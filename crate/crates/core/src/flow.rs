//! Flow value, feasibility, excess/deficit accounting, residual graphs and
//! the L1 prediction error.

use crate::error::{FlowError, Result};
use crate::network::{check_len, ArcId, EdgeId, Flow, FlowNetwork, NodeId};

/// Net amount leaving the source: out-flow minus in-flow of `s`.
///
/// Total for arbitrary vectors, so it can be measured mid-projection.
pub fn flow_value(net: &FlowNetwork, f: &Flow) -> Result<i64> {
    check_len(net, f.len())?;
    Ok(source_outflow(net, f))
}

pub(crate) fn source_outflow(net: &FlowNetwork, f: &[u64]) -> i64 {
    let s = net.source();
    let mut value: i128 = 0;
    for (edge, &x) in net.edges().iter().zip(f) {
        if edge.tail == s {
            value += x as i128;
        }
        if edge.head == s {
            value -= x as i128;
        }
    }
    value as i64
}

/// Per node: in-flow minus out-flow.
pub(crate) fn node_balance(net: &FlowNetwork, f: &[u64]) -> Vec<i128> {
    let mut balance = vec![0i128; net.node_count()];
    for (edge, &x) in net.edges().iter().zip(f) {
        balance[edge.tail] -= x as i128;
        balance[edge.head] += x as i128;
    }
    balance
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub capacity_violations: Vec<EdgeId>,
    pub conservation_violations: Vec<NodeId>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.capacity_violations.is_empty() && self.conservation_violations.is_empty()
    }
}

pub fn check_feasible(net: &FlowNetwork, f: &Flow) -> Result<FeasibilityReport> {
    check_len(net, f.len())?;
    let capacity_violations = net
        .edges()
        .iter()
        .zip(f.iter())
        .enumerate()
        .filter(|(_, (edge, &x))| x > edge.capacity)
        .map(|(index, _)| index)
        .collect();
    let conservation_violations = node_balance(net, f)
        .into_iter()
        .enumerate()
        .filter(|&(node, b)| b != 0 && !net.is_terminal(node))
        .map(|(node, _)| node)
        .collect();
    Ok(FeasibilityReport {
        capacity_violations,
        conservation_violations,
    })
}

fn check_capacities(net: &FlowNetwork, f: &[u64]) -> Result<()> {
    check_len(net, f.len())?;
    for (index, (edge, &flow)) in net.edges().iter().zip(f).enumerate() {
        if flow > edge.capacity {
            return Err(FlowError::CapacityViolation {
                edge: index,
                flow,
                capacity: edge.capacity,
            });
        }
    }
    Ok(())
}

/// Excess and deficit of every node under a capacity-respecting flow.
///
/// Terminals carry neither by convention. `a_prime` lists the excess
/// nodes and `b_prime` the deficit nodes, both ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Imbalance {
    pub excess: Vec<u64>,
    pub deficit: Vec<u64>,
    pub a_prime: Vec<NodeId>,
    pub b_prime: Vec<NodeId>,
    pub total_excess: u64,
    pub total_deficit: u64,
}

impl Imbalance {
    pub fn is_balanced(&self) -> bool {
        self.total_excess == 0 && self.total_deficit == 0
    }
}

pub fn imbalance(net: &FlowNetwork, f: &Flow) -> Result<Imbalance> {
    check_capacities(net, f)?;
    Ok(imbalance_of(net, f))
}

pub(crate) fn imbalance_of(net: &FlowNetwork, f: &[u64]) -> Imbalance {
    let n = net.node_count();
    let mut excess = vec![0u64; n];
    let mut deficit = vec![0u64; n];
    let mut a_prime = Vec::new();
    let mut b_prime = Vec::new();
    for (node, b) in node_balance(net, f).into_iter().enumerate() {
        if net.is_terminal(node) {
            continue;
        }
        if b > 0 {
            excess[node] = b as u64;
            a_prime.push(node);
        } else if b < 0 {
            deficit[node] = (-b) as u64;
            b_prime.push(node);
        }
    }
    Imbalance {
        total_excess: excess.iter().sum(),
        total_deficit: deficit.iter().sum(),
        excess,
        deficit,
        a_prime,
        b_prime,
    }
}

/// The residual graph `G_f` of a capacity-respecting flow.
///
/// Owns the flow and mutates it through [`ResidualView::push`]; arc
/// adjacency is borrowed from the network.
#[derive(Clone, Debug)]
pub struct ResidualView<'a> {
    net: &'a FlowNetwork,
    flow: Flow,
}

impl<'a> ResidualView<'a> {
    pub fn new(net: &'a FlowNetwork, flow: Flow) -> Result<Self> {
        check_capacities(net, &flow)?;
        Ok(ResidualView { net, flow })
    }

    pub fn zero(net: &'a FlowNetwork) -> Self {
        ResidualView {
            net,
            flow: Flow::zeros(net.edge_count()),
        }
    }

    pub fn network(&self) -> &'a FlowNetwork {
        self.net
    }

    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn into_flow(self) -> Flow {
        self.flow
    }

    pub fn capacity(&self, arc: ArcId) -> u64 {
        let e = arc.edge();
        if arc.is_forward() {
            self.net.edge(e).capacity - self.flow[e]
        } else {
            self.flow[e]
        }
    }

    /// `c_e - f_e`.
    pub fn forward(&self, edge: EdgeId) -> u64 {
        self.capacity(ArcId::forward(edge))
    }

    /// `f_e`, the residual of the reversed edge.
    pub fn reverse(&self, edge: EdgeId) -> u64 {
        self.capacity(ArcId::reverse(edge))
    }

    /// Sends `amount` units along `arc`. The caller guarantees
    /// `amount <= capacity(arc)`.
    pub fn push(&mut self, arc: ArcId, amount: u64) {
        debug_assert!(amount <= self.capacity(arc));
        let e = arc.edge();
        if arc.is_forward() {
            self.flow[e] += amount;
        } else {
            self.flow[e] -= amount;
        }
    }

    pub fn value(&self) -> i64 {
        source_outflow(self.net, &self.flow)
    }
}

pub fn residual<'a>(net: &'a FlowNetwork, f: &Flow) -> Result<ResidualView<'a>> {
    ResidualView::new(net, f.clone())
}

pub fn l1_distance(f: &Flow, g: &Flow) -> Result<u64> {
    if f.len() != g.len() {
        return Err(FlowError::LengthMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    Ok(f.iter().zip(g.iter()).map(|(&a, &b)| a.abs_diff(b)).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaMode {
    /// Minimum over every integral feasible maximum flow, by enumeration.
    Exact,
    /// Distance to the canonical optimum; never below the exact value.
    UpperBound,
}

/// State budget for [`EtaMode::Exact`]: the product of `c_e + 1` over all
/// edges may not exceed this.
pub const ETA_ENUMERATION_BUDGET: u128 = 10_000_000;

/// Prediction error `eta(f_hat)`: L1 distance to the nearest maximum flow.
pub fn eta(net: &FlowNetwork, f_hat: &Flow, mode: EtaMode) -> Result<u64> {
    check_len(net, f_hat.len())?;
    match mode {
        EtaMode::UpperBound => l1_distance(f_hat, &crate::learn::canonical_optimum(net)),
        EtaMode::Exact => exact_eta(net, f_hat),
    }
}

fn exact_eta(net: &FlowNetwork, f_hat: &Flow) -> Result<u64> {
    let mut states: u128 = 1;
    for edge in net.edges() {
        states = states.saturating_mul(edge.capacity as u128 + 1);
        if states > ETA_ENUMERATION_BUDGET {
            return Err(FlowError::EnumerationBudget {
                states,
                budget: ETA_ENUMERATION_BUDGET,
            });
        }
    }

    // Conservation at a node can be checked once its last incident edge
    // has been assigned.
    let mut closes_at: Vec<Vec<NodeId>> = vec![Vec::new(); net.edge_count()];
    let mut last_edge: Vec<Option<EdgeId>> = vec![None; net.node_count()];
    for (index, edge) in net.edges().iter().enumerate() {
        last_edge[edge.tail] = Some(index);
        last_edge[edge.head] = Some(index);
    }
    for (node, last) in last_edge.into_iter().enumerate() {
        if let (Some(e), false) = (last, net.is_terminal(node)) {
            closes_at[e].push(node);
        }
    }

    struct Search<'n> {
        net: &'n FlowNetwork,
        target: &'n [u64],
        closes_at: Vec<Vec<NodeId>>,
        balance: Vec<i64>,
        best: Option<(i64, u64)>,
    }

    impl Search<'_> {
        fn visit(&mut self, index: EdgeId, distance: u64) {
            if index == self.net.edge_count() {
                let value = -self.balance[self.net.source()];
                self.best = match self.best {
                    Some((v, d)) if v > value || (v == value && d <= distance) => Some((v, d)),
                    _ => Some((value, distance)),
                };
                return;
            }
            let edge = self.net.edge(index);
            for x in 0..=edge.capacity {
                self.balance[edge.tail] -= x as i64;
                self.balance[edge.head] += x as i64;
                if self.closes_at[index].iter().all(|&v| self.balance[v] == 0) {
                    self.visit(index + 1, distance + x.abs_diff(self.target[index]));
                }
                self.balance[edge.tail] += x as i64;
                self.balance[edge.head] -= x as i64;
            }
        }
    }

    let mut search = Search {
        net,
        target: f_hat,
        closes_at,
        balance: vec![0; net.node_count()],
        best: None,
    };
    search.visit(0, 0);
    // The zero flow is always feasible, so the search found something.
    Ok(search.best.map(|(_, d)| d).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::Edge;

    fn flow(v: &[u64]) -> Flow {
        Flow::new(v.to_vec())
    }

    #[test]
    fn flow_values() {
        assert_eq!(flow_value(&n1(), &flow(&[1, 1])).unwrap(), 1);
        assert_eq!(flow_value(&n1(), &flow(&[0, 0])).unwrap(), 0);
        assert_eq!(flow_value(&diamond(), &flow(&[1, 1, 1, 1])).unwrap(), 2);
        assert!(matches!(
            flow_value(&n1(), &flow(&[1])),
            Err(FlowError::LengthMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn value_counts_edges_into_source_negatively() {
        let net = FlowNetwork::new(3, 0, 2, vec![Edge::new(0, 1, 3), Edge::new(1, 0, 3)]).unwrap();
        assert_eq!(flow_value(&net, &flow(&[1, 3])).unwrap(), -2);
    }

    #[test]
    fn feasibility_reports() {
        let net = n1();
        assert!(check_feasible(&net, &flow(&[1, 1])).unwrap().is_feasible());
        let report = check_feasible(&net, &flow(&[3, 1])).unwrap();
        assert_eq!(report.capacity_violations, vec![0]);
        let report = check_feasible(&net, &flow(&[2, 1])).unwrap();
        assert!(report.capacity_violations.is_empty());
        assert_eq!(report.conservation_violations, vec![1]);
    }

    #[test]
    fn imbalances() {
        let net = n1();
        let imb = imbalance(&net, &flow(&[2, 1])).unwrap();
        assert_eq!(imb.excess, vec![0, 1, 0]);
        assert_eq!(imb.a_prime, vec![1]);
        assert!(imb.b_prime.is_empty());
        assert_eq!((imb.total_excess, imb.total_deficit), (1, 0));

        let imb = imbalance(&net, &flow(&[0, 1])).unwrap();
        assert_eq!(imb.deficit[1], 1);
        assert_eq!(imb.b_prime, vec![1]);

        assert!(imbalance(&net, &flow(&[1, 1])).unwrap().is_balanced());
        assert!(matches!(
            imbalance(&net, &flow(&[3, 1])),
            Err(FlowError::CapacityViolation { edge: 0, .. })
        ));
    }

    #[test]
    fn terminals_carry_no_imbalance() {
        let imb = imbalance(&diamond(), &flow(&[1, 0, 0, 0])).unwrap();
        assert_eq!(imb.excess[0], 0);
        assert_eq!(imb.deficit[0], 0);
        assert_eq!(imb.a_prime, vec![1]);
    }

    #[test]
    fn residual_capacities() {
        let net = n1();
        let r = residual(&net, &flow(&[1, 1])).unwrap();
        assert_eq!((r.forward(0), r.reverse(0)), (1, 1));
        assert_eq!((r.forward(1), r.reverse(1)), (0, 1));

        let r = residual(&net, &flow(&[0, 0])).unwrap();
        assert_eq!((r.forward(0), r.forward(1)), (2, 1));
        assert_eq!((r.reverse(0), r.reverse(1)), (0, 0));

        let r = residual(&net, &flow(&[2, 0])).unwrap();
        assert_eq!((r.forward(0), r.reverse(0)), (0, 2));

        assert!(residual(&net, &flow(&[3, 0])).is_err());
    }

    #[test]
    fn push_moves_flow() {
        let net = n1();
        let mut r = ResidualView::zero(&net);
        r.push(ArcId::forward(0), 2);
        r.push(ArcId::reverse(0), 1);
        assert_eq!(r.flow().to_vec(), vec![1, 0]);
        assert_eq!(r.value(), 1);
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_distance(&flow(&[2, 1]), &flow(&[1, 1])).unwrap(), 1);
        assert_eq!(l1_distance(&flow(&[4, 7]), &flow(&[4, 7])).unwrap(), 0);
        assert_eq!(l1_distance(&flow(&[0, 3]), &flow(&[2, 0])).unwrap(), 5);
        assert!(l1_distance(&flow(&[0]), &flow(&[2, 0])).is_err());
    }

    #[test]
    fn eta_examples() {
        let net = n1();
        for mode in [EtaMode::Exact, EtaMode::UpperBound] {
            assert_eq!(eta(&net, &flow(&[2, 1]), mode).unwrap(), 1);
        }
        assert_eq!(eta(&net, &flow(&[1, 1]), EtaMode::Exact).unwrap(), 0);
        assert_eq!(
            eta(&diamond(), &flow(&[1, 0, 1, 0]), EtaMode::Exact).unwrap(),
            2
        );
        assert_eq!(
            eta(&diamond(), &flow(&[1, 1, 1, 1]), EtaMode::Exact).unwrap(),
            0
        );
    }

    #[test]
    fn eta_exact_picks_nearest_of_several_optima() {
        // s->a->t and s->b->t share a unit bottleneck at the sink.
        let net = FlowNetwork::new(
            5,
            0,
            4,
            vec![
                Edge::new(0, 1, 1),
                Edge::new(0, 2, 1),
                Edge::new(1, 3, 1),
                Edge::new(2, 3, 1),
                Edge::new(3, 4, 1),
            ],
        )
        .unwrap();
        // Optima: (1,0,1,0,1) and (0,1,0,1,1).
        assert_eq!(eta(&net, &flow(&[0, 1, 0, 1, 1]), EtaMode::Exact).unwrap(), 0);
        assert_eq!(eta(&net, &flow(&[0, 1, 0, 0, 1]), EtaMode::Exact).unwrap(), 1);
        assert_eq!(eta(&net, &flow(&[0, 0, 0, 0, 0]), EtaMode::Exact).unwrap(), 3);
    }

    #[test]
    fn eta_exact_refuses_large_instances() {
        let net = FlowNetwork::new(
            3,
            0,
            2,
            vec![Edge::new(0, 1, 10_000), Edge::new(1, 2, 10_000)],
        )
        .unwrap();
        assert!(matches!(
            eta(&net, &Flow::zeros(2), EtaMode::Exact),
            Err(FlowError::EnumerationBudget { .. })
        ));
    }
}
