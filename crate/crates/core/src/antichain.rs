//! Maximum-weight antichains of a partial order.
//!
//! The flow solver uses the weighted form of Dilworth's theorem: split each
//! positive-weight element into an arc with lower bound equal to its weight,
//! connect split arcs along the transitive closure, and compute a minimum
//! flow. The minimum flow value equals the maximum antichain weight, and the
//! antichain is read off a tight cut of the final residual graph.

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::relation::DominanceRelation;

/// Largest poset the enumeration oracle accepts.
pub const BRUTE_FORCE_ANTICHAIN_LIMIT: usize = 25;

#[derive(Debug, Clone)]
pub struct WeightedPoset<'a> {
    pub relation: &'a DominanceRelation,
    pub weights: Vec<f64>,
}

impl<'a> WeightedPoset<'a> {
    pub fn new(relation: &'a DominanceRelation, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != relation.len() {
            return Err(Error::InvalidInput(format!(
                "{} weights for a relation on {} elements",
                weights.len(),
                relation.len()
            )));
        }
        Ok(Self { relation, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight of `members`, summed in index order.
    pub fn weight_of(&self, members: &[usize]) -> f64 {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.iter().map(|&i| self.weights[i]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Antichain {
    /// Sorted element indices.
    pub members: Vec<usize>,
    /// Sum of member weights.
    pub value: f64,
    /// Minimum flow value of the dual network (equal to `value` up to
    /// rounding). Zero for the enumeration oracle.
    pub flow_value: f64,
}

/// Builds the split network on positive-weight elements. Returns the network
/// and, per network element, its poset index.
pub fn antichain_network(poset: &WeightedPoset<'_>) -> (FlowNetwork, Vec<usize>) {
    let positive: Vec<usize> = (0..poset.len())
        .filter(|&i| poset.weights[i] > 0.0)
        .collect();
    let total: f64 = positive.iter().map(|&i| poset.weights[i]).sum();
    let inf = f64::INFINITY;
    let (s, t) = (0, 1);
    let v_in = |j: usize| 2 + 2 * j;
    let v_out = |j: usize| 3 + 2 * j;

    let mut net =
        FlowNetwork::new(2 + 2 * positive.len(), s, t).with_tolerance(1e-12 * total.max(1.0));
    for (j, &v) in positive.iter().enumerate() {
        net.add_arc(v_in(j), v_out(j), poset.weights[v], inf);
        net.add_arc(s, v_in(j), 0.0, inf);
        net.add_arc(v_out(j), t, 0.0, inf);
    }
    for (j, &v) in positive.iter().enumerate() {
        for (k, &u) in positive.iter().enumerate() {
            if poset.relation.dominates(v, u) {
                net.add_arc(v_out(j), v_in(k), 0.0, inf);
            }
        }
    }
    (net, positive)
}

/// Maximum-weight antichain via minimum flow. Elements with weight `<= 0`
/// never appear in the result; all-nonpositive weights give the empty set.
pub fn max_weight_antichain(poset: &WeightedPoset<'_>) -> Antichain {
    let (mut net, positive) = antichain_network(poset);
    if positive.is_empty() {
        return Antichain {
            members: Vec::new(),
            value: 0.0,
            flow_value: 0.0,
        };
    }
    let flow_value = net
        .solve_min_flow()
        .expect("split network always admits a feasible flow");

    // Y = residual-reachable from the sink; split arcs entering Y form the cut
    let from_sink = net.residual_reachable(net.sink());
    let members: Vec<usize> = positive
        .iter()
        .enumerate()
        .filter(|&(j, _)| !from_sink[2 + 2 * j] && from_sink[3 + 2 * j])
        .map(|(_, &v)| v)
        .collect();
    debug_assert!(poset.relation.is_antichain(&members));
    let value = poset.weight_of(&members);
    Antichain {
        members,
        value,
        flow_value,
    }
}

/// Exhaustive reference: the best antichain over all subsets, preferring the
/// lexicographically smallest member list among equal values.
pub fn brute_force_antichain(poset: &WeightedPoset<'_>) -> Result<Antichain> {
    let n = poset.len();
    if n > BRUTE_FORCE_ANTICHAIN_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_ANTICHAIN_LIMIT,
        });
    }
    let comparable: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| poset.relation.comparable(x, y))
                .fold(0u64, |m, y| m | (1 << y))
        })
        .collect();

    let mut best = (0.0, Vec::new());
    let mut current = Vec::new();
    // pre-order DFS adding indices in increasing order visits subsets in
    // lexicographic order, so a strict improvement test keeps the smallest
    enumerate_antichains(&comparable, 0, 0, &mut current, &mut |members| {
        let value = poset.weight_of(members);
        if value > best.0 {
            best = (value, members.to_vec());
        }
    });
    Ok(Antichain {
        members: best.1,
        value: best.0,
        flow_value: 0.0,
    })
}

/// Visits every antichain (including the empty one) whose members are all
/// `>= start` and compatible with `blocked`, in lexicographic order.
pub(crate) fn enumerate_antichains<F>(
    comparable: &[u64],
    start: usize,
    blocked: u64,
    current: &mut Vec<usize>,
    visit: &mut F,
) where
    F: FnMut(&[usize]),
{
    visit(current);
    for x in start..comparable.len() {
        if blocked & (1 << x) == 0 {
            current.push(x);
            enumerate_antichains(comparable, x + 1, blocked | comparable[x], current, visit);
            current.pop();
        }
    }
}
