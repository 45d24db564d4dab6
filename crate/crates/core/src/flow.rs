//! Real-valued flow networks with lower bounds.
//!
//! Maximum flow is Dinic's algorithm over `f64` capacities; residual
//! capacities at or below [`FlowNetwork::tolerance`] are treated as zero.
//! Minimum flow with lower bounds first finds a feasible circulation through
//! an auxiliary super-source/super-sink network and then pushes flow back
//! from the sink to the source.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub lower: f64,
    pub capacity: f64,
    pub flow: f64,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    nodes: usize,
    arcs: Vec<Arc>,
    source: usize,
    sink: usize,
    tolerance: f64,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        Self {
            nodes,
            arcs: Vec::new(),
            source,
            sink,
            tolerance: 1e-12,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Adds an arc and returns its index. `capacity` may be infinite.
    pub fn add_arc(&mut self, from: usize, to: usize, lower: f64, capacity: f64) -> usize {
        debug_assert!(from < self.nodes && to < self.nodes);
        debug_assert!(lower >= 0.0 && lower <= capacity);
        self.arcs.push(Arc {
            from,
            to,
            lower,
            capacity,
            flow: 0.0,
        });
        self.arcs.len() - 1
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Net flow leaving the source.
    pub fn value(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| {
                let out = if a.from == self.source { a.flow } else { 0.0 };
                let inn = if a.to == self.source { a.flow } else { 0.0 };
                out - inn
            })
            .sum()
    }

    /// Largest conservation violation over internal nodes and the largest
    /// bound violation over arcs.
    pub fn violation(&self) -> f64 {
        let mut balance = vec![0.0; self.nodes];
        let mut worst: f64 = 0.0;
        for a in &self.arcs {
            balance[a.from] -= a.flow;
            balance[a.to] += a.flow;
            worst = worst.max(a.lower - a.flow).max(a.flow - a.capacity);
        }
        for (v, b) in balance.iter().enumerate() {
            if v != self.source && v != self.sink {
                worst = worst.max(b.abs());
            }
        }
        worst
    }

    /// Nodes reachable from `start` through arcs with positive residual
    /// capacity, where reducing an arc's flow is limited by its lower bound.
    pub fn residual_reachable(&self, start: usize) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.nodes];
        for a in &self.arcs {
            if a.capacity - a.flow > self.tolerance {
                adj[a.from].push(a.to);
            }
            if a.flow - a.lower > self.tolerance {
                adj[a.to].push(a.from);
            }
        }
        let mut seen = vec![false; self.nodes];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Replaces the current flow by a minimum source-to-sink flow that
    /// meets every lower bound.
    pub fn solve_min_flow(&mut self) -> Result<f64> {
        let n = self.nodes;
        let (s, t) = (self.source, self.sink);

        // feasible flow: reduce bounds to a max-flow problem with a t->s return arc
        let mut residual = Residual::new(n + 2, self.tolerance);
        let (ss, tt) = (n, n + 1);
        let mut excess = vec![0.0; n];
        let mut handles = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            handles.push(residual.add(a.from, a.to, a.capacity - a.lower));
            excess[a.to] += a.lower;
            excess[a.from] -= a.lower;
        }
        let back = residual.add(t, s, f64::INFINITY);
        let mut demand = 0.0;
        for (v, &e) in excess.iter().enumerate() {
            if e > 0.0 {
                residual.add(ss, v, e);
                demand += e;
            } else if e < 0.0 {
                residual.add(v, tt, -e);
            }
        }
        let pushed = residual.max_flow(ss, tt);
        if pushed < demand - self.tolerance * (1.0 + demand) {
            return Err(Error::InfeasibleNetwork);
        }

        // drop the return arc and shrink the s->t flow by routing t->s
        residual.disable(back);
        residual.max_flow(t, s);

        for (a, &h) in self.arcs.iter_mut().zip(&handles) {
            a.flow = a.lower + residual.flow(h);
        }
        Ok(self.value())
    }
}

/// Adjacency-list residual graph for Dinic.
struct Residual {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<f64>,
    level: Vec<i64>,
    iter: Vec<usize>,
    eps: f64,
}

impl Residual {
    fn new(nodes: usize, eps: f64) -> Self {
        Self {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![-1; nodes],
            iter: vec![0; nodes],
            eps,
        }
    }

    /// Returns the index of the forward edge; its twin is `index ^ 1`.
    fn add(&mut self, from: usize, to: usize, cap: f64) -> usize {
        let id = self.to.len();
        self.head[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.head[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0.0);
        id
    }

    fn flow(&self, edge: usize) -> f64 {
        self.cap[edge ^ 1]
    }

    fn disable(&mut self, edge: usize) {
        self.cap[edge] = 0.0;
        self.cap[edge ^ 1] = 0.0;
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.head[v] {
                let w = self.to[e];
                if self.cap[e] > self.eps && self.level[w] < 0 {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, limit: f64) -> f64 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.head[v].len() {
            let e = self.head[v][self.iter[v]];
            let w = self.to[e];
            if self.cap[e] > self.eps && self.level[w] == self.level[v] + 1 {
                let got = self.dfs(w, t, limit.min(self.cap[e]));
                if got > self.eps {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            self.iter[v] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let got = self.dfs(s, t, f64::INFINITY);
                if got <= self.eps {
                    break;
                }
                total += got;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc_lower_bound() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 3.0, f64::INFINITY);
        assert_eq!(net.solve_min_flow().unwrap(), 3.0);
        assert!(net.violation() <= 1e-12);
    }

    #[test]
    fn no_lower_bounds_gives_zero() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, 0.0, 5.0);
        net.add_arc(1, 2, 0.0, 5.0);
        assert_eq!(net.solve_min_flow().unwrap(), 0.0);
    }

    /// Two comparable elements a ≻ b: one chain s→a→b→t covers both, so the
    /// minimum flow is the larger lower bound.
    #[test]
    fn comparable_pair_shares_one_chain() {
        // nodes: s=0, a_in=1, a_out=2, b_in=3, b_out=4, t=5
        let inf = f64::INFINITY;
        let mut net = FlowNetwork::new(6, 0, 5);
        net.add_arc(1, 2, 2.0, inf);
        net.add_arc(3, 4, 3.0, inf);
        for v in [1, 3] {
            net.add_arc(0, v, 0.0, inf);
        }
        for v in [2, 4] {
            net.add_arc(v, 5, 0.0, inf);
        }
        net.add_arc(2, 3, 0.0, inf);
        let value = net.solve_min_flow().unwrap();
        assert!((value - 3.0).abs() < 1e-12);
        assert!(net.violation() <= 1e-12);
    }

    #[test]
    fn infeasible_bounds_are_reported() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, 0.0, 1.0);
        net.add_arc(1, 2, 2.0, 3.0);
        assert_eq!(net.solve_min_flow(), Err(Error::InfeasibleNetwork));
    }
}
