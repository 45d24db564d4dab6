//! Capacitated assortment optimization: at most `C` products may be offered.
//!
//! The general problem is NP-hard, so exact enumeration is the fallback.
//! Two special cases are polynomial: dominance relations whose Hasse diagram
//! is a forest (tree dynamic program under Dinkelbach) and
//! attractiveness-correlated relations (one capacitated MNL per candidate
//! most-attractive product).

use std::fmt;

use crate::antichain::enumerate_antichains;
use crate::assortment::{revenue_objective, solve_assortment_2slm, AssortmentSolution};
use crate::error::{Error, Result};
use crate::fractional::{dinkelbach, RatioObjective};
use crate::model::{antichain_revenue, expected_revenue, Instance};
use crate::relation::DominanceRelation;

pub const BRUTE_FORCE_LIMIT: usize = 22;

/// Tie groups larger than this make the attractiveness-correlated solver
/// enumerate too many tie subsets.
const MAX_CONFLICTING_TIES: usize = 16;

#[derive(Debug, Clone)]
pub struct CapacitatedProblem {
    instance: Instance,
    capacity: usize,
}

impl CapacitatedProblem {
    /// Capacities above the product count are clamped to it.
    pub fn new(instance: Instance, capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidInput("capacity must be at least 1".into()));
        }
        let capacity = capacity.min(instance.len());
        Ok(Self { instance, capacity })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Unconstrained,
    BruteForce,
    Tree,
    AttCorr,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Unconstrained => "unconstrained",
            Method::BruteForce => "bruteforce",
            Method::Tree => "tree",
            Method::AttCorr => "attcorr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact optimum over all antichains with at most `C` members, enumerated in
/// lexicographic order (the first maximum wins).
pub fn solve_capacitated_bruteforce(prob: &CapacitatedProblem) -> Result<AssortmentSolution> {
    let inst = prob.instance();
    let n = inst.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let rel = inst.dominance();
    let comparable: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| rel.comparable(x, y))
                .fold(0u64, |m, y| m | (1 << y))
        })
        .collect();
    let mut best = (0.0, Vec::new());
    let mut visited = 0usize;
    enumerate_antichains(&comparable, 0, 0, &mut Vec::new(), &mut |set| {
        if set.len() <= prob.capacity() {
            visited += 1;
            let revenue = antichain_revenue(set, inst);
            if revenue > best.0 {
                best = (revenue, set.to_vec());
            }
        }
    });
    Ok(AssortmentSolution {
        assortment: best.1,
        revenue: best.0,
        iterations: visited,
        certificate_gap: None,
    })
}

/// Parent structure of a forest-shaped Hasse diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    parents: Vec<Option<usize>>,
}

impl Forest {
    /// Fails with `NotATree` when some element has two covering elements.
    pub fn from_relation(rel: &DominanceRelation) -> Result<Self> {
        let mut parents = vec![None; rel.len()];
        for &(x, y) in rel.reduction_edges() {
            if parents[y].is_some() {
                return Err(Error::NotATree(y));
            }
            parents[y] = Some(x);
        }
        Ok(Self { parents })
    }

    /// Builds a forest from an explicit parent array, rejecting cycles.
    pub fn from_parents(parents: Vec<Option<usize>>) -> Result<Self> {
        let n = parents.len();
        for start in 0..n {
            let mut v = start;
            let mut steps = 0;
            while let Some(p) = parents[v] {
                if p >= n {
                    return Err(Error::IdOutOfRange { index: p, n });
                }
                steps += 1;
                if steps > n {
                    return Err(Error::NotATree(start));
                }
                v = p;
            }
        }
        Ok(Self { parents })
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parents
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }
}

/// `Some(forest)` iff every element has at most one cover in the
/// transitive reduction.
pub fn is_forest_reducible(rel: &DominanceRelation) -> Option<Forest> {
    Forest::from_relation(rel).ok()
}

/// Maximum weight of an antichain with at most `capacity` members in a
/// forest order. Returns the weight and the sorted members.
///
/// Non-positive elements are spliced out first (their children move up to
/// the nearest kept ancestor). The recurrences are
/// `A(v, c) = max(w_v, A⁺(children(v), c))` for `c >= 1`, `A(v, 0) = 0`,
/// and `A⁺` folds children in one at a time with a max-plus convolution.
pub fn tree_dp_max_att(
    forest: &Forest,
    weights: &[f64],
    capacity: usize,
) -> Result<(f64, Vec<usize>)> {
    let n = forest.len();
    if weights.len() != n {
        return Err(Error::InvalidInput(
            "weight list does not match forest size".into(),
        ));
    }
    if capacity == 0 {
        return Ok((0.0, Vec::new()));
    }
    let cap = capacity.min(n);

    let kept: Vec<bool> = weights.iter().map(|&w| w > 0.0).collect();
    // node n is the virtual root
    let root = n;
    let mut children = vec![Vec::new(); n + 1];
    for v in (0..n).filter(|&v| kept[v]) {
        let mut p = forest.parents()[v];
        while let Some(u) = p {
            if kept[u] {
                break;
            }
            p = forest.parents()[u];
        }
        children[p.unwrap_or(root)].push(v);
    }
    for list in &mut children {
        list.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    }

    // post-order
    let mut order = Vec::with_capacity(n + 1);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(children[v].iter().copied());
    }
    order.reverse();

    let mut table: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    let mut take_self: Vec<Vec<bool>> = vec![Vec::new(); n + 1];
    // split[v][j][c]: capacity handed to the j-th child when A⁺ over the
    // first j+1 children uses c
    let mut split: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];

    for &v in &order {
        let mut acc = vec![0.0; cap + 1];
        let mut splits = Vec::with_capacity(children[v].len());
        for &e in &children[v] {
            let child = &table[e];
            let mut next = vec![f64::NEG_INFINITY; cap + 1];
            let mut choice = vec![0usize; cap + 1];
            for c in 0..=cap {
                for n2 in 0..=c {
                    let value = acc[c - n2] + child[n2];
                    if value > next[c] {
                        next[c] = value;
                        choice[c] = n2;
                    }
                }
            }
            acc = next;
            splits.push(choice);
        }
        let own = if v == root { 0.0 } else { weights[v] };
        let mut row = acc.clone();
        let mut mine = vec![false; cap + 1];
        for c in 1..=cap {
            if v != root && own > acc[c] {
                row[c] = own;
                mine[c] = true;
            }
        }
        row[0] = 0.0;
        table[v] = row;
        take_self[v] = mine;
        split[v] = splits;
    }

    let mut members = Vec::new();
    let mut pending = vec![(root, cap)];
    while let Some((v, c)) = pending.pop() {
        if c == 0 {
            continue;
        }
        if take_self[v][c] {
            members.push(v);
            continue;
        }
        let mut remaining = c;
        for (j, &e) in children[v].iter().enumerate().rev() {
            let n2 = split[v][j][remaining];
            pending.push((e, n2));
            remaining -= n2;
        }
    }
    members.sort_unstable();
    let value = members.iter().map(|&i| weights[i]).sum();
    Ok((value, members))
}

fn capacitated_solution(
    inst: &Instance,
    set: Vec<usize>,
    iterations: usize,
    gap: f64,
) -> AssortmentSolution {
    AssortmentSolution {
        revenue: expected_revenue(&set, inst),
        assortment: set,
        iterations,
        certificate_gap: Some(gap),
    }
}

/// Dinkelbach over the tree dynamic program.
pub fn solve_capacitated_tree(prob: &CapacitatedProblem, eps: f64) -> Result<AssortmentSolution> {
    let inst = prob.instance();
    let forest = Forest::from_relation(inst.dominance())?;
    let objective = revenue_objective(inst);
    let outcome = dinkelbach(&objective, eps, |weights| {
        let (value, set) = tree_dp_max_att(&forest, weights, prob.capacity())
            .expect("forest and weights have matching sizes");
        (set, value)
    });
    Ok(capacitated_solution(
        inst,
        outcome.set,
        outcome.iterations,
        outcome.gap,
    ))
}

/// Checks both conditions on the transitive closure:
/// `x ≻ y ⇒ a_x > a_y`, and `x ≻ y ∧ a_z > a_x ⇒ z ≻ y`.
pub fn is_attractiveness_correlated(inst: &Instance) -> bool {
    let rel = inst.dominance();
    let n = inst.len();
    for (x, y) in rel.closure_edges() {
        let ax = inst.attractiveness(x);
        if !(ax > inst.attractiveness(y)) {
            return false;
        }
        if (0..n).any(|z| inst.attractiveness(z) > ax && !rel.dominates(z, y)) {
            return false;
        }
    }
    true
}

/// Capacitated MNL: Dinkelbach whose subproblem keeps the `C` largest
/// strictly positive weights. Indices refer to the input lists.
pub fn solve_capacitated_mnl(
    revenues: &[f64],
    attractiveness: &[f64],
    a0: f64,
    capacity: usize,
    eps: f64,
) -> AssortmentSolution {
    let objective = RatioObjective {
        numerator: revenues
            .iter()
            .zip(attractiveness)
            .map(|(r, a)| r * a)
            .collect(),
        denominator: attractiveness.to_vec(),
        constant: a0,
    };
    let outcome = dinkelbach(&objective, eps, |weights| top_positive(weights, capacity));
    AssortmentSolution {
        revenue: objective.ratio(&outcome.set),
        assortment: outcome.set,
        iterations: outcome.iterations,
        certificate_gap: Some(outcome.gap),
    }
}

fn top_positive(weights: &[f64], capacity: usize) -> (Vec<usize>, f64) {
    let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    order.truncate(capacity);
    order.sort_unstable();
    let value = order.iter().map(|&i| weights[i]).sum();
    (order, value)
}

/// Candidate pools for one choice of most-attractive product `k`. Members of
/// each pool are pairwise incomparable. Ties in attractiveness with `k` may
/// dominate different products, so tied elements that do are branched on.
fn candidate_pools(inst: &Instance, k: usize) -> Result<Vec<Vec<usize>>> {
    let rel = inst.dominance();
    let ak = inst.attractiveness(k);
    let lower: Vec<usize> = (0..inst.len())
        .filter(|&i| inst.attractiveness(i) < ak && !rel.dominates(k, i))
        .collect();
    let ties: Vec<usize> = (0..inst.len())
        .filter(|&i| i != k && inst.attractiveness(i) == ak)
        .collect();
    let (conflicting, free): (Vec<usize>, Vec<usize>) = ties
        .into_iter()
        .partition(|&i| lower.iter().any(|&j| rel.dominates(i, j)));
    if conflicting.len() > MAX_CONFLICTING_TIES {
        return Err(Error::ProblemTooLarge(inst.len()));
    }

    let mut pools = Vec::with_capacity(1 << conflicting.len());
    for mask in 0u32..(1 << conflicting.len()) {
        let chosen: Vec<usize> = (0..conflicting.len())
            .filter(|&b| mask & (1 << b) != 0)
            .map(|b| conflicting[b])
            .collect();
        let mut pool = vec![k];
        pool.extend(&free);
        pool.extend(&chosen);
        pool.extend(
            lower
                .iter()
                .copied()
                .filter(|&j| !chosen.iter().any(|&u| rel.dominates(u, j))),
        );
        pool.sort_unstable();
        pools.push(pool);
    }
    Ok(pools)
}

/// For each product `k`, solve a capacitated MNL over the products no more
/// attractive than `k` and not dominated by it; keep the best (smallest `k`
/// on ties).
pub fn solve_capacitated_attcorr(
    prob: &CapacitatedProblem,
    eps: f64,
) -> Result<AssortmentSolution> {
    let inst = prob.instance();
    if !is_attractiveness_correlated(inst) {
        return Err(Error::NotAttractivenessCorrelated);
    }
    let mut best: Option<AssortmentSolution> = None;
    let mut subproblems = 0;
    for k in 0..inst.len() {
        for pool in candidate_pools(inst, k)? {
            let revenues: Vec<f64> = pool.iter().map(|&i| inst.revenue(i)).collect();
            let att: Vec<f64> = pool.iter().map(|&i| inst.attractiveness(i)).collect();
            let local = solve_capacitated_mnl(&revenues, &att, inst.a0(), prob.capacity(), eps);
            subproblems += 1;
            let mut set: Vec<usize> = local.assortment.iter().map(|&j| pool[j]).collect();
            set.sort_unstable();
            let revenue = expected_revenue(&set, inst);
            if best.as_ref().is_none_or(|b| revenue > b.revenue) {
                best = Some(AssortmentSolution {
                    assortment: set,
                    revenue,
                    iterations: 0,
                    certificate_gap: local.certificate_gap,
                });
            }
        }
    }
    let mut sol = best.unwrap_or(AssortmentSolution {
        assortment: Vec::new(),
        revenue: 0.0,
        iterations: 0,
        certificate_gap: Some(0.0),
    });
    sol.iterations = subproblems;
    Ok(sol)
}

/// Forest-reducible, then attractiveness-correlated, then enumeration.
/// Larger general instances are refused rather than solved heuristically.
pub fn solve_capacitated_auto(
    prob: &CapacitatedProblem,
    eps: f64,
) -> Result<(AssortmentSolution, Method)> {
    let inst = prob.instance();
    if prob.capacity() >= inst.len() {
        return Ok((solve_assortment_2slm(inst, eps), Method::Unconstrained));
    }
    if is_forest_reducible(inst.dominance()).is_some() {
        return Ok((solve_capacitated_tree(prob, eps)?, Method::Tree));
    }
    if is_attractiveness_correlated(inst) {
        return Ok((solve_capacitated_attcorr(prob, eps)?, Method::AttCorr));
    }
    if inst.len() <= BRUTE_FORCE_LIMIT {
        return Ok((solve_capacitated_bruteforce(prob)?, Method::BruteForce));
    }
    Err(Error::ProblemTooLarge(inst.len()))
}
