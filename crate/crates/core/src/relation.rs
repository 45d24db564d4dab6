//! Strict partial orders over products, stored with their transitive
//! closure and transitive reduction.
//!
//! Elements are addressed by 0-based index. `dominates(x, y)` reads as
//! "x ≻ y": whenever both are offered, y is removed from consideration.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceRelation {
    n: usize,
    closure: Vec<Vec<bool>>,
    reduction: Vec<(usize, usize)>,
}

impl DominanceRelation {
    /// The empty relation on `n` elements.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            closure: vec![vec![false; n]; n],
            reduction: Vec::new(),
        }
    }

    /// Builds a relation from an edge list, closing it transitively and
    /// then checking irreflexivity and antisymmetry.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut closure = vec![vec![false; n]; n];
        for (x, y) in edges {
            for index in [x, y] {
                if index >= n {
                    return Err(Error::IdOutOfRange { index, n });
                }
            }
            closure[x][y] = true;
        }

        // Warshall
        for k in 0..n {
            let row_k = closure[k].clone();
            for row in closure.iter_mut() {
                if row[k] {
                    for (dst, &src) in row.iter_mut().zip(&row_k) {
                        *dst |= src;
                    }
                }
            }
        }

        for (x, row) in closure.iter().enumerate() {
            // with a transitive relation, a 2-cycle x≻y≻x also puts (x,x) in the closure
            if row[x] {
                return Err(Error::Cycle(x));
            }
        }

        let reduction = reduce(&closure);
        Ok(Self {
            n,
            closure,
            reduction,
        })
    }

    /// Threshold rule: `x ≻ y` iff `a_x > (1 + t) a_y`. Ties at exactly the
    /// threshold produce no edge.
    pub fn from_threshold(attractiveness: &[f64], t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveInput {
                what: "threshold",
                value: t,
            });
        }
        if let Some(&value) = attractiveness.iter().find(|&&a| !(a > 0.0)) {
            return Err(Error::NonPositiveInput {
                what: "attractiveness",
                value,
            });
        }
        let n = attractiveness.len();
        let mut edges = Vec::new();
        for (x, &ax) in attractiveness.iter().enumerate() {
            for (y, &ay) in attractiveness.iter().enumerate() {
                if ax > (1.0 + t) * ay {
                    edges.push((x, y));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dominates(&self, x: usize, y: usize) -> bool {
        self.closure[x][y]
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.closure[x][y] || self.closure[y][x]
    }

    /// All pairs of the transitive closure, sorted.
    pub fn closure_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (x, row) in self.closure.iter().enumerate() {
            for (y, &on) in row.iter().enumerate() {
                if on {
                    edges.push((x, y));
                }
            }
        }
        edges
    }

    /// Covering pairs of the order (the Hasse diagram), sorted.
    pub fn reduction_edges(&self) -> &[(usize, usize)] {
        &self.reduction
    }

    /// Elements that dominate `y`.
    pub fn dominators(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| self.closure[x][y])
    }

    /// Elements dominated by `x`.
    pub fn dominated_by(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.closure[x][y])
    }

    pub fn edge_count(&self) -> usize {
        self.closure
            .iter()
            .map(|row| row.iter().filter(|&&b| b).count())
            .sum()
    }

    /// True when no two members of `set` are comparable.
    pub fn is_antichain(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &x)| set[i + 1..].iter().all(|&y| !self.comparable(x, y)))
    }

    /// Bitmask of dominators of each element. Only valid for `n <= 64`.
    pub(crate) fn dominator_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        (0..self.n)
            .map(|y| self.dominators(y).fold(0u64, |m, x| m | (1 << x)))
            .collect()
    }
}

fn reduce(closure: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = closure.len();
    let mut reduction = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if closure[x][y] && !(0..n).any(|z| closure[x][z] && closure[z][y]) {
                reduction.push((x, y));
            }
        }
    }
    reduction
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_valid() {
        let rel = DominanceRelation::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(rel.closure_edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(rel.reduction_edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        assert!(matches!(
            DominanceRelation::new(2, [(0, 1), (1, 0)]),
            Err(Error::Cycle(_))
        ));
    }

    #[test]
    fn self_loop_is_rejected() {
        assert!(matches!(
            DominanceRelation::new(2, [(1, 1)]),
            Err(Error::Cycle(1))
        ));
    }

    #[test]
    fn closure_adds_transitive_pair() {
        let rel = DominanceRelation::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(rel.dominates(0, 2));
        assert_eq!(rel.edge_count(), 3);
    }

    #[test]
    fn out_of_range_index() {
        assert_eq!(
            DominanceRelation::new(2, [(0, 2)]),
            Err(Error::IdOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn threshold_figure_dag() {
        let rel = DominanceRelation::from_threshold(&[12.0, 8.0, 6.0, 3.0, 2.0], 0.4).unwrap();
        let expected = vec![
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
            (3, 4),
        ];
        assert_eq!(rel.closure_edges(), expected);
    }

    #[test]
    fn threshold_equal_attractiveness_is_empty() {
        let rel = DominanceRelation::from_threshold(&[1.0, 1.0, 1.0], 0.3).unwrap();
        assert_eq!(rel.edge_count(), 0);
    }

    #[test]
    fn threshold_regularity_instance() {
        let rel = DominanceRelation::from_threshold(&[5.0, 4.0, 3.0, 3.0], 0.4).unwrap();
        assert_eq!(rel.closure_edges(), vec![(0, 2), (0, 3)]);
    }

    #[test]
    fn threshold_tie_at_boundary_has_no_edge() {
        // 3 = (1 + 0.5) * 2 exactly
        let rel = DominanceRelation::from_threshold(&[3.0, 2.0], 0.5).unwrap();
        assert_eq!(rel.edge_count(), 0);
    }

    #[test]
    fn threshold_rejects_bad_input() {
        assert!(DominanceRelation::from_threshold(&[1.0, 0.0], 0.5).is_err());
        assert!(DominanceRelation::from_threshold(&[1.0, 2.0], 0.0).is_err());
    }
}
