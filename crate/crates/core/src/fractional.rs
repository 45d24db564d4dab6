//! Dinkelbach iteration for `max Σ n_i x_i / (Σ d_i x_i + d_0)` over a
//! combinatorial family, given an oracle for the linear subproblem
//! `max Σ (n_i - λ d_i) x_i`.

/// Numerator and denominator coefficients of a ratio objective.
#[derive(Debug, Clone)]
pub struct RatioObjective {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub constant: f64,
}

impl RatioObjective {
    pub fn ratio(&self, set: &[usize]) -> f64 {
        let (num, den) = set.iter().fold((0.0, self.constant), |(n, d), &i| {
            (n + self.numerator[i], d + self.denominator[i])
        });
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Subproblem weights `n_i - λ d_i`.
    pub fn parametric_weights(&self, lambda: f64) -> Vec<f64> {
        self.numerator
            .iter()
            .zip(&self.denominator)
            .map(|(n, d)| n - lambda * d)
            .collect()
    }

    /// Index and ratio of the best singleton, ties to the smallest index.
    pub fn best_singleton(&self) -> Option<(usize, f64)> {
        (0..self.numerator.len())
            .map(|i| (i, self.ratio(&[i])))
            .fold(None, |best, (i, r)| match best {
                Some((_, br)) if br >= r => best,
                _ => Some((i, r)),
            })
    }
}

#[derive(Debug, Clone)]
pub struct FractionalOutcome {
    pub set: Vec<usize>,
    pub ratio: f64,
    pub iterations: usize,
    /// Final `max_x Σ (n_i - λ d_i) x_i - λ d_0`; at most the stopping
    /// tolerance on exit.
    pub gap: f64,
    /// Incumbent ratio after each iteration, starting with the initial one.
    pub trace: Vec<f64>,
}

pub const DEFAULT_EPS: f64 = 1e-9;
const MAX_ITERATIONS: usize = 10_000;

/// Runs Dinkelbach's method. `subproblem` receives the parametric weights
/// and returns a feasible set maximizing their sum along with that sum.
/// The starting point is the best singleton, which must be feasible.
pub fn dinkelbach<F>(objective: &RatioObjective, eps: f64, mut subproblem: F) -> FractionalOutcome
where
    F: FnMut(&[f64]) -> (Vec<usize>, f64),
{
    let (mut set, mut lambda) = match objective.best_singleton() {
        Some((i, r)) => (vec![i], r),
        None => (Vec::new(), 0.0),
    };
    if lambda <= 0.0 {
        // no product earns anything; the empty set is as good as any
        set.clear();
        lambda = 0.0;
    }
    let mut trace = vec![lambda];
    let mut iterations = 0;
    let mut gap;
    loop {
        iterations += 1;
        let weights = objective.parametric_weights(lambda);
        let (candidate, value) = subproblem(&weights);
        gap = value - lambda * objective.constant;
        if gap <= eps * lambda.max(1.0) || iterations >= MAX_ITERATIONS {
            break;
        }
        let next = objective.ratio(&candidate);
        if next <= lambda {
            // rounding left no strict progress; λ is optimal to working precision
            break;
        }
        set = candidate;
        lambda = next;
        trace.push(lambda);
    }
    set.sort_unstable();
    FractionalOutcome {
        set,
        ratio: lambda,
        iterations,
        gap,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unconstrained MNL: every subset feasible, subproblem takes the
    /// positive weights.
    #[test]
    fn mnl_prefix_optimum() {
        let objective = RatioObjective {
            numerator: vec![10.0 * 1.0, 8.0 * 2.0, 1.0 * 5.0],
            denominator: vec![1.0, 2.0, 5.0],
            constant: 1.0,
        };
        let outcome = dinkelbach(&objective, DEFAULT_EPS, |w| {
            let set: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
            let value = set.iter().map(|&i| w[i]).sum();
            (set, value)
        });
        // enumerate the 8 subsets
        let best = (0u32..8)
            .map(|m| {
                let s: Vec<usize> = (0..3).filter(|&i| m & (1 << i) != 0).collect();
                objective.ratio(&s)
            })
            .fold(0.0, f64::max);
        assert!((outcome.ratio - best).abs() < 1e-12);
        assert_eq!(outcome.set, vec![0, 1]);
        assert!(outcome.trace.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn empty_objective() {
        let objective = RatioObjective {
            numerator: vec![],
            denominator: vec![],
            constant: 1.0,
        };
        let outcome = dinkelbach(&objective, DEFAULT_EPS, |_| (vec![], 0.0));
        assert!(outcome.set.is_empty());
        assert_eq!(outcome.ratio, 0.0);
    }
}
