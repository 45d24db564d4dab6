//! Exhaustive references for testing the solvers.

use crate::error::{Error, Result};
use crate::model::{considered_at, revenue_at, Instance, PricedInstance};

pub const ASSORTMENT_ORACLE_LIMIT: usize = 22;
pub const PRICING_ORACLE_MAX_K: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Optimizer {
    /// Sorted 0-based product indices.
    Subset(Vec<usize>),
    /// Prices for products `0..k`.
    Prices(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub optimizer: Optimizer,
    /// Size of the enumerated search space.
    pub evaluations: u64,
}

impl OracleResult {
    pub fn subset(&self) -> Option<&[usize]> {
        match &self.optimizer {
            Optimizer::Subset(s) => Some(s),
            Optimizer::Prices(_) => None,
        }
    }

    pub fn prices(&self) -> Option<&[f64]> {
        match &self.optimizer {
            Optimizer::Prices(p) => Some(p),
            Optimizer::Subset(_) => None,
        }
    }
}

/// Enumerates every offer set `S` (with `|S| <= capacity` when given) in
/// lexicographic order and evaluates `R(S)` through the consideration set.
/// The optimizer reported is `c(S)` of the first maximizing `S`.
pub fn brute_force_assortment(inst: &Instance, capacity: Option<usize>) -> Result<OracleResult> {
    let n = inst.len();
    if n > ASSORTMENT_ORACLE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ASSORTMENT_ORACLE_LIMIT,
        });
    }
    let dominators = inst.dominance().dominator_masks();
    let cap = capacity.unwrap_or(n);
    let mut search = Search {
        inst,
        dominators: &dominators,
        cap,
        best: (0.0, 0),
        evaluations: 0,
    };
    search.visit(0, 0, 0);
    let members = mask_members(search.best.1);
    Ok(OracleResult {
        value: search.best.0,
        optimizer: Optimizer::Subset(members),
        evaluations: search.evaluations,
    })
}

fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

struct Search<'a> {
    inst: &'a Instance,
    dominators: &'a [u64],
    cap: usize,
    /// Revenue and consideration-set mask of the incumbent.
    best: (f64, u64),
    evaluations: u64,
}

impl Search<'_> {
    fn visit(&mut self, offered: u64, size: usize, start: usize) {
        self.evaluations += 1;
        let considered = (0..self.inst.len())
            .filter(|&i| offered & (1 << i) != 0 && offered & self.dominators[i] == 0)
            .fold(0u64, |m, i| m | (1 << i));
        let revenue = self.revenue(considered);
        if revenue > self.best.0 {
            self.best = (revenue, considered);
        }
        if size == self.cap {
            return;
        }
        for x in start..self.inst.len() {
            self.visit(offered | (1 << x), size + 1, x + 1);
        }
    }

    fn revenue(&self, considered: u64) -> f64 {
        let (num, den) =
            mask_members(considered)
                .into_iter()
                .fold((0.0, self.inst.a0()), |(num, den), i| {
                    let p = &self.inst.products()[i];
                    (num + p.revenue * p.attractiveness, den + p.attractiveness)
                });
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }
}

const ANCHOR_STEP: f64 = 0.05;
const OFFSET_STEP: f64 = 0.02;
const REFINE_FLOOR: f64 = 1e-6;

/// Grid search over prices for `[k]`, `k <= 3`, followed by pattern-search
/// refinement.
///
/// The grid is laid out in net utilities `v_i = u_i - p_i`: the first
/// product's net utility on a range derived from the logit markup, and the
/// others as offsets from it within `±ln(1 + t)`. Only points where no
/// product is dominated are evaluated. Prices are not sign-constrained.
pub fn numeric_pricing_oracle(inst: &PricedInstance, k: usize) -> Result<OracleResult> {
    if k > PRICING_ORACLE_MAX_K {
        return Err(Error::TooLarge {
            n: k,
            limit: PRICING_ORACLE_MAX_K,
        });
    }
    if !(inst.a0() > 0.0) {
        return Err(Error::ZeroOutsideOption);
    }
    if k == 0 || k > inst.len() {
        return Err(Error::InvalidInput(format!(
            "assortment size {k} out of range"
        )));
    }
    let u = &inst.utilities()[..k];
    let band = inst.log_band();
    let set: Vec<usize> = (0..k).collect();

    // logit revenue with every product offered and no band bounds the
    // constrained revenue; net utilities of an optimum lie within one markup
    let mnl_bound = {
        let s: f64 = u.iter().map(|x| (x - 1.0).exp()).sum();
        crate::lambert::lambert_w(s / inst.a0()).expect("non-negative argument")
    };
    let anchor_lo = u[k - 1] + band - 1.0 - mnl_bound - 2.0;
    let anchor_hi = u[0] - 1.0 + 2.0;
    let anchors = grid(anchor_lo, anchor_hi, ANCHOR_STEP);
    let offsets = grid(-band, band, OFFSET_STEP);

    let evaluate = |point: &[f64]| -> Option<f64> {
        let prices = to_prices(u, point);
        let spread = spread(point);
        if spread > band {
            return None;
        }
        (considered_at(&set, &prices, inst).len() == k).then(|| revenue_at(&set, &prices, inst))
    };

    let mut best: (f64, Vec<f64>) = (f64::NEG_INFINITY, Vec::new());
    let mut evaluations = 0u64;
    let mut point = vec![0.0; k];
    let offset_points = offsets.len().pow(k as u32 - 1);
    for &anchor in &anchors {
        point[0] = anchor;
        for idx in 0..offset_points {
            let mut rest = idx;
            for slot in point.iter_mut().skip(1) {
                *slot = offsets[rest % offsets.len()];
                rest /= offsets.len();
            }
            evaluations += 1;
            if let Some(v) = evaluate(&point) {
                if v > best.0 {
                    best = (v, point.clone());
                }
            }
        }
    }

    // pattern search over all non-zero {-1, 0, 1}^k directions
    let directions: Vec<Vec<f64>> = (1..3usize.pow(k as u32))
        .map(|code| {
            let mut c = code;
            (0..k)
                .map(|_| {
                    let d = (c % 3) as f64 - 1.0;
                    c /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let mut step = OFFSET_STEP;
    while step >= REFINE_FLOOR {
        let mut improved = false;
        for dir in &directions {
            let trial: Vec<f64> = best.1.iter().zip(dir).map(|(x, d)| x + step * d).collect();
            if let Some(v) = evaluate(&trial) {
                if v > best.0 {
                    best = (v, trial);
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }

    Ok(OracleResult {
        value: best.0,
        optimizer: Optimizer::Prices(to_prices(u, &best.1)),
        evaluations,
    })
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step).floor() as usize;
    (0..=count).map(|i| lo + i as f64 * step).collect()
}

/// `point[0]` is the first net utility; later entries are offsets below it.
fn to_prices(u: &[f64], point: &[f64]) -> Vec<f64> {
    (0..u.len())
        .map(|i| {
            let net = if i == 0 {
                point[0]
            } else {
                point[0] - point[i]
            };
            u[i] - net
        })
        .collect()
}

fn spread(point: &[f64]) -> f64 {
    let offsets = point.iter().skip(1).copied().chain([0.0]);
    let (lo, hi) = offsets.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
        (lo.min(d), hi.max(d))
    });
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambert::lambert_w;
    use crate::relation::DominanceRelation;

    fn rev_ord_instance() -> Instance {
        Instance::threshold(&[88.0, 47.0, 46.0], &[13.0, 26.0, 15.0], 55.0, 0.6).unwrap()
    }

    #[test]
    fn assortment_oracle_counterexample() {
        let inst = rev_ord_instance();
        let all = brute_force_assortment(&inst, None).unwrap();
        assert_eq!(all.subset().unwrap(), &[0, 2]);
        assert!((all.value - 22.096).abs() < 1e-3);
        assert_eq!(all.evaluations, 8);
        let one = brute_force_assortment(&inst, Some(1)).unwrap();
        assert_eq!(one.subset().unwrap(), &[0]);
        assert!((one.value - 16.824).abs() < 1e-3);
        assert_eq!(one.evaluations, 4);
    }

    #[test]
    fn assortment_oracle_empty_instance() {
        let inst = Instance::from_parts(&[], &[], 1.0, DominanceRelation::empty(0)).unwrap();
        let res = brute_force_assortment(&inst, None).unwrap();
        assert_eq!(res.value, 0.0);
        assert!(res.subset().unwrap().is_empty());
    }

    #[test]
    fn full_capacity_equals_uncapacitated() {
        let inst = rev_ord_instance();
        assert_eq!(
            brute_force_assortment(&inst, Some(3)).unwrap(),
            brute_force_assortment(&inst, None).unwrap()
        );
    }

    #[test]
    fn pricing_oracle_single_product() {
        let inst = PricedInstance::new(vec![2.0], 1.0, 1.0).unwrap();
        let res = numeric_pricing_oracle(&inst, 1).unwrap();
        assert!((res.value - 1.0).abs() < 1e-4);
    }

    #[test]
    fn pricing_oracle_equal_utilities() {
        let inst = PricedInstance::new(vec![0.0, 0.0], 0.5, 1.0).unwrap();
        let res = numeric_pricing_oracle(&inst, 2).unwrap();
        let expected = lambert_w(2.0 / std::f64::consts::E).unwrap();
        assert!((res.value - expected).abs() < 1e-3);
    }

    #[test]
    fn pricing_oracle_tight_pair() {
        let inst = PricedInstance::new(vec![3.0, 0.5], 0.5, 1.0).unwrap();
        let res = numeric_pricing_oracle(&inst, 2).unwrap();
        let p = res.prices().unwrap();
        let gap = (inst.utility(0) - p[0]) - (inst.utility(1) - p[1]);
        assert!((gap - inst.log_band()).abs() < 1e-4);
    }

    #[test]
    fn pricing_oracle_guards() {
        let inst = PricedInstance::new(vec![1.0; 4], 0.5, 1.0).unwrap();
        assert!(matches!(
            numeric_pricing_oracle(&inst, 4),
            Err(Error::TooLarge { .. })
        ));
        let free = PricedInstance::new(vec![1.0], 0.5, 0.0).unwrap();
        assert_eq!(
            numeric_pricing_oracle(&free, 1),
            Err(Error::ZeroOutsideOption)
        );
    }
}
