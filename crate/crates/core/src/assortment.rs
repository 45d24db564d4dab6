//! Unconstrained assortment optimization under the two-stage Luce model and
//! the general attraction model, plus the revenue-ordered baseline.

use crate::antichain::{max_weight_antichain, WeightedPoset};
use crate::error::{Error, Result};
use crate::fractional::{dinkelbach, RatioObjective};
use crate::model::{consideration_set, expected_revenue, Instance};
use crate::relation::DominanceRelation;

#[derive(Debug, Clone, PartialEq)]
pub struct AssortmentSolution {
    /// Sorted 0-based product indices; always an antichain.
    pub assortment: Vec<usize>,
    pub revenue: f64,
    pub iterations: usize,
    /// Final fractional-programming residual. `None` for heuristics.
    pub certificate_gap: Option<f64>,
}

impl AssortmentSolution {
    pub fn cardinality(&self) -> usize {
        self.assortment.len()
    }
}

pub(crate) fn revenue_objective(inst: &Instance) -> RatioObjective {
    RatioObjective {
        numerator: inst
            .products()
            .iter()
            .map(|p| p.revenue * p.attractiveness)
            .collect(),
        denominator: inst.attractiveness_values(),
        constant: inst.a0(),
    }
}

/// Optimal unconstrained assortment: Dinkelbach over max-weight antichain
/// subproblems with weights `(r_i - λ) a_i`.
pub fn solve_assortment_2slm(inst: &Instance, eps: f64) -> AssortmentSolution {
    let objective = revenue_objective(inst);
    let outcome = dinkelbach(&objective, eps, |weights| {
        let poset = WeightedPoset {
            relation: inst.dominance(),
            weights: weights.to_vec(),
        };
        let best = max_weight_antichain(&poset);
        (best.members, best.value)
    });
    AssortmentSolution {
        revenue: expected_revenue(&outcome.set, inst),
        assortment: outcome.set,
        iterations: outcome.iterations,
        certificate_gap: Some(outcome.gap),
    }
}

/// Product of the general attraction model: `v` is the attractiveness when
/// offered, `w` the shadow attractiveness added to the outside option when
/// not offered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GamProduct {
    pub revenue: f64,
    pub v: f64,
    pub w: f64,
}

/// GAM objective `Σ r_j v_j x_j / (Σ (v_j - w_j) x_j + v_0 + Σ_k w_k)`.
pub fn gam_objective(products: &[GamProduct], v0: f64) -> Result<RatioObjective> {
    for (j, p) in products.iter().enumerate() {
        if !(p.w >= 0.0) || p.w > p.v {
            return Err(Error::WeightOrder(j));
        }
    }
    Ok(RatioObjective {
        numerator: products.iter().map(|p| p.revenue * p.v).collect(),
        denominator: products.iter().map(|p| p.v - p.w).collect(),
        constant: v0 + products.iter().map(|p| p.w).sum::<f64>(),
    })
}

/// Optimal assortment under the GAM restricted to antichains of `dominance`.
pub fn solve_assortment_gam(
    products: &[GamProduct],
    v0: f64,
    dominance: &DominanceRelation,
    eps: f64,
) -> Result<AssortmentSolution> {
    if dominance.len() != products.len() {
        return Err(Error::InvalidInput(
            "dominance relation size does not match product count".into(),
        ));
    }
    let objective = gam_objective(products, v0)?;
    let outcome = dinkelbach(&objective, eps, |weights| {
        let poset = WeightedPoset {
            relation: dominance,
            weights: weights.to_vec(),
        };
        let best = max_weight_antichain(&poset);
        (best.members, best.value)
    });
    Ok(AssortmentSolution {
        revenue: objective.ratio(&outcome.set),
        assortment: outcome.set,
        iterations: outcome.iterations,
        certificate_gap: Some(outcome.gap),
    })
}

/// Best prefix of the products sorted by decreasing revenue (ties by
/// index). Each prefix is evaluated through its consideration set, and the
/// consideration set of the winner is returned.
pub fn revenue_ordered_heuristic(inst: &Instance) -> AssortmentSolution {
    let mut order: Vec<usize> = (0..inst.len()).collect();
    order.sort_by(|&i, &j| inst.revenue(j).total_cmp(&inst.revenue(i)).then(i.cmp(&j)));

    let mut best = (0.0, Vec::new());
    for k in 1..=order.len() {
        let revenue = expected_revenue(&order[..k], inst);
        if revenue > best.0 {
            best = (revenue, consideration_set(&order[..k], inst));
        }
    }
    AssortmentSolution {
        assortment: best.1,
        revenue: best.0,
        iterations: order.len(),
        certificate_gap: None,
    }
}
