//! Two-stage Luce data model: consideration sets, choice probabilities and
//! expected revenue, for fixed attractiveness and for price-dependent
//! (threshold) instances.
//!
//! Subsets are slices of 0-based product indices. The outside option is
//! carried implicitly through `a0`.

use crate::error::{Error, Result};
use crate::relation::DominanceRelation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Product {
    /// External 1-based label.
    pub id: usize,
    pub revenue: f64,
    pub attractiveness: f64,
}

impl Product {
    pub fn new(id: usize, revenue: f64, attractiveness: f64) -> Result<Self> {
        if !(attractiveness > 0.0) || !attractiveness.is_finite() {
            return Err(Error::NonPositiveInput {
                what: "attractiveness",
                value: attractiveness,
            });
        }
        if !(revenue >= 0.0) || !revenue.is_finite() {
            return Err(Error::InvalidInput(format!(
                "revenue of product {id} must be a finite non-negative number, got {revenue}"
            )));
        }
        Ok(Self {
            id,
            revenue,
            attractiveness,
        })
    }
}

/// Assortment instance under the two-stage Luce model.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    products: Vec<Product>,
    a0: f64,
    dominance: DominanceRelation,
}

impl Instance {
    pub fn new(products: Vec<Product>, a0: f64, dominance: DominanceRelation) -> Result<Self> {
        if dominance.len() != products.len() {
            return Err(Error::InvalidInput(format!(
                "dominance relation covers {} products, instance has {}",
                dominance.len(),
                products.len()
            )));
        }
        if !(a0 >= 0.0) || !a0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "outside option must be finite and non-negative, got {a0}"
            )));
        }
        Ok(Self {
            products,
            a0,
            dominance,
        })
    }

    /// Convenience constructor from parallel revenue/attractiveness lists,
    /// labelling products 1..=n.
    pub fn from_parts(
        revenues: &[f64],
        attractiveness: &[f64],
        a0: f64,
        dominance: DominanceRelation,
    ) -> Result<Self> {
        if revenues.len() != attractiveness.len() {
            return Err(Error::InvalidInput(
                "revenue and attractiveness lists differ in length".into(),
            ));
        }
        let products = revenues
            .iter()
            .zip(attractiveness)
            .enumerate()
            .map(|(i, (&r, &a))| Product::new(i + 1, r, a))
            .collect::<Result<Vec<_>>>()?;
        Self::new(products, a0, dominance)
    }

    /// Threshold Luce instance: dominance derived from attractiveness.
    pub fn threshold(revenues: &[f64], attractiveness: &[f64], a0: f64, t: f64) -> Result<Self> {
        let dominance = DominanceRelation::from_threshold(attractiveness, t)?;
        Self::from_parts(revenues, attractiveness, a0, dominance)
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }

    pub fn products(&self) -> &[Product] {
        &self.products
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn dominance(&self) -> &DominanceRelation {
        &self.dominance
    }

    pub fn revenue(&self, i: usize) -> f64 {
        self.products[i].revenue
    }

    pub fn attractiveness(&self, i: usize) -> f64 {
        self.products[i].attractiveness
    }

    pub fn revenues(&self) -> Vec<f64> {
        self.products.iter().map(|p| p.revenue).collect()
    }

    pub fn attractiveness_values(&self) -> Vec<f64> {
        self.products.iter().map(|p| p.attractiveness).collect()
    }

    /// Same products and outside option with a different dominance relation.
    pub fn with_dominance(&self, dominance: DominanceRelation) -> Result<Self> {
        Self::new(self.products.clone(), self.a0, dominance)
    }
}

/// `c(S)`: members of `set` not dominated by another member. Output is
/// sorted and deduplicated.
pub fn consideration_set(set: &[usize], inst: &Instance) -> Vec<usize> {
    let rel = inst.dominance();
    let mut out: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&x| !set.iter().any(|&y| rel.dominates(y, x)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `ρ(x, S)`. `None` stands for the outside option.
pub fn choice_probability(x: Option<usize>, set: &[usize], inst: &Instance) -> f64 {
    let considered = consideration_set(set, inst);
    let denom: f64 = considered
        .iter()
        .map(|&i| inst.attractiveness(i))
        .sum::<f64>()
        + inst.a0();
    if denom == 0.0 {
        return 0.0;
    }
    match x {
        None => inst.a0() / denom,
        Some(x) if considered.binary_search(&x).is_ok() => inst.attractiveness(x) / denom,
        Some(_) => 0.0,
    }
}

/// `R(S) = Σ_{i∈c(S)} ρ(i,S) r_i`.
pub fn expected_revenue(set: &[usize], inst: &Instance) -> f64 {
    let considered = consideration_set(set, inst);
    antichain_revenue(&considered, inst)
}

/// Revenue of a set already known to be its own consideration set.
pub(crate) fn antichain_revenue(set: &[usize], inst: &Instance) -> f64 {
    let (num, den) = set.iter().fold((0.0, inst.a0()), |(num, den), &i| {
        let a = inst.attractiveness(i);
        (num + inst.revenue(i) * a, den + a)
    });
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Relative slack applied when comparing price-dependent attractiveness.
/// Solutions that sit exactly on a dominance boundary must not flip to
/// "dominated" because of rounding in `exp`.
pub const PRICE_DOMINANCE_RTOL: f64 = 1e-12;

/// Threshold Luce instance with price-dependent attractiveness
/// `a_i(p_i) = exp(u_i - p_i)`. Utilities are sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct PricedInstance {
    utilities: Vec<f64>,
    t: f64,
    a0: f64,
}

impl PricedInstance {
    pub fn new(utilities: Vec<f64>, t: f64, a0: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveInput {
                what: "threshold",
                value: t,
            });
        }
        if !(a0 >= 0.0) || !a0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "outside option must be finite and non-negative, got {a0}"
            )));
        }
        if utilities.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidInput("utilities must be finite".into()));
        }
        if utilities.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(
                "utilities must be sorted in non-increasing order".into(),
            ));
        }
        Ok(Self { utilities, t, a0 })
    }

    /// Sorts the utilities first; returns the permutation applied
    /// (`order[new_index] = old_index`).
    pub fn from_unsorted(utilities: &[f64], t: f64, a0: f64) -> Result<(Self, Vec<usize>)> {
        let mut order: Vec<usize> = (0..utilities.len()).collect();
        order.sort_by(|&i, &j| utilities[j].total_cmp(&utilities[i]).then(i.cmp(&j)));
        let sorted = order.iter().map(|&i| utilities[i]).collect();
        Ok((Self::new(sorted, t, a0)?, order))
    }

    pub fn len(&self) -> usize {
        self.utilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utilities.is_empty()
    }

    pub fn utilities(&self) -> &[f64] {
        &self.utilities
    }

    pub fn utility(&self, i: usize) -> f64 {
        self.utilities[i]
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// `ln(1 + t)`: the widest admissible gap between net utilities.
    pub fn log_band(&self) -> f64 {
        self.t.ln_1p()
    }

    pub(crate) fn require_outside_option(&self) -> Result<()> {
        if self.a0 > 0.0 {
            Ok(())
        } else {
            Err(Error::ZeroOutsideOption)
        }
    }
}

/// Per-product prices; `f64::INFINITY` marks a product that is not offered.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceVector(Vec<f64>);

impl PriceVector {
    pub fn new(prices: Vec<f64>) -> Result<Self> {
        if let Some(&p) = prices.iter().find(|&&p| !(p >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "prices must be non-negative or infinite, got {p}"
            )));
        }
        Ok(Self(prices))
    }

    /// Finite prices on the prefix `[k]` and infinity beyond it.
    pub fn prefix(prices: &[f64], n: usize) -> Result<Self> {
        let mut all = prices.to_vec();
        all.resize(n.max(prices.len()), f64::INFINITY);
        Self::new(all)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices with a finite price.
    pub fn offered(&self) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&i| self.0[i].is_finite())
            .collect()
    }
}

/// `c(S, p)` under the threshold rule with price-dependent attractiveness.
pub fn consideration_set_priced(
    set: &[usize],
    prices: &PriceVector,
    inst: &PricedInstance,
) -> Vec<usize> {
    considered_at(set, prices.as_slice(), inst)
}

/// `R(S, p)`; prices act as per-unit revenue.
pub fn expected_revenue_priced(set: &[usize], prices: &PriceVector, inst: &PricedInstance) -> f64 {
    revenue_at(set, prices.as_slice(), inst)
}

/// A pair is valid when exactly the finite-priced products are offered and
/// none of them is dominated.
pub fn is_valid_pair(set: &[usize], prices: &PriceVector, inst: &PricedInstance) -> bool {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if prices.offered() != sorted {
        return false;
    }
    considered_at(&sorted, prices.as_slice(), inst) == sorted
}

/// Slice-level consideration set; prices may be any finite reals.
pub(crate) fn considered_at(set: &[usize], prices: &[f64], inst: &PricedInstance) -> Vec<usize> {
    let scale = (1.0 + inst.t()) * (1.0 + PRICE_DOMINANCE_RTOL);
    let att: Vec<f64> = set
        .iter()
        .map(|&i| (inst.utility(i) - prices[i]).exp())
        .collect();
    let top = att.iter().copied().fold(0.0, f64::max);
    let mut out: Vec<usize> = set
        .iter()
        .zip(&att)
        .filter(|&(_, &a)| !(top > scale * a))
        .map(|(&i, _)| i)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Slice-level priced revenue; prices may be any finite reals.
pub(crate) fn revenue_at(set: &[usize], prices: &[f64], inst: &PricedInstance) -> f64 {
    let considered = considered_at(set, prices, inst);
    let (num, den) = considered.iter().fold((0.0, inst.a0()), |(num, den), &i| {
        let a = (inst.utility(i) - prices[i]).exp();
        (num + prices[i] * a, den + a)
    });
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn regularity_instance() -> Instance {
        Instance::threshold(&[1.0; 4], &[5.0, 4.0, 3.0, 3.0], 1.0, 0.4).unwrap()
    }

    fn rev_ord_instance() -> Instance {
        Instance::threshold(&[88.0, 47.0, 46.0], &[13.0, 26.0, 15.0], 55.0, 0.6).unwrap()
    }

    #[test]
    fn regularity_violation_probabilities() {
        let inst = regularity_instance();
        let p_small = choice_probability(Some(1), &[1, 2, 3], &inst);
        let p_large = choice_probability(Some(1), &[0, 1, 2, 3], &inst);
        assert!((p_small - 4.0 / 11.0).abs() <= 1e-12);
        assert!((p_large - 4.0 / 10.0).abs() <= 1e-12);
        assert!(p_small < p_large);
        assert_eq!(consideration_set(&[0, 1, 2, 3], &inst), vec![0, 1]);
    }

    #[test]
    fn dominated_product_has_zero_probability() {
        let inst = rev_ord_instance();
        assert_eq!(choice_probability(Some(2), &[0, 1, 2], &inst), 0.0);
        assert_eq!(consideration_set(&[0, 1, 2], &inst), vec![1]);
    }

    #[test]
    fn figure_instance_consideration() {
        let inst = Instance::threshold(&[1.0; 5], &[12.0, 8.0, 6.0, 3.0, 2.0], 1.0, 0.4).unwrap();
        assert_eq!(consideration_set(&[1, 2, 3, 4], &inst), vec![1, 2]);
        assert_eq!(consideration_set(&[3], &inst), vec![3]);
    }

    #[test]
    fn revenue_table_values() {
        let inst = rev_ord_instance();
        assert_relative_eq!(
            expected_revenue(&[0, 2], &inst),
            1834.0 / 83.0,
            epsilon = 1e-12
        );
        assert!((expected_revenue(&[0], &inst) - 16.824).abs() < 1e-3);
        assert!((expected_revenue(&[1], &inst) - 15.086).abs() < 1e-3);
        assert!((expected_revenue(&[2], &inst) - 9.857).abs() < 1e-3);
        assert_eq!(expected_revenue(&[], &inst), 0.0);
    }

    #[test]
    fn zero_outside_option_empty_set() {
        let inst = Instance::from_parts(&[3.0], &[1.0], 0.0, DominanceRelation::empty(1)).unwrap();
        assert_eq!(expected_revenue(&[], &inst), 0.0);
        assert_eq!(choice_probability(None, &[], &inst), 0.0);
        assert_eq!(expected_revenue(&[0], &inst), 3.0);
    }

    fn price_effect_instance() -> PricedInstance {
        PricedInstance::new(vec![10f64.ln(), 8f64.ln(), 6f64.ln(), 3f64.ln()], 0.5, 1.0).unwrap()
    }

    #[test]
    fn price_effect_scenario_one() {
        let inst = price_effect_instance();
        let p = PriceVector::new(vec![3f64.ln(); 4]).unwrap();
        assert_eq!(
            consideration_set_priced(&[0, 1, 2, 3], &p, &inst),
            vec![0, 1]
        );
        // edges 1≻3, 1≻4, 2≻4, and 3≻4 since 2 > 1.5 · 1
        assert_eq!(consideration_set_priced(&[0, 2], &p, &inst), vec![0]);
        assert_eq!(consideration_set_priced(&[1, 2], &p, &inst), vec![1, 2]);
        assert_eq!(consideration_set_priced(&[1, 3], &p, &inst), vec![1]);
        assert_eq!(consideration_set_priced(&[2, 3], &p, &inst), vec![2]);
    }

    #[test]
    fn price_effect_scenario_two() {
        let inst = price_effect_instance();
        let p = PriceVector::new(vec![4f64.ln(), 4f64.ln(), 3f64.ln(), 2f64.ln()]).unwrap();
        assert_eq!(
            consideration_set_priced(&[0, 1, 2, 3], &p, &inst),
            vec![0, 1, 2]
        );
    }

    fn fixed_price_example() -> PricedInstance {
        let mut u = vec![2.0];
        u.extend(std::iter::repeat_n(1.0, 10));
        PricedInstance::new(u, 1.0, 1.0).unwrap()
    }

    #[test]
    fn hand_priced_example_revenue() {
        let inst = fixed_price_example();
        let mut prices = vec![1.8];
        prices.extend(std::iter::repeat_n(1.4, 10));
        let p = PriceVector::new(prices).unwrap();
        let all: Vec<usize> = (0..11).collect();
        assert!((expected_revenue_priced(&all, &p, &inst) - 1.298).abs() < 1e-3);
        assert!(is_valid_pair(&all, &p, &inst));
    }

    #[test]
    fn uniform_prices_are_invalid_on_example() {
        let inst = fixed_price_example();
        let all: Vec<usize> = (0..11).collect();
        let p = PriceVector::new(vec![1.5; 11]).unwrap();
        assert!(!is_valid_pair(&all, &p, &inst));
        assert_eq!(consideration_set_priced(&all, &p, &inst), vec![0]);
    }

    #[test]
    fn single_product_pricing_revenue() {
        let inst = PricedInstance::new(vec![2.0], 1.0, 1.0).unwrap();
        let p = PriceVector::new(vec![2.0]).unwrap();
        assert_relative_eq!(
            expected_revenue_priced(&[0], &p, &inst),
            1.0,
            epsilon = 1e-15
        );
        let zero = PriceVector::new(vec![0.0]).unwrap();
        assert_eq!(expected_revenue_priced(&[0], &zero, &inst), 0.0);
    }

    #[test]
    fn validity_requires_offered_set_match() {
        let inst = PricedInstance::new(vec![1.0, 0.5, 0.2], 0.5, 1.0).unwrap();
        let p = PriceVector::new(vec![1.0, f64::INFINITY, f64::INFINITY]).unwrap();
        assert!(is_valid_pair(&[0], &p, &inst));
        assert!(!is_valid_pair(&[0, 1], &p, &inst));
    }

    #[test]
    fn uniform_instance_considers_everything() {
        let inst = PricedInstance::new(vec![1.0; 4], 0.2, 1.0).unwrap();
        let p = PriceVector::new(vec![0.7; 4]).unwrap();
        assert_eq!(
            consideration_set_priced(&[0, 1, 2, 3], &p, &inst),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn rejects_bad_priced_instances() {
        assert!(PricedInstance::new(vec![1.0, 2.0], 1.0, 1.0).is_err());
        assert!(PricedInstance::new(vec![1.0], 0.0, 1.0).is_err());
        assert!(PriceVector::new(vec![-1.0]).is_err());
    }
}
