//! Seeded fixtures shared by the criterion benches.

use luceopt_core::harness::{
    generate_assortment_instance, generate_pricing_instance, generate_tree_instance, instance_rng,
    AssortmentExperimentConfig, PricingExperimentConfig,
};
use luceopt_core::{CapacitatedProblem, Instance, PricedInstance};

const SEED: u64 = 2024;

pub fn random_instance(n: usize, d: f64) -> Instance {
    let cfg = AssortmentExperimentConfig {
        n,
        a0: 5.0,
        d,
        count: 1,
        seed: SEED,
        cell: 0,
    };
    generate_assortment_instance(&cfg, 0)
}

/// Shadow weights at the midpoint revenue, so roughly half are positive.
/// Build the poset with `WeightedPoset::new(inst.dominance(), weights)`.
pub fn poset_parts(n: usize, d: f64) -> (Instance, Vec<f64>) {
    let inst = random_instance(n, d);
    let weights = inst
        .products()
        .iter()
        .map(|p| (p.revenue - 5.0) * p.attractiveness)
        .collect();
    (inst, weights)
}

pub fn tree_problem(n: usize, capacity: usize) -> CapacitatedProblem {
    let inst = generate_tree_instance(&mut instance_rng(SEED, 1, n as u32), n, 5.0);
    CapacitatedProblem::new(inst, capacity).expect("capacity is positive")
}

pub fn priced_instance(n: usize, t: f64) -> PricedInstance {
    let cfg = PricingExperimentConfig {
        n,
        t,
        a0: 1.0,
        count: 1,
        seed: SEED,
        cell: 2,
    };
    generate_pricing_instance(&cfg, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_stable() {
        assert_eq!(random_instance(20, 0.3), random_instance(20, 0.3));
        assert_eq!(priced_instance(10, 0.5), priced_instance(10, 0.5));
        assert_eq!(tree_problem(30, 5).capacity(), 5);
        let (inst, weights) = poset_parts(15, 0.5);
        assert_eq!(weights.len(), inst.len());
    }
}
