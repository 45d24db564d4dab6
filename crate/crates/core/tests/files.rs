use std::fs;

use luceopt_core::harness::{generate_assortment_instance, generate_pricing_instance};
use luceopt_core::harness::{AssortmentExperimentConfig, PricingExperimentConfig};
use luceopt_core::*;

#[test]
fn generated_instances_survive_disk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = AssortmentExperimentConfig {
        n: 12,
        a0: 3.0,
        d: 0.4,
        count: 5,
        seed: 21,
        cell: 0,
    };
    for i in 0..5 {
        let inst = generate_assortment_instance(&cfg, i);
        let path = dir.path().join(format!("{i}.json"));
        fs::write(&path, InstanceFile::from_instance(&inst).to_json()).unwrap();
        let back = InstanceFile::from_json(&fs::read_to_string(&path).unwrap())
            .unwrap()
            .to_instance()
            .unwrap();
        assert_eq!(back, inst);
        let a = solve_assortment_2slm(&inst, DEFAULT_EPS);
        let b = solve_assortment_2slm(&back, DEFAULT_EPS);
        assert_eq!(a.assortment, b.assortment);
        assert_eq!(a.revenue.to_bits(), b.revenue.to_bits());
    }
}

#[test]
fn priced_instances_survive_disk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PricingExperimentConfig {
        n: 6,
        t: 0.3,
        a0: 2.0,
        count: 1,
        seed: 4,
        cell: 0,
    };
    let inst = generate_pricing_instance(&cfg, 0);
    let path = dir.path().join("priced.json");
    fs::write(&path, InstanceFile::from_priced_instance(&inst).to_json()).unwrap();
    let (back, order) = InstanceFile::from_json(&fs::read_to_string(&path).unwrap())
        .unwrap()
        .to_priced_instance()
        .unwrap();
    assert_eq!(back, inst);
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}
