//! Randomized solver-versus-oracle suites.

use rand::Rng;

use crate::assortment::solve_assortment_2slm;
use crate::capacitated::{
    solve_capacitated_attcorr, solve_capacitated_bruteforce, solve_capacitated_tree,
    CapacitatedProblem,
};
use crate::error::{Error, Result};
use crate::fractional::DEFAULT_EPS;
use crate::harness::{
    generate_assortment_instance, generate_threshold_instance, generate_tree_instance,
    instance_rng, uniform_value, AssortmentExperimentConfig,
};
use crate::model::PricedInstance;
use crate::oracles::{
    brute_force_assortment, numeric_pricing_oracle, ASSORTMENT_ORACLE_LIMIT, PRICING_ORACLE_MAX_K,
};
use crate::pricing::solve_japtlm_k;

pub const ASSORTMENT_RTOL: f64 = 1e-6;
pub const PRICING_RTOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Assortment,
    Capacitated,
    Pricing,
}

impl Suite {
    pub fn max_n_limit(self) -> usize {
        match self {
            Suite::Assortment | Suite::Capacitated => ASSORTMENT_ORACLE_LIMIT,
            Suite::Pricing => PRICING_ORACLE_MAX_K,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub cases: usize,
    pub mismatches: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, label: impl FnOnce() -> String, solver: f64, oracle: f64, rtol: f64) {
        self.cases += 1;
        let scale = solver.abs().max(oracle.abs()).max(1e-9);
        if (solver - oracle).abs() > rtol * scale {
            self.mismatches.push(format!(
                "{}: solver {solver:.9} oracle {oracle:.9}",
                label()
            ));
        }
    }
}

pub fn run_suite(suite: Suite, count: usize, seed: u64, max_n: usize) -> Result<VerifyReport> {
    if max_n == 0 {
        return Err(Error::InvalidInput("max-n must be at least 1".into()));
    }
    if max_n > suite.max_n_limit() {
        return Err(Error::TooLarge {
            n: max_n,
            limit: suite.max_n_limit(),
        });
    }
    match suite {
        Suite::Assortment => assortment_suite(count, seed, max_n),
        Suite::Capacitated => capacitated_suite(count, seed, max_n),
        Suite::Pricing => pricing_suite(count, seed, max_n),
    }
}

/// Random density and size per case, then the unconstrained solver against
/// subset enumeration.
pub fn assortment_suite(count: usize, seed: u64, max_n: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for i in 0..count as u32 {
        let mut params = instance_rng(seed, 1, i);
        let cfg = AssortmentExperimentConfig {
            n: params.gen_range(1..=max_n),
            a0: uniform_value(&mut params),
            d: params.gen(),
            count: 1,
            seed,
            cell: 0,
        };
        let inst = generate_assortment_instance(&cfg, i);
        let sol = solve_assortment_2slm(&inst, DEFAULT_EPS);
        if !inst.dominance().is_antichain(&sol.assortment) {
            report
                .mismatches
                .push(format!("case {i}: result is not an antichain"));
        }
        let oracle = brute_force_assortment(&inst, None)?;
        report.check(
            || format!("case {i} (n={})", inst.len()),
            sol.revenue,
            oracle.value,
            ASSORTMENT_RTOL,
        );
    }
    Ok(report)
}

/// One forest-order and one threshold instance per case, capacity up to 4.
pub fn capacitated_suite(count: usize, seed: u64, max_n: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for i in 0..count as u32 {
        let mut rng = instance_rng(seed, 2, i);
        let n = rng.gen_range(1..=max_n);
        let capacity = rng.gen_range(1..=n.min(4));
        let a0 = uniform_value(&mut rng);
        let tree = generate_tree_instance(&mut rng, n, a0);
        let t = rng.gen_range(0.05..2.0);
        let threshold = generate_threshold_instance(&mut rng, n, a0, t);

        for (kind, inst) in [("tree", tree), ("threshold", threshold)] {
            let prob = CapacitatedProblem::new(inst, capacity)?;
            let sol = if kind == "tree" {
                solve_capacitated_tree(&prob, DEFAULT_EPS)?
            } else {
                solve_capacitated_attcorr(&prob, DEFAULT_EPS)?
            };
            if sol.cardinality() > capacity
                || !prob.instance().dominance().is_antichain(&sol.assortment)
            {
                report.mismatches.push(format!(
                    "case {i} {kind}: infeasible assortment {:?}",
                    sol.assortment
                ));
            }
            let oracle = solve_capacitated_bruteforce(&prob)?;
            report.check(
                || format!("case {i} {kind} (n={n}, C={capacity})"),
                sol.revenue,
                oracle.revenue,
                ASSORTMENT_RTOL,
            );
        }
    }
    Ok(report)
}

/// Closed-form prices for every prefix size against the grid oracle.
pub fn pricing_suite(count: usize, seed: u64, max_n: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for i in 0..count as u32 {
        let inst = random_priced_instance(seed, i, max_n);
        for k in 1..=inst.len() {
            let sol = solve_japtlm_k(&inst, k)?;
            let oracle = numeric_pricing_oracle(&inst, k)?;
            report.check(
                || {
                    format!(
                        "case {i} (n={}, k={k}, t={:.3}, a0={:.3})",
                        inst.len(),
                        inst.t(),
                        inst.a0()
                    )
                },
                sol.revenue,
                oracle.value,
                PRICING_RTOL,
            );
        }
    }
    Ok(report)
}

/// Utilities uniform on `(0, 10)`, `t` uniform on `[0.05, 2)`, `a0` uniform
/// on `(0, 10)`.
pub fn random_priced_instance(seed: u64, index: u32, max_n: usize) -> PricedInstance {
    let mut rng = instance_rng(seed, 3, index);
    let n = rng.gen_range(1..=max_n);
    let t = rng.gen_range(0.05..2.0);
    let a0 = uniform_value(&mut rng);
    let mut u: Vec<f64> = (0..n).map(|_| uniform_value(&mut rng)).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    PricedInstance::new(u, t, a0).expect("generated values are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guards() {
        assert!(matches!(
            run_suite(Suite::Assortment, 1, 0, 30),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            run_suite(Suite::Pricing, 1, 0, 4),
            Err(Error::TooLarge { .. })
        ));
        assert!(run_suite(Suite::Capacitated, 1, 0, 0).is_err());
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Assortment, Suite::Capacitated] {
            let report = run_suite(suite, 20, 5, 8).unwrap();
            assert!(report.passed(), "{:?}", report.mismatches);
        }
        let report = run_suite(Suite::Pricing, 3, 5, 2).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
    }
}
