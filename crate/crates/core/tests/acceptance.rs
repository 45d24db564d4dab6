//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a non-zero status if any criterion fails.

use std::time::{Duration, Instant};

use luceopt_core::harness::{
    assortment_outcome, generate_assortment_instance, AssortmentExperimentConfig,
};
use luceopt_core::lambert::lambert_w;
use luceopt_core::verify::{
    assortment_suite, capacitated_suite, pricing_suite, random_priced_instance,
};
use luceopt_core::{
    check_pricing_invariants, choice_probability, expected_revenue_priced, fixed_price_policy,
    quasi_same_price_policy, revenue_ordered_heuristic, solve_assortment_2slm, solve_japtlm,
    Instance, PriceVector, PricedInstance, DEFAULT_EPS,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn timed<F: FnOnce() -> Outcome>(limit: Option<Duration>, f: F) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.passed = false;
            out.detail.push_str(&format!("; exceeded {limit:?}"));
        }
    }
    (out, elapsed)
}

fn counterexample() -> Outcome {
    let inst = Instance::threshold(&[88.0, 47.0, 46.0], &[13.0, 26.0, 15.0], 55.0, 0.6).unwrap();
    let opt = solve_assortment_2slm(&inst, DEFAULT_EPS);
    let ro = revenue_ordered_heuristic(&inst);
    let gap = 100.0 * (1.0 - ro.revenue / opt.revenue);
    let passed = opt.assortment == [0, 2]
        && (opt.revenue - 22.096).abs() <= 1e-3
        && ro.assortment == [0]
        && (ro.revenue - 16.824).abs() <= 1e-3
        && (gap - 23.86).abs() <= 1e-2;
    outcome(
        passed,
        format!(
            "optimum {:.4}, revenue-ordered {:.4}, gap {gap:.2}%",
            opt.revenue, ro.revenue
        ),
    )
}

fn regularity() -> Outcome {
    let inst = Instance::threshold(&[1.0; 4], &[5.0, 4.0, 3.0, 3.0], 1.0, 0.4).unwrap();
    let small = choice_probability(Some(1), &[1, 2, 3], &inst);
    let large = choice_probability(Some(1), &[0, 1, 2, 3], &inst);
    let passed = (small - 4.0 / 11.0).abs() <= 1e-12 && (large - 0.4).abs() <= 1e-12;
    outcome(passed, format!("{small:.12} and {large:.12}"))
}

fn example_instance() -> PricedInstance {
    let mut u = vec![2.0];
    u.extend([1.0; 10]);
    PricedInstance::new(u, 1.0, 1.0).unwrap()
}

fn pricing_example() -> Outcome {
    let inst = example_instance();
    let fixed = fixed_price_policy(&inst, inst.len()).unwrap();
    let mut hand = vec![1.8];
    hand.extend([1.4; 10]);
    let all: Vec<usize> = (0..11).collect();
    let hand_revenue = expected_revenue_priced(&all, &PriceVector::new(hand).unwrap(), &inst);
    let opt = solve_japtlm(&inst).unwrap();
    let k = opt.k;
    let ratio = (inst.utility(0) - opt.prices[0] - inst.utility(k - 1) + opt.prices[k - 1]).exp();
    let passed = (fixed.revenue - 1.0).abs() <= 1e-9
        && (hand_revenue - 1.298).abs() <= 1e-3
        && opt.revenue >= 1.298
        && (ratio - 2.0).abs() <= 1e-9;
    outcome(
        passed,
        format!(
            "fixed {:.12}, hand prices {hand_revenue:.4}, optimum {:.4} (k={k}, band ratio {ratio:.12})",
            fixed.revenue, opt.revenue
        ),
    )
}

fn fixed_price_unbounded() -> Outcome {
    let ratios: Vec<f64> = [10usize, 100, 1000]
        .iter()
        .map(|&n| {
            let mut u = vec![2.0];
            u.extend(std::iter::repeat_n(1.0, n));
            let inst = PricedInstance::new(u, 1.0, 1.0).unwrap();
            let opt = solve_japtlm(&inst).unwrap();
            let fixed = fixed_price_policy(&inst, inst.len()).unwrap();
            opt.revenue / fixed.revenue
        })
        .collect();
    let passed = ratios.windows(2).all(|w| w[1] > w[0]);
    outcome(passed, format!("ratios {ratios:.4?}"))
}

fn assortment_oracle() -> Outcome {
    let report = assortment_suite(500, 11, 12).unwrap();
    outcome(
        report.passed() && report.cases == 500,
        format!(
            "{} cases, {} mismatches {:?}",
            report.cases,
            report.mismatches.len(),
            first(&report.mismatches)
        ),
    )
}

fn capacitated_oracle() -> Outcome {
    let report = capacitated_suite(200, 12, 12).unwrap();
    outcome(
        report.passed() && report.cases == 400,
        format!(
            "{} cases, {} mismatches {:?}",
            report.cases,
            report.mismatches.len(),
            first(&report.mismatches)
        ),
    )
}

fn pricing_oracle() -> Outcome {
    let report = pricing_suite(100, 13, 3).unwrap();
    outcome(
        report.passed(),
        format!(
            "{} prefix sizes over 100 instances, {} mismatches {:?}",
            report.cases,
            report.mismatches.len(),
            first(&report.mismatches)
        ),
    )
}

fn first(items: &[String]) -> Option<&String> {
    items.first()
}

fn pricing_structure() -> Outcome {
    let mut failures = Vec::new();
    for i in 0..500u32 {
        let inst = random_priced_instance(14, i, 10);
        let opt = solve_japtlm(&inst).unwrap();
        let report = check_pricing_invariants(&opt, &inst);
        if !report.all_pass() {
            failures.push(format!("instance {i}: {:?}", report.failures()));
        }
        let fixed = fixed_price_policy(&inst, inst.len()).unwrap().revenue;
        let quasi = quasi_same_price_policy(&inst).unwrap().revenue;
        if fixed > quasi + 1e-6 || quasi > opt.revenue + 1e-6 {
            failures.push(format!(
                "instance {i}: fixed {fixed:.9} quasi {quasi:.9} optimum {:.9}",
                opt.revenue
            ));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "500 instances, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn lambert() -> Outcome {
    let worst = (0..100)
        .map(|i| 10f64.powf(-8.0 + 16.0 * i as f64 / 99.0))
        .map(|x| {
            let w = lambert_w(x).unwrap();
            (w * w.exp() - x).abs() / x.max(1.0)
        })
        .fold(0.0, f64::max);
    let at_e = (lambert_w(std::f64::consts::E).unwrap() - 1.0).abs();
    let at_zero = lambert_w(0.0).unwrap().abs();
    outcome(
        worst <= 1e-10 && at_e <= 1e-12 && at_zero <= 1e-12,
        format!("worst scaled residual {worst:.2e}, |W(e)-1| {at_e:.1e}, W(0) {at_zero}"),
    )
}

fn benchmark_trends() -> Outcome {
    let mut cells = Vec::new();
    for (c, &(n, a0, d)) in [5usize, 30]
        .iter()
        .flat_map(|&n| [1.0, 8.0].into_iter().map(move |a0| (n, a0)))
        .flat_map(|(n, a0)| [0.0, 0.2, 0.8].into_iter().map(move |d| (n, a0, d)))
        .collect::<Vec<_>>()
        .iter()
        .enumerate()
    {
        let cfg = AssortmentExperimentConfig {
            n,
            a0,
            d,
            count: 50,
            seed: 15,
            cell: c as u32,
        };
        let gaps: Vec<f64> = (0..50)
            .map(|i| assortment_outcome(&generate_assortment_instance(&cfg, i)).gaps[0])
            .collect();
        cells.push((n, d, gaps));
    }
    let all_nonnegative = cells.iter().all(|(_, _, g)| g.iter().all(|&x| x >= -1e-6));
    let controls_zero = cells
        .iter()
        .filter(|(_, d, _)| *d == 0.0)
        .all(|(_, _, g)| g.iter().all(|&x| x.abs() <= 1e-6));
    let mean = |size: usize| {
        let gaps: Vec<f64> = cells
            .iter()
            .filter(|(n, d, _)| *n == size && *d > 0.0)
            .flat_map(|(_, _, g)| g.iter().copied())
            .collect();
        gaps.iter().sum::<f64>() / gaps.len() as f64
    };
    let (small, large) = (mean(5), mean(30));
    outcome(
        all_nonnegative && controls_zero && large > small,
        format!("mean gap n=5 {small:.3}%, n=30 {large:.3}%, controls zero {controls_zero}"),
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "revenue-ordered counterexample",
            Some(Duration::from_millis(10)),
            counterexample,
        ),
        ("regularity violation", None, regularity),
        (
            "pricing worked example",
            Some(Duration::from_secs(1)),
            pricing_example,
        ),
        (
            "fixed price unbounded gap",
            Some(Duration::from_secs(5)),
            fixed_price_unbounded,
        ),
        (
            "assortment oracle equivalence",
            Some(Duration::from_secs(60)),
            assortment_oracle,
        ),
        ("capacitated oracle equivalence", None, capacitated_oracle),
        (
            "pricing oracle equivalence",
            Some(Duration::from_secs(300)),
            pricing_oracle,
        ),
        (
            "pricing structure and policy order",
            None,
            pricing_structure,
        ),
        ("lambert w", None, lambert),
        (
            "benchmark trends",
            Some(Duration::from_secs(600)),
            benchmark_trends,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let (out, elapsed) = timed(limit, run);
        let status = if out.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {name} ({elapsed:.2?}): {}",
            i + 1,
            out.detail
        );
        if !out.passed {
            failed += 1;
        }
    }
    println!("{failed} of 10 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
