//! Joint assortment and pricing under the threshold Luce model with logit
//! attractiveness `exp(u_i - p_i)`.
//!
//! An optimal assortment is a prefix `[k]` of the products sorted by utility.
//! For a fixed `k` the constraint "no offered product is dominated" reads
//! `v_max - v_min <= ln(1 + t)` on net utilities `v_i = u_i - p_i`. When the
//! utility spread of `[k]` already fits in that band the plain logit markup
//! is optimal. Otherwise the band is tight: a top group `I1` shares the
//! largest net utility, a bottom group `I2` sits exactly `ln(1 + t)` below
//! it, and the products in between get the interior markup `1 + R`. Each
//! `(|I1|, |I2|)` pair yields a closed-form candidate through Lambert W.
//!
//! Prices for a fixed `k` are not sign-constrained; the global optimum has
//! every price at least its revenue, so this only matters for suboptimal
//! sizes.

use std::fmt;

use crate::error::{Error, Result};
use crate::lambert::lambert_w_exp;
use crate::model::{
    considered_at, is_valid_pair, revenue_at, PriceVector, PricedInstance, PRICE_DOMINANCE_RTOL,
};

/// Slack for the multiplier-sign and ordering checks on candidates.
const SIGN_TOL: f64 = 1e-9;
/// Slack for interior net utilities staying inside the band.
const BAND_TOL: f64 = 1e-11;
/// Revenue differences below this count as ties.
const TIE_TOL: f64 = 1e-10;
const INVARIANT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PricingMode {
    Unconstrained,
    BoundaryTight,
}

impl PricingMode {
    pub fn name(self) -> &'static str {
        match self {
            PricingMode::Unconstrained => "unconstrained",
            PricingMode::BoundaryTight => "boundary-tight",
        }
    }
}

impl fmt::Display for PricingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Prices for the prefix `[k]` of the utility-sorted products.
#[derive(Debug, Clone, PartialEq)]
pub struct PricingSolution {
    pub k: usize,
    pub prices: Vec<f64>,
    pub revenue: f64,
    pub k1: usize,
    pub k2: usize,
    pub mode: PricingMode,
}

impl PricingSolution {
    fn empty() -> Self {
        Self {
            k: 0,
            prices: Vec::new(),
            revenue: 0.0,
            k1: 0,
            k2: 0,
            mode: PricingMode::Unconstrained,
        }
    }

    fn uniform(k: usize, revenue: f64) -> Self {
        Self {
            k,
            prices: vec![1.0 + revenue; k],
            revenue,
            k1: 0,
            k2: 0,
            mode: PricingMode::Unconstrained,
        }
    }

    /// Prices padded with infinity for the products beyond `k`.
    pub fn price_vector(&self, n: usize) -> PriceVector {
        let mut all = self.prices.clone();
        all.resize(n.max(self.k), f64::INFINITY);
        PriceVector::new(all.iter().map(|p| p.max(0.0)).collect())
            .expect("prices are clamped to be non-negative")
    }
}

/// Closed-form stationary point for one pair of boundary group sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCandidate {
    pub k: usize,
    pub k1: usize,
    pub k2: usize,
    pub c1: f64,
    pub c2: f64,
    /// Net utility shared by the top group.
    pub top_net: f64,
    /// Net utility shared by the bottom group; `top_net - ln(1 + t)`.
    pub bottom_net: f64,
    pub revenue: f64,
    pub prices: Vec<f64>,
    pub feasible: bool,
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.collect();
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + values.iter().map(|v| (v - top).exp()).sum::<f64>().ln()
}

/// Optimal logit revenue with one markup on `utilities`:
/// `W(Σ exp(u_i - 1) / a0)`.
fn uniform_markup_revenue(utilities: &[f64], a0: f64) -> f64 {
    if utilities.is_empty() {
        return 0.0;
    }
    lambert_w_exp(log_sum_exp(utilities.iter().map(|u| u - 1.0)) - a0.ln())
}

fn within_band(spread: f64, inst: &PricedInstance) -> bool {
    spread.exp() <= (1.0 + inst.t()) * (1.0 + PRICE_DOMINANCE_RTOL)
}

fn check_size(inst: &PricedInstance, k: usize) -> Result<()> {
    inst.require_outside_option()?;
    if k == 0 || k > inst.len() {
        return Err(Error::InvalidInput(format!(
            "assortment size {k} outside 1..={}",
            inst.len()
        )));
    }
    Ok(())
}

/// One price for every offered product. Within `[k]`, only the prefix whose
/// utilities fit in the dominance band survives a uniform price, so that
/// prefix is offered at `1 + W(Σ exp(u_i - 1) / a0)`.
pub fn fixed_price_policy(inst: &PricedInstance, k: usize) -> Result<PricingSolution> {
    check_size(inst, k)?;
    let u = inst.utilities();
    let survivors = (1..=k)
        .take_while(|&j| within_band(u[0] - u[j - 1], inst))
        .last()
        .unwrap_or(1);
    let revenue = uniform_markup_revenue(&u[..survivors], inst.a0());
    Ok(PricingSolution::uniform(survivors, revenue))
}

/// Common price of two products maximizing `p_i a_i + p_j a_j` subject to
/// `a_i + a_j = total`: `ln((e^{u_i} + e^{u_j}) / total)`.
pub fn two_product_equal_price(u_i: f64, u_j: f64, total: f64) -> Result<f64> {
    if !(total > 0.0) {
        return Err(Error::NonPositiveInput {
            what: "total attractiveness",
            value: total,
        });
    }
    Ok(log_sum_exp([u_i, u_j].into_iter()) - total.ln())
}

/// Prefix sums over the first `k` sorted utilities.
struct PrefixSums {
    utility: Vec<f64>,
    /// Σ exp(u_i - u_0)
    scaled_exp: Vec<f64>,
}

impl PrefixSums {
    fn new(u: &[f64]) -> Self {
        let mut utility = vec![0.0];
        let mut scaled_exp = vec![0.0];
        for &x in u {
            utility.push(utility.last().unwrap() + x);
            scaled_exp.push(scaled_exp.last().unwrap() + (x - u[0]).exp());
        }
        Self {
            utility,
            scaled_exp,
        }
    }
}

/// Values shared by the fast and the explicit candidate evaluation.
struct Stationary {
    c1: f64,
    c2: f64,
    revenue: f64,
    top_net: f64,
}

/// `I1 = [0, k1)`, interior `[k1, start)`, `I2 = [start, k)`.
fn stationary(
    inst: &PricedInstance,
    sums: &PrefixSums,
    k: usize,
    k1: usize,
    start: usize,
) -> Stationary {
    let (c1, c2, log_arg) = stationary_constants(inst, sums, k, k1, start);
    let revenue = lambert_w_exp(log_arg);
    Stationary {
        c1,
        c2,
        revenue,
        top_net: c1 - revenue,
    }
}

/// `(C1, C2, ln(C2 e^C1 / a0))`; revenue is `W` of the exponential of the last.
fn stationary_constants(
    inst: &PricedInstance,
    sums: &PrefixSums,
    k: usize,
    k1: usize,
    start: usize,
) -> (f64, f64, f64) {
    let t = inst.t();
    let band = inst.log_band();
    let u0 = inst.utility(0);
    let k2 = k - start;
    let (k1f, k2f) = (k1 as f64, k2 as f64);
    let top = sums.utility[k1];
    let bottom = sums.utility[k] - sums.utility[start];
    let c1 = ((1.0 + t) * top + bottom + k2f * band) / (k1f * (1.0 + t) + k2f) - 1.0;
    let interior = (sums.scaled_exp[start] - sums.scaled_exp[k1]).max(0.0);
    let c2 = k1f + k2f / (1.0 + t) + interior * (u0 - c1 - 1.0).exp();
    (c1, c2, c2.ln() + c1 - inst.a0().ln())
}

/// Multiplier signs and band membership, checked at the group boundaries.
fn boundary_feasible(inst: &PricedInstance, s: &Stationary, k1: usize, start: usize) -> bool {
    let u = inst.utilities();
    let band = inst.log_band();
    let markup = 1.0 + s.revenue;
    let sign_tol = SIGN_TOL * markup.abs().max(1.0);
    let band_tol = BAND_TOL * s.top_net.abs().max(1.0);
    if u[k1 - 1] - s.top_net < markup - sign_tol {
        return false;
    }
    if u[start] - s.top_net + band > markup + sign_tol {
        return false;
    }
    if start > k1 {
        let highest = u[k1] - markup;
        let lowest = u[start - 1] - markup;
        if highest > s.top_net + band_tol || lowest < s.top_net - band - band_tol {
            return false;
        }
    }
    true
}

fn candidate_prices(
    inst: &PricedInstance,
    s: &Stationary,
    k: usize,
    k1: usize,
    start: usize,
) -> Vec<f64> {
    let band = inst.log_band();
    (0..k)
        .map(|i| {
            let u = inst.utility(i);
            if i < k1 {
                u - s.top_net
            } else if i < start {
                1.0 + s.revenue
            } else {
                u - s.top_net + band
            }
        })
        .collect()
}

/// Evaluates the stationary point for group sizes `(k1, k2)` on `[k]` and
/// checks it: no product dominated, prices and net utilities non-increasing,
/// top-group prices at least `1 + R` and bottom-group prices at most `1 + R`.
pub fn japtlm_candidate(
    inst: &PricedInstance,
    k: usize,
    k1: usize,
    k2: usize,
) -> Result<BoundaryCandidate> {
    check_size(inst, k)?;
    if k1 == 0 || k2 == 0 || k1 + k2 > k {
        return Err(Error::BadGroupSizes { k, k1, k2 });
    }
    let sums = PrefixSums::new(&inst.utilities()[..k]);
    let start = k - k2;
    let s = stationary(inst, &sums, k, k1, start);
    let prices = candidate_prices(inst, &s, k, k1, start);

    let markup = 1.0 + s.revenue;
    let tol = SIGN_TOL * markup.abs().max(1.0);
    let nets: Vec<f64> = (0..k).map(|i| inst.utility(i) - prices[i]).collect();
    let all: Vec<usize> = (0..k).collect();
    let feasible = considered_at(&all, &prices, inst) == all
        && prices.windows(2).all(|w| w[0] >= w[1] - tol)
        && nets.windows(2).all(|w| w[0] >= w[1] - tol)
        && prices[..k1].iter().all(|&p| p >= markup - tol)
        && prices[start..].iter().all(|&p| p <= markup + tol);

    Ok(BoundaryCandidate {
        k,
        k1,
        k2,
        c1: s.c1,
        c2: s.c2,
        top_net: s.top_net,
        bottom_net: s.top_net - inst.log_band(),
        revenue: s.revenue,
        prices,
        feasible,
    })
}

/// Optimal prices for offering exactly `[k]`.
///
/// Equal utilities receive equal prices at the optimum, so group boundaries
/// are only tried between distinct utility values. Among revenue ties the
/// smallest `k1`, then the smallest `k2`, wins.
pub fn solve_japtlm_k(inst: &PricedInstance, k: usize) -> Result<PricingSolution> {
    check_size(inst, k)?;
    let u = inst.utilities();
    if within_band(u[0] - u[k - 1], inst) {
        let revenue = uniform_markup_revenue(&u[..k], inst.a0());
        return Ok(PricingSolution::uniform(k, revenue));
    }

    let sums = PrefixSums::new(&u[..k]);
    let block_break = |i: usize| u[i - 1] > u[i];
    let mut best: Option<(usize, usize, Stationary)> = None;
    // revenue is increasing in the log argument, so weaker candidates skip W
    let mut best_arg = f64::NEG_INFINITY;
    for k1 in (1..k).filter(|&i| block_break(i)) {
        // descending start gives ascending k2
        for start in (k1..k).rev().filter(|&s| s == k1 || block_break(s)) {
            let (_, _, arg) = stationary_constants(inst, &sums, k, k1, start);
            if arg <= best_arg {
                continue;
            }
            let s = stationary(inst, &sums, k, k1, start);
            if !boundary_feasible(inst, &s, k1, start) {
                continue;
            }
            if best
                .as_ref()
                .is_none_or(|(_, _, b)| s.revenue > b.revenue + TIE_TOL)
            {
                best_arg = arg;
                best = Some((k1, start, s));
            }
        }
    }
    let (k1, start, s) = best.ok_or(Error::NoFeasibleCandidate(k))?;
    Ok(PricingSolution {
        k,
        prices: candidate_prices(inst, &s, k, k1, start),
        revenue: s.revenue,
        k1,
        k2: k - start,
        mode: PricingMode::BoundaryTight,
    })
}

/// Best prefix size and prices; ties go to the smaller `k`.
pub fn solve_japtlm(inst: &PricedInstance) -> Result<PricingSolution> {
    inst.require_outside_option()?;
    let mut best = PricingSolution::empty();
    for k in 1..=inst.len() {
        let sol = solve_japtlm_k(inst, k)?;
        if best.k == 0 || sol.revenue > best.revenue + TIE_TOL {
            best = sol;
        }
    }
    Ok(best)
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal function on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    [(a, f(a)), (b, f(b)), (x1, f1), (x2, f2)].into_iter().fold(
        (lo, f64::NEG_INFINITY),
        |best, cand| if cand.1 > best.1 { cand } else { best },
    )
}

const QUASI_SCAN_POINTS: usize = 400;
const QUASI_TOL: f64 = 1e-10;

/// Shared price `p` on `[k-1]` and price `q` on product `k` (0-based
/// `k-1`). Returns the best `(p, q, revenue)`.
fn quasi_same_price_k(inst: &PricedInstance, k: usize) -> Option<(f64, f64, f64)> {
    let u = inst.utilities();
    let band = inst.log_band();
    let last = u[k - 1];
    let head = log_sum_exp(u[..k - 1].iter().copied());
    let a0 = inst.a0();
    let revenue = |p: f64, q: f64| {
        let a = (head - p).exp();
        let b = (last - q).exp();
        (p * a + q * b) / (a0 + a + b)
    };
    // band constraints between the shared group and product k
    let inner = |q: f64| -> Option<(f64, f64)> {
        let lo = (u[0] - last + q - band).max(0.0);
        let hi = u[k - 2] - last + q + band;
        if lo > hi {
            return None;
        }
        Some(golden_max(|p| revenue(p, q), lo, hi, QUASI_TOL))
    };
    let profile = |q: f64| inner(q).map_or(f64::NEG_INFINITY, |(_, v)| v);

    let top = last + 20.0;
    let step = top / QUASI_SCAN_POINTS as f64;
    let grid: Vec<f64> = (0..=QUASI_SCAN_POINTS).map(|i| i as f64 * step).collect();
    let (best_i, _) = grid.iter().map(|&q| profile(q)).enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (i, v)| if v > best.1 { (i, v) } else { best },
    );
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(QUASI_SCAN_POINTS)];
    let (q, _) = golden_max(profile, lo, hi, QUASI_TOL);
    let (p, value) = inner(q)?;
    value.is_finite().then_some((p, q, value))
}

/// All offered products but the least attractive one share a price. The
/// fixed-price solution is always among the candidates.
pub fn quasi_same_price_policy(inst: &PricedInstance) -> Result<PricingSolution> {
    inst.require_outside_option()?;
    if inst.is_empty() {
        return Ok(PricingSolution::empty());
    }
    let u = inst.utilities();
    let band = inst.log_band();
    let mut best = fixed_price_policy(inst, inst.len())?;
    for k in 2..=inst.len() {
        if !within_band(u[0] - u[k - 2], inst) {
            break;
        }
        let Some((p, q, _)) = quasi_same_price_k(inst, k) else {
            continue;
        };
        let mut prices = vec![p; k - 1];
        prices.push(q);
        let all: Vec<usize> = (0..k).collect();
        if considered_at(&all, &prices, inst) != all {
            continue;
        }
        let revenue = revenue_at(&all, &prices, inst);
        if revenue > best.revenue + TIE_TOL {
            let spread = (u[0] - p) - (u[k - 1] - q);
            let tight = (spread.abs() - band).abs() <= SIGN_TOL;
            best = PricingSolution {
                k,
                prices,
                revenue,
                k1: 0,
                k2: 0,
                mode: if tight {
                    PricingMode::BoundaryTight
                } else {
                    PricingMode::Unconstrained
                },
            };
        }
    }
    Ok(best)
}

/// Pass/fail per structural property of an optimal pricing solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PricingReport {
    /// Every price is at least the revenue.
    pub price_bound: bool,
    /// The offered set is a prefix of the utility order.
    pub utility_order: bool,
    pub decreasing_prices: bool,
    pub decreasing_net: bool,
    /// Offered set equals the consideration set and the stated revenue is
    /// reproduced.
    pub valid_pair: bool,
}

impl PricingReport {
    pub fn all_pass(&self) -> bool {
        self.price_bound
            && self.utility_order
            && self.decreasing_prices
            && self.decreasing_net
            && self.valid_pair
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.price_bound, "price_bound"),
            (self.utility_order, "utility_order"),
            (self.decreasing_prices, "decreasing_prices"),
            (self.decreasing_net, "decreasing_net"),
            (self.valid_pair, "valid_pair"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

pub fn check_pricing_invariants(sol: &PricingSolution, inst: &PricedInstance) -> PricingReport {
    let tol = INVARIANT_TOL;
    let k = sol.k;
    let utility_order = k <= inst.len() && sol.prices.len() == k;
    if !utility_order {
        return PricingReport {
            price_bound: false,
            utility_order,
            decreasing_prices: false,
            decreasing_net: false,
            valid_pair: false,
        };
    }
    let p = &sol.prices;
    let nets: Vec<f64> = (0..k).map(|i| inst.utility(i) - p[i]).collect();
    let set: Vec<usize> = (0..k).collect();
    let valid_pair = p.iter().all(|&x| x >= 0.0)
        && is_valid_pair(&set, &sol.price_vector(inst.len()), inst)
        && (revenue_at(&set, p, inst) - sol.revenue).abs() <= tol * sol.revenue.abs().max(1.0);
    PricingReport {
        price_bound: p.iter().all(|&x| x >= sol.revenue - tol),
        utility_order,
        decreasing_prices: p.windows(2).all(|w| w[0] >= w[1] - tol),
        decreasing_net: nets.windows(2).all(|w| w[0] >= w[1] - tol),
        valid_pair,
    }
}
