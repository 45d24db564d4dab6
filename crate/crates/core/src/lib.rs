//! Assortment and pricing optimization under the two-stage Luce model, where
//! dominated products drop out of consideration before a logit choice, and
//! its threshold special case.
//!
//! Indices are 0-based throughout the library; instance files and CLI output
//! use 1-based product ids.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antichain;
pub mod assortment;
pub mod capacitated;
pub mod error;
pub mod flow;
pub mod fractional;
pub mod harness;
pub mod io;
pub mod lambert;
pub mod model;
pub mod oracles;
pub mod pricing;
pub mod relation;
pub mod verify;

pub use antichain::{brute_force_antichain, max_weight_antichain, Antichain, WeightedPoset};
pub use assortment::{
    gam_objective, revenue_ordered_heuristic, solve_assortment_2slm, solve_assortment_gam,
    AssortmentSolution, GamProduct,
};
pub use capacitated::{
    is_attractiveness_correlated, is_forest_reducible, solve_capacitated_attcorr,
    solve_capacitated_auto, solve_capacitated_bruteforce, solve_capacitated_mnl,
    solve_capacitated_tree, tree_dp_max_att, CapacitatedProblem, Forest, Method,
};
pub use error::{Error, Result};
pub use fractional::{dinkelbach, FractionalOutcome, RatioObjective, DEFAULT_EPS};
pub use io::{DominanceSpec, InstanceFile, ProductSpec};
pub use lambert::lambert_w;
pub use model::{
    choice_probability, consideration_set, consideration_set_priced, expected_revenue,
    expected_revenue_priced, is_valid_pair, Instance, PriceVector, PricedInstance, Product,
};
pub use oracles::{brute_force_assortment, numeric_pricing_oracle, Optimizer, OracleResult};
pub use pricing::{
    check_pricing_invariants, fixed_price_policy, japtlm_candidate, quasi_same_price_policy,
    solve_japtlm, solve_japtlm_k, two_product_equal_price, BoundaryCandidate, PricingMode,
    PricingReport, PricingSolution,
};
pub use relation::DominanceRelation;
