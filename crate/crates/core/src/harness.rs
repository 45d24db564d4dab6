//! Seeded instance generation and the gap experiments comparing the exact
//! solvers with their baselines.
//!
//! Every instance has its own ChaCha8 stream: the generator is seeded with
//! `seed` and switched to stream `cell << 32 | index`, so instances do not
//! depend on how the work is split across threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assortment::{revenue_ordered_heuristic, solve_assortment_2slm};
use crate::error::{Error, Result};
use crate::fractional::DEFAULT_EPS;
use crate::model::{Instance, PricedInstance};
use crate::pricing::{fixed_price_policy, quasi_same_price_policy, solve_japtlm};
use crate::relation::DominanceRelation;

/// Recorded in report headers.
pub const GENERATOR: &str =
    "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = cell << 32 | index";

pub fn instance_rng(seed: u64, cell: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((cell as u64) << 32) | index as u64);
    rng
}

/// Uniform on the open interval `(0, 10)`.
pub fn uniform_value<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let x = rng.gen_range(0.0..10.0);
        if x > 0.0 {
            return x;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssortmentExperimentConfig {
    pub n: usize,
    pub a0: f64,
    /// Probability that each admissible dominance edge is drawn.
    pub d: f64,
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub cell: u32,
}

impl AssortmentExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.d) {
            return Err(Error::InvalidInput(format!(
                "density {} outside [0, 1]",
                self.d
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidInput("count must be at least 1".into()));
        }
        if !(self.a0 >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "negative outside option {}",
                self.a0
            )));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("n={} a0={} d={}", self.n, self.a0, self.d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingExperimentConfig {
    pub n: usize,
    pub t: f64,
    pub a0: f64,
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub cell: u32,
}

impl PricingExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(Error::NonPositiveInput {
                what: "threshold",
                value: self.t,
            });
        }
        if self.count == 0 {
            return Err(Error::InvalidInput("count must be at least 1".into()));
        }
        if !(self.a0 > 0.0) {
            return Err(Error::ZeroOutsideOption);
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("n={} t={} a0={}", self.n, self.t, self.a0)
    }
}

/// Revenues, then attractiveness values, then one coin per unordered pair
/// `i < j`; an edge is kept from the more to the less attractive product.
pub fn generate_assortment_instance(cfg: &AssortmentExperimentConfig, index: u32) -> Instance {
    let mut rng = instance_rng(cfg.seed, cfg.cell, index);
    let n = cfg.n;
    let revenues: Vec<f64> = (0..n).map(|_| uniform_value(&mut rng)).collect();
    let attractiveness: Vec<f64> = (0..n).map(|_| uniform_value(&mut rng)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let active = rng.gen::<f64>() < cfg.d;
            if !active {
                continue;
            }
            if attractiveness[i] > attractiveness[j] {
                edges.push((i, j));
            } else if attractiveness[j] > attractiveness[i] {
                edges.push((j, i));
            }
        }
    }
    let dominance = DominanceRelation::new(n, edges).expect("edges follow attractiveness");
    Instance::from_parts(&revenues, &attractiveness, cfg.a0, dominance)
        .expect("generated values are valid")
}

/// Utilities drawn uniformly and sorted non-increasing.
pub fn generate_pricing_instance(cfg: &PricingExperimentConfig, index: u32) -> PricedInstance {
    let mut rng = instance_rng(cfg.seed, cfg.cell, index);
    let mut utilities: Vec<f64> = (0..cfg.n).map(|_| uniform_value(&mut rng)).collect();
    utilities.sort_by(|a, b| b.total_cmp(a));
    PricedInstance::new(utilities, cfg.t, cfg.a0).expect("generated values are valid")
}

/// Random forest order: each product after the first gets a uniformly
/// chosen earlier parent with probability 3/4.
pub fn generate_tree_instance<R: Rng>(rng: &mut R, n: usize, a0: f64) -> Instance {
    let revenues: Vec<f64> = (0..n).map(|_| uniform_value(rng)).collect();
    let attractiveness: Vec<f64> = (0..n).map(|_| uniform_value(rng)).collect();
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen::<f64>() < 0.75 {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    let dominance = DominanceRelation::new(n, edges).expect("parents precede children");
    Instance::from_parts(&revenues, &attractiveness, a0, dominance)
        .expect("generated values are valid")
}

pub fn generate_threshold_instance<R: Rng>(rng: &mut R, n: usize, a0: f64, t: f64) -> Instance {
    let revenues: Vec<f64> = (0..n).map(|_| uniform_value(rng)).collect();
    let attractiveness: Vec<f64> = (0..n).map(|_| uniform_value(rng)).collect();
    Instance::threshold(&revenues, &attractiveness, a0, t).expect("generated values are valid")
}

/// Per-instance result of a gap experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    /// Percentage gap of each baseline against the exact solver.
    pub gaps: Vec<f64>,
    pub cardinalities: Vec<usize>,
}

fn gap_percent(baseline: f64, optimum: f64) -> f64 {
    if optimum > 0.0 {
        100.0 * (1.0 - baseline / optimum)
    } else {
        0.0
    }
}

/// Revenue-ordered heuristic against the exact solver.
pub fn assortment_outcome(inst: &Instance) -> InstanceOutcome {
    let opt = solve_assortment_2slm(inst, DEFAULT_EPS);
    let ro = revenue_ordered_heuristic(inst);
    InstanceOutcome {
        gaps: vec![gap_percent(ro.revenue, opt.revenue)],
        cardinalities: vec![ro.cardinality(), opt.cardinality()],
    }
}

/// Fixed and quasi-same pricing against the exact solver.
pub fn pricing_outcome(inst: &PricedInstance) -> Result<InstanceOutcome> {
    let opt = solve_japtlm(inst)?;
    let fixed = fixed_price_policy(inst, inst.len())?;
    let quasi = quasi_same_price_policy(inst)?;
    Ok(InstanceOutcome {
        gaps: vec![
            gap_percent(fixed.revenue, opt.revenue),
            gap_percent(quasi.revenue, opt.revenue),
        ],
        cardinalities: vec![fixed.k, quasi.k, opt.k],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapStat {
    pub strategy: String,
    pub avg: f64,
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CardinalityStat {
    pub strategy: String,
    pub avg: f64,
}

/// One table row: a cell of the experiment grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub cell: String,
    pub instances: usize,
    pub gaps: Vec<GapStat>,
    pub cardinalities: Vec<CardinalityStat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Assortment,
    Pricing,
}

impl ExperimentKind {
    pub fn gap_strategies(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Assortment => &["RO"],
            ExperimentKind::Pricing => &["Fixed", "Quasi"],
        }
    }

    pub fn cardinality_strategies(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Assortment => &["RO", "2SLM-OPT"],
            ExperimentKind::Pricing => &["Fixed", "Quasi", "TLM-Opt"],
        }
    }
}

/// Averages in index order so the result is independent of scheduling.
pub fn aggregate(cell: String, kind: ExperimentKind, outcomes: &[InstanceOutcome]) -> GapRow {
    let count = outcomes.len().max(1) as f64;
    let gaps = kind
        .gap_strategies()
        .iter()
        .enumerate()
        .map(|(s, name)| GapStat {
            strategy: name.to_string(),
            avg: outcomes.iter().map(|o| o.gaps[s]).sum::<f64>() / count,
            worst: outcomes.iter().map(|o| o.gaps[s]).fold(0.0, f64::max),
        })
        .collect();
    let cardinalities = kind
        .cardinality_strategies()
        .iter()
        .enumerate()
        .map(|(s, name)| CardinalityStat {
            strategy: name.to_string(),
            avg: outcomes
                .iter()
                .map(|o| o.cardinalities[s] as f64)
                .sum::<f64>()
                / count,
        })
        .collect();
    GapRow {
        cell,
        instances: outcomes.len(),
        gaps,
        cardinalities,
    }
}

pub fn run_assortment_benchmark(cfg: &AssortmentExperimentConfig) -> Result<GapRow> {
    cfg.validate()?;
    let outcomes: Vec<InstanceOutcome> = (0..cfg.count as u32)
        .into_par_iter()
        .map(|i| assortment_outcome(&generate_assortment_instance(cfg, i)))
        .collect();
    Ok(aggregate(
        cfg.label(),
        ExperimentKind::Assortment,
        &outcomes,
    ))
}

pub fn run_pricing_benchmark(cfg: &PricingExperimentConfig) -> Result<GapRow> {
    cfg.validate()?;
    let outcomes = (0..cfg.count as u32)
        .into_par_iter()
        .map(|i| pricing_outcome(&generate_pricing_instance(cfg, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(cfg.label(), ExperimentKind::Pricing, &outcomes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub n: usize,
    pub a0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

/// Benchmark configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub experiment: ExperimentKind,
    pub cells: Vec<CellSpec>,
    pub count: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("bench config: {e}")))
    }
}

/// Runs every cell in order; cell `i` uses stream block `i`.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<GapRow>> {
    cfg.cells
        .iter()
        .enumerate()
        .map(|(i, cell)| match cfg.experiment {
            ExperimentKind::Assortment => {
                let d = cell
                    .d
                    .ok_or_else(|| Error::InvalidInput(format!("cell {i} lacks a density `d`")))?;
                run_assortment_benchmark(&AssortmentExperimentConfig {
                    n: cell.n,
                    a0: cell.a0,
                    d,
                    count: cfg.count,
                    seed: cfg.seed,
                    cell: i as u32,
                })
            }
            ExperimentKind::Pricing => {
                let t = cell.t.ok_or_else(|| {
                    Error::InvalidInput(format!("cell {i} lacks a threshold `t`"))
                })?;
                run_pricing_benchmark(&PricingExperimentConfig {
                    n: cell.n,
                    t,
                    a0: cell.a0,
                    count: cfg.count,
                    seed: cfg.seed,
                    cell: i as u32,
                })
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl ReportFormat {
    /// `.md` selects markdown, anything else CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("md") | Some("markdown") => ReportFormat::Markdown,
            _ => ReportFormat::Csv,
        }
    }
}

pub fn report_columns(kind: ExperimentKind) -> Vec<String> {
    let mut cols = vec!["cell".to_string()];
    for s in kind.gap_strategies() {
        let s = s.to_lowercase();
        cols.push(format!("avg_gap_{s}"));
        cols.push(format!("worst_gap_{s}"));
    }
    for s in kind.cardinality_strategies() {
        cols.push(format!("card_{}", s.to_lowercase().replace('-', "_")));
    }
    cols
}

fn row_values(row: &GapRow) -> Vec<f64> {
    row.gaps
        .iter()
        .flat_map(|g| [g.avg, g.worst])
        .chain(row.cardinalities.iter().map(|c| c.avg))
        .collect()
}

/// Writes the table. CSV has a single header line; markdown starts with a
/// line naming the generator.
pub fn emit_report<W: Write>(
    rows: &[GapRow],
    kind: ExperimentKind,
    format: ReportFormat,
    mut out: W,
) -> std::io::Result<()> {
    let columns = report_columns(kind);
    match format {
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(&columns)?;
            for row in rows {
                let mut record = vec![row.cell.clone()];
                record.extend(row_values(row).iter().map(|v| format!("{v:.6}")));
                writer.write_record(&record)?;
            }
            writer.flush()
        }
        ReportFormat::Markdown => {
            writeln!(out, "<!-- generator: {GENERATOR} -->")?;
            writeln!(out, "| {} |", columns.join(" | "))?;
            writeln!(out, "|{}", "---|".repeat(columns.len()))?;
            for row in rows {
                let values: Vec<String> =
                    row_values(row).iter().map(|v| format!("{v:.3}")).collect();
                writeln!(out, "| {} | {} |", row.cell, values.join(" | "))?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assortment_cfg(d: f64) -> AssortmentExperimentConfig {
        AssortmentExperimentConfig {
            n: 8,
            a0: 1.0,
            d,
            count: 10,
            seed: 42,
            cell: 0,
        }
    }

    #[test]
    fn density_extremes() {
        let empty = generate_assortment_instance(&assortment_cfg(0.0), 0);
        assert_eq!(empty.dominance().edge_count(), 0);
        let full = generate_assortment_instance(&assortment_cfg(1.0), 0);
        let n = full.len();
        assert_eq!(full.dominance().edge_count(), n * (n - 1) / 2);
        for x in 0..n {
            for y in 0..n {
                let ordered = full.attractiveness(x) > full.attractiveness(y);
                assert_eq!(full.dominance().dominates(x, y), ordered);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = assortment_cfg(0.3);
        assert_eq!(
            generate_assortment_instance(&cfg, 0),
            generate_assortment_instance(&cfg, 0)
        );
        assert_ne!(
            generate_assortment_instance(&cfg, 0),
            generate_assortment_instance(&cfg, 1)
        );
        let p = PricingExperimentConfig {
            n: 6,
            t: 0.5,
            a0: 1.0,
            count: 1,
            seed: 42,
            cell: 0,
        };
        let inst = generate_pricing_instance(&p, 3);
        assert_eq!(inst, generate_pricing_instance(&p, 3));
        assert!(inst.utilities().windows(2).all(|w| w[0] >= w[1]));
        assert!(inst.utilities().iter().all(|&u| u > 0.0 && u < 10.0));
    }

    #[test]
    fn counterexample_cell() {
        let inst =
            Instance::threshold(&[88.0, 47.0, 46.0], &[13.0, 26.0, 15.0], 55.0, 0.6).unwrap();
        let row = aggregate(
            "rev".into(),
            ExperimentKind::Assortment,
            &[assortment_outcome(&inst)],
        );
        assert!((row.gaps[0].avg - 23.86).abs() < 1e-2);
        assert_eq!(row.gaps[0].avg, row.gaps[0].worst);
    }

    #[test]
    fn pricing_example_cell() {
        let mut u = vec![2.0];
        u.extend([1.0; 10]);
        let inst = PricedInstance::new(u, 1.0, 1.0).unwrap();
        let outcome = pricing_outcome(&inst).unwrap();
        assert!((outcome.gaps[0] - 100.0 * (1.0 - 1.0 / 1.896)).abs() < 0.1);
        assert!(outcome.cardinalities[2] >= outcome.cardinalities[0]);
    }

    #[test]
    fn mnl_cells_have_zero_gap() {
        let row = run_assortment_benchmark(&assortment_cfg(0.0)).unwrap();
        assert!(row.gaps[0].worst.abs() < 1e-9);
    }

    #[test]
    fn slack_band_pricing_cell_has_zero_gap() {
        let cfg = PricingExperimentConfig {
            n: 4,
            t: 1e5,
            a0: 1.0,
            count: 5,
            seed: 1,
            cell: 0,
        };
        let row = run_pricing_benchmark(&cfg).unwrap();
        assert!(row.gaps.iter().all(|g| g.worst.abs() < 1e-6));
    }

    #[test]
    fn report_shapes() {
        let mut buf = Vec::new();
        emit_report(&[], ExperimentKind::Assortment, ReportFormat::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);

        let row = run_assortment_benchmark(&assortment_cfg(0.5)).unwrap();
        let mut buf = Vec::new();
        emit_report(
            std::slice::from_ref(&row),
            ExperimentKind::Assortment,
            ReportFormat::Csv,
            &mut buf,
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2);

        let mut buf = Vec::new();
        emit_report(
            std::slice::from_ref(&row),
            ExperimentKind::Assortment,
            ReportFormat::Markdown,
            &mut buf,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last = text.lines().last().unwrap();
        let cells: Vec<&str> = last.trim_matches('|').split('|').map(str::trim).collect();
        let parsed: f64 = cells[1].parse().unwrap();
        assert_eq!(format!("{parsed:.3}"), format!("{:.3}", row.gaps[0].avg));
    }

    #[test]
    fn config_round_trip() {
        let text =
            r#"{"experiment":"assortment","cells":[{"n":5,"a0":1,"d":0.2}],"count":250,"seed":7}"#;
        let cfg = BenchConfig::from_json(text).unwrap();
        assert_eq!(cfg.cells[0].d, Some(0.2));
        assert!(BenchConfig::from_json(r#"{"experiment":"x"}"#).is_err());
    }
}
