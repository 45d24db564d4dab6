//! JSON instance files.
//!
//! ```json
//! {"products": [{"id": 1, "revenue": 88, "attractiveness": 13, "utility": 2.0}],
//!  "a0": 55, "dominance": {"type": "threshold", "t": 0.6}}
//! ```
//!
//! `dominance` is `{"type": "threshold", "t": t}` or
//! `{"type": "explicit", "edges": [[x, y], ...]}` with `x ≻ y` given as
//! product ids. It defaults to no edges. Assortment problems need `revenue`
//! and `attractiveness` on every product; pricing needs `utility` and a
//! threshold dominance.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, PricedInstance};
use crate::relation::DominanceRelation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revenue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attractiveness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DominanceSpec {
    Explicit {
        #[serde(default)]
        edges: Vec<[usize; 2]>,
    },
    Threshold {
        t: f64,
    },
}

impl Default for DominanceSpec {
    fn default() -> Self {
        DominanceSpec::Explicit { edges: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub products: Vec<ProductSpec>,
    pub a0: f64,
    #[serde(default)]
    pub dominance: DominanceSpec,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("instance file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    /// Product ids in file order.
    pub fn ids(&self) -> Vec<usize> {
        self.products.iter().map(|p| p.id).collect()
    }

    fn positions(&self) -> Result<HashMap<usize, usize>> {
        let mut positions = HashMap::with_capacity(self.products.len());
        for (i, p) in self.products.iter().enumerate() {
            if p.id == 0 {
                return Err(Error::InvalidInput("product ids start at 1".into()));
            }
            if positions.insert(p.id, i).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate product id {}",
                    p.id
                )));
            }
        }
        Ok(positions)
    }

    fn field(&self, name: &str, pick: impl Fn(&ProductSpec) -> Option<f64>) -> Result<Vec<f64>> {
        self.products
            .iter()
            .map(|p| {
                pick(p)
                    .ok_or_else(|| Error::InvalidInput(format!("product {} lacks `{name}`", p.id)))
            })
            .collect()
    }

    /// Products keep file order, so index `i` is `ids()[i]`.
    pub fn to_instance(&self) -> Result<Instance> {
        let positions = self.positions()?;
        let n = self.products.len();
        let revenues = self.field("revenue", |p| p.revenue)?;
        let att = self.field("attractiveness", |p| p.attractiveness)?;
        let dominance = match &self.dominance {
            DominanceSpec::Threshold { t } => DominanceRelation::from_threshold(&att, *t)?,
            DominanceSpec::Explicit { edges } => {
                let lookup = |id: usize| {
                    positions.get(&id).copied().ok_or_else(|| {
                        Error::InvalidInput(format!("edge names unknown product id {id}"))
                    })
                };
                let pairs = edges
                    .iter()
                    .map(|&[x, y]| Ok((lookup(x)?, lookup(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                DominanceRelation::new(n, pairs)?
            }
        };
        Instance::from_parts(&revenues, &att, self.a0, dominance)
    }

    /// Sorted instance plus `order[i]`, the file position of sorted product `i`.
    pub fn to_priced_instance(&self) -> Result<(PricedInstance, Vec<usize>)> {
        self.positions()?;
        let t = match self.dominance {
            DominanceSpec::Threshold { t } => t,
            DominanceSpec::Explicit { .. } => {
                return Err(Error::InvalidInput(
                    "pricing needs a threshold dominance".into(),
                ));
            }
        };
        let utilities = self.field("utility", |p| p.utility)?;
        PricedInstance::from_unsorted(&utilities, t, self.a0)
    }

    /// Ids `1..=n` and the transitive reduction as explicit edges.
    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            products: inst
                .products()
                .iter()
                .enumerate()
                .map(|(i, p)| ProductSpec {
                    id: i + 1,
                    revenue: Some(p.revenue),
                    attractiveness: Some(p.attractiveness),
                    utility: None,
                })
                .collect(),
            a0: inst.a0(),
            dominance: DominanceSpec::Explicit {
                edges: inst
                    .dominance()
                    .reduction_edges()
                    .iter()
                    .map(|&(x, y)| [x + 1, y + 1])
                    .collect(),
            },
        }
    }

    pub fn from_priced_instance(inst: &PricedInstance) -> Self {
        Self {
            products: inst
                .utilities()
                .iter()
                .enumerate()
                .map(|(i, &u)| ProductSpec {
                    id: i + 1,
                    revenue: None,
                    attractiveness: None,
                    utility: Some(u),
                })
                .collect(),
            a0: inst.a0(),
            dominance: DominanceSpec::Threshold { t: inst.t() },
        }
    }
}
