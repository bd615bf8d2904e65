//! Element JSON format.
//!
//! ```text
//! {"n":2,"H":[[2,1]],"domain":"(* *)","range":"(* *)","tau":[2,1],"labels":[[1,2],[2,1]]}
//! ```
//!
//! `H` lists generator images; the identity is written `[1,2,…,n]`.
//! Printing is canonical (fixed field order, no whitespace), so
//! print-then-parse is the identity.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::element::TreePairElement;
use crate::error::{Error, Result};
use crate::perm::{Permutation, SubgroupH};
use crate::tree::Tree;

#[derive(Serialize, Deserialize)]
struct ElementJson {
    n: usize,
    #[serde(rename = "H")]
    h: Vec<Vec<usize>>,
    domain: String,
    range: String,
    tau: Vec<usize>,
    labels: Vec<Vec<usize>>,
}

pub fn element_to_json(g: &TreePairElement) -> String {
    let json = ElementJson {
        n: g.arity(),
        h: g.subgroup().generators().iter().map(Permutation::images).collect(),
        domain: g.domain().to_string(),
        range: g.range().to_string(),
        tau: g.tau().to_vec(),
        labels: g.labels().iter().map(Permutation::images).collect(),
    };
    serde_json::to_string(&json).expect("plain data serializes")
}

pub fn parse_subgroup(n: usize, generators: &[Vec<usize>]) -> Result<SubgroupH> {
    let gens = generators
        .iter()
        .map(|g| {
            if g.len() != n {
                return Err(Error::parse("H", format!("generator {g:?} does not have length n = {n}")));
            }
            Permutation::from_images(g).map_err(|e| Error::parse("H", e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    SubgroupH::generated_by(n, gens).map_err(|e| Error::parse("H", e.to_string()))
}

/// Parses an element; `subgroup` (when given) is shared instead of rebuilt,
/// and must equal the group the JSON generates.
pub fn element_from_json(text: &str, subgroup: Option<&Arc<SubgroupH>>) -> Result<TreePairElement> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::parse("json", e.to_string()))?;
    for field in ["n", "H", "domain", "range", "tau", "labels"] {
        if value.get(field).is_none() {
            return Err(Error::parse(field, "missing field"));
        }
    }
    let raw: ElementJson = serde_json::from_value(value.clone()).map_err(|e| {
        let msg = e.to_string();
        let field = ["labels", "domain", "range", "tau", "H", "n"]
            .into_iter()
            .find(|f| msg.contains(&format!("`{f}`")) || value.get(f).map(|v| !well_typed(f, v)).unwrap_or(false))
            .unwrap_or("json");
        Error::parse(field, msg)
    })?;
    let n = raw.n;
    if !(2..=8).contains(&n) {
        return Err(Error::parse("n", format!("{n} is outside 2..=8")));
    }
    let h = Arc::new(parse_subgroup(n, &raw.h)?);
    let h = match subgroup {
        Some(s) if **s == *h => s.clone(),
        Some(_) => return Err(Error::SubgroupMismatch),
        None => h,
    };
    let domain = Tree::parse(n, &raw.domain).map_err(|e| Error::parse("domain", e.to_string()))?;
    let range = Tree::parse(n, &raw.range).map_err(|e| Error::parse("range", e.to_string()))?;
    let labels = raw
        .labels
        .iter()
        .map(|l| {
            if l.len() != n {
                return Err(Error::parse("labels", format!("label {l:?} does not have length n = {n}")));
            }
            Permutation::from_images(l).map_err(|e| Error::parse("labels", e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    TreePairElement::new(h, domain, range, raw.tau, labels).map_err(|e| {
        let field = match &e {
            Error::InvalidElement(m) if m.contains("tau") => "tau",
            Error::InvalidElement(m) if m.contains("label") => "labels",
            _ => "range",
        };
        Error::parse(field, e.to_string())
    })
}

fn well_typed(field: &str, v: &serde_json::Value) -> bool {
    match field {
        "n" => v.is_u64(),
        "domain" | "range" => v.is_string(),
        "tau" => v.as_array().is_some_and(|a| a.iter().all(|x| x.is_u64())),
        "H" | "labels" => v
            .as_array()
            .is_some_and(|a| a.iter().all(|x| x.as_array().is_some_and(|b| b.iter().all(|y| y.is_u64())))),
        _ => true,
    }
}

/// `id`, `sym`, `cyclic`, or a JSON list of generator image lists.
pub fn subgroup_preset(n: usize, spec: &str) -> Result<SubgroupH> {
    match spec.trim() {
        "id" => SubgroupH::trivial(n),
        "sym" => SubgroupH::symmetric(n),
        "cyclic" => SubgroupH::cyclic(n),
        other => {
            let gens: Vec<Vec<usize>> =
                serde_json::from_str(other).map_err(|e| Error::parse("H", format!("{other:?}: {e}")))?;
            parse_subgroup(n, &gens)
        }
    }
}
