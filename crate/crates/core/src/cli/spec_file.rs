//! TOML box files:
//!
//! ```toml
//! contexts = [["A", "B"], ["B", "C"]]
//! distributions = [[0.5, 0.0, 0.0, 0.5], [0.25, 0.25, 0.25, 0.25]]
//!
//! [[observables]]
//! name = "A"
//! cardinality = 2
//!
//! [[observables]]
//! name = "B"
//! cardinality = 2
//!
//! [[observables]]
//! name = "C"
//! cardinality = 2
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boxes::{ContextBox, Hypergraph, Observable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub name: String,
    pub cardinality: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpecFile {
    pub contexts: Vec<Vec<String>>,
    pub distributions: Vec<Vec<f64>>,
    pub observables: Vec<ObservableSpec>,
}

impl BoxSpecFile {
    pub fn from_box(b: &ContextBox) -> Self {
        let g = b.hypergraph();
        let names = |ctx: &[usize]| ctx.iter().map(|&i| g.observables()[i].name.clone()).collect();
        BoxSpecFile {
            contexts: g.contexts().iter().map(|c| names(c)).collect(),
            distributions: b.distributions().to_vec(),
            observables: g
                .observables()
                .iter()
                .map(|o| ObservableSpec { name: o.name.clone(), cardinality: o.cardinality })
                .collect(),
        }
    }

    pub fn to_box(&self) -> Result<ContextBox> {
        let observables: Vec<Observable> =
            self.observables.iter().map(|o| Observable::new(o.name.clone(), o.cardinality)).collect();
        let index = |name: &String| {
            observables
                .iter()
                .position(|o| &o.name == name)
                .ok_or_else(|| Error::InvalidHypergraph(format!("context references unknown observable `{name}`")))
        };
        let contexts = self
            .contexts
            .iter()
            .map(|c| c.iter().map(index).collect::<Result<Vec<usize>>>())
            .collect::<Result<Vec<_>>>()?;
        let g = Arc::new(Hypergraph::new(observables, contexts)?);
        ContextBox::new(g, self.distributions.clone())
    }
}

pub fn parse_box_str(text: &str) -> Result<ContextBox> {
    let spec: BoxSpecFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.to_box()
}

pub fn parse_box(path: &Path) -> Result<ContextBox> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_box_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn emit_box_string(b: &ContextBox) -> Result<String> {
    toml::to_string(&BoxSpecFile::from_box(b)).map_err(|e| Error::Parse(e.to_string()))
}

pub fn emit_box(b: &ContextBox, path: &Path) -> Result<()> {
    std::fs::write(path, emit_box_string(b)?)?;
    Ok(())
}
