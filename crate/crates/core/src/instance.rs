//! JSON instance documents and report serialization.
//!
//! ```json
//! {
//!   "name": "optional label",
//!   "dim": 2,
//!   "combinator": "minmax",
//!   "sets": [[{"a": 0, "v": [1, 0]}, {"a": 1, "v": {"fill": -2}}]]
//! }
//! ```
//!
//! A gradient is either a dense list of `dim` numbers or `{"fill": c}`,
//! meaning `c` repeated `dim` times; fills are never expanded in memory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{AffineAtom, Combinator, PiecewiseAffineFn, VPolytope};
use crate::global::{GlobalMinReport, HPolyhedron, Uniqueness, WitnessMethod};
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombinatorTag {
    Minmax,
    Maxmin,
}

impl From<Combinator> for CombinatorTag {
    fn from(c: Combinator) -> Self {
        match c {
            Combinator::MinMax => CombinatorTag::Minmax,
            Combinator::MaxMin => CombinatorTag::Maxmin,
        }
    }
}

impl From<CombinatorTag> for Combinator {
    fn from(c: CombinatorTag) -> Self {
        match c {
            CombinatorTag::Minmax => Combinator::MinMax,
            CombinatorTag::Maxmin => Combinator::MaxMin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorDoc {
    Dense(Vec<f64>),
    Fill { fill: f64 },
}

impl VectorDoc {
    fn from_vector(v: &Vector) -> Self {
        match v {
            Vector::Dense(d) => VectorDoc::Dense(d.clone()),
            Vector::Fill { value, .. } => VectorDoc::Fill { fill: *value },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub a: f64,
    pub v: VectorDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub combinator: CombinatorTag,
    pub sets: Vec<Vec<AtomDoc>>,
}

impl InstanceDocument {
    pub fn from_function(f: &PiecewiseAffineFn, name: Option<String>) -> Self {
        InstanceDocument {
            name,
            dim: f.dim(),
            combinator: f.combinator().into(),
            sets: f
                .sets()
                .iter()
                .map(|c| {
                    c.atoms()
                        .iter()
                        .map(|t| AtomDoc {
                            a: t.a,
                            v: VectorDoc::from_vector(&t.v),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_function(&self) -> Result<PiecewiseAffineFn> {
        let dim = self.dim;
        if dim == 0 {
            return Err(Error::Validation("dim must be positive".into()));
        }
        if self.sets.is_empty() {
            return Err(Error::Validation("sets must not be empty".into()));
        }
        let mut sets = Vec::with_capacity(self.sets.len());
        for (i, set) in self.sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Validation(format!("set {i} has no atoms")));
            }
            let mut atoms = Vec::with_capacity(set.len());
            for (j, atom) in set.iter().enumerate() {
                let v = match &atom.v {
                    VectorDoc::Dense(d) if d.len() != dim => {
                        return Err(Error::Validation(format!(
                            "set {i}, atom {j}: v has {} entries but dim is {dim}",
                            d.len()
                        )))
                    }
                    VectorDoc::Dense(d) => Vector::Dense(d.clone()),
                    VectorDoc::Fill { fill } => Vector::fill(*fill, dim),
                };
                atoms.push(AffineAtom::new(atom.a, v).map_err(|_| {
                    Error::Validation(format!("set {i}, atom {j}: non-finite entry"))
                })?);
            }
            sets.push(VPolytope::new(atoms)?);
        }
        PiecewiseAffineFn::new(dim, self.combinator.into(), sets)
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_document(text: &str) -> Result<InstanceDocument> {
    serde_json::from_str(text).map_err(parse_error)
}

pub fn parse_instance(text: &str) -> Result<PiecewiseAffineFn> {
    parse_document(text)?.to_function()
}

/// Compact JSON with shortest round-trip number formatting.
pub fn serialize_instance(f: &PiecewiseAffineFn, name: Option<String>) -> String {
    serde_json::to_string(&InstanceDocument::from_function(f, name))
        .expect("instance documents always serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDoc {
    pub a: f64,
    pub v: VectorDoc,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionDoc {
    pub set: usize,
    pub rows: Vec<RowDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDoc {
    pub bounded: bool,
    pub a_star: Option<f64>,
    pub slice_values: Vec<Option<f64>>,
    pub active: Vec<usize>,
    pub regions: Vec<RegionDoc>,
    pub witness: Option<VectorDoc>,
    pub witness_method: Option<&'static str>,
    pub unique: &'static str,
}

fn region_doc(set: usize, r: &HPolyhedron) -> RegionDoc {
    RegionDoc {
        set,
        rows: r
            .rows
            .iter()
            .map(|t| RowDoc {
                a: t.a,
                v: VectorDoc::from_vector(&t.v),
                bound: r.bound,
            })
            .collect(),
    }
}

impl ReportDoc {
    pub fn from_report(report: &GlobalMinReport) -> Self {
        ReportDoc {
            bounded: report.bounded,
            a_star: report.a_star,
            slice_values: report.slice_values.clone(),
            active: report.active_indices.clone(),
            regions: report
                .active_indices
                .iter()
                .zip(&report.regions)
                .map(|(&i, r)| region_doc(i, r))
                .collect(),
            witness: report.witness.as_ref().map(VectorDoc::from_vector),
            witness_method: report.witness_method.map(|m| match m {
                WitnessMethod::OriginShortcut => "origin_shortcut",
                WitnessMethod::Lp => "lp",
            }),
            unique: match report.unique {
                Uniqueness::Unique => "true",
                Uniqueness::NotUnique => "false",
                Uniqueness::NotChecked => "not_checked",
            },
        }
    }
}

pub fn vector_json(v: &Vector) -> String {
    serde_json::to_string(&VectorDoc::from_vector(v)).expect("vectors always serialize")
}

pub fn report_json(report: &GlobalMinReport, pretty: bool) -> String {
    let doc = ReportDoc::from_report(report);
    if pretty {
        serde_json::to_string_pretty(&doc)
    } else {
        serde_json::to_string(&doc)
    }
    .expect("reports always serialize")
}
