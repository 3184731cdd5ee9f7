//! JSON document format for biframe definitions.
//!
//! ```json
//! {
//!   "version": 1,
//!   "metadata": { "name": "example" },
//!   "space": { "dim": 2, "field": "complex" },
//!   "measure": { "weights": [1.0, 0.5] },
//!   "F": [[1.0, [0.0, 1.0]], [0.0, 1.0]],
//!   "G": [[1.0, 0.0], [0.0, 2.0]],
//!   "symbol": [1.0, [0.5, -0.5]]
//! }
//! ```
//!
//! Real scalars are plain numbers; complex scalars are `[re, im]`. Unknown
//! fields are rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::biframe::{BiframePair, VectorFamily};
use crate::error::{Error, Result};
use crate::measure::{Atom, AtomSpace, Label};
use crate::multiplier::SymbolFunction;
use crate::operators::{Field, Scalar, Space, Vector};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl ScalarRepr {
    fn value(self) -> Scalar {
        match self {
            ScalarRepr::Real(x) => Scalar::new(x, 0.0),
            ScalarRepr::Complex([re, im]) => Scalar::new(re, im),
        }
    }

    fn encode(z: Scalar, field: Field) -> Self {
        match field {
            Field::Real => ScalarRepr::Real(z.re),
            Field::Complex => ScalarRepr::Complex([z.re, z.im]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub dim: usize,
    pub field: Field,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiframeDocument {
    pub version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    pub space: SpaceSpec,
    pub measure: MeasureSpec,
    #[serde(rename = "F")]
    pub f: Vec<Vec<ScalarRepr>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<ScalarRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Vec<ScalarRepr>>,
}

/// A validated document in memory.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub pair: BiframePair,
    pub symbol: Option<SymbolFunction>,
    pub metadata: BTreeMap<String, String>,
}

impl Loaded {
    pub fn name(&self) -> Option<&str> {
        self.metadata.get("name").map(String::as_str)
    }
}

pub fn parse_document(text: &str) -> Result<BiframeDocument> {
    serde_json::from_str(text).map_err(|e| Error::Format {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_str(text: &str) -> Result<Loaded> {
    parse_document(text)?.validate()
}

pub fn load_document(path: impl AsRef<Path>) -> Result<Loaded> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    load_str(&text)
}

pub fn save_document(path: impl AsRef<Path>, doc: &BiframeDocument) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, doc.to_json()).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn vector_from(
    field_name: String,
    entries: &[ScalarRepr],
    space: Space,
) -> Result<Vector> {
    if entries.len() != space.dim() {
        return Err(Error::validation(
            field_name,
            format!("expected {} entries, found {}", space.dim(), entries.len()),
        ));
    }
    let values: Vec<Scalar> = entries.iter().map(|s| s.value()).collect();
    for (j, z) in values.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::validation(format!("{field_name}[{j}]"), "entry is not finite"));
        }
        if space.field() == Field::Real && z.im != 0.0 {
            return Err(Error::validation(
                format!("{field_name}[{j}]"),
                "complex entry in a real space",
            ));
        }
    }
    Vector::new(space, values)
}

impl BiframeDocument {
    pub fn validate(&self) -> Result<Loaded> {
        if self.version != FORMAT_VERSION {
            return Err(Error::validation(
                "version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", self.version),
            ));
        }
        let space = Space::new(self.space.dim, self.space.field)
            .map_err(|_| Error::validation("space.dim", "dimension must be >= 1"))?;
        let n = self.measure.weights.len();
        if n == 0 {
            return Err(Error::validation("measure.weights", "at least one atom is required"));
        }
        if let Some((k, w)) = self.measure.weights.iter().enumerate().find(|(_, w)| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::validation(
                format!("measure.weights[{k}]"),
                format!("weight {w} must be finite and > 0"),
            ));
        }
        let labels: Vec<Label> = match &self.measure.nodes {
            Some(nodes) => {
                if nodes.len() != n {
                    return Err(Error::validation(
                        "measure.nodes",
                        format!("{} nodes for {n} weights", nodes.len()),
                    ));
                }
                nodes.iter().map(|&x| Label::Node(x)).collect()
            }
            None => (0..n).map(Label::Index).collect(),
        };
        let atoms = labels
            .into_iter()
            .zip(&self.measure.weights)
            .map(|(label, &weight)| Atom { label, weight })
            .collect();
        let mut atom_space =
            AtomSpace::from_atoms(atoms).map_err(|e| Error::validation("measure", e.to_string()))?;
        if let Some(note) = &self.measure.truncation {
            atom_space = atom_space.with_truncation_note(note.clone());
        }
        let atom_space = Arc::new(atom_space);

        let family = |name: &str, rows: &[Vec<ScalarRepr>]| -> Result<VectorFamily> {
            if rows.is_empty() {
                return Err(Error::validation(name, "family is empty"));
            }
            if rows.len() != n {
                return Err(Error::validation(
                    name,
                    format!("{} vectors for {n} atoms", rows.len()),
                ));
            }
            let vectors = rows
                .iter()
                .enumerate()
                .map(|(k, r)| vector_from(format!("{name}[{k}]"), r, space))
                .collect::<Result<Vec<_>>>()?;
            VectorFamily::new(space, Arc::clone(&atom_space), vectors)
        };
        let f = family("F", &self.f)?;
        let g = family("G", &self.g)?;
        let symbol = match &self.symbol {
            None => None,
            Some(values) => {
                if values.len() != n {
                    return Err(Error::validation(
                        "symbol",
                        format!("{} values for {n} atoms", values.len()),
                    ));
                }
                let values: Vec<Scalar> = values.iter().map(|s| s.value()).collect();
                Some(
                    SymbolFunction::new(Arc::clone(&atom_space), values)
                        .map_err(|e| Error::validation("symbol", e.to_string()))?,
                )
            }
        };
        Ok(Loaded {
            pair: BiframePair::new(f, g)?,
            symbol,
            metadata: self.metadata.clone(),
        })
    }

    /// Encodes an in-memory pair.
    pub fn from_pair(pair: &BiframePair, symbol: Option<&SymbolFunction>, metadata: BTreeMap<String, String>) -> Self {
        let space = pair.space();
        let field = space.field();
        let atoms = pair.atom_space();
        let encode = |family: &VectorFamily| -> Vec<Vec<ScalarRepr>> {
            family
                .vectors()
                .iter()
                .map(|v| v.entries().iter().map(|&z| ScalarRepr::encode(z, field)).collect())
                .collect()
        };
        let nodes: Option<Vec<f64>> = atoms.atoms().iter().map(|a| a.label.node()).collect();
        // symbols may be complex even over a real space
        let symbol_field = match symbol {
            Some(m) if m.values().iter().any(|z| z.im != 0.0) => Field::Complex,
            _ => field,
        };
        BiframeDocument {
            version: FORMAT_VERSION,
            metadata,
            space: SpaceSpec {
                dim: space.dim(),
                field,
            },
            measure: MeasureSpec {
                weights: atoms.weights().collect(),
                nodes,
                truncation: atoms.truncation_note().map(str::to_owned),
            },
            f: encode(pair.f()),
            g: encode(pair.g()),
            symbol: symbol.map(|m| {
                m.values()
                    .iter()
                    .map(|&z| ScalarRepr::encode(z, symbol_field))
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biframe::assemble;
    use crate::corpus;

    const MIXED_DOC: &str = r#"{
        "version": 1,
        "metadata": {"name": "mixed"},
        "space": {"dim": 3, "field": "real"},
        "measure": {"weights": [1, 1, 1]},
        "F": [[2, 1, 1], [-1, 3, -1], [-1, 1, 4]],
        "G": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    }"#;

    #[test]
    fn loads_mixed_pair() {
        let doc = load_str(MIXED_DOC).unwrap();
        assert_eq!(doc.name(), Some("mixed"));
        assert_eq!(assemble(&doc.pair).op, corpus::mixed_matrix());
        assert!(doc.symbol.is_none());
    }

    #[test]
    fn empty_family_is_a_validation_error() {
        let text = MIXED_DOC.replace(r#""F": [[2, 1, 1], [-1, 3, -1], [-1, 1, 4]]"#, r#""F": []"#);
        match load_str(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "F"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn short_vector_names_its_index() {
        let text = MIXED_DOC.replace("[-1, 3, -1]", "[-1, 3]");
        match load_str(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "F[1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = MIXED_DOC.replace(r#""version": 1,"#, r#""version": 1, "wieghts": [],"#);
        assert!(matches!(load_str(&text), Err(Error::Format { .. })));
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = "{\n  \"version\": 1,\n  oops\n}";
        match load_str(text) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_weights_and_fields() {
        let text = MIXED_DOC.replace("[1, 1, 1]", "[1, 0, 1]");
        match load_str(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "measure.weights[1]"),
            other => panic!("{other:?}"),
        }
        let text = MIXED_DOC.replace("[2, 1, 1]", "[2, [1, 0.5], 1]");
        match load_str(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "F[0][1]"),
            other => panic!("{other:?}"),
        }
        let text = MIXED_DOC.replace(r#""version": 1"#, r#""version": 2"#);
        assert!(matches!(load_str(&text), Err(Error::Validation { .. })));
    }

    #[test]
    fn complex_document_with_symbol() {
        let text = r#"{
            "version": 1,
            "space": {"dim": 2, "field": "complex"},
            "measure": {"weights": [1.0, 0.5], "nodes": [0.25, 0.75]},
            "F": [[1.0, [0.0, 1.0]], [0.0, 1.0]],
            "G": [[1.0, 0.0], [0.0, 2.0]],
            "symbol": [1.0, [0.5, -0.5]]
        }"#;
        let doc = load_str(text).unwrap();
        assert_eq!(doc.pair.f().vectors()[0].entries()[1], Scalar::new(0.0, 1.0));
        assert_eq!(doc.symbol.as_ref().unwrap().values()[1], Scalar::new(0.5, -0.5));
        assert_eq!(doc.pair.atom_space().atoms()[1].label, Label::Node(0.75));
        let again = BiframeDocument::from_pair(&doc.pair, doc.symbol.as_ref(), BTreeMap::new());
        let reloaded = load_str(&again.to_json()).unwrap();
        assert_eq!(reloaded.pair, doc.pair);
        assert_eq!(reloaded.symbol, doc.symbol);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_document("/nonexistent/biframe.json"),
            Err(Error::Io { .. })
        ));
    }
}
