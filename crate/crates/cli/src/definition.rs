//! Definition files: JSON skeleton, coefficient expressions as text.

use std::collections::BTreeMap;
use std::fmt;

use algkit_core::algebroid::FiberMultivector;
use algkit_core::poly::{PolyError, VarSpace};
use algkit_core::{Algebroid, AnchorSide, EndoTensor, Polynomial};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionFile {
    pub name: String,
    #[serde(default)]
    pub base_coords: Vec<String>,
    pub rank: usize,
    #[serde(default = "default_skew")]
    pub skew: bool,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub anchor_left: Vec<AnchorEntry>,
    /// Defaults to `anchor_left` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor_right: Option<Vec<AnchorEntry>>,
    #[serde(default)]
    pub tensors: BTreeMap<String, TensorEntry>,
}

fn default_skew() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub outputs: Vec<Output>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub k: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorEntry {
    pub i: usize,
    pub a: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TensorEntry {
    Multivector { degree: usize, terms: Vec<MultivectorTerm> },
    Endomorphism { terms: Vec<EndoTerm> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultivectorTerm {
    pub indices: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoTerm {
    pub row: usize,
    pub col: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tensor {
    Multivector(FiberMultivector),
    Endomorphism(EndoTensor),
}

/// A parsed and validated file.
#[derive(Clone, Debug)]
pub struct Definition {
    pub file: DefinitionFile,
    pub algebroid: Algebroid,
    pub tensors: BTreeMap<String, Tensor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefinitionError {
    /// Malformed JSON or a field of the wrong shape.
    Parse { path: String, message: String },
    /// Well-formed but meaningless content.
    Semantic { path: String, message: String },
}

impl DefinitionError {
    fn semantic(path: impl Into<String>, message: impl Into<String>) -> Self {
        DefinitionError::Semantic { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for DefinitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefinitionError::Parse { path, message } if path.is_empty() || path == "." || path == "?" => write!(f, "parse error: {message}"),
            DefinitionError::Parse { path, message } => write!(f, "parse error at {path}: {message}"),
            DefinitionError::Semantic { path, message } => write!(f, "error at {path}: {message}"),
        }
    }
}

impl std::error::Error for DefinitionError {}

pub fn parse_definition(src: &str) -> Result<Definition, DefinitionError> {
    let de = &mut serde_json::Deserializer::from_str(src);
    let file: DefinitionFile = serde_path_to_error::deserialize(de).map_err(|e| DefinitionError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    build(file)
}

fn coefficient(space: &VarSpace, src: &str, path: &str) -> Result<Polynomial, DefinitionError> {
    space.parse(src).map_err(|e| match e {
        PolyError::Syntax { .. } => DefinitionError::Parse { path: path.into(), message: e.to_string() },
        _ => DefinitionError::semantic(path, e.to_string()),
    })
}

/// One-based index in `1..=bound`, returned zero-based.
fn index(value: usize, bound: usize, path: String) -> Result<usize, DefinitionError> {
    if value == 0 || value > bound {
        return Err(DefinitionError::semantic(path, format!("index {value} is outside 1..={bound}")));
    }
    Ok(value - 1)
}

pub fn build(file: DefinitionFile) -> Result<Definition, DefinitionError> {
    if file.rank == 0 {
        return Err(DefinitionError::semantic("rank", "rank must be positive"));
    }
    for (n, name) in file.base_coords.iter().enumerate() {
        let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || file.base_coords[..n].contains(name) {
            return Err(DefinitionError::semantic(format!("base_coords[{n}]"), format!("invalid or repeated coordinate `{name}`")));
        }
    }
    let (m, r) = (file.base_coords.len(), file.rank);
    let space = VarSpace::base(file.base_coords.clone());
    let mut a = Algebroid::new(file.base_coords.clone(), r, file.skew);
    let mut seen = BTreeMap::new();
    for (n, b) in file.brackets.iter().enumerate() {
        let i = index(b.i, r, format!("brackets[{n}].i"))?;
        let j = index(b.j, r, format!("brackets[{n}].j"))?;
        if file.skew && i >= j {
            return Err(DefinitionError::semantic(
                format!("brackets[{n}]"),
                format!("skew files list only i < j, got i = {}, j = {}", b.i, b.j),
            ));
        }
        for (o, out) in b.outputs.iter().enumerate() {
            let path = format!("brackets[{n}].outputs[{o}]");
            let k = index(out.k, r, format!("{path}.k"))?;
            if seen.insert((i, j, k), path.clone()).is_some() {
                return Err(DefinitionError::semantic(path, "duplicate bracket output"));
            }
            let c = coefficient(&space, &out.coeff, &format!("{path}.coeff"))?;
            let res = if file.skew { a.set_bracket(i, j, k, c) } else { a.set_structure(i, j, k, c) };
            res.map_err(|e| DefinitionError::semantic(path, e.to_string()))?;
        }
    }
    let right = file.anchor_right.as_ref().unwrap_or(&file.anchor_left);
    let right_label = if file.anchor_right.is_some() { "anchor_right" } else { "anchor_left" };
    for (label, side, entries) in [("anchor_left", AnchorSide::Left, &file.anchor_left), (right_label, AnchorSide::Right, right)] {
        let mut seen = BTreeMap::new();
        for (n, e) in entries.iter().enumerate() {
            let path = format!("{label}[{n}]");
            let i = index(e.i, r, format!("{path}.i"))?;
            let b = index(e.a, m, format!("{path}.a"))?;
            if seen.insert((i, b), ()).is_some() {
                return Err(DefinitionError::semantic(path, "duplicate anchor entry"));
            }
            let c = coefficient(&space, &e.coeff, &format!("{path}.coeff"))?;
            a.set_anchor_side(side, i, b, c).map_err(|err| DefinitionError::semantic(path, err.to_string()))?;
        }
    }
    let mut tensors = BTreeMap::new();
    for (name, t) in &file.tensors {
        let base = format!("tensors.{name}");
        let value = match t {
            TensorEntry::Multivector { degree, terms } => {
                if *degree > r {
                    return Err(DefinitionError::semantic(format!("{base}.degree"), format!("degree {degree} exceeds rank {r}")));
                }
                let mut u = FiberMultivector::zero(r, *degree);
                for (n, term) in terms.iter().enumerate() {
                    let path = format!("{base}.terms[{n}]");
                    if term.indices.len() != *degree {
                        return Err(DefinitionError::semantic(
                            format!("{path}.indices"),
                            format!("expected {degree} indices, got {}", term.indices.len()),
                        ));
                    }
                    let mut idx = Vec::with_capacity(*degree);
                    for (q, &v) in term.indices.iter().enumerate() {
                        idx.push(index(v, r, format!("{path}.indices[{q}]"))?);
                    }
                    let c = coefficient(&space, &term.coeff, &format!("{path}.coeff"))?;
                    u += FiberMultivector::monomial(r, &idx, c);
                }
                Tensor::Multivector(u)
            }
            TensorEntry::Endomorphism { terms } => {
                let mut n = EndoTensor::zero(r);
                for (q, term) in terms.iter().enumerate() {
                    let path = format!("{base}.terms[{q}]");
                    let row = index(term.row, r, format!("{path}.row"))?;
                    let col = index(term.col, r, format!("{path}.col"))?;
                    n.0[row][col] += coefficient(&space, &term.coeff, &format!("{path}.coeff"))?;
                }
                Tensor::Endomorphism(n)
            }
        };
        tensors.insert(name.clone(), value);
    }
    Ok(Definition { file, algebroid: a, tensors })
}

/// Serialize back to the file format.
pub fn render_definition(file: &DefinitionFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("definition files always serialize");
    s.push('\n');
    s
}
