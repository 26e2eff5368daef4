//! On-disk JSON formats.
//!
//! All files are JSON. Unknown fields are rejected. Matrices are row-major
//! lists of rows, each row a list of `[re, im]` pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use corrkit_core::graph::{CkFamily, Graph};
use corrkit_core::linalg::{c64, CMatrix};
use corrkit_core::{Correspondence, MatrixUnit, Representation};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// `[[[re, im], ...], ...]`.
pub type MatrixEntries = Vec<Vec<[f64; 2]>>;

/// An unreadable or invalid input file.
#[derive(Debug, thiserror::Error)]
pub struct InputError {
    pub file: PathBuf,
    /// `line:column` for syntax errors, a field path for semantic ones.
    pub location: Option<String>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file.display())?;
        if let Some(loc) = &self.location {
            write!(f, ":{loc}")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl InputError {
    pub fn new(file: &Path, location: Option<String>, message: impl Into<String>) -> Self {
        Self {
            file: file.to_path_buf(),
            location,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub fibers: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeftActionSpec {
    pub multiplicity: Vec<Vec<usize>>,
    /// One unitary per fiber; absent means all identities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitaries: Option<Vec<MatrixEntries>>,
}

/// `{"algebra": {...}, "module": {...}, "left_action": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondenceFile {
    pub algebra: AlgebraSpec,
    pub module: ModuleSpec,
    pub left_action: LeftActionSpec,
}

/// `{"dim": N, "pi": {"b:r:c": matrix}, "t": {"j:r:c": matrix}}`.
///
/// Missing keys stand for zero matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub dim: usize,
    #[serde(default)]
    pub pi: BTreeMap<String, MatrixEntries>,
    #[serde(default)]
    pub t: BTreeMap<String, MatrixEntries>,
}

/// `{"vertices": [...], "edges": [[name, source, range], ...], "infinite_emitters": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String, String)>,
    #[serde(default)]
    pub infinite_emitters: Vec<String>,
}

/// `{"dim": N, "projections": {vertex: matrix}, "isometries": {edge: matrix}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub dim: usize,
    pub projections: BTreeMap<String, MatrixEntries>,
    #[serde(default)]
    pub isometries: BTreeMap<String, MatrixEntries>,
}

/// Read and parse a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, Vec<u8>), InputError> {
    let bytes = std::fs::read(path).map_err(|e| InputError::new(path, None, format!("cannot read file: {e}")))?;
    let value = parse_json(path, &bytes)?;
    Ok((value, bytes))
}

/// Parse JSON, reporting syntax and schema errors with line and column.
pub fn parse_json<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, InputError> {
    serde_json::from_slice(bytes).map_err(|e| {
        let location = (e.line() > 0).then(|| format!("{}:{}", e.line(), e.column()));
        let mut message = e.to_string();
        if let Some(cut) = message.rfind(" at line ") {
            message.truncate(cut);
        }
        InputError::new(path, location, message)
    })
}

pub fn matrix_from_entries(
    path: &Path,
    location: &str,
    entries: &MatrixEntries,
    rows: usize,
    cols: usize,
) -> Result<CMatrix, InputError> {
    let err = |msg: String| InputError::new(path, Some(location.to_string()), msg);
    if entries.len() != rows {
        return Err(err(format!("expected {rows} rows, found {}", entries.len())));
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (r, row) in entries.iter().enumerate() {
        if row.len() != cols {
            return Err(err(format!("row {r} has {} entries, expected {cols}", row.len())));
        }
        for (c, [re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(err(format!("entry ({r}, {c}) is not finite")));
            }
            m[(r, c)] = c64(*re, *im);
        }
    }
    Ok(m)
}

pub fn matrix_to_entries(m: &CMatrix) -> MatrixEntries {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// Parse `"b:r:c"`.
pub fn parse_unit(key: &str) -> Option<MatrixUnit> {
    let mut parts = key.split(':').map(|p| p.trim().parse::<usize>());
    let (b, r, c) = (parts.next()?.ok()?, parts.next()?.ok()?, parts.next()?.ok()?);
    if parts.next().is_some() {
        return None;
    }
    Some(MatrixUnit {
        block: b,
        row: r,
        col: c,
    })
}

impl CorrespondenceFile {
    pub fn load(path: &Path) -> Result<(Correspondence, Vec<u8>), InputError> {
        let (file, bytes): (Self, _) = read_json(path)?;
        Ok((file.build(path)?, bytes))
    }

    pub fn build(&self, path: &Path) -> Result<Correspondence, InputError> {
        let fibers = &self.module.fibers;
        let unitaries = match &self.left_action.unitaries {
            None => None,
            Some(list) => {
                if list.len() != fibers.len() {
                    return Err(InputError::new(
                        path,
                        Some("left_action.unitaries".into()),
                        format!(
                            "expected {} unitaries, one per fiber, found {}",
                            fibers.len(),
                            list.len()
                        ),
                    ));
                }
                let mut out = Vec::with_capacity(list.len());
                for (j, entries) in list.iter().enumerate() {
                    let loc = format!("left_action.unitaries[{j}]");
                    out.push(matrix_from_entries(path, &loc, entries, fibers[j], fibers[j])?);
                }
                Some(out)
            }
        };
        Correspondence::from_parts(
            self.algebra.blocks.clone(),
            fibers.clone(),
            self.left_action.multiplicity.clone(),
            unitaries,
        )
        .map_err(|e| InputError::new(path, None, e.to_string()))
    }

    pub fn from_correspondence(x: &Correspondence) -> Self {
        Self {
            algebra: AlgebraSpec {
                blocks: x.algebra().blocks().to_vec(),
            },
            module: ModuleSpec {
                fibers: x.module().fibers().to_vec(),
            },
            left_action: LeftActionSpec {
                multiplicity: x.multiplicity().to_vec(),
                unitaries: x
                    .left_action()
                    .unitaries()
                    .map(|us| us.iter().map(matrix_to_entries).collect()),
            },
        }
    }
}

impl RepresentationFile {
    pub fn load(path: &Path, x: &Correspondence) -> Result<(Representation, Vec<u8>), InputError> {
        let (file, bytes): (Self, _) = read_json(path)?;
        Ok((file.build(path, x)?, bytes))
    }

    pub fn build(&self, path: &Path, x: &Correspondence) -> Result<Representation, InputError> {
        let dim = self.dim;
        let pi = Self::collect(path, "pi", &self.pi, &x.algebra().basis(), dim)?;
        let t = Self::collect(path, "t", &self.t, &x.module().basis(), dim)?;
        Representation::new(x.clone(), dim, pi, t).map_err(|e| InputError::new(path, None, e.to_string()))
    }

    fn collect(
        path: &Path,
        field: &str,
        given: &BTreeMap<String, MatrixEntries>,
        basis: &[MatrixUnit],
        dim: usize,
    ) -> Result<Vec<CMatrix>, InputError> {
        let mut out = vec![CMatrix::zeros(dim, dim); basis.len()];
        for (key, entries) in given {
            let loc = format!("{field}.\"{key}\"");
            let unit = parse_unit(key)
                .ok_or_else(|| InputError::new(path, Some(loc.clone()), "key is not of the form block:row:col"))?;
            let slot = basis.iter().position(|u| *u == unit).ok_or_else(|| {
                InputError::new(
                    path,
                    Some(loc.clone()),
                    format!("{unit} is not a basis element of the {field} domain"),
                )
            })?;
            out[slot] = matrix_from_entries(path, &loc, entries, dim, dim)?;
        }
        Ok(out)
    }

    /// Every basis key is written, zero matrices included.
    pub fn from_representation(r: &Representation) -> Self {
        let x = r.correspondence();
        let pack = |basis: Vec<MatrixUnit>, ms: &[CMatrix]| -> BTreeMap<String, MatrixEntries> {
            basis
                .iter()
                .zip(ms)
                .map(|(u, m)| (u.to_string(), matrix_to_entries(m)))
                .collect()
        };
        Self {
            dim: r.dim(),
            pi: pack(x.algebra().basis(), r.pi_basis()),
            t: pack(x.module().basis(), r.t_basis()),
        }
    }
}

impl GraphFile {
    pub fn load(path: &Path) -> Result<(Graph, Vec<u8>), InputError> {
        let (file, bytes): (Self, _) = read_json(path)?;
        Ok((file.build(path)?, bytes))
    }

    pub fn build(&self, path: &Path) -> Result<Graph, InputError> {
        Graph::new(
            self.vertices.clone(),
            self.edges.clone(),
            self.infinite_emitters.clone(),
        )
        .map_err(|e| InputError::new(path, None, e.to_string()))
    }
}

impl FamilyFile {
    pub fn load(path: &Path) -> Result<(CkFamily, Vec<u8>), InputError> {
        let (file, bytes): (Self, _) = read_json(path)?;
        Ok((file.build(path)?, bytes))
    }

    pub fn build(&self, path: &Path) -> Result<CkFamily, InputError> {
        let convert = |field: &str, map: &BTreeMap<String, MatrixEntries>| {
            map.iter()
                .map(|(k, v)| {
                    Ok((
                        k.clone(),
                        matrix_from_entries(path, &format!("{field}.\"{k}\""), v, self.dim, self.dim)?,
                    ))
                })
                .collect::<Result<BTreeMap<_, _>, InputError>>()
        };
        Ok(CkFamily {
            dim: self.dim,
            projections: convert("projections", &self.projections)?,
            isometries: convert("isometries", &self.isometries)?,
        })
    }
}
