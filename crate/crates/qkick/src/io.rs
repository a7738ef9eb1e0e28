//! JSON file formats for channels and Hamiltonians.
//!
//! A matrix is a list of rows, each row a list of `[re, im]` pairs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::numerics::{c, ComplexMatrix};

pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub dim: usize,
    pub kraus: Vec<MatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub dim: usize,
    pub matrix: MatrixRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

pub fn matrix_to_rows(m: &ComplexMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &MatrixRows, dim: usize) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("expected a {dim}x{dim} matrix")));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        let [re, im] = rows[i][j];
        c(re, im)
    }))
}

impl ChannelFile {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self {
            dim: ch.dim(),
            kraus: ch.kraus().iter().map(matrix_to_rows).collect(),
            name: ch.name().map(str::to_owned),
        }
    }

    pub fn into_channel(self) -> Result<KrausChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(|rows| matrix_from_rows(rows, self.dim))
            .collect::<Result<Vec<_>>>()?;
        let ch = KrausChannel::new(kraus)?;
        Ok(match self.name {
            Some(n) => ch.with_name(n),
            None => ch,
        })
    }
}

impl HamiltonianFile {
    pub fn from_hamiltonian(h: &Hamiltonian, name: Option<String>) -> Self {
        Self {
            dim: h.dim(),
            matrix: matrix_to_rows(h.matrix()),
            name,
        }
    }

    pub fn into_hamiltonian(self) -> Result<Hamiltonian> {
        Hamiltonian::new(matrix_from_rows(&self.matrix, self.dim)?)
    }
}

pub fn read_channel(path: &Path) -> Result<KrausChannel> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<ChannelFile>(&text)?.into_channel()
}

pub fn write_channel(path: &Path, ch: &KrausChannel) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&ChannelFile::from_channel(ch))?)?;
    Ok(())
}

pub fn read_hamiltonian(path: &Path) -> Result<Hamiltonian> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<HamiltonianFile>(&text)?.into_hamiltonian()
}

/// Resolves `zoo:NAME(params)` or a channel file path.
pub fn resolve_channel(spec: &str) -> Result<KrausChannel> {
    if spec.starts_with("zoo:") {
        Ok(crate::zoo::from_spec(spec)?.channel)
    } else {
        read_channel(Path::new(spec))
    }
}

/// Resolves `pauli:EXPR`, `random:SEED` (drawn on dimension `dim`) or a
/// Hamiltonian file path, checking the dimension.
pub fn resolve_hamiltonian(spec: &str, dim: usize) -> Result<Hamiltonian> {
    let h = if let Some(expr) = spec.strip_prefix("pauli:") {
        Hamiltonian::from_pauli(expr)?
    } else if let Some(seed) = spec.strip_prefix("random:") {
        let seed = seed
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad seed in {spec:?}")))?;
        crate::hamiltonian::random_hamiltonian(dim, seed)?
    } else {
        read_hamiltonian(Path::new(spec))?
    };
    if h.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian {spec:?} has dimension {}, expected {dim}",
            h.dim()
        )));
    }
    Ok(h)
}
