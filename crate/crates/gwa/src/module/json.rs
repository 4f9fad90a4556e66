use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gwa::GwaInstance;
use crate::linalg::Matrix;
use crate::module::MatrixModule;
use crate::ring::{CoefRing, CoefScalar};

/// A matrix entry: a residue for `t = 1`, else the `t` coefficients of
/// `c_0 + c_1 b + ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Residue(i64),
    Coefficients(Vec<i64>),
}

impl EntryJson {
    pub fn from_scalar(c: &CoefScalar) -> Self {
        let coeffs: Vec<i64> = c.coeffs().iter().map(|&v| v as i64).collect();
        if coeffs.len() == 1 {
            EntryJson::Residue(coeffs[0])
        } else {
            EntryJson::Coefficients(coeffs)
        }
    }

    pub fn to_scalar(&self, ring: CoefRing) -> Result<CoefScalar> {
        match self {
            EntryJson::Residue(v) => Ok(ring.int(*v)),
            EntryJson::Coefficients(v) if v.len() <= ring.nilpotency() => Ok(ring.scalar(v)),
            EntryJson::Coefficients(v) => Err(Error::Parse(format!(
                "entry has {} coefficients but the ring has nilpotency {}",
                v.len(),
                ring.nilpotency()
            ))),
        }
    }
}

pub type MatrixJson = Vec<Vec<EntryJson>>;

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(EntryJson::from_scalar).collect())
        .collect()
}

pub fn matrix_from_json(
    ring: CoefRing,
    dim: usize,
    rows: &MatrixJson,
    name: &str,
) -> Result<Matrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be {dim}x{dim}"
        )));
    }
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| e.to_scalar(ring))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(ring, rows).map(|m| {
        if dim == 0 {
            Matrix::zeros(ring, 0, 0)
        } else {
            m
        }
    })
}

/// Wire form `{"dim": d, "H": .., "X": .., "Y": .., "ring": {..}}`, with an
/// optional `"iso"` matrix when the file carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub dim: usize,
    #[serde(rename = "H")]
    pub h: MatrixJson,
    #[serde(rename = "X")]
    pub x: MatrixJson,
    #[serde(rename = "Y")]
    pub y: MatrixJson,
    pub ring: CoefRing,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso: Option<MatrixJson>,
}

impl ModuleJson {
    pub fn from_module(m: &MatrixModule) -> Self {
        ModuleJson {
            dim: m.dim(),
            h: matrix_to_json(m.h()),
            x: matrix_to_json(m.x()),
            y: matrix_to_json(m.y()),
            ring: m.instance().ring(),
            iso: None,
        }
    }

    pub fn with_iso(mut self, iso: &Matrix) -> Self {
        self.iso = Some(matrix_to_json(iso));
        self
    }

    /// Builds and validates the module over `inst`.
    pub fn to_module(&self, inst: &GwaInstance) -> Result<MatrixModule> {
        if self.ring != inst.ring() {
            return Err(Error::Parse(format!(
                "module ring {} does not match instance ring {}",
                self.ring,
                inst.ring()
            )));
        }
        let build =
            |rows: &MatrixJson, name: &str| matrix_from_json(self.ring, self.dim, rows, name);
        MatrixModule::new(
            inst,
            build(&self.h, "H")?,
            build(&self.x, "X")?,
            build(&self.y, "Y")?,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
