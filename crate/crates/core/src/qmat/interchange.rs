//! JSON interchange for matrices and Kraus sets.
//!
//! A matrix document carries `dims` and `labels` for the subsystem structure
//! and the real and imaginary parts as row-major nested arrays:
//!
//! ```json
//! { "dims": [2], "labels": ["A"], "re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0, 0], [0, 0]] }
//! ```
//!
//! `dims`/`labels` may be omitted for bare operators such as rectangular Kraus
//! matrices; density matrices and gates require `dims`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CMatrix, DensityMatrix, SubsystemShape, UnitaryMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix documents always serialize")
    }

    pub fn from_matrix(m: &CMatrix, shape: Option<&SubsystemShape>) -> Self {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dims: shape.map(|s| s.dims().to_vec()).unwrap_or_default(),
            labels: shape.map(|s| s.labels().to_vec()).unwrap_or_default(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.data(), Some(rho.shape()))
    }

    /// The (possibly rectangular) matrix, after checking `re`/`im` consistency.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let rows = self.re.len();
        if rows == 0 {
            return Err(Error::Format("empty matrix".into()));
        }
        if self.im.len() != rows {
            return Err(Error::Format(format!(
                "`re` has {rows} rows but `im` has {}",
                self.im.len()
            )));
        }
        let cols = self.re[0].len();
        if cols == 0 {
            return Err(Error::Format("empty matrix row".into()));
        }
        for (i, (r, m)) in self.re.iter().zip(&self.im).enumerate() {
            if r.len() != cols || m.len() != cols {
                return Err(Error::Format(format!("row {i} is ragged (expected {cols} columns)")));
            }
        }
        let mut out = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = Complex64::new(self.re[i][j], self.im[i][j]);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::Format(format!("non-finite entry at ({i}, {j})")));
                }
                out[(i, j)] = z;
            }
        }
        Ok(out)
    }

    /// Subsystem shape; requires `dims` and checks it against the matrix size.
    pub fn shape(&self) -> Result<SubsystemShape> {
        if self.dims.is_empty() {
            return Err(Error::Format("missing `dims`".into()));
        }
        let shape = if self.labels.is_empty() {
            SubsystemShape::with_default_labels(self.dims.clone())?
        } else {
            SubsystemShape::new(self.dims.clone(), self.labels.clone())?
        };
        if shape.dim() != self.re.len() {
            return Err(Error::Format(format!(
                "dims multiply to {} but the matrix has {} rows",
                shape.dim(),
                self.re.len()
            )));
        }
        Ok(shape)
    }

    pub fn to_square(&self) -> Result<(SubsystemShape, CMatrix)> {
        let m = self.to_matrix()?;
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok((self.shape()?, m))
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let (shape, m) = self.to_square()?;
        DensityMatrix::new(shape, m)
    }

    pub fn to_unitary(&self) -> Result<UnitaryMatrix> {
        let (_, m) = self.to_square()?;
        UnitaryMatrix::new(m)
    }
}

/// List of Kraus matrices. Any `certified_incoherent` flag in a file is
/// ignored on load and recomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausDocument {
    pub operators: Vec<MatrixDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified_incoherent: Option<bool>,
}

impl KrausDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("Kraus documents always serialize")
    }

    pub fn to_matrices(&self) -> Result<Vec<CMatrix>> {
        if self.operators.is_empty() {
            return Err(Error::Format("no Kraus operators".into()));
        }
        self.operators.iter().map(MatrixDocument::to_matrix).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{random_state, rng_from_seed};

    #[test]
    fn round_trip_is_exact() {
        let mut rng = rng_from_seed(4);
        let shape = SubsystemShape::new(vec![2, 3], vec!["A", "B"]).unwrap();
        let rho = random_state(shape, 4, &mut rng).unwrap();
        let text = MatrixDocument::from_density(&rho).to_json();
        let back = MatrixDocument::parse(&text).unwrap().to_density().unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn rejects_non_square_and_inconsistent() {
        let doc = MatrixDocument::parse(r#"{"dims":[2],"re":[[1,0,0],[0,0,0]],"im":[[0,0,0],[0,0,0]]}"#).unwrap();
        assert!(matches!(doc.to_density(), Err(Error::NotSquare { .. })));

        let doc = MatrixDocument::parse(r#"{"dims":[3],"re":[[1,0],[0,0]],"im":[[0,0],[0,0]]}"#).unwrap();
        assert!(matches!(doc.to_density(), Err(Error::Format(_))));

        let doc = MatrixDocument::parse(r#"{"dims":[2],"re":[[1,0],[0,0]],"im":[[0,0]]}"#).unwrap();
        assert!(matches!(doc.to_density(), Err(Error::Format(_))));

        let doc = MatrixDocument::parse(r#"{"dims":[2],"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#).unwrap();
        assert!(matches!(doc.to_matrix(), Err(Error::Format(_))));

        let doc = MatrixDocument::parse(r#"{"re":[[1,0],[0,0]],"im":[[0,0],[0,0]]}"#).unwrap();
        assert!(doc.to_density().is_err());
        assert!(doc.to_matrix().is_ok());
    }

    #[test]
    fn default_labels_when_omitted() {
        let doc = MatrixDocument::parse(r#"{"dims":[2,2],"re":[[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#).unwrap();
        let rho = doc.to_density().unwrap();
        assert_eq!(rho.shape().labels(), &["A".to_string(), "B".to_string()]);
    }
}
