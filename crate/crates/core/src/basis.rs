//! Product orthonormal bases fixing the incoherence reference frame.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{check_square, kron_all, unitarity_error, CMatrix, MatrixDocument, SubsystemShape};
use crate::tol;

/// A product basis `{|B(k)> = |b_1(k_1)> x ... x |b_N(k_N)>}`.
///
/// `Product` holds one unitary per subsystem whose columns are the local basis
/// kets; `Computational` is the identity on every factor.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalBasisAssignment {
    Computational,
    Product(Vec<CMatrix>),
}

impl LocalBasisAssignment {
    pub fn product(factors: Vec<CMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("product basis needs at least one factor".into()));
        }
        for f in &factors {
            check_square(f)?;
            let err = unitarity_error(f);
            if err > tol::UNITARY {
                return Err(Error::NotUnitary(err));
            }
        }
        Ok(Self::Product(factors))
    }

    pub fn is_computational(&self) -> bool {
        matches!(self, Self::Computational)
    }

    /// Checks factor count and dimensions against `shape`.
    pub fn check_shape(&self, shape: &SubsystemShape) -> Result<()> {
        let Self::Product(factors) = self else {
            return Ok(());
        };
        if factors.len() != shape.len() {
            return Err(Error::InvalidShape(format!(
                "basis has {} factors but the state has {} subsystems",
                factors.len(),
                shape.len()
            )));
        }
        for (f, &d) in factors.iter().zip(shape.dims()) {
            if f.nrows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: f.nrows(),
                });
            }
        }
        Ok(())
    }

    /// Full basis matrix (columns are product kets); `None` for the identity.
    pub fn full_matrix(&self) -> Option<CMatrix> {
        match self {
            Self::Computational => None,
            Self::Product(factors) => Some(kron_all(factors)),
        }
    }

    /// The basis induced on the subsystems at `positions` (ascending).
    pub fn restrict(&self, positions: &[usize]) -> Self {
        match self {
            Self::Computational => Self::Computational,
            Self::Product(factors) => {
                let mut positions = positions.to_vec();
                positions.sort_unstable();
                positions.dedup();
                Self::Product(positions.iter().map(|&p| factors[p].clone()).collect())
            }
        }
    }

    /// Restriction to the subsystems named in `labels`, looked up in `shape`.
    pub fn restrict_to_labels(&self, shape: &SubsystemShape, labels: &[&str]) -> Result<Self> {
        let positions = labels
            .iter()
            .map(|l| shape.position(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.restrict(&positions))
    }

    pub fn to_document(&self) -> BasisDocument {
        match self {
            Self::Computational => BasisDocument::Computational,
            Self::Product(factors) => BasisDocument::Product(
                factors.iter().map(|f| MatrixDocument::from_matrix(f, None)).collect(),
            ),
        }
    }

    pub fn from_document(doc: &BasisDocument) -> Result<Self> {
        match doc {
            BasisDocument::Computational => Ok(Self::Computational),
            BasisDocument::Product(docs) => {
                Self::product(docs.iter().map(MatrixDocument::to_matrix).collect::<Result<_>>()?)
            }
        }
    }
}

/// Serialized form: the string `"computational"` or a list of factor matrices.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisDocument {
    Computational,
    Product(Vec<MatrixDocument>),
}
