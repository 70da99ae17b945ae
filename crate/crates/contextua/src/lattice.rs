//! Closed subspaces of a finite-dimensional space, kept in a canonical
//! column-echelon basis so that structural equality decides subspace equality,
//! together with the lattice operations meet, join, and orthocomplement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{check_dim, projector_onto, Mat, Vect};

/// A subspace stored as an ambient dimension plus a canonical basis matrix.
///
/// The basis columns are in reduced column-echelon form: each pivot entry is
/// 1, pivot coordinates vanish in every other column, and columns are ordered
/// by pivot row. Two `Subspace` values are equal exactly when they describe
/// the same subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    dim: usize,
    basis: Mat,
}

impl Subspace {
    /// Span of arbitrary vectors; dependent and zero vectors are tolerated
    /// and reduced away.
    pub fn span(dim: usize, vectors: &[Vect]) -> Result<Self> {
        for v in vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        let rows = Mat::from_rows(vectors)?;
        Ok(Subspace::from_row_space(dim, &rows))
    }

    /// Canonical basis of the row space of `rows`, stored as columns.
    fn from_row_space(dim: usize, rows: &Mat) -> Self {
        let (r, pivots) = rows.rref();
        let basis_rows: Vec<Vect> = (0..pivots.len()).map(|i| r.row(i)).collect();
        let basis = if basis_rows.is_empty() {
            Mat::zero(dim, 0)
        } else {
            Mat::from_rows(&basis_rows).unwrap().transpose()
        };
        Subspace { dim, basis }
    }

    pub fn zero(dim: usize) -> Self {
        Subspace {
            dim,
            basis: Mat::zero(dim, 0),
        }
    }

    pub fn full(dim: usize) -> Self {
        Subspace {
            dim,
            basis: Mat::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
    }

    /// Canonical basis matrix, one column per basis vector.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vect> {
        self.basis.col_vectors()
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Containment: true when every basis vector of `self` lies in `other`.
    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        self.check_same_ambient(other)?;
        let mut vectors = other.basis_vectors();
        vectors.extend(self.basis_vectors());
        let joined = Mat::from_rows(&vectors)?;
        Ok(joined.rank() == other.rank())
    }

    /// Intersection, computed from the kernel of the stacked basis system.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.dim));
        }
        let mut cols = self.basis_vectors();
        cols.extend(other.basis_vectors());
        let stacked = Mat::from_cols(&cols)?;
        let p = self.rank();
        let mut spanning = Vec::new();
        for k in stacked.kernel() {
            // A kernel element (x, y) satisfies B_self x = -B_other y, so
            // B_self x lies in both subspaces.
            let mut w = Vect::zero(self.dim);
            for j in 0..p {
                w = w.add(&self.basis.col(j).scale(k.get(j)))?;
            }
            spanning.push(w);
        }
        Subspace::span(self.dim, &spanning)
    }

    /// Span of the union.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Subspace::span(self.dim, &vectors)
    }

    /// Orthocomplement: the kernel of the conjugate transpose of the basis.
    pub fn ortho(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.dim);
        }
        let kernel = self.basis.conj_transpose().kernel();
        Subspace::span(self.dim, &kernel).expect("kernel vectors share the ambient dimension")
    }

    /// Column space of an exact orthogonal projector. The matrix must be
    /// Hermitian and idempotent.
    pub fn from_projector(m: &Mat) -> Result<Subspace> {
        if m.rows() != m.cols() {
            return Err(Error::domain("projector must be square"));
        }
        if !m.is_hermitian() {
            return Err(Error::domain("projector must equal its conjugate transpose"));
        }
        if m.mul(m)? != *m {
            return Err(Error::domain("projector must be idempotent"));
        }
        Subspace::span(m.rows(), &m.col_vectors())
    }

    /// Exact orthogonal projector onto this subspace.
    pub fn to_projector(&self) -> Mat {
        if self.is_zero() {
            return Mat::zero(self.dim, self.dim);
        }
        projector_onto(&self.basis_vectors()).expect("canonical basis is independent")
    }

    pub fn to_file(&self) -> SubspaceFile {
        SubspaceFile {
            dim: self.dim,
            basis: self
                .basis_vectors()
                .iter()
                .map(|v| v.entries().to_vec())
                .collect(),
        }
    }

    /// Loads a subspace from its file form, re-canonicalizing the basis and
    /// enforcing the dimension cap.
    pub fn from_file(f: &SubspaceFile) -> Result<Subspace> {
        check_dim(f.dim)?;
        let vectors: Vec<Vect> = f.basis.iter().map(|v| Vect::new(v.clone())).collect();
        Subspace::span(f.dim, &vectors)
    }
}

/// One-dimensional subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ray(Subspace);

impl Ray {
    pub fn new(v: &Vect) -> Result<Ray> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Ray(Subspace::span(v.dim(), std::slice::from_ref(v))?))
    }

    pub fn from_subspace(s: Subspace) -> Result<Ray> {
        if s.rank() != 1 {
            return Err(Error::domain(format!(
                "expected a rank-1 subspace, found rank {}",
                s.rank()
            )));
        }
        Ok(Ray(s))
    }

    pub fn as_subspace(&self) -> &Subspace {
        &self.0
    }

    pub fn into_subspace(self) -> Subspace {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// The canonical direction vector.
    pub fn vector(&self) -> Vect {
        self.0.basis.col(0)
    }
}

/// Interchange form: ambient dimension plus basis columns as inner arrays of
/// canonical scalar strings. Any spanning set is accepted on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceFile {
    pub dim: usize,
    pub basis: Vec<Vec<crate::exactlin::Scalar>>,
}
