//! Quadratic-form bookkeeping on finite coordinate spaces: the bilinear
//! pairing (v|w) = f(v+w) − f(v) − f(w), orthogonal complements, and
//! canonical subspaces.
//!
//! Subspaces are stored as reduced row-echelon bases, so equal subspaces
//! compare equal structurally and every downstream computation that picks a
//! basis is deterministic.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{vec_is_zero, vec_scale, vec_sub, Matrix};
use crate::scalar::Scalar;
use crate::MAX_GENERATORS;

/// A coordinate space with a diagonal quadratic form f(v) = Σ diag[i]·v_i².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    diag: Vec<Scalar>,
}

impl QuadraticSpace {
    pub fn orthonormal(n: usize) -> Result<QuadraticSpace> {
        QuadraticSpace::with_diag(vec![Scalar::one(); n])
    }

    pub fn with_diag(diag: Vec<Scalar>) -> Result<QuadraticSpace> {
        if diag.len() > MAX_GENERATORS {
            return Err(Error::GeneratorCap {
                n: diag.len(),
                max: MAX_GENERATORS,
            });
        }
        if let Some(index) = diag.iter().position(Scalar::is_zero) {
            return Err(Error::DegenerateForm { index });
        }
        Ok(QuadraticSpace { diag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Scalar] {
        &self.diag
    }

    pub fn is_orthonormal(&self) -> bool {
        self.diag.iter().all(Scalar::is_one)
    }

    /// f(v) = Σ diag[i]·v_i².
    pub fn quadratic(&self, v: &[Scalar]) -> Result<Scalar> {
        self.check_dim(v)?;
        Ok(v.iter()
            .zip(&self.diag)
            .map(|(x, d)| &(x * x) * d)
            .sum())
    }

    /// (v|w) = f(v+w) − f(v) − f(w), which for a diagonal form collapses to
    /// Σ 2·diag[i]·v_i·w_i. Note (v|v) = 2f(v).
    pub fn bilinear(&self, v: &[Scalar], w: &[Scalar]) -> Result<Scalar> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        let two = Scalar::from_int(2);
        Ok(v.iter()
            .zip(w)
            .zip(&self.diag)
            .map(|((x, y), d)| &(&two * d) * &(x * y))
            .sum())
    }

    /// Gram matrix of the bilinear form on the given vectors.
    pub fn gram(&self, vectors: &[Vec<Scalar>]) -> Result<Matrix> {
        let k = vectors.len();
        let mut g = Matrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                g.set(i, j, self.bilinear(&vectors[i], &vectors[j])?);
            }
        }
        Ok(g)
    }

    /// {v : (v|u) = 0 for all u ∈ U}. For a nondegenerate ambient form,
    /// dim U + dim U^⊥ = n.
    pub fn ortho_complement(&self, u: &Subspace) -> Result<Subspace> {
        if u.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: u.n(),
            });
        }
        if u.dim() == 0 {
            return Ok(Subspace::full(self.n()));
        }
        // one constraint row per basis vector: Σ_i 2·diag[i]·u_i·x_i = 0
        let two = Scalar::from_int(2);
        let constraints = Matrix::from_rows(
            u.basis()
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&self.diag)
                        .map(|(ui, d)| &(&two * d) * ui)
                        .collect()
                })
                .collect(),
        )?;
        Subspace::from_spanning(self.n(), constraints.nullspace())
    }

    /// True iff the Gram determinant of U's basis is nonzero (the form
    /// restricted to U is nondegenerate). The zero subspace passes vacuously.
    pub fn is_nondegenerate_on(&self, u: &Subspace) -> Result<bool> {
        Ok(!self.gram(u.basis())?.det()?.is_zero())
    }

    /// The radical U ∩ U^⊥ of the restricted form.
    pub fn radical(&self, u: &Subspace) -> Result<Subspace> {
        u.intersect(&self.ortho_complement(u)?)
    }

    fn check_dim(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// A subspace of F^n held in canonical reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Subspace {
        Subspace {
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Subspace {
        Subspace {
            n,
            basis: (0..n).map(|i| crate::linalg::unit_vec(n, i)).collect(),
            pivots: (0..n).collect(),
        }
    }

    /// Canonicalizes an arbitrary spanning set (dependent or unordered input
    /// is fine).
    pub fn from_spanning(n: usize, vectors: Vec<Vec<Scalar>>) -> Result<Subspace> {
        for v in &vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let reduced = Matrix::from_rows(vectors)?.rref();
        let rank = reduced.pivots.len();
        let basis = (0..rank).map(|i| reduced.mat.row(i).to_vec()).collect();
        Ok(Subspace {
            n,
            basis,
            pivots: reduced.pivots,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Writes `v` in the echelon basis, or `None` when v ∉ U. Because each
    /// basis row carries a 1 in its pivot column and 0 in the others, the
    /// candidate coefficients are just v's pivot coordinates.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.n {
            return None;
        }
        let coeffs: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rem = v.to_vec();
        for (c, row) in coeffs.iter().zip(&self.basis) {
            rem = vec_sub(&rem, &vec_scale(c, row));
        }
        vec_is_zero(&rem).then_some(coeffs)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.express(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.n, vectors)
    }

    /// Intersection via the kernel of [Uᵀ | −Wᵀ]: a kernel vector's U-part
    /// coefficients name an element lying in both spans.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.n));
        }
        let du = self.dim();
        let stacked = Matrix::from_fn(self.n, du + other.dim(), |i, j| {
            if j < du {
                self.basis[j][i].clone()
            } else {
                -&other.basis[j - du][i]
            }
        });
        let mut vectors = Vec::new();
        for kernel_vec in stacked.nullspace() {
            let mut v = vec![Scalar::zero(); self.n];
            for (j, c) in kernel_vec[..du].iter().enumerate() {
                v = crate::linalg::vec_add(&v, &vec_scale(c, &self.basis[j]));
            }
            vectors.push(v);
        }
        Subspace::from_spanning(self.n, vectors)
    }

    /// The deterministic complement spanned by the standard vectors at the
    /// non-pivot columns. Any u ∈ U with zero pivot coordinates is zero, so
    /// the two spans intersect trivially and dimensions add up to n.
    pub fn pivot_complement(&self) -> Subspace {
        let free: Vec<usize> = (0..self.n).filter(|i| !self.pivots.contains(i)).collect();
        Subspace {
            n: self.n,
            basis: free.iter().map(|&i| crate::linalg::unit_vec(self.n, i)).collect(),
            pivots: free,
        }
    }

    /// True iff `self ⊕ other` is the whole space.
    pub fn is_complement_of(&self, other: &Subspace) -> Result<bool> {
        Ok(self.dim() + other.dim() == self.n && self.sum(other)?.dim() == self.n)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.basis.len()))?;
        for row in &self.basis {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}
