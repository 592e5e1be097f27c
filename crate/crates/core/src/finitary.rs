//! The block+tail model of orthogonal transformations of the
//! infinite-dimensional space: an m×m orthogonal block on the first
//! coordinates and a global sign on every coordinate beyond.
//!
//! The model covers exactly the transformations for which the innerness
//! question has nontrivial content: tail +1 means the fixed space V(1) has
//! finite codimension, tail −1 means V(−1) does. This module computes
//! eigenspaces and quotient determinants for the criterion, and extracts the
//! even-dimensional nondegenerate invariant core that the witness
//! construction lives in.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{vec_add, vec_scale, vec_sub, Matrix};
use crate::quadratic::{QuadraticSpace, Subspace};
use crate::scalar::Scalar;
use crate::MAX_GENERATORS;

/// A sign ±1: the tail action, and also the eigenvalue selector α.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn scalar(self) -> Scalar {
        match self {
            Sign::Plus => Scalar::one(),
            Sign::Minus => Scalar::from_int(-1),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "+1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!(
                "tail sign must be \"+1\" or \"-1\", got `{other}`"
            ))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Sign, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An orthogonal transformation in the block+tail model. The block satisfies
/// BᵀB = I for the orthonormal form (plain transpose — the form is symmetric,
/// not hermitian), which is exactly f(φ(v)) = f(v) on the block span.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitaryOrthogonal {
    m: usize,
    block: Matrix,
    tail: Sign,
}

/// Eigenspace report for α ∈ {+1, −1}: the in-block eigenspace, the (finite)
/// codimension of V(α) in V, and the determinant of the action induced on
/// the quotient V/V(α).
#[derive(Clone, Debug)]
pub struct EigenData {
    pub eigenspace: Subspace,
    pub codim: usize,
    pub quotient_det: Scalar,
}

/// Wire format: `{"block": [[scalar-string,…],…], "tail": "+1"|"-1"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinitaryInput {
    pub block: Vec<Vec<Scalar>>,
    pub tail: Sign,
}

impl FinitaryInput {
    /// Validates squareness and orthogonality and builds the transformation.
    pub fn build(self) -> Result<FinitaryOrthogonal> {
        FinitaryOrthogonal::new(Matrix::from_rows(self.block)?, self.tail)
    }
}

impl From<&FinitaryOrthogonal> for FinitaryInput {
    fn from(map: &FinitaryOrthogonal) -> FinitaryInput {
        FinitaryInput {
            block: map.block.rows().map(|r| r.to_vec()).collect(),
            tail: map.tail,
        }
    }
}

impl FinitaryOrthogonal {
    /// Checks the block is square, within the generator cap, and orthogonal.
    pub fn new(block: Matrix, tail: Sign) -> Result<FinitaryOrthogonal> {
        let map = FinitaryOrthogonal::new_unvalidated(block, tail)?;
        if !map.is_orthogonal() {
            return Err(Error::NotOrthogonal);
        }
        Ok(map)
    }

    /// Skips the orthogonality check (for `check-orthogonal` style probes and
    /// deliberately corrupted test inputs); shape constraints still apply.
    pub fn new_unvalidated(block: Matrix, tail: Sign) -> Result<FinitaryOrthogonal> {
        if block.nrows() != block.ncols() {
            return Err(Error::DimensionMismatch {
                expected: block.nrows(),
                got: block.ncols(),
            });
        }
        let m = block.nrows();
        if m > MAX_GENERATORS {
            return Err(Error::GeneratorCap {
                n: m,
                max: MAX_GENERATORS,
            });
        }
        Ok(FinitaryOrthogonal { m, block, tail })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, tail: Sign) -> Result<FinitaryOrthogonal> {
        FinitaryOrthogonal::new(Matrix::from_rows(rows)?, tail)
    }

    /// The global identity on the trivial block.
    pub fn identity(tail_window: usize) -> Result<FinitaryOrthogonal> {
        FinitaryOrthogonal::new(Matrix::identity(tail_window), Sign::Plus)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn block(&self) -> &Matrix {
        &self.block
    }

    pub fn tail(&self) -> Sign {
        self.tail
    }

    /// BᵀB = I exactly.
    pub fn is_orthogonal(&self) -> bool {
        self.block
            .transpose()
            .mul(&self.block)
            .map(|p| p.is_identity())
            .unwrap_or(false)
    }

    /// φ = Id on all of V.
    pub fn is_identity(&self) -> bool {
        self.tail == Sign::Plus && self.block.is_identity()
    }

    /// φ = −Id on all of V.
    pub fn is_minus_identity(&self) -> bool {
        self.tail == Sign::Minus
            && self
                .block
                .sub(&Matrix::identity(self.m).scale(&Scalar::from_int(-1)))
                .map(|d| d.is_zero())
                .unwrap_or(false)
    }

    /// The n×n matrix of φ restricted to the first n coordinates: the block
    /// in the top-left corner, the tail sign on the rest of the diagonal.
    pub fn embedded_matrix(&self, n: usize) -> Result<Matrix> {
        if n < self.m {
            return Err(Error::WindowTooSmall {
                n,
                window: self.m,
            });
        }
        if n > MAX_GENERATORS {
            return Err(Error::GeneratorCap {
                n,
                max: MAX_GENERATORS,
            });
        }
        let tail = self.tail.scalar();
        Ok(Matrix::from_fn(n, n, |i, j| {
            if i < self.m && j < self.m {
                self.block.at(i, j).clone()
            } else if i == j {
                tail.clone()
            } else {
                Scalar::zero()
            }
        }))
    }

    /// φ(v) for a coordinate vector in any window of length ≥ m.
    pub fn apply_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() < self.m {
            return Err(Error::WindowTooSmall {
                n: v.len(),
                window: self.m,
            });
        }
        let mut out = Vec::with_capacity(v.len());
        for i in 0..self.m {
            let mut acc = Scalar::zero();
            for j in 0..self.m {
                acc = &acc + &(self.block.at(i, j) * &v[j]);
            }
            out.push(acc);
        }
        let tail = self.tail.scalar();
        for x in &v[self.m..] {
            out.push(&tail * x);
        }
        Ok(out)
    }

    /// Column i of the embedded matrix: the image of the i-th generator.
    pub fn image_of_generator(&self, i: usize, n: usize) -> Result<Vec<Scalar>> {
        if i >= n {
            return Err(Error::DimensionMismatch { expected: n, got: i + 1 });
        }
        self.apply_vec(&crate::linalg::unit_vec(n.max(self.m), i))
            .map(|mut v| {
                v.truncate(n.max(self.m));
                v
            })
    }

    /// φ⁻¹; for an orthogonal block this is the transpose.
    pub fn inverse(&self) -> FinitaryOrthogonal {
        FinitaryOrthogonal {
            m: self.m,
            block: self.block.transpose(),
            tail: self.tail,
        }
    }

    /// φ∘ψ in a common window; tails multiply.
    pub fn compose(&self, other: &FinitaryOrthogonal) -> Result<FinitaryOrthogonal> {
        let m = self.m.max(other.m);
        let product = self.embedded_matrix(m)?.mul(&other.embedded_matrix(m)?)?;
        let composed = FinitaryOrthogonal {
            m,
            block: product,
            tail: self.tail.product(other.tail),
        };
        debug_assert!(composed.is_orthogonal());
        Ok(composed)
    }

    /// φ(S) as a subspace of the same window.
    pub fn map_subspace(&self, s: &Subspace) -> Result<Subspace> {
        let mapped = s
            .basis()
            .iter()
            .map(|v| self.apply_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::from_spanning(s.n(), mapped)
    }

    /// Smallest φ-invariant subspace containing `s` (within s's window).
    pub fn phi_closure(&self, s: &Subspace) -> Result<Subspace> {
        let mut u = s.clone();
        loop {
            let grown = u.sum(&self.map_subspace(&u)?)?;
            if grown.dim() == u.dim() {
                return Ok(grown);
            }
            u = grown;
        }
    }

    /// ker(φ − α·Id) restricted to the first `window` coordinates.
    pub fn window_eigenspace(&self, alpha: Sign, window: usize) -> Result<Subspace> {
        let shifted = self
            .embedded_matrix(window)?
            .sub(&Matrix::identity(window).scale(&alpha.scalar()))?;
        Subspace::from_spanning(window, shifted.nullspace())
    }

    /// Eigenspace, codimension, and quotient determinant for α. Defined only
    /// when tail = α — otherwise V(α) misses every tail coordinate and has
    /// infinite codimension, which the model cannot quotient by.
    pub fn eigen_data(&self, alpha: Sign) -> Result<EigenData> {
        if self.tail != alpha {
            return Err(Error::InfiniteCodimension);
        }
        let eigenspace = self.window_eigenspace(alpha, self.m)?;
        let complement = eigenspace.pivot_complement();
        let quotient_det = self.induced_quotient_det(alpha, &complement)?;
        Ok(EigenData {
            codim: self.m - eigenspace.dim(),
            eigenspace,
            quotient_det,
        })
    }

    /// Determinant of the action φ induces on block-span/V(α), computed in
    /// the basis of the given complement of the eigenspace.
    pub fn induced_quotient_det(&self, alpha: Sign, complement: &Subspace) -> Result<Scalar> {
        if self.tail != alpha {
            return Err(Error::InfiniteCodimension);
        }
        let eigen = self.window_eigenspace(alpha, self.m)?;
        if complement.n() != self.m || !eigen.is_complement_of(complement)? {
            return Err(Error::InvalidComplement);
        }
        let k = complement.dim();
        if k == 0 {
            return Ok(Scalar::one());
        }
        // change-of-basis columns: eigenspace basis then complement basis
        let basis_cols = Matrix::from_fn(self.m, self.m, |i, j| {
            if j < eigen.dim() {
                eigen.basis()[j][i].clone()
            } else {
                complement.basis()[j - eigen.dim()][i].clone()
            }
        });
        let mut induced = Matrix::zero(k, k);
        for (j, c) in complement.basis().iter().enumerate() {
            let image = self.apply_vec(c)?;
            let coords = basis_cols
                .solve(&image)?
                .ok_or_else(|| Error::Internal("complement basis failed to span".into()))?;
            for i in 0..k {
                induced.set(i, j, coords[eigen.dim() + i].clone());
            }
        }
        induced.det()
    }

    /// Self-test that the quotient determinant does not depend on the choice
    /// of complement.
    pub fn quotient_det_independence_check(
        &self,
        alpha: Sign,
        complement_a: &Subspace,
        complement_b: &Subspace,
    ) -> Result<bool> {
        let da = self.induced_quotient_det(alpha, complement_a)?;
        let db = self.induced_quotient_det(alpha, complement_b)?;
        Ok(da == db)
    }

    /// An even-dimensional, nondegenerate, φ-invariant subspace W of a
    /// finite window such that the in-window complement W^⊥ lies inside
    /// V(α), for α = the tail sign. The window may exceed the block by one
    /// fresh coordinate when an odd-dimensional core needs completing.
    ///
    /// Construction: start from the φ-closure of the pivot complement of the
    /// in-block eigenspace (so window = U + V(α) throughout). While the form
    /// degenerates on U, take u in the radical — necessarily an eigenvector —
    /// pair it with an eigenvector v, (u|v) ≠ 0, split off the nondegenerate
    /// plane span(u,v), and project U onto the plane's orthogonal complement.
    /// Finally, if dim U is odd, adjoin one anisotropic vector of U^⊥.
    pub fn invariant_core(&self) -> Result<Subspace> {
        let alpha = self.tail;
        let mut window = self.m;
        let space = QuadraticSpace::orthonormal(window)?;
        let eigen_block = self.window_eigenspace(alpha, window)?;
        let eigen = eigen_block.clone();
        let mut u = self.phi_closure(&eigen_block.pivot_complement())?;

        // V′ = orthogonal complement of the accumulated planes; both the
        // radical pairing pool and the final completion must stay inside it
        let mut plane_vectors: Vec<Vec<Scalar>> = Vec::new();
        let mut prime = Subspace::full(window);

        loop {
            let radical = space.radical(&u)?;
            if radical.is_zero() {
                break;
            }
            let split = radical.basis()[0].clone();
            if !eigen.contains(&split) {
                return Err(Error::Internal(
                    "radical vector escaped the eigenspace".into(),
                ));
            }
            let pool = eigen.intersect(&prime)?;
            let partner = pool
                .basis()
                .iter()
                .find(|v| {
                    space
                        .bilinear(&split, v)
                        .map(|p| !p.is_zero())
                        .unwrap_or(false)
                })
                .cloned()
                .ok_or_else(|| {
                    Error::Internal("no pairing eigenvector inside the window".into())
                })?;

            let projected = u
                .basis()
                .iter()
                .map(|x| project_off_plane(&space, &split, &partner, x))
                .collect::<Result<Vec<_>>>()?;
            let new_u = Subspace::from_spanning(window, projected)?;
            if new_u.dim() >= u.dim() {
                return Err(Error::Internal("plane split failed to shrink U".into()));
            }
            u = new_u;
            plane_vectors.push(split);
            plane_vectors.push(partner);
            let planes = Subspace::from_spanning(window, plane_vectors.clone())?;
            prime = space.ortho_complement(&planes)?;
        }

        if u.dim() % 2 == 1 {
            let perp = space.ortho_complement(&u)?.intersect(&prime)?;
            match anisotropic_vector(&space, &perp)? {
                Some(y) => {
                    u = u.sum(&Subspace::from_spanning(window, vec![y])?)?;
                }
                None => {
                    // the window is exhausted: bring in one fresh tail
                    // coordinate — anisotropic, orthogonal to everything so
                    // far, and an α-eigenvector by the tail action
                    window += 1;
                    if window > MAX_GENERATORS {
                        return Err(Error::GeneratorCap {
                            n: window,
                            max: MAX_GENERATORS,
                        });
                    }
                    for v in &mut plane_vectors {
                        v.push(Scalar::zero());
                    }
                    let padded: Vec<Vec<Scalar>> = u
                        .basis()
                        .iter()
                        .map(|v| {
                            let mut v = v.clone();
                            v.push(Scalar::zero());
                            v
                        })
                        .chain(std::iter::once(crate::linalg::unit_vec(window, window - 1)))
                        .collect();
                    u = Subspace::from_spanning(window, padded)?;
                }
            }
        }

        let mut core_vectors = plane_vectors;
        core_vectors.extend(u.basis().iter().cloned());
        let core = Subspace::from_spanning(window, core_vectors)?;
        self.verify_invariant_core(&core)?;
        Ok(core)
    }

    /// Mechanical check of all four output properties; internal-invariant
    /// error on any violation.
    pub fn verify_invariant_core(&self, w: &Subspace) -> Result<()> {
        let window = w.n();
        let space = QuadraticSpace::orthonormal(window)?;
        if w.dim() % 2 != 0 {
            return Err(Error::Internal("core dimension is odd".into()));
        }
        if !space.is_nondegenerate_on(w)? {
            return Err(Error::Internal("core is degenerate".into()));
        }
        if self.map_subspace(w)? != *w {
            return Err(Error::Internal("core is not invariant".into()));
        }
        let eigen = self.window_eigenspace(self.tail, window)?;
        let perp = space.ortho_complement(w)?;
        if !eigen.contains_subspace(&perp) {
            return Err(Error::Internal(
                "core complement leaves the eigenspace".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for FinitaryOrthogonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitaryOrthogonal(m={}, tail={}, block={:?})", self.m, self.tail, self.block)
    }
}

/// x minus its component in the nondegenerate plane span(a, b).
fn project_off_plane(
    space: &QuadraticSpace,
    a: &[Scalar],
    b: &[Scalar],
    x: &[Scalar],
) -> Result<Vec<Scalar>> {
    let gram = space.gram(&[a.to_vec(), b.to_vec()])?;
    let rhs = vec![space.bilinear(x, a)?, space.bilinear(x, b)?];
    let coeffs = gram
        .solve(&rhs)?
        .ok_or_else(|| Error::Internal("splitting plane is degenerate".into()))?;
    Ok(vec_sub(
        x,
        &vec_add(&vec_scale(&coeffs[0], a), &vec_scale(&coeffs[1], b)),
    ))
}

/// Some vector with (y|y) ≠ 0 in the subspace, or None when the subspace is
/// zero. For a nonzero nondegenerate subspace over a field of characteristic
/// ≠ 2 one always exists among the basis vectors and their pairwise sums.
fn anisotropic_vector(space: &QuadraticSpace, s: &Subspace) -> Result<Option<Vec<Scalar>>> {
    for v in s.basis() {
        if !space.bilinear(v, v)?.is_zero() {
            return Ok(Some(v.clone()));
        }
    }
    for (i, v) in s.basis().iter().enumerate() {
        for w in &s.basis()[i + 1..] {
            let sum = vec_add(v, w);
            if !space.bilinear(&sum, &sum)?.is_zero() {
                return Ok(Some(sum));
            }
        }
    }
    if s.dim() > 0 {
        // all basis vectors and sums isotropic ⟹ the form vanishes on s;
        // callers only probe nondegenerate subspaces, so this is a bug
        return Err(Error::Internal("nondegenerate subspace with no anisotropic vector".into()));
    }
    Ok(None)
}
