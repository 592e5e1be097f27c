//! Dense exact linear algebra over [`Scalar`]: row reduction, determinants,
//! linear solves, and nullspaces. Everything is Gaussian elimination with
//! exact arithmetic — no pivot-magnitude games, just the first nonzero entry,
//! which also makes every result deterministic.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Scalar>,
}

/// Result of full row reduction: the reduced row-echelon form plus the pivot
/// column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub mat: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Matrix {
        Matrix {
            nrows,
            ncols,
            data: vec![Scalar::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds from row vectors; all rows must share one length. An empty row
    /// list gives the 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { nrows, ncols, data })
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zero(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.ncols.max(1)).take(self.nrows)
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.nrows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ncols, self.nrows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: rhs.nrows,
            });
        }
        Ok(Matrix::from_fn(self.nrows, rhs.ncols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.ncols {
                acc = &acc + &(self.at(i, k) * rhs.at(k, j));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if self.ncols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: v.len(),
            });
        }
        Ok((0..self.nrows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.ncols {
                    acc = &acc + &(self.at(i, k) * &v[k]);
                }
                acc
            })
            .collect())
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows * self.ncols,
                got: rhs.nrows * rhs.ncols,
            });
        }
        Ok(Matrix::from_fn(self.nrows, self.ncols, |i, j| {
            self.at(i, j) - rhs.at(i, j)
        }))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix::from_fn(self.nrows, self.ncols, |i, j| self.at(i, j) * s)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn augment(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.nrows != rhs.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: rhs.nrows,
            });
        }
        Ok(Matrix::from_fn(self.nrows, self.ncols + rhs.ncols, |i, j| {
            if j < self.ncols {
                self.at(i, j).clone()
            } else {
                rhs.at(i, j - self.ncols).clone()
            }
        }))
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols && *self == Matrix::identity(self.nrows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Full Gauss–Jordan reduction. Pivot choice is the first row with a
    /// nonzero entry in the current column, so the output is deterministic.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.ncols {
            if r == m.nrows {
                break;
            }
            let Some(p) = (r..m.nrows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.at(r, c).inv().expect("pivot is nonzero");
            m.scale_row(r, &inv);
            for i in 0..m.nrows {
                if i != r && !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone();
                    m.row_sub_scaled(i, r, &factor);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { mat: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Determinant via triangularization; errors on non-square input.
    pub fn det(&self) -> Result<Scalar> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: self.ncols,
            });
        }
        let n = self.nrows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m.at(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if !m.at(i, c).is_zero() {
                    let factor = m.at(i, c) * &inv;
                    m.row_sub_scaled(i, c, &factor);
                }
            }
        }
        Ok(det)
    }

    /// One solution of `self · x = b` (free variables set to zero), or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if self.nrows != b.len() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: b.len(),
            });
        }
        let rhs = Matrix::from_fn(self.nrows, 1, |i, _| b[i].clone());
        let reduced = self.augment(&rhs)?.rref();
        if reduced.pivots.last() == Some(&self.ncols) {
            return Ok(None); // a pivot in the constants column: inconsistent
        }
        let mut x = vec![Scalar::zero(); self.ncols];
        for (row, &col) in reduced.pivots.iter().enumerate() {
            x[col] = reduced.mat.at(row, self.ncols).clone();
        }
        Ok(Some(x))
    }

    /// Canonical nullspace basis read off the RREF: one vector per free
    /// column, with a 1 in the free slot and the negated column entries in
    /// the pivot slots.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let Echelon { mat, pivots } = self.rref();
        let pivot_set: Vec<usize> = pivots.clone();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = Scalar::one();
            for (row, &pc) in pivot_set.iter().enumerate() {
                v[pc] = -mat.at(row, free);
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: &Scalar) {
        for j in 0..self.ncols {
            let v = self.at(i, j) * s;
            self.set(i, j, v);
        }
    }

    /// `row[i] -= factor * row[src]`.
    fn row_sub_scaled(&mut self, i: usize, src: usize, factor: &Scalar) {
        for j in 0..self.ncols {
            let v = self.at(i, j) - &(self.at(src, j) * factor);
            self.set(i, j, v);
        }
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(s: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| s * x).collect()
}

/// Plain coordinate dot product Σ aᵢbᵢ (no form weights — see
/// `quadratic::bilinear` for the geometric pairing).
pub fn vec_dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn unit_vec(n: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[j] = Scalar::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_collapses_dependent_rows() {
        let e = m(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(e.pivots, vec![0]);
        assert_eq!(e.mat.row(0), &[Scalar::from_int(1), Scalar::from_int(2)]);
        assert!(e.mat.row(1).iter().all(Scalar::is_zero));
    }

    #[test]
    fn rref_is_idempotent() {
        let a = m(&[&[2, 1, 0], &[1, -1, 3], &[3, 0, 3]]);
        let once = a.rref();
        let twice = once.mat.rref();
        assert_eq!(once.mat, twice.mat);
        assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[0, -1], &[1, 0]]).det().unwrap(), Scalar::from_int(1));
        assert_eq!(m(&[&[1, 1], &[1, -1]]).det().unwrap(), Scalar::from_int(-2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), Scalar::zero());
        let mi = Matrix::from_rows(vec![vec![Scalar::i()]]).unwrap();
        assert_eq!(mi.det().unwrap(), Scalar::i());
        // 3x3 with a swap forced on the first column
        assert_eq!(
            m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).det().unwrap(),
            Scalar::from_int(-1)
        );
    }

    #[test]
    fn rational_rotation_is_orthogonal() {
        let b = Matrix::from_rows(vec![
            vec![Scalar::from_ratio(3, 5), Scalar::from_ratio(-4, 5)],
            vec![Scalar::from_ratio(4, 5), Scalar::from_ratio(3, 5)],
        ])
        .unwrap();
        assert!(b.transpose().mul(&b).unwrap().is_identity());
        assert_eq!(b.det().unwrap(), Scalar::one());
    }

    #[test]
    fn solve_and_inconsistency() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = a
            .solve(&[Scalar::from_int(3), Scalar::from_int(1)])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![Scalar::from_int(2), Scalar::from_int(1)]);

        let bad = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(
            bad.solve(&[Scalar::zero(), Scalar::one()]).unwrap(),
            None
        );

        // underdetermined: free variable pinned to zero
        let wide = m(&[&[1, 1]]);
        let x = wide.solve(&[Scalar::from_int(2)]).unwrap().unwrap();
        assert_eq!(x, vec![Scalar::from_int(2), Scalar::zero()]);
    }

    #[test]
    fn nullspace_is_canonical_and_annihilated() {
        let a = m(&[&[1, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns, vec![vec![Scalar::from_int(-1), Scalar::from_int(1)]]);
        for v in &ns {
            assert!(vec_is_zero(&a.mul_vec(v).unwrap()));
        }
        assert!(Matrix::identity(4).nullspace().is_empty());

        let b = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = b.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(vec_is_zero(&b.mul_vec(v).unwrap()));
        }
    }

    #[test]
    fn mul_transpose_identities() {
        let a = m(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(a.transpose().transpose(), a);
        let i3 = Matrix::identity(3);
        assert_eq!(i3.mul(&a).unwrap(), a);
        let prod = a.transpose().mul(&a).unwrap();
        assert_eq!(prod.at(0, 0), &Scalar::from_int(35));
        assert_eq!(prod.at(0, 1), &Scalar::from_int(44));
        assert_eq!(prod.at(1, 1), &Scalar::from_int(56));
    }

    #[test]
    fn rank_with_gaussian_entries() {
        let a = Matrix::from_rows(vec![
            vec![Scalar::one(), Scalar::i()],
            vec![Scalar::i(), -Scalar::one()],
        ])
        .unwrap();
        // second row = i · first row, so rank 1 despite nonzero entries
        assert_eq!(a.rank(), 1);
        assert_eq!(a.det().unwrap(), Scalar::zero());
    }

    #[test]
    fn empty_matrix_edge_cases() {
        let e = Matrix::zero(0, 0);
        assert_eq!(e.rank(), 0);
        assert_eq!(e.det().unwrap(), Scalar::one());
        assert!(e.is_identity());
    }

    #[test]
    fn scale_and_sub() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let two = a.scale(&Scalar::from_int(2));
        assert_eq!(two.at(1, 0), &Scalar::from_int(6));
        assert!(two.sub(&a).unwrap().sub(&a).unwrap().is_zero());
    }
}
