//! Extension of an orthogonal transformation φ of the generating space to
//! the automorphism [φ] of the Clifford algebra truncation: each generator
//! v_i maps to the vector φ(v_i), each blade to the ordered product of the
//! images, and the action extends linearly.

use crate::clifford::{Algebra, Multivector};
use crate::error::{Error, Result};
use crate::finitary::FinitaryOrthogonal;
use crate::quadratic::Subspace;
use crate::sampling;
use crate::scalar::Scalar;

/// [φ] on Cl(V_n) for a block+tail map φ with block size ≤ n.
#[derive(Clone, Debug)]
pub struct BogolyubovAction {
    algebra: Algebra,
    map: FinitaryOrthogonal,
    images: Vec<Multivector>,
}

impl BogolyubovAction {
    /// The truncation must cover the block. The map need not be orthogonal —
    /// [φ] is then still a well-defined linear map on the basis of blades,
    /// just not an automorphism, which is what `check_automorphism` detects.
    pub fn new(map: FinitaryOrthogonal, n: usize) -> Result<BogolyubovAction> {
        let matrix = map.embedded_matrix(n)?;
        let algebra = Algebra::orthonormal(n)?;
        let images = (0..n)
            .map(|j| Multivector::from_vector(n, &matrix.col(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(BogolyubovAction { algebra, map, images })
    }

    pub fn n(&self) -> usize {
        self.algebra.n()
    }

    pub fn map(&self) -> &FinitaryOrthogonal {
        &self.map
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// φ(v_i) as a grade-1 multivector.
    pub fn generator_image(&self, i: usize) -> Result<&Multivector> {
        self.images.get(i).ok_or(Error::DimensionMismatch {
            expected: self.n(),
            got: i + 1,
        })
    }

    /// [φ](a): blade-by-blade product of generator images.
    pub fn apply(&self, a: &Multivector) -> Result<Multivector> {
        if a.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: a.n(),
            });
        }
        let mut acc = Multivector::zero(self.n());
        for (blade, coeff) in a.terms() {
            let factors: Vec<Multivector> = blade
                .indices()
                .into_iter()
                .map(|i| self.images[i].clone())
                .collect();
            let image = self.algebra.product(&factors)?;
            acc = &acc + &image.scale(coeff);
        }
        Ok(acc)
    }

    /// Samples random pairs and checks [φ](ab) = [φ](a)[φ](b), plus
    /// [φ](1) = 1 and the quadratic relation [φ](v)² = f(v)·1 on random
    /// vectors. True for every orthogonal map; false witnesses appear
    /// quickly for non-orthogonal ones.
    pub fn check_automorphism(&self, samples: usize) -> Result<bool> {
        let n = self.n();
        let one = Multivector::one(n);
        if self.apply(&one)? != one {
            return Ok(false);
        }
        let mut rng = sampling::rng(0x0b0_601);
        for _ in 0..samples {
            let a = sampling::random_multivector(&mut rng, n, 4);
            let b = sampling::random_multivector(&mut rng, n, 4);
            let lhs = self.apply(&self.algebra.mul(&a, &b)?)?;
            let rhs = self.algebra.mul(&self.apply(&a)?, &self.apply(&b)?)?;
            if lhs != rhs {
                return Ok(false);
            }
            let v = sampling::random_vector(&mut rng, n);
            let vm = self.apply(&Multivector::from_vector(n, &v)?)?;
            let square = self.algebra.mul(&vm, &vm)?;
            let expected = Multivector::scalar(
                n,
                v.iter().map(|c| c * c).sum::<Scalar>(),
            );
            if square != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The implication "if [φ] fixes v₁v₂ then span(v₁, v₂) is φ-invariant",
    /// checked mechanically. Vacuously true when the product moves.
    pub fn lemma3_witness_check(&self, v1: &[Scalar], v2: &[Scalar]) -> Result<bool> {
        let n = self.n();
        let span = Subspace::from_spanning(n, vec![v1.to_vec(), v2.to_vec()])?;
        if span.dim() != 2 {
            return Err(Error::DependentVectors);
        }
        let product = self.algebra.mul(
            &Multivector::from_vector(n, v1)?,
            &Multivector::from_vector(n, v2)?,
        )?;
        if self.apply(&product)? != product {
            return Ok(true);
        }
        let im1 = self.map.apply_vec(&pad_to(v1, self.map.m().max(n)))?;
        let im2 = self.map.apply_vec(&pad_to(v2, self.map.m().max(n)))?;
        Ok(span.contains(&im1[..n]) && span.contains(&im2[..n]))
    }
}

fn pad_to(v: &[Scalar], len: usize) -> Vec<Scalar> {
    let mut out = v.to_vec();
    while out.len() < len {
        out.push(Scalar::zero());
    }
    out
}
