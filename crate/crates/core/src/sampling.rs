//! Deterministic sample generators for tests and self-checks.
//!
//! Everything here is driven by a caller-supplied ChaCha8 stream so that any
//! reported failure reproduces from the seed. Orthogonal blocks are built
//! exactly: plane rotations with rational or Gaussian-rational cosine/sine
//! pairs satisfying c² + s² = 1, coordinate reflections, and permutations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clifford::{Blade, Multivector};
use crate::error::Result;
use crate::finitary::{FinitaryOrthogonal, Sign};
use crate::linalg::Matrix;
use crate::scalar::{rat, Rational, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in [lo, hi].
pub fn rng_range(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

/// Rational with numerator in [−max_num, max_num] and denominator in [1, max_den].
pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    let num = rng.random_range(-max_num..=max_num);
    let den = rng.random_range(1..=max_den);
    rat(num, den)
}

/// Small Gaussian rational; both components bounded.
pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(random_rational(rng, 4, 3), random_rational(rng, 4, 3))
}

pub fn random_nonzero_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = random_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(rng)).collect()
}

pub fn random_nonzero_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    loop {
        let v = random_vector(rng, n);
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// Multivector over Cl_n with at most `max_terms` random blades.
pub fn random_multivector(rng: &mut ChaCha8Rng, n: usize, max_terms: usize) -> Multivector {
    assert!(n < 64, "blade sampling needs n < 64");
    let count = rng.random_range(0..=max_terms);
    let terms: Vec<(Blade, Scalar)> = (0..count)
        .map(|_| {
            let bits = rng.random_range(0..(1u64 << n));
            (Blade(bits), random_scalar(rng))
        })
        .collect();
    Multivector::from_terms(n, terms).expect("sampled blades are in range")
}

/// (c, s) with c² + s² = 1: for any nonzero t, c = (t + t⁻¹)/2 and
/// s = (t − t⁻¹)/(2i). Taking t rational yields Gaussian pairs; taking t on
/// the imaginary axis yields real Pythagorean-style pairs.
pub fn rotation_pair_from(t: &Scalar) -> (Scalar, Scalar) {
    let tinv = t.inv().expect("t must be nonzero");
    let half = Scalar::from_ratio(1, 2);
    let c = &(t + &tinv) * &half;
    let two_i = &Scalar::from_int(2) * &Scalar::i();
    let s = &(t - &tinv) * &two_i.inv().unwrap();
    (c, s)
}

/// A few exact real cosine/sine pairs from Pythagorean triples.
pub fn pythagorean_pairs() -> Vec<(Scalar, Scalar)> {
    [(3, 4, 5), (5, 12, 13), (8, 15, 17), (20, 21, 29)]
        .iter()
        .map(|&(a, b, c)| (Scalar::from_ratio(a, c), Scalar::from_ratio(b, c)))
        .collect()
}

/// Random exact rotation pair: either a Pythagorean one or a Gaussian one
/// generated from a random nonzero parameter.
pub fn random_rotation_pair(rng: &mut ChaCha8Rng) -> (Scalar, Scalar) {
    if rng.random::<bool>() {
        let pairs = pythagorean_pairs();
        let (c, s) = &pairs[rng.random_range(0..pairs.len())];
        if rng.random::<bool>() {
            (c.clone(), -s)
        } else {
            (c.clone(), s.clone())
        }
    } else {
        let t = random_nonzero_scalar(rng);
        rotation_pair_from(&t)
    }
}

/// Givens rotation acting in coordinates (p, q) of an m×m identity.
pub fn givens(m: usize, p: usize, q: usize, c: &Scalar, s: &Scalar) -> Matrix {
    assert!(p < m && q < m && p != q);
    let mut g = Matrix::identity(m);
    g.set(p, p, c.clone());
    g.set(q, q, c.clone());
    g.set(p, q, -s);
    g.set(q, p, s.clone());
    g
}

/// Product of `steps` random plane rotations and coordinate reflections: an
/// exactly orthogonal m×m block mixing all coordinates.
pub fn random_orthogonal_block(rng: &mut ChaCha8Rng, m: usize, steps: usize) -> Matrix {
    let mut b = Matrix::identity(m);
    if m == 0 {
        return b;
    }
    if m == 1 {
        return if steps > 0 && rng.random::<bool>() {
            b.scale(&Scalar::from_int(-1))
        } else {
            b
        };
    }
    for _ in 0..steps {
        if rng.random_range(0..4) == 0 {
            // reflection in a coordinate hyperplane
            let j = rng.random_range(0..m);
            let mut r = Matrix::identity(m);
            r.set(j, j, Scalar::from_int(-1));
            b = r.mul(&b).expect("square sizes agree");
        } else {
            let p = rng.random_range(0..m);
            let q = loop {
                let q = rng.random_range(0..m);
                if q != p {
                    break q;
                }
            };
            let (c, s) = random_rotation_pair(rng);
            b = givens(m, p, q, &c, &s).mul(&b).expect("square sizes agree");
        }
    }
    b
}

pub fn random_finitary(
    rng: &mut ChaCha8Rng,
    m: usize,
    steps: usize,
    tail: Sign,
) -> Result<FinitaryOrthogonal> {
    FinitaryOrthogonal::new(random_orthogonal_block(rng, m, steps), tail)
}

/// All m×m signed permutation matrices (m! · 2^m of them).
pub fn signed_permutation_blocks(m: usize) -> Vec<Matrix> {
    let mut perms = Vec::new();
    let mut idx: Vec<usize> = (0..m).collect();
    permutations(&mut idx, 0, &mut perms);
    let mut out = Vec::new();
    for p in &perms {
        for signs in 0..(1u32 << m) {
            let mut mat = Matrix::zero(m, m);
            for (j, &i) in p.iter().enumerate() {
                let v = if signs >> j & 1 == 1 {
                    Scalar::from_int(-1)
                } else {
                    Scalar::one()
                };
                mat.set(i, j, v);
            }
            out.push(mat);
        }
    }
    out
}

fn permutations(idx: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == idx.len() {
        out.push(idx.clone());
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permutations(idx, k + 1, out);
        idx.swap(k, i);
    }
}

/// All m×m orthogonal matrices with entries in {0, ±1, ±i}, found by a
/// column-by-column search: each column must have Σ v_j² = 1 and be
/// orthogonal (plain symmetric product) to all earlier columns.
pub fn small_entry_orthogonal_blocks(m: usize) -> Vec<Matrix> {
    let entries = [
        Scalar::zero(),
        Scalar::one(),
        Scalar::from_int(-1),
        Scalar::i(),
        -&Scalar::i(),
    ];
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    let mut partial: Vec<Scalar> = Vec::new();
    enumerate_unit_columns(&entries, m, &mut partial, &mut columns);

    let dot = |a: &[Scalar], b: &[Scalar]| -> Scalar {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    };

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn assemble(
        columns: &[Vec<Scalar>],
        dot: &dyn Fn(&[Scalar], &[Scalar]) -> Scalar,
        m: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Matrix>,
    ) {
        if chosen.len() == m {
            let mat = Matrix::from_fn(m, m, |i, j| columns[chosen[j]][i].clone());
            out.push(mat);
            return;
        }
        'next: for (ci, col) in columns.iter().enumerate() {
            for &prev in chosen.iter() {
                if !dot(&columns[prev], col).is_zero() {
                    continue 'next;
                }
            }
            chosen.push(ci);
            assemble(columns, dot, m, chosen, out);
            chosen.pop();
        }
    }
    assemble(&columns, &dot, m, &mut chosen, &mut out);
    out
}

fn enumerate_unit_columns(
    entries: &[Scalar],
    m: usize,
    partial: &mut Vec<Scalar>,
    out: &mut Vec<Vec<Scalar>>,
) {
    if partial.len() == m {
        let norm: Scalar = partial.iter().map(|x| x * x).sum();
        if norm.is_one() {
            out.push(partial.clone());
        }
        return;
    }
    for e in entries {
        partial.push(e.clone());
        enumerate_unit_columns(entries, m, partial, out);
        partial.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::QuadraticSpace;

    #[test]
    fn rotation_pairs_lie_on_the_circle() {
        let mut r = rng(7);
        for _ in 0..50 {
            let (c, s) = random_rotation_pair(&mut r);
            assert!((&(&c * &c) + &(&s * &s)).is_one());
        }
        for (c, s) in pythagorean_pairs() {
            assert!((&(&c * &c) + &(&s * &s)).is_one());
        }
    }

    #[test]
    fn random_blocks_are_orthogonal() {
        let mut r = rng(11);
        for m in 1..=5 {
            for _ in 0..10 {
                let b = random_orthogonal_block(&mut r, m, 6);
                assert!(b.transpose().mul(&b).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn random_blocks_preserve_the_form() {
        let mut r = rng(13);
        let space = QuadraticSpace::orthonormal(4).unwrap();
        for _ in 0..20 {
            let b = random_orthogonal_block(&mut r, 4, 5);
            let v = random_vector(&mut r, 4);
            let image = b.mul_vec(&v).unwrap();
            assert_eq!(space.quadratic(&image).unwrap(), space.quadratic(&v).unwrap());
        }
    }

    #[test]
    fn signed_permutation_counts() {
        assert_eq!(signed_permutation_blocks(1).len(), 2);
        assert_eq!(signed_permutation_blocks(2).len(), 8);
        assert_eq!(signed_permutation_blocks(3).len(), 48);
        for b in signed_permutation_blocks(3) {
            assert!(b.transpose().mul(&b).unwrap().is_identity());
        }
    }

    #[test]
    fn small_entry_enumeration_matches_known_counts() {
        // m = 1: only ±1 square to 1 (±i give −1)
        assert_eq!(small_entry_orthogonal_blocks(1).len(), 2);
        let two = small_entry_orthogonal_blocks(2);
        for b in &two {
            assert!(b.transpose().mul(&b).unwrap().is_identity());
        }
        // every signed permutation appears among them
        assert!(two.len() >= signed_permutation_blocks(2).len());
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = random_multivector(&mut rng(42), 5, 6);
        let b = random_multivector(&mut rng(42), 5, 6);
        assert_eq!(a, b);
    }
}
