//! Is the automorphism [φ] inner? Two independent routes answer it:
//!
//! * the determinant criterion — φ with tail +1 gives an inner [φ] exactly
//!   when φ = Id or det(φ|_{V/V(1)}) = 1, and φ with tail −1 exactly when
//!   φ ≠ −Id and (−1)^k·det(φ|_{V/V(−1)}) = −1 for k = dim V/V(−1);
//! * the witness solver — an exact linear solve for an invertible element x
//!   of pure parity with x·v·x⁻¹ = φ(v) on a finite window.
//!
//! `decide` runs both and reports whether they agree. The module also
//! computes centralizers of generator subalgebras and checks the tensor
//! factorization Cl(V) ≅ Cl(V′) ⊗ Z(Cl(V′)) that the criterion's proof
//! pivots on.
//!
//! The parity restriction is what makes the finite solve faithful to the
//! infinite-dimensional question: a pure even x commutes with every
//! generator outside its window (so it realizes a +1 tail), a pure odd x
//! anticommutes with them (realizing a −1 tail), and any mixed-parity
//! conjugator would move some untouched tail generator off its line.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bogolyubov::BogolyubovAction;
use crate::clifford::{parity_basis, Algebra, Blade, Multivector, Parity};
use crate::error::{Error, Result};
use crate::finitary::{FinitaryOrthogonal, Sign};
use crate::linalg::Matrix;
use crate::quadratic::Subspace;
use crate::scalar::Scalar;

/// Which half of the criterion applies: tail +1 (φ finitary over the fixed
/// space) or tail −1 (−φ finitary over it).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    PhiFinitary,
    MinusPhiFinitary,
}

impl Branch {
    pub fn of(tail: Sign) -> Branch {
        match tail {
            Sign::Plus => Branch::PhiFinitary,
            Sign::Minus => Branch::MinusPhiFinitary,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::PhiFinitary => "phi-finitary",
            Branch::MinusPhiFinitary => "minus-phi-finitary",
        }
    }
}

/// Inputs the criterion actually used for its verdict.
#[derive(Clone, Debug)]
pub struct CriterionReason {
    pub branch: Branch,
    /// Codimension of the relevant eigenspace V(α), α = tail sign.
    pub k: usize,
    /// det(φ|_{V/V(α)}).
    pub quotient_det: Scalar,
}

/// Theorem-side route: decides innerness from the quotient determinant.
pub fn criterion(map: &FinitaryOrthogonal) -> Result<(bool, CriterionReason)> {
    if !map.is_orthogonal() {
        return Err(Error::NotOrthogonal);
    }
    let alpha = map.tail();
    let data = map.eigen_data(alpha)?;
    let k = data.codim;
    let det = data.quotient_det;
    let inner = match alpha {
        Sign::Plus => map.is_identity() || det.is_one(),
        Sign::Minus => {
            let signed = if k % 2 == 0 { det.clone() } else { -&det };
            !map.is_minus_identity() && k >= 1 && signed == Scalar::from_int(-1)
        }
    };
    Ok((
        inner,
        CriterionReason {
            branch: Branch::of(alpha),
            k,
            quotient_det: det,
        },
    ))
}

/// Outcome of the intertwining solve, with the solution-space dimension kept
/// for diagnostics (anything above 1 is structurally anomalous).
#[derive(Clone, Debug)]
pub struct WitnessSolve {
    pub witness: Option<Multivector>,
    pub solution_dim: usize,
    /// Number of generators the solve ran over (block rounded up to even).
    pub window: usize,
}

/// Solver-side route: look for an invertible pure-parity x in the window
/// algebra with [φ](v_i)·x = x·v_i for every window generator. The parity —
/// even for tail +1, odd for tail −1 — extends the intertwining relation to
/// all tail generators, so a solution conjugates the whole algebra like [φ].
pub fn solve_witness_detailed(map: &FinitaryOrthogonal, n: usize) -> Result<WitnessSolve> {
    if !map.is_orthogonal() {
        return Err(Error::NotOrthogonal);
    }
    let m = map.m();
    if n < m {
        return Err(Error::WindowTooSmall { n, window: m });
    }
    let window = if m % 2 == 0 { m } else { m + 1 };
    let parity = match map.tail() {
        Sign::Plus => Parity::Even,
        Sign::Minus => Parity::Odd,
    };
    let algebra = Algebra::orthonormal(window)?;
    let action = BogolyubovAction::new(map.clone(), window)?;
    let basis = parity_basis(window, parity);

    let blades = 1usize << window;
    let mut system = Matrix::zero(window * blades, basis.len());
    for (col, b) in basis.iter().enumerate() {
        let x = Multivector::from_terms(window, [(*b, Scalar::one())])?;
        for i in 0..window {
            let v = Multivector::generator(window, i)?;
            let lhs = algebra.mul(action.generator_image(i)?, &x)?;
            let rhs = algebra.mul(&x, &v)?;
            let residual = &lhs - &rhs;
            for (blade, c) in residual.terms() {
                system.set(i * blades + blade.0 as usize, col, c.clone());
            }
        }
    }
    let solutions = system.nullspace();
    let solution_dim = solutions.len();

    let rebuild = |coeffs: &[Scalar]| -> Result<Multivector> {
        Multivector::from_terms(
            window,
            basis.iter().zip(coeffs).map(|(b, c)| (*b, c.clone())),
        )
    };

    let witness = match solution_dim {
        0 => None,
        1 => {
            let x = rebuild(&solutions[0])?;
            match algebra.inverse(&x) {
                Ok(_) => Some(x.normalized()),
                Err(Error::NotInvertible) => None,
                Err(e) => return Err(e),
            }
        }
        dim => {
            if dim > 6 {
                return Err(Error::Internal(format!(
                    "intertwiner space has dimension {dim}; the window model is broken"
                )));
            }
            first_invertible_combination(&algebra, &solutions, &rebuild)?
        }
    };

    // home the witness in the requested truncation when it is wider
    let witness = match witness {
        Some(x) if n > window => Some(x.extend_to(n)?),
        other => other,
    };
    Ok(WitnessSolve {
        witness,
        solution_dim,
        window,
    })
}

/// Deterministic sweep over small-integer coefficient vectors, used only in
/// the anomalous dim ≥ 2 case: report the first invertible combination.
fn first_invertible_combination(
    algebra: &Algebra,
    solutions: &[Vec<Scalar>],
    rebuild: &dyn Fn(&[Scalar]) -> Result<Multivector>,
) -> Result<Option<Multivector>> {
    let dim = solutions.len();
    let span = 5usize; // coefficients −2..=2
    let total = span.pow(dim as u32);
    for stamp in 1..total {
        let mut rem = stamp;
        let mut combo = vec![Scalar::zero(); solutions[0].len()];
        for sol in solutions {
            let c = Scalar::from_int((rem % span) as i64 - 2);
            rem /= span;
            if !c.is_zero() {
                for (acc, v) in combo.iter_mut().zip(sol) {
                    *acc = &*acc + &(&c * v);
                }
            }
        }
        if combo.iter().all(|c| c.is_zero()) {
            continue;
        }
        let x = rebuild(&combo)?;
        if algebra.inverse(&x).is_ok() {
            return Ok(Some(x.normalized()));
        }
    }
    Ok(None)
}

pub fn solve_witness(map: &FinitaryOrthogonal, n: usize) -> Result<Option<Multivector>> {
    solve_witness_detailed(map, n).map(|s| s.witness)
}

/// Joint verdict of the two routes.
#[derive(Clone, Debug)]
pub struct InnernessVerdict {
    pub inner: bool,
    pub branch: Branch,
    pub k: Option<usize>,
    pub quotient_det: Option<Scalar>,
    pub witness: Option<Multivector>,
    pub routes_agree: bool,
}

impl Serialize for InnernessVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("InnernessVerdict", 6)?;
        s.serialize_field("inner", &self.inner)?;
        s.serialize_field("branch", self.branch.as_str())?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("quotient_det", &self.quotient_det.as_ref().map(|d| d.to_string()))?;
        s.serialize_field("witness", &self.witness.as_ref().map(|w| w.to_string()))?;
        s.serialize_field("routes_agree", &self.routes_agree)?;
        s.end()
    }
}

/// Run both routes, verify any witness by direct conjugation on every
/// generator of the truncation, and report agreement.
pub fn decide(map: &FinitaryOrthogonal, n: usize) -> Result<InnernessVerdict> {
    let (inner, reason) = criterion(map)?;
    let solve = solve_witness_detailed(map, n)?;
    if let Some(x) = &solve.witness {
        verify_witness(map, x)?;
    }
    let routes_agree = inner == solve.witness.is_some();
    Ok(InnernessVerdict {
        inner,
        branch: reason.branch,
        k: Some(reason.k),
        quotient_det: Some(reason.quotient_det),
        witness: solve.witness,
        routes_agree,
    })
}

/// Hard check that x does realize [φ]: pure parity matching the tail,
/// invertible, and x·v_i·x⁻¹ = φ(v_i) for every generator of x's algebra.
pub fn verify_witness(map: &FinitaryOrthogonal, x: &Multivector) -> Result<()> {
    let n = x.n();
    let expected = match map.tail() {
        Sign::Plus => Parity::Even,
        Sign::Minus => Parity::Odd,
    };
    if x.parity() != Some(expected) {
        return Err(Error::Internal("witness parity violates the tail law".into()));
    }
    let algebra = Algebra::orthonormal(n)?;
    let action = BogolyubovAction::new(map.clone(), n)?;
    for i in 0..n {
        let v = Multivector::generator(n, i)?;
        if algebra.conjugate(x, &v)? != action.apply(&v)? {
            return Err(Error::Internal(format!(
                "witness fails to conjugate generator {i}"
            )));
        }
    }
    Ok(())
}

/// Basis of the centralizer Z_{Cl(V_n)}(Cl(U)) for U spanned by the first k
/// generators.
#[derive(Clone, Debug)]
pub struct CentralizerBasis {
    pub basis: Vec<Multivector>,
}

impl CentralizerBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Centralizer of the subalgebra generated by v₀,…,v_{k−1} inside Cl(V_n),
/// orthonormal form. Computed two ways — brute-force commutation solve and
/// the closed formula Cl(U^⊥)_even + (v₀⋯v_{k−1})·Cl(U^⊥)_odd — and the
/// results are asserted equal before the formula basis is returned.
pub fn centralizer(n: usize, k: usize) -> Result<CentralizerBasis> {
    centralizer_in(&Algebra::orthonormal(n)?, k)
}

pub fn centralizer_in(algebra: &Algebra, k: usize) -> Result<CentralizerBasis> {
    if !algebra.is_orthonormal() {
        return Err(Error::NonOrthonormalForm);
    }
    let n = algebra.n();
    if k > n {
        return Err(Error::DimensionMismatch { expected: n, got: k });
    }
    if k % 2 != 0 {
        return Err(Error::OddDimension { k });
    }

    let dim = 1usize << n;
    // brute force: x commutes with each of the first k generators
    let mut system = Matrix::zero(k * dim, dim);
    for bits in 0..dim {
        let x = Multivector::from_terms(n, [(Blade(bits as u64), Scalar::one())])?;
        for i in 0..k {
            let v = Multivector::generator(n, i)?;
            let bracket = &algebra.mul(&v, &x)? - &algebra.mul(&x, &v)?;
            for (blade, c) in bracket.terms() {
                system.set(i * dim + blade.0 as usize, bits, c.clone());
            }
        }
    }
    let computed = Subspace::from_spanning(dim, system.nullspace())?;

    let formula = centralizer_formula_blades(n, k);
    let indicators = formula
        .iter()
        .map(|b| {
            let mut v = vec![Scalar::zero(); dim];
            v[b.0 as usize] = Scalar::one();
            v
        })
        .collect();
    let formula_span = Subspace::from_spanning(dim, indicators)?;
    if computed != formula_span {
        return Err(Error::Internal(
            "centralizer solve disagrees with the closed formula".into(),
        ));
    }

    let basis = formula
        .into_iter()
        .map(|b| Multivector::from_terms(n, [(b, Scalar::one())]))
        .collect::<Result<Vec<_>>>()?;
    Ok(CentralizerBasis { basis })
}

/// The formula's blade basis: even blades over the complementary generators,
/// plus the full product v₀⋯v_{k−1} times odd blades over them.
fn centralizer_formula_blades(n: usize, k: usize) -> Vec<Blade> {
    let top = (1u64 << k) - 1;
    let complementary = || (0..(1u64 << (n - k))).map(|t| t << k);
    let evens = complementary().filter(|b| b.count_ones() % 2 == 0).map(Blade);
    let odd_products = complementary()
        .filter(|b| b.count_ones() % 2 == 1)
        .map(|b| Blade(top | b));
    evens.chain(odd_products).collect()
}

/// Verify the factorization Cl(V_n) ≅ Cl(V_k) ⊗ Z_{Cl(V_n)}(Cl(V_k)): the
/// dimensions multiply up and the bilinear multiplication map sends the
/// product basis to a basis.
pub fn tensor_split_check(n: usize, k: usize) -> Result<bool> {
    let z = centralizer(n, k)?;
    let dim = 1usize << n;
    if (1usize << k) * z.dim() != dim {
        return Ok(false);
    }
    let algebra = Algebra::orthonormal(n)?;
    let mut structure = Matrix::zero(dim, dim);
    let mut col = 0;
    for bits in 0..(1u64 << k) {
        let a = Multivector::from_terms(n, [(Blade(bits), Scalar::one())])?;
        for zb in &z.basis {
            let product = algebra.mul(&a, zb)?;
            for (blade, c) in product.terms() {
                structure.set(blade.0 as usize, col, c.clone());
            }
            col += 1;
        }
    }
    Ok(structure.rank() == dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn fin(rows: &[&[i64]], tail: Sign) -> FinitaryOrthogonal {
        FinitaryOrthogonal::new(mat(rows), tail).unwrap()
    }

    #[test]
    fn criterion_fixed_vector_with_minus_tail_is_inner() {
        let map = fin(&[&[1]], Sign::Minus);
        let (inner, reason) = criterion(&map).unwrap();
        assert!(inner);
        assert_eq!(reason.branch, Branch::MinusPhiFinitary);
        assert_eq!(reason.k, 1);
        assert_eq!(reason.quotient_det, s(1));
    }

    #[test]
    fn criterion_minus_identity_is_not_inner() {
        let map = FinitaryOrthogonal::new(Matrix::identity(0), Sign::Minus).unwrap();
        let (inner, reason) = criterion(&map).unwrap();
        assert!(!inner);
        assert_eq!(reason.k, 0);
    }

    #[test]
    fn criterion_reflection_is_not_inner() {
        let map = fin(&[&[-1]], Sign::Plus);
        let (inner, reason) = criterion(&map).unwrap();
        assert!(!inner);
        assert_eq!(reason.quotient_det, s(-1));
        assert_eq!(reason.k, 1);
    }

    #[test]
    fn criterion_rotation_is_inner_and_swap_is_not() {
        let rot = fin(&[&[0, -1], &[1, 0]], Sign::Plus);
        assert!(criterion(&rot).unwrap().0);

        let swap = fin(&[&[0, 1], &[1, 0]], Sign::Plus);
        let (inner, reason) = criterion(&swap).unwrap();
        assert!(!inner);
        assert_eq!(reason.k, 1);
        assert_eq!(reason.quotient_det, s(-1));
    }

    #[test]
    fn criterion_rejects_non_orthogonal() {
        let shear =
            FinitaryOrthogonal::new_unvalidated(mat(&[&[1, 1], &[0, 1]]), Sign::Plus).unwrap();
        assert_eq!(criterion(&shear).unwrap_err(), Error::NotOrthogonal);
        assert_eq!(solve_witness(&shear, 2).unwrap_err(), Error::NotOrthogonal);
    }

    #[test]
    fn witness_for_the_fixed_vector_map_is_the_generator() {
        let map = fin(&[&[1]], Sign::Minus);
        let solve = solve_witness_detailed(&map, 3).unwrap();
        assert_eq!(solve.window, 2);
        assert_eq!(solve.solution_dim, 1);
        let x = solve.witness.unwrap();
        assert_eq!(x.to_string(), "e0");
        assert_eq!(x.n(), 3);
        verify_witness(&map, &x).unwrap();
    }

    #[test]
    fn witness_for_identity_is_one() {
        let map = FinitaryOrthogonal::new(Matrix::identity(2), Sign::Plus).unwrap();
        let x = solve_witness(&map, 2).unwrap().unwrap();
        assert_eq!(x.to_string(), "1");
    }

    #[test]
    fn witness_for_rotation_is_even_and_correct() {
        let map = fin(&[&[0, -1], &[1, 0]], Sign::Plus);
        let solve = solve_witness_detailed(&map, 2).unwrap();
        assert_eq!(solve.solution_dim, 1);
        let x = solve.witness.unwrap();
        assert_eq!(x.parity(), Some(Parity::Even));
        assert_eq!(x.to_string(), "1 - e0e1");
        verify_witness(&map, &x).unwrap();
    }

    #[test]
    fn witness_window_too_small() {
        let map = fin(&[&[0, 1], &[1, 0]], Sign::Plus);
        assert_eq!(
            solve_witness(&map, 1).unwrap_err(),
            Error::WindowTooSmall { n: 1, window: 2 }
        );
    }

    #[test]
    fn no_witness_for_swap_or_reflection() {
        let swap = fin(&[&[0, 1], &[1, 0]], Sign::Plus);
        assert!(solve_witness(&swap, 4).unwrap().is_none());

        let reflection = fin(&[&[-1]], Sign::Plus);
        assert!(solve_witness(&reflection, 3).unwrap().is_none());
    }

    #[test]
    fn decide_agrees_on_paper_example() {
        let map = fin(&[&[1]], Sign::Minus);
        let verdict = decide(&map, 5).unwrap();
        assert!(verdict.inner);
        assert!(verdict.routes_agree);
        assert_eq!(verdict.witness.as_ref().unwrap().to_string(), "e0");
        assert_eq!(verdict.k, Some(1));
    }

    #[test]
    fn decide_rejects_minus_identity_via_both_routes() {
        let map = FinitaryOrthogonal::new(Matrix::identity(0), Sign::Minus).unwrap();
        let verdict = decide(&map, 3).unwrap();
        assert!(!verdict.inner);
        assert!(verdict.witness.is_none());
        assert!(verdict.routes_agree);
        assert_eq!(verdict.branch, Branch::MinusPhiFinitary);
    }

    #[test]
    fn decide_identity_inner_with_unit_witness() {
        let map = FinitaryOrthogonal::new(Matrix::identity(0), Sign::Plus).unwrap();
        let verdict = decide(&map, 3).unwrap();
        assert!(verdict.inner);
        assert_eq!(verdict.witness.as_ref().unwrap().to_string(), "1");
        assert!(verdict.routes_agree);
    }

    #[test]
    fn verdict_json_schema() {
        let map = fin(&[&[1]], Sign::Minus);
        let verdict = decide(&map, 3).unwrap();
        let json = serde_json::to_value(&verdict).unwrap();
        assert_eq!(json["inner"], true);
        assert_eq!(json["branch"], "minus-phi-finitary");
        assert_eq!(json["k"], 1);
        assert_eq!(json["quotient_det"], "1");
        assert_eq!(json["witness"], "e0");
        assert_eq!(json["routes_agree"], true);
    }

    #[test]
    fn centralizer_matches_spec_cases() {
        let z = centralizer(4, 2).unwrap();
        let rendered: Vec<String> = z.basis.iter().map(|b| b.to_string()).collect();
        assert_eq!(rendered, vec!["1", "e2e3", "e0e1e2", "e0e1e3"]);

        let z = centralizer(3, 2).unwrap();
        let rendered: Vec<String> = z.basis.iter().map(|b| b.to_string()).collect();
        assert_eq!(rendered, vec!["1", "e0e1e2"]);

        let z = centralizer(2, 2).unwrap();
        assert_eq!(z.dim(), 1);
        assert_eq!(z.basis[0].to_string(), "1");
    }

    #[test]
    fn centralizer_rejects_odd_or_skew_setups() {
        assert_eq!(centralizer(4, 3).unwrap_err(), Error::OddDimension { k: 3 });
        let skew = Algebra::with_diag(vec![s(2), s(1)]).unwrap();
        assert_eq!(centralizer_in(&skew, 2).unwrap_err(), Error::NonOrthonormalForm);
        assert_eq!(
            centralizer(2, 4).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 4 }
        );
    }

    #[test]
    fn tensor_split_small_cases() {
        assert!(tensor_split_check(4, 2).unwrap());
        assert!(tensor_split_check(4, 4).unwrap());
        assert!(tensor_split_check(5, 2).unwrap());
    }

    #[test]
    fn conjugation_by_witness_fixes_the_centralizer() {
        // rotation witness lives in Cl(span(v₀,v₁)); the centralizer of that
        // subalgebra inside Cl_4 must be fixed pointwise by the conjugation
        let map = fin(&[&[0, -1], &[1, 0]], Sign::Plus);
        let x = solve_witness(&map, 4).unwrap().unwrap();
        let algebra = Algebra::orthonormal(4).unwrap();
        for z in centralizer(4, 2).unwrap().basis {
            assert_eq!(algebra.conjugate(&x, &z).unwrap(), z);
        }
    }

    #[test]
    fn intertwiner_space_is_at_most_a_line() {
        let maps = [
            fin(&[&[1]], Sign::Minus),
            fin(&[&[0, -1], &[1, 0]], Sign::Plus),
            fin(&[&[0, 1], &[1, 0]], Sign::Plus),
            fin(&[&[-1]], Sign::Plus),
            FinitaryOrthogonal::new(Matrix::identity(3), Sign::Plus).unwrap(),
        ];
        for map in &maps {
            let solve = solve_witness_detailed(map, 4).unwrap();
            assert!(solve.solution_dim <= 1, "dim {} for {:?}", solve.solution_dim, map);
        }
    }
}
