//! Deterministic self-test suites behind the `selftest` CLI command: the
//! oracle-equivalence sweep, the lemma checks, and the structural law
//! batteries. Every suite uses fixed seeds, so two runs print the same
//! bytes.

use serde::Serialize;

use crate::bogolyubov::BogolyubovAction;
use crate::clifford::{Algebra, Multivector, Parity};
use crate::finitary::{FinitaryOrthogonal, Sign};
use crate::innerness;
use crate::linalg::{unit_vec, Matrix};
use crate::quadratic::QuadraticSpace;
use crate::sampling;
use crate::scalar::Scalar;

/// Outcome of one suite: how many checks ran, how many failed, and a short
/// note per failure.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> SuiteReport {
        SuiteReport {
            suite,
            cases: 0,
            failures: 0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, desc: &str) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.notes.push(desc.to_string());
        }
    }

    /// Route Result-valued checks: an error counts as a failure.
    fn check_result(&mut self, r: crate::error::Result<bool>, desc: &str) {
        match r {
            Ok(ok) => self.check(ok, desc),
            Err(e) => self.check(false, &format!("{desc}: {e}")),
        }
    }
}

pub fn run_all() -> Vec<SuiteReport> {
    vec![
        scalar_axioms(),
        engine_laws(),
        quadratic_laws(),
        finitary_laws(),
        bogolyubov_laws(),
        lemma1_invariant_core(),
        lemma2_centralizer(),
        lemma3_span_invariance(),
        tensor_split(),
        oracle_equivalence(),
        example_reproduction(),
        negative_branches(),
    ]
}

pub fn total_failures(reports: &[SuiteReport]) -> usize {
    reports.iter().map(|r| r.failures).sum()
}

fn scalar_axioms() -> SuiteReport {
    let mut suite = SuiteReport::new("scalar-axioms");
    let mut rng = sampling::rng(101);
    for _ in 0..200 {
        let a = sampling::random_scalar(&mut rng);
        let b = sampling::random_scalar(&mut rng);
        let c = sampling::random_scalar(&mut rng);
        suite.check(&(&a + &b) + &c == &a + &(&b + &c), "addition associativity");
        suite.check(&(&a * &b) * &c == &a * &(&b * &c), "multiplication associativity");
        suite.check(&a * &b == &b * &a, "multiplication commutativity");
        suite.check(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity");
        if !a.is_zero() {
            let inv = a.inv().expect("nonzero scalar inverts");
            suite.check((&a * &inv).is_one(), "multiplicative inverse");
        }
    }
    let i = Scalar::i();
    suite.check(&i * &i == Scalar::from_int(-1), "i squared");
    suite
}

fn engine_laws() -> SuiteReport {
    let mut suite = SuiteReport::new("engine-laws");
    let mut rng = sampling::rng(102);
    let algebra = Algebra::orthonormal(6).expect("small algebra");
    for _ in 0..50 {
        let a = sampling::random_multivector(&mut rng, 6, 5);
        let b = sampling::random_multivector(&mut rng, 6, 5);
        let c = sampling::random_multivector(&mut rng, 6, 5);
        let left = algebra.mul(&algebra.mul(&a, &b).unwrap(), &c).unwrap();
        let right = algebra.mul(&a, &algebra.mul(&b, &c).unwrap()).unwrap();
        suite.check(left == right, "associativity in Cl_6");
    }
    let n = 8;
    let alg = Algebra::orthonormal(n).expect("Cl_8");
    for i in 0..n {
        let vi = Multivector::generator(n, i).unwrap();
        let sq = alg.mul(&vi, &vi).unwrap();
        suite.check(sq == Multivector::one(n), "generator squares to one");
        for j in (i + 1)..n {
            let vj = Multivector::generator(n, j).unwrap();
            let anti = &alg.mul(&vi, &vj).unwrap() + &alg.mul(&vj, &vi).unwrap();
            suite.check(anti.is_zero(), "generators anticommute");
        }
    }
    for n in 0..=10 {
        let alg = Algebra::orthonormal(n).unwrap();
        suite.check(
            alg.basis().count() == 1usize << n,
            "blade basis has dimension 2^n",
        );
    }
    suite
}

fn quadratic_laws() -> SuiteReport {
    let mut suite = SuiteReport::new("quadratic-laws");
    let mut rng = sampling::rng(103);
    let space = QuadraticSpace::orthonormal(5).unwrap();
    for _ in 0..50 {
        let x = sampling::random_vector(&mut rng, 5);
        let y = sampling::random_vector(&mut rng, 5);
        let bxy = space.bilinear(&x, &y).unwrap();
        let byx = space.bilinear(&y, &x).unwrap();
        suite.check(bxy == byx, "bilinear symmetry");
        let sum: Vec<Scalar> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let polar = &(&space.quadratic(&sum).unwrap() - &space.quadratic(&x).unwrap())
            - &space.quadratic(&y).unwrap();
        suite.check(polar == bxy, "polarization identity");
    }
    let full = crate::quadratic::Subspace::full(5);
    suite.check(
        space.radical(&full).unwrap().is_zero(),
        "orthonormal form is nondegenerate",
    );
    suite
}

fn finitary_laws() -> SuiteReport {
    let mut suite = SuiteReport::new("finitary-laws");
    let mut rng = sampling::rng(104);
    for tail in [Sign::Plus, Sign::Minus] {
        for _ in 0..20 {
            let m = sampling::rng_range(&mut rng, 0, 4);
            let map = sampling::random_finitary(&mut rng, m, 5, tail).unwrap();
            suite.check(map.is_orthogonal(), "sampled block is orthogonal");
            let window = m + 2;
            let space = QuadraticSpace::orthonormal(window).unwrap();
            let inv = map.inverse();
            let x = sampling::random_vector(&mut rng, window);
            let y = sampling::random_vector(&mut rng, window);
            let lhs = space.bilinear(&map.apply_vec(&x).unwrap(), &y).unwrap();
            let rhs = space.bilinear(&x, &inv.apply_vec(&y).unwrap()).unwrap();
            suite.check(lhs == rhs, "adjoint identity");
            suite.check(
                map.compose(&inv).unwrap().is_identity(),
                "inverse composes to identity",
            );

            // ((φ − α)x | V(α)) = 0 for the tail eigenvalue α
            let eigen = map.window_eigenspace(tail, window).unwrap();
            let alpha = tail.scalar();
            let moved: Vec<Scalar> = map
                .apply_vec(&x)
                .unwrap()
                .iter()
                .zip(&x)
                .map(|(fx, x)| fx - &(&alpha * x))
                .collect();
            let orthogonal = eigen
                .basis()
                .iter()
                .all(|f| space.bilinear(&moved, f).unwrap().is_zero());
            suite.check(orthogonal, "range of (φ − α) is orthogonal to V(α)");

            let data = map.eigen_data(tail).unwrap();
            suite.check(
                data.codim == m - data.eigenspace.dim(),
                "codimension bookkeeping",
            );
        }
    }
    suite
}

fn bogolyubov_laws() -> SuiteReport {
    let mut suite = SuiteReport::new("bogolyubov-laws");
    let mut rng = sampling::rng(105);
    for _ in 0..6 {
        let phi = sampling::random_finitary(&mut rng, 3, 4, Sign::Plus).unwrap();
        let psi = sampling::random_finitary(&mut rng, 3, 4, Sign::Minus).unwrap();
        let composed = BogolyubovAction::new(phi.compose(&psi).unwrap(), 4).unwrap();
        let act_phi = BogolyubovAction::new(phi, 4).unwrap();
        let act_psi = BogolyubovAction::new(psi, 4).unwrap();
        for _ in 0..4 {
            let a = sampling::random_multivector(&mut rng, 4, 4);
            let stepwise = act_phi.apply(&act_psi.apply(&a).unwrap()).unwrap();
            suite.check(composed.apply(&a).unwrap() == stepwise, "functoriality");
        }
        suite.check_result(act_phi.check_automorphism(10), "automorphism check");
    }
    for tail in [Sign::Plus, Sign::Minus] {
        let map = sampling::random_finitary(&mut rng, 4, 5, tail).unwrap();
        let act = BogolyubovAction::new(map, 4).unwrap();
        for _ in 0..10 {
            let a = sampling::random_multivector(&mut rng, 4, 4);
            for parity in [Parity::Even, Parity::Odd] {
                let image = act.apply(&a.grade_project(parity)).unwrap();
                suite.check(
                    image.is_zero() || image.parity() == Some(parity),
                    "grading preserved",
                );
            }
            let v = sampling::random_vector(&mut rng, 4);
            let f: Scalar = v.iter().map(|c| c * c).sum();
            let vm = act.apply(&Multivector::from_vector(4, &v).unwrap()).unwrap();
            suite.check(
                act.algebra().mul(&vm, &vm).unwrap() == Multivector::scalar(4, f),
                "quadratic relation preserved",
            );
        }
    }
    let shear = FinitaryOrthogonal::new_unvalidated(
        Matrix::from_rows(vec![
            vec![Scalar::one(), Scalar::one()],
            vec![Scalar::zero(), Scalar::one()],
        ])
        .unwrap(),
        Sign::Plus,
    )
    .unwrap();
    let bad = BogolyubovAction::new(shear, 2).unwrap();
    suite.check_result(
        bad.check_automorphism(25).map(|ok| !ok),
        "shear rejected by the automorphism check",
    );
    suite
}

fn lemma1_invariant_core() -> SuiteReport {
    let mut suite = SuiteReport::new("lemma1-invariant-core");
    let mut rng = sampling::rng(106);
    for tail in [Sign::Plus, Sign::Minus] {
        for _ in 0..25 {
            let m = sampling::rng_range(&mut rng, 0, 5);
            let map = sampling::random_finitary(&mut rng, m, 6, tail).unwrap();
            match map.invariant_core() {
                Ok(core) => {
                    // invariant_core verifies internally; re-verify here so a
                    // regression in either place is caught
                    suite.check(
                        map.verify_invariant_core(&core).is_ok(),
                        "core properties (even, nondegenerate, invariant, complement in V(α))",
                    );
                    suite.check(core.n() <= m + 1, "window grows by at most one");
                }
                Err(e) => suite.check(false, &format!("invariant_core failed: {e}")),
            }
        }
    }
    // the engineered block whose eigenspace closure is degenerate, so the
    // plane-splitting path runs
    let block = Matrix::from_rows(
        [
            ["3/5", "-2/5*i", "2/5", "4/5"],
            ["-2/5*i", "7/5", "2/5*i", "4/5*i"],
            ["2/5", "2/5*i", "3/5", "-4/5"],
            ["-4/5", "-4/5*i", "4/5", "3/5"],
        ]
        .iter()
        .map(|r| r.iter().map(|e| e.parse().unwrap()).collect())
        .collect(),
    )
    .unwrap();
    let map = FinitaryOrthogonal::new(block, Sign::Plus).unwrap();
    match map.invariant_core() {
        Ok(core) => suite.check(core.dim() == 4, "isotropic-radical block yields the full core"),
        Err(e) => suite.check(false, &format!("isotropic-radical block failed: {e}")),
    }
    suite
}

fn lemma2_centralizer() -> SuiteReport {
    let mut suite = SuiteReport::new("lemma2-centralizer");
    for n in 1..=6usize {
        for k in (0..=n).step_by(2) {
            // centralizer() internally asserts brute force == formula
            match innerness::centralizer(n, k) {
                Ok(z) => {
                    let expected = if n == k { 1 } else { 1usize << (n - k) };
                    suite.check(
                        z.dim() == expected,
                        &format!("centralizer dimension for n={n}, k={k}"),
                    );
                }
                Err(e) => suite.check(false, &format!("centralizer(n={n}, k={k}) failed: {e}")),
            }
        }
    }
    let z = innerness::centralizer(4, 2).unwrap();
    let rendered: Vec<String> = z.basis.iter().map(|b| b.to_string()).collect();
    suite.check(
        rendered == ["1", "e2e3", "e0e1e2", "e0e1e3"],
        "n=4, k=2 basis",
    );
    suite
}

fn lemma3_span_invariance() -> SuiteReport {
    let mut suite = SuiteReport::new("lemma3-span-invariance");
    for m in 1..=3usize {
        for block in sampling::small_entry_orthogonal_blocks(m) {
            for tail in [Sign::Plus, Sign::Minus] {
                let map = FinitaryOrthogonal::new(block.clone(), tail).unwrap();
                let n = m.max(2);
                let act = BogolyubovAction::new(map, n).unwrap();
                for a in 0..n {
                    for b in (a + 1)..n {
                        suite.check_result(
                            act.lemma3_witness_check(&unit_vec(n, a), &unit_vec(n, b)),
                            &format!("standard pair ({a},{b}) under an m={m} block"),
                        );
                    }
                }
            }
        }
    }
    // a few random pairs under random orthogonal maps
    let mut rng = sampling::rng(107);
    for _ in 0..20 {
        let map = sampling::random_finitary(&mut rng, 3, 4, Sign::Plus).unwrap();
        let act = BogolyubovAction::new(map, 3).unwrap();
        let v1 = sampling::random_nonzero_vector(&mut rng, 3);
        let v2 = sampling::random_nonzero_vector(&mut rng, 3);
        match act.lemma3_witness_check(&v1, &v2) {
            Ok(ok) => suite.check(ok, "random pair"),
            Err(crate::error::Error::DependentVectors) => {}
            Err(e) => suite.check(false, &format!("random pair: {e}")),
        }
    }
    suite
}

fn tensor_split() -> SuiteReport {
    let mut suite = SuiteReport::new("tensor-split");
    for (n, k) in [(4usize, 2usize), (6, 2), (6, 4), (4, 4)] {
        suite.check_result(
            innerness::tensor_split_check(n, k),
            &format!("Cl_{n} = Cl_{k} ⊗ Z for (n,k)=({n},{k})"),
        );
    }
    suite
}

fn oracle_equivalence() -> SuiteReport {
    let mut suite = SuiteReport::new("oracle-equivalence");
    for m in 0..=3usize {
        let blocks = if m == 0 {
            vec![Matrix::identity(0)]
        } else {
            sampling::signed_permutation_blocks(m)
        };
        for block in blocks {
            for tail in [Sign::Plus, Sign::Minus] {
                let map = FinitaryOrthogonal::new(block.clone(), tail).unwrap();
                check_routes_agree(&mut suite, &map, "signed permutation");
            }
        }
    }
    let mut rng = sampling::rng(108);
    for _ in 0..40 {
        let m = sampling::rng_range(&mut rng, 0, 4);
        for tail in [Sign::Plus, Sign::Minus] {
            let map = sampling::random_finitary(&mut rng, m, 5, tail).unwrap();
            check_routes_agree(&mut suite, &map, "random rotation/reflection product");
        }
    }
    suite
}

fn check_routes_agree(suite: &mut SuiteReport, map: &FinitaryOrthogonal, family: &str) {
    let n = map.m() + map.m() % 2 + 2;
    match innerness::decide(map, n) {
        Ok(verdict) => suite.check(
            verdict.routes_agree,
            &format!("{family}: routes disagree for {map:?}"),
        ),
        Err(e) => suite.check(false, &format!("{family}: decide failed for {map:?}: {e}")),
    }
}

fn example_reproduction() -> SuiteReport {
    let mut suite = SuiteReport::new("example-reproduction");
    let map = FinitaryOrthogonal::new(
        Matrix::from_rows(vec![vec![Scalar::one()]]).unwrap(),
        Sign::Minus,
    )
    .unwrap();
    match innerness::decide(&map, 5) {
        Ok(verdict) => {
            suite.check(verdict.inner, "fixed-vector map with minus tail is inner");
            suite.check(verdict.routes_agree, "routes agree");
            let witness = verdict.witness.expect("witness present when inner");
            suite.check(witness.to_string() == "e0", "witness is the fixed generator");
            let algebra = Algebra::orthonormal(5).unwrap();
            let action = BogolyubovAction::new(map, 5).unwrap();
            let mut rng = sampling::rng(109);
            for _ in 0..25 {
                let a = sampling::random_multivector(&mut rng, 5, 6);
                let conjugated = algebra.conjugate(&witness, &a).unwrap();
                suite.check(
                    conjugated == action.apply(&a).unwrap(),
                    "conjugation by the witness equals the automorphism",
                );
            }
        }
        Err(e) => suite.check(false, &format!("decide failed: {e}")),
    }
    suite
}

fn negative_branches() -> SuiteReport {
    let mut suite = SuiteReport::new("negative-branches");
    let cases: Vec<(&str, FinitaryOrthogonal)> = vec![
        (
            "minus identity",
            FinitaryOrthogonal::new(Matrix::identity(0), Sign::Minus).unwrap(),
        ),
        (
            "single reflection with plus tail",
            FinitaryOrthogonal::new(
                Matrix::from_rows(vec![vec![Scalar::from_int(-1)]]).unwrap(),
                Sign::Plus,
            )
            .unwrap(),
        ),
        (
            "swap with plus tail",
            FinitaryOrthogonal::new(
                Matrix::from_rows(vec![
                    vec![Scalar::zero(), Scalar::one()],
                    vec![Scalar::one(), Scalar::zero()],
                ])
                .unwrap(),
                Sign::Plus,
            )
            .unwrap(),
        ),
    ];
    for (name, map) in cases {
        match innerness::decide(&map, 4) {
            Ok(verdict) => {
                suite.check(!verdict.inner, &format!("{name}: criterion says not inner"));
                suite.check(
                    verdict.witness.is_none(),
                    &format!("{name}: solver finds no witness"),
                );
                suite.check(verdict.routes_agree, &format!("{name}: routes agree"));
            }
            Err(e) => suite.check(false, &format!("{name}: decide failed: {e}")),
        }
    }
    suite
}
