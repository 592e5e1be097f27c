//! The finite Clifford algebra Cl(V_n) over a diagonal quadratic form:
//! blades as bit sets, sparse multivectors, the product kernel, the ℤ/2
//! grading, and exact inverses.
//!
//! Generators v_0,…,v_{n−1} satisfy v_i² = f(v_i)·1 and v_i v_j = −v_j v_i
//! for i ≠ j; a blade is an ascending product of distinct generators, encoded
//! as the bit set of its indices. The kernel moves indices into ascending
//! order counting transpositions (each contributes −1) and contracts repeated
//! indices through the form value.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::MAX_GENERATORS;

/// Basis monomial: bit i set means generator v_i is present; `Blade(0)` is
/// the algebra unit. Ascending index order is implied by the set encoding.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(pub u64);

/// The ℤ/2 degree of a homogeneous element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_grade(grade: u32) -> Parity {
        if grade % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Degree of a product of homogeneous elements (addition in ℤ/2).
    pub fn compose(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Blade {
    pub const ONE: Blade = Blade(0);

    /// Builds a blade from distinct indices (any order). Errors on repeats
    /// or indices at or beyond the generator cap.
    pub fn from_indices(indices: &[usize]) -> Result<Blade> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= MAX_GENERATORS {
                return Err(Error::GeneratorCap {
                    n: i + 1,
                    max: MAX_GENERATORS,
                });
            }
            let bit = 1u64 << i;
            if bits & bit != 0 {
                return Err(Error::Parse(format!("repeated generator index {i} in blade")));
            }
            bits |= bit;
        }
        Ok(Blade(bits))
    }

    pub fn generator(i: usize) -> Blade {
        debug_assert!(i < MAX_GENERATORS);
        Blade(1u64 << i)
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.grade() as usize);
        let mut rem = self.0;
        while rem != 0 {
            out.push(rem.trailing_zeros() as usize);
            rem &= rem - 1;
        }
        out
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn parity(self) -> Parity {
        Parity::of_grade(self.grade())
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    /// True when every index lies below `n`.
    pub fn fits(self, n: usize) -> bool {
        n >= 64 || self.0 >> n == 0
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

/// Product of two basis blades under the diagonal form `diag`: returns the
/// accumulated sign-and-contraction scalar and the symmetric-difference
/// blade. For each index of `b` (ascending), the indices of `a` strictly
/// above it each contribute one transposition sign −1; indices common to
/// both contract via v_i² = f(v_i).
pub fn blade_mul(a: Blade, b: Blade, diag: &[Scalar]) -> (Scalar, Blade) {
    let mut flips = 0u32;
    let mut rem = b.0;
    while rem != 0 {
        let idx = rem.trailing_zeros();
        rem &= rem - 1;
        flips += ((a.0 >> idx) >> 1).count_ones();
    }
    let mut coeff = if flips % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    };
    let mut common = a.0 & b.0;
    while common != 0 {
        let idx = common.trailing_zeros() as usize;
        common &= common - 1;
        coeff = &coeff * &diag[idx];
    }
    (coeff, Blade(a.0 ^ b.0))
}

/// All blades of Cl(V_n) with the requested parity, in encoding order.
pub fn parity_basis(n: usize, parity: Parity) -> Vec<Blade> {
    assert!(n <= 20, "parity basis enumeration is for small truncations");
    (0u64..(1u64 << n))
        .map(Blade)
        .filter(|b| b.parity() == parity)
        .collect()
}

/// Sparse element of Cl(V_n): a map from blades to nonzero coefficients,
/// ordered by blade encoding so iteration (and rendering) is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Multivector {
    n: usize,
    terms: BTreeMap<u64, Scalar>,
}

impl Multivector {
    pub fn zero(n: usize) -> Multivector {
        Multivector {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, value: Scalar) -> Multivector {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(0, value);
        }
        Multivector { n, terms }
    }

    pub fn one(n: usize) -> Multivector {
        Multivector::scalar(n, Scalar::one())
    }

    pub fn generator(n: usize, i: usize) -> Result<Multivector> {
        if i >= n {
            return Err(Error::DimensionMismatch { expected: n, got: i + 1 });
        }
        Multivector::from_terms(n, [(Blade::generator(i), Scalar::one())])
    }

    /// Sums duplicate blades, drops zero coefficients, validates indices.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Blade, Scalar)>,
    ) -> Result<Multivector> {
        if n > MAX_GENERATORS {
            return Err(Error::GeneratorCap {
                n,
                max: MAX_GENERATORS,
            });
        }
        let mut map: BTreeMap<u64, Scalar> = BTreeMap::new();
        for (blade, coeff) in terms {
            if !blade.fits(n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: 64 - blade.0.leading_zeros() as usize,
                });
            }
            if coeff.is_zero() {
                continue;
            }
            match map.entry(blade.0) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &coeff;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Ok(Multivector { n, terms: map })
    }

    /// The degree-one element Σ coords[i]·v_i; `coords` must have length `n`.
    pub fn from_vector(n: usize, coords: &[Scalar]) -> Result<Multivector> {
        if coords.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: coords.len(),
            });
        }
        Multivector::from_terms(
            n,
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| (Blade::generator(i), c.clone())),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Scalar)> {
        self.terms.iter().map(|(&bits, c)| (Blade(bits), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, blade: Blade) -> Scalar {
        self.terms.get(&blade.0).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scalar_part(&self) -> Scalar {
        self.coeff(Blade::ONE)
    }

    pub fn scale(&self, s: &Scalar) -> Multivector {
        if s.is_zero() {
            return Multivector::zero(self.n);
        }
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(&b, c)| (b, c * s)).collect(),
        }
    }

    /// Keeps exactly the blades of the requested index-count parity.
    pub fn grade_project(&self, parity: Parity) -> Multivector {
        Multivector {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(&b, _)| Blade(b).parity() == parity)
                .map(|(&b, c)| (b, c.clone()))
                .collect(),
        }
    }

    /// True when every stored blade has the given parity (vacuously true for
    /// the zero element).
    pub fn is_homogeneous(&self, parity: Parity) -> bool {
        self.terms.keys().all(|&b| Blade(b).parity() == parity)
    }

    /// The parity of a nonzero homogeneous element, `None` for zero or mixed.
    pub fn parity(&self) -> Option<Parity> {
        let mut iter = self.terms.keys();
        let first = Blade(*iter.next()?).parity();
        iter.all(|&b| Blade(b).parity() == first).then_some(first)
    }

    /// Generator indices that occur in at least one term.
    pub fn support_indices(&self) -> Vec<usize> {
        let mut union = 0u64;
        for &b in self.terms.keys() {
            union |= b;
        }
        Blade(union).indices()
    }

    /// Reinterprets the element inside a larger truncation.
    pub fn extend_to(&self, n: usize) -> Result<Multivector> {
        if n < self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: n,
            });
        }
        if n > MAX_GENERATORS {
            return Err(Error::GeneratorCap {
                n,
                max: MAX_GENERATORS,
            });
        }
        Ok(Multivector {
            n,
            terms: self.terms.clone(),
        })
    }

    /// Divides through by the lowest-blade coefficient, making it 1; the
    /// deterministic representative of a one-dimensional solution ray.
    pub fn normalized(&self) -> Multivector {
        match self.terms.values().next() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv().expect("stored coefficients are nonzero")),
        }
    }

    /// Coefficient vector over the full 2ⁿ blade basis, indexed by encoding.
    pub fn dense_coords(&self) -> Vec<Scalar> {
        assert!(self.n <= 20, "dense expansion is for small truncations");
        let mut out = vec![Scalar::zero(); 1usize << self.n];
        for (&b, c) in &self.terms {
            out[b as usize] = c.clone();
        }
        out
    }
}

impl std::ops::Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.n, rhs.n, "multivector truncations differ");
        let mut terms = self.terms.clone();
        for (&b, c) in &rhs.terms {
            match terms.entry(b) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Multivector { n: self.n, terms }
    }
}

impl std::ops::Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(&b, c)| (b, -c)).collect(),
        }
    }
}

/// The ambient algebra: a generator count with the diagonal form values
/// f(v_i). All products and inverses go through here so the form is never
/// ambient-implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    diag: Vec<Scalar>,
    orthonormal: bool,
}

/// Above this the dense product accumulator would be larger than the sparse
/// map is worth; 2¹⁶ slots is still only a few megabytes.
const DENSE_MUL_LIMIT: usize = 16;

impl Algebra {
    /// The default algebra with f(v_i) = 1 for all generators.
    pub fn orthonormal(n: usize) -> Result<Algebra> {
        Algebra::with_diag(vec![Scalar::one(); n])
    }

    /// Arbitrary nonzero diagonal form values.
    pub fn with_diag(diag: Vec<Scalar>) -> Result<Algebra> {
        if diag.len() > MAX_GENERATORS {
            return Err(Error::GeneratorCap {
                n: diag.len(),
                max: MAX_GENERATORS,
            });
        }
        if let Some(index) = diag.iter().position(Scalar::is_zero) {
            return Err(Error::DegenerateForm { index });
        }
        let orthonormal = diag.iter().all(Scalar::is_one);
        Ok(Algebra { diag, orthonormal })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Scalar] {
        &self.diag
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn blade_mul(&self, a: Blade, b: Blade) -> (Scalar, Blade) {
        blade_mul(a, b, &self.diag)
    }

    /// All 2ⁿ basis blades in encoding order. Lazy, but only sensible to
    /// drain for small n.
    pub fn basis(&self) -> impl Iterator<Item = Blade> + '_ {
        (0u128..(1u128 << self.n())).map(|bits| Blade(bits as u64))
    }

    fn check_member(&self, a: &Multivector) -> Result<()> {
        if a.n != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: a.n,
            });
        }
        Ok(())
    }

    /// Bilinear extension of the blade kernel. Uses a dense 2ⁿ accumulator
    /// for small truncations (branch-free indexing), a tree map beyond.
    pub fn mul(&self, a: &Multivector, b: &Multivector) -> Result<Multivector> {
        self.check_member(a)?;
        self.check_member(b)?;
        let n = self.n();
        if n <= DENSE_MUL_LIMIT {
            let mut acc: Vec<Scalar> = vec![Scalar::zero(); 1usize << n];
            for (&ba, ca) in &a.terms {
                for (&bb, cb) in &b.terms {
                    let mut flips = 0u32;
                    let mut rem = bb;
                    while rem != 0 {
                        let idx = rem.trailing_zeros();
                        rem &= rem - 1;
                        flips += ((ba >> idx) >> 1).count_ones();
                    }
                    let mut coeff = ca * cb;
                    if flips % 2 == 1 {
                        coeff = -coeff;
                    }
                    if !self.orthonormal {
                        let mut common = ba & bb;
                        while common != 0 {
                            let idx = common.trailing_zeros() as usize;
                            common &= common - 1;
                            coeff = &coeff * &self.diag[idx];
                        }
                    }
                    let slot = &mut acc[(ba ^ bb) as usize];
                    if slot.is_zero() {
                        *slot = coeff;
                    } else {
                        *slot = &*slot + &coeff;
                    }
                }
            }
            let terms: BTreeMap<u64, Scalar> = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(bits, c)| (bits as u64, c))
                .collect();
            Ok(Multivector { n, terms })
        } else {
            let mut terms: BTreeMap<u64, Scalar> = BTreeMap::new();
            for (&ba, ca) in &a.terms {
                for (&bb, cb) in &b.terms {
                    let (base, blade) = blade_mul(Blade(ba), Blade(bb), &self.diag);
                    let coeff = &(ca * cb) * &base;
                    match terms.entry(blade.0) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            if !coeff.is_zero() {
                                e.insert(coeff);
                            }
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let sum = e.get() + &coeff;
                            if sum.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = sum;
                            }
                        }
                    }
                }
            }
            Ok(Multivector { n, terms })
        }
    }

    /// Folds a product left-to-right; empty input gives 1.
    pub fn product(&self, factors: &[Multivector]) -> Result<Multivector> {
        let mut acc = Multivector::one(self.n());
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// Matrix of left multiplication by `a` on the full blade basis
    /// (column j = a·e_j in dense coordinates).
    pub fn left_mul_matrix(&self, a: &Multivector) -> Result<Matrix> {
        self.check_member(a)?;
        assert!(self.n() <= 14, "left-regular matrix is for small truncations");
        let size = 1usize << self.n();
        let mut m = Matrix::zero(size, size);
        for j in 0..size {
            let e_j = Multivector::from_terms(self.n(), [(Blade(j as u64), Scalar::one())])?;
            let col = self.mul(a, &e_j)?;
            for (blade, c) in col.terms() {
                m.set(blade.0 as usize, j, c.clone());
            }
        }
        Ok(m)
    }

    /// Two-sided inverse, or `NotInvertible`. Single blades invert directly
    /// (s·B squares to a scalar); anything else is solved through the
    /// left-regular representation on the subalgebra spanned by the
    /// element's own generator support — the inverse of `a` always lies in
    /// the unital subalgebra generated by `a`, so the support never grows.
    pub fn inverse(&self, a: &Multivector) -> Result<Multivector> {
        self.check_member(a)?;
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        if a.terms.len() == 1 {
            let (&bits, coeff) = a.terms.iter().next().expect("nonempty");
            let blade = Blade(bits);
            let (square, rest) = self.blade_mul(blade, blade);
            debug_assert_eq!(rest, Blade::ONE);
            // (s·B)(t·B) = s·t·square, so t = 1/(s·square)
            let t = (coeff * &square).inv().map_err(|_| Error::NotInvertible)?;
            return Multivector::from_terms(a.n, [(blade, t)]);
        }

        let support = a.support_indices();
        let k = support.len();
        if k > 10 {
            return Err(Error::Internal(format!(
                "inverse solve over {k} active generators exceeds the dense solver budget"
            )));
        }
        let compact_of: BTreeMap<usize, usize> =
            support.iter().enumerate().map(|(pos, &i)| (i, pos)).collect();
        let compress = |bits: u64| -> u64 {
            let mut out = 0u64;
            for (&orig, &pos) in &compact_of {
                if bits & (1u64 << orig) != 0 {
                    out |= 1u64 << pos;
                }
            }
            out
        };
        let sub = Algebra::with_diag(support.iter().map(|&i| self.diag[i].clone()).collect())?;
        let a_sub = Multivector {
            n: k,
            terms: a.terms.iter().map(|(&b, c)| (compress(b), c.clone())).collect(),
        };

        let lhs = sub.left_mul_matrix(&a_sub)?;
        let mut target = vec![Scalar::zero(); 1usize << k];
        target[0] = Scalar::one();
        let Some(x) = lhs.solve(&target)? else {
            return Err(Error::NotInvertible);
        };
        let b_sub = Multivector::from_terms(
            k,
            x.iter()
                .enumerate()
                .map(|(bits, c)| (Blade(bits as u64), c.clone())),
        )?;
        // a finite-dimensional associative algebra makes every left inverse
        // two-sided; verify anyway since it is one cheap product
        if sub.mul(&b_sub, &a_sub)? != Multivector::one(k) {
            return Err(Error::Internal(
                "left inverse failed the right-inverse check".into(),
            ));
        }

        let decompress = |bits: u64| -> u64 {
            let mut out = 0u64;
            for pos in 0..k {
                if bits & (1u64 << pos) != 0 {
                    out |= 1u64 << support[pos];
                }
            }
            out
        };
        Ok(Multivector {
            n: a.n,
            terms: b_sub
                .terms
                .iter()
                .map(|(&b, c)| (decompress(b), c.clone()))
                .collect(),
        })
    }

    /// x·a·x⁻¹, with the inverse recomputed each call.
    pub fn conjugate(&self, x: &Multivector, a: &Multivector) -> Result<Multivector> {
        let x_inv = self.inverse(x)?;
        self.mul(&self.mul(x, a)?, &x_inv)
    }
}

// ---------------------------------------------------------------------------
// text format

fn render_term(blade: Blade, c: &Scalar) -> String {
    if blade == Blade::ONE {
        return c.to_string();
    }
    let symbol: String = blade.indices().iter().map(|i| format!("e{i}")).collect();
    if c.is_one() {
        symbol
    } else if (-c).is_one() {
        format!("-{symbol}")
    } else if c.re.is_zero() || c.im.is_zero() {
        format!("{c}*{symbol}")
    } else {
        // both components present: parenthesize so the term re-parses whole
        format!("({c})*{symbol}")
    }
}

/// Terms in blade-encoding order joined with ` + `/` − `, coefficients in
/// the scalar grammar, blades as `e0e1…`; e.g. `1/2 + 1/2*e0e1`.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (&bits, c)) in self.terms.iter().enumerate() {
            let body = render_term(Blade(bits), c);
            if pos == 0 {
                write!(f, "{body}")?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}] {}", self.n, self)
    }
}

fn parse_blade_symbol(s: &str, n: usize) -> Result<Blade> {
    let mut bits = 0u64;
    let mut last: Option<usize> = None;
    for (pos, part) in s.split('e').enumerate() {
        if pos == 0 {
            if !part.is_empty() {
                return Err(Error::Parse(format!("malformed blade `{s}`")));
            }
            continue;
        }
        let idx: usize = part
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator index `e{part}`")))?;
        if idx >= n {
            return Err(Error::Parse(format!(
                "generator e{idx} outside truncation n={n}"
            )));
        }
        if last.is_some_and(|l| idx <= l) {
            return Err(Error::Parse(format!(
                "blade indices must be strictly increasing in `{s}`"
            )));
        }
        last = Some(idx);
        bits |= 1u64 << idx;
    }
    if last.is_none() {
        return Err(Error::Parse(format!("empty blade `{s}`")));
    }
    Ok(Blade(bits))
}

/// One signed chunk: `(scalar)*blade`, `scalar*blade`, bare `blade`, or a
/// bare scalar.
fn parse_term(body: &str, n: usize) -> Result<(Blade, Scalar)> {
    if let Some(rest) = body.strip_prefix('(') {
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in `{body}`")))?;
        let coeff: Scalar = rest[..close].parse()?;
        let after = &rest[close + 1..];
        if after.is_empty() {
            return Ok((Blade::ONE, coeff));
        }
        let symbol = after.strip_prefix('*').ok_or_else(|| {
            Error::Parse(format!("expected `*` between coefficient and blade in `{body}`"))
        })?;
        return Ok((parse_blade_symbol(symbol, n)?, coeff));
    }
    match body.find('e') {
        None => Ok((Blade::ONE, body.parse()?)),
        Some(0) => Ok((parse_blade_symbol(body, n)?, Scalar::one())),
        Some(epos) => {
            let (head, symbol) = body.split_at(epos);
            let coeff_str = head.strip_suffix('*').ok_or_else(|| {
                Error::Parse(format!("expected `*` between coefficient and blade in `{body}`"))
            })?;
            Ok((parse_blade_symbol(symbol, n)?, coeff_str.parse()?))
        }
    }
}

impl Multivector {
    /// Parses the rendered grammar (whitespace-insensitive) inside Cl(V_n).
    pub fn parse(n: usize, input: &str) -> Result<Multivector> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty multivector".into()));
        }
        let mut chunks: Vec<String> = Vec::new();
        let mut current = String::new();
        let mut depth = 0i32;
        for (pos, ch) in compact.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(Error::Parse(format!("unbalanced parenthesis in `{input}`")));
                    }
                }
                '+' | '-' if depth == 0 && pos > 0 => {
                    chunks.push(std::mem::take(&mut current));
                }
                _ => {}
            }
            current.push(ch);
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced parenthesis in `{input}`")));
        }
        chunks.push(current);

        let mut terms: Vec<(Blade, Scalar)> = Vec::new();
        for chunk in &chunks {
            let (negate, body) = match chunk.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, chunk.strip_prefix('+').unwrap_or(chunk)),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{input}`")));
            }
            let (blade, coeff) = parse_term(body, n)?;
            terms.push((blade, if negate { -coeff } else { coeff }));
        }
        Multivector::from_terms(n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn alg(n: usize) -> Algebra {
        Algebra::orthonormal(n).unwrap()
    }

    fn mv(n: usize, s: &str) -> Multivector {
        Multivector::parse(n, s).unwrap()
    }

    /// Independent oracle: expand a blade product index-by-index using only
    /// the two defining rules (swap distinct neighbors with a sign; contract
    /// equal neighbors through the form).
    fn naive_blade_mul(a: &[usize], b: &[usize], diag: &[Scalar]) -> (Scalar, Vec<usize>) {
        let mut seq: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
        let mut coeff = Scalar::one();
        'outer: loop {
            for i in 0..seq.len().saturating_sub(1) {
                if seq[i] == seq[i + 1] {
                    coeff = &coeff * &diag[seq[i]];
                    seq.drain(i..=i + 1);
                    continue 'outer;
                }
                if seq[i] > seq[i + 1] {
                    seq.swap(i, i + 1);
                    coeff = -coeff;
                    continue 'outer;
                }
            }
            return (coeff, seq);
        }
    }

    #[test]
    fn blade_kernel_defining_relations() {
        let one = vec![Scalar::one(); 4];
        let (c, b) = blade_mul(Blade::from_indices(&[0]).unwrap(), Blade::from_indices(&[0]).unwrap(), &one);
        assert_eq!((c, b), (Scalar::one(), Blade::ONE));

        let (c, b) = blade_mul(Blade::from_indices(&[0]).unwrap(), Blade::from_indices(&[1]).unwrap(), &one);
        assert_eq!((c, b), (Scalar::one(), Blade::from_indices(&[0, 1]).unwrap()));
        let (c, b) = blade_mul(Blade::from_indices(&[1]).unwrap(), Blade::from_indices(&[0]).unwrap(), &one);
        assert_eq!((c, b), (-Scalar::one(), Blade::from_indices(&[0, 1]).unwrap()));

        let (c, b) = blade_mul(
            Blade::from_indices(&[0, 1]).unwrap(),
            Blade::from_indices(&[1, 2]).unwrap(),
            &one,
        );
        assert_eq!((c, b), (Scalar::one(), Blade::from_indices(&[0, 2]).unwrap()));
    }

    #[test]
    fn blade_kernel_matches_naive_expansion() {
        // every blade pair in Cl_5, against the rule-by-rule oracle, for the
        // orthonormal form and for a non-unit diagonal
        let diags = [
            vec![Scalar::one(); 5],
            vec![
                Scalar::from_int(1),
                Scalar::from_int(2),
                Scalar::from_int(-1),
                Scalar::i(),
                Scalar::from_ratio(3, 7),
            ],
        ];
        for diag in &diags {
            for a_bits in 0u64..32 {
                for b_bits in 0u64..32 {
                    let a = Blade(a_bits);
                    let b = Blade(b_bits);
                    let (c, res) = blade_mul(a, b, diag);
                    let (nc, nseq) = naive_blade_mul(&a.indices(), &b.indices(), diag);
                    assert_eq!(c, nc, "coefficient mismatch at {a:?}·{b:?}");
                    assert_eq!(res.indices(), nseq, "blade mismatch at {a:?}·{b:?}");
                }
            }
        }
    }

    #[test]
    fn nonunit_form_contracts() {
        let diag = vec![Scalar::from_int(2), Scalar::from_int(-3)];
        let (c, b) = blade_mul(Blade::generator(0), Blade::generator(0), &diag);
        assert_eq!((c, b), (Scalar::from_int(2), Blade::ONE));
        let (c, b) = blade_mul(
            Blade::from_indices(&[0, 1]).unwrap(),
            Blade::from_indices(&[0, 1]).unwrap(),
            &diag,
        );
        // (v0v1)(v0v1) = -v0²v1² = -(2)(-3) = 6
        assert_eq!((c, b), (Scalar::from_int(6), Blade::ONE));
    }

    #[test]
    fn mv_mul_spec_cases() {
        let a2 = alg(2);
        let p = mv(2, "1 + e0e1");
        let q = mv(2, "1 - e0e1");
        assert_eq!(a2.mul(&p, &q).unwrap(), mv(2, "2"));

        let x = mv(2, "1/2 - 3*e0 + i*e0e1");
        assert_eq!(a2.mul(&x, &Multivector::one(2)).unwrap(), x);

        let v0 = Multivector::generator(2, 0).unwrap();
        assert_eq!(a2.mul(&v0, &v0).unwrap(), Multivector::one(2));
    }

    #[test]
    fn mv_mul_dimension_mismatch() {
        let a2 = alg(2);
        let err = a2.mul(&Multivector::one(3), &Multivector::one(2)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 3 });
    }

    #[test]
    fn anticommutation_and_squares() {
        let n = 10;
        let a = alg(n);
        for i in 0..n {
            let vi = Multivector::generator(n, i).unwrap();
            assert_eq!(a.mul(&vi, &vi).unwrap(), Multivector::one(n));
            for j in 0..n {
                if i == j {
                    continue;
                }
                let vj = Multivector::generator(n, j).unwrap();
                let anti = &a.mul(&vi, &vj).unwrap() + &a.mul(&vj, &vi).unwrap();
                assert!(anti.is_zero(), "v{i}v{j} + v{j}v{i} ≠ 0");
            }
        }
    }

    #[test]
    fn associativity_spot_checks() {
        let a4 = alg(4);
        let xs = [
            mv(4, "1 + e0 - e1e2"),
            mv(4, "i*e3 + 1/2*e0e1e2"),
            mv(4, "(1+i)*e0e2 - 2 + e0e1e2e3"),
        ];
        for x in &xs {
            for y in &xs {
                for z in &xs {
                    let left = a4.mul(&a4.mul(x, y).unwrap(), z).unwrap();
                    let right = a4.mul(x, &a4.mul(y, z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn parity_of_products() {
        let a4 = alg(4);
        let even = mv(4, "1 + e0e1");
        let odd = mv(4, "e2 + e0e1e3");
        assert!(a4.mul(&even, &even).unwrap().is_homogeneous(Parity::Even));
        assert!(a4.mul(&odd, &odd).unwrap().is_homogeneous(Parity::Even));
        assert!(a4.mul(&even, &odd).unwrap().is_homogeneous(Parity::Odd));
        assert_eq!(Parity::Odd.compose(Parity::Odd), Parity::Even);
    }

    #[test]
    fn grade_projection() {
        let x = mv(3, "3 + e0 + e0e1");
        assert_eq!(x.grade_project(Parity::Even), mv(3, "3 + e0e1"));
        assert_eq!(x.grade_project(Parity::Odd), mv(3, "e0"));
        assert_eq!(&x.grade_project(Parity::Even) + &x.grade_project(Parity::Odd), x);
        assert!(Multivector::one(3).grade_project(Parity::Odd).is_zero());
        let cube = mv(3, "e0e1e2");
        assert_eq!(cube.grade_project(Parity::Odd), cube);
        assert_eq!(cube.parity(), Some(Parity::Odd));
        assert_eq!(mv(3, "1 + e0").parity(), None);
    }

    #[test]
    fn basis_has_full_dimension() {
        for n in 0..=12 {
            let a = Algebra::orthonormal(n).unwrap();
            assert_eq!(a.basis().count(), 1usize << n);
        }
    }

    #[test]
    fn inverse_of_generator_and_rotor() {
        let a2 = alg(2);
        let v0 = Multivector::generator(2, 0).unwrap();
        assert_eq!(a2.inverse(&v0).unwrap(), v0);

        let r = mv(2, "1 + e0e1");
        let r_inv = a2.inverse(&r).unwrap();
        assert_eq!(r_inv, mv(2, "1/2 - 1/2*e0e1"));
        assert_eq!(a2.mul(&r, &r_inv).unwrap(), Multivector::one(2));
        assert_eq!(a2.mul(&r_inv, &r).unwrap(), Multivector::one(2));
    }

    #[test]
    fn zero_divisor_is_not_invertible() {
        let a1 = alg(1);
        let x = mv(1, "1 + e0");
        assert_eq!(a1.inverse(&x).unwrap_err(), Error::NotInvertible);
        assert_eq!(a1.inverse(&Multivector::zero(1)).unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn inverse_respects_sparse_support() {
        // element living on generators {1,3} of Cl_6: solved in a 2-generator
        // subalgebra, answer mapped back
        let a6 = alg(6);
        let x = mv(6, "1 + 2*e1e3");
        let x_inv = a6.inverse(&x).unwrap();
        assert_eq!(a6.mul(&x, &x_inv).unwrap(), Multivector::one(6));
        assert_eq!(x_inv.support_indices(), vec![1, 3]);
    }

    #[test]
    fn single_blade_inverse_under_nonunit_form() {
        let a = Algebra::with_diag(vec![Scalar::from_int(2), Scalar::from_int(-1)]).unwrap();
        let v0 = Multivector::generator(2, 0).unwrap();
        // v0² = 2, so v0⁻¹ = v0/2
        assert_eq!(a.inverse(&v0).unwrap(), v0.scale(&Scalar::from_ratio(1, 2)));
        let v1 = Multivector::generator(2, 1).unwrap();
        assert_eq!(a.mul(&a.inverse(&v1).unwrap(), &v1).unwrap(), Multivector::one(2));
    }

    #[test]
    fn conjugation_by_generator() {
        let a3 = alg(3);
        let v0 = Multivector::generator(3, 0).unwrap();
        let v1 = Multivector::generator(3, 1).unwrap();
        assert_eq!(a3.conjugate(&v0, &v1).unwrap(), -&v1);
        assert_eq!(a3.conjugate(&v0, &v0).unwrap(), v0);
    }

    #[test]
    fn rendering_matches_expected_grammar() {
        assert_eq!(Multivector::zero(3).to_string(), "0");
        assert_eq!(mv(2, "1/2 + 1/2*e0e1").to_string(), "1/2 + 1/2*e0e1");
        assert_eq!(mv(3, "-e0 + 2*e1e2").to_string(), "-e0 + 2*e1e2");
        assert_eq!(mv(2, "1 - e0e1").to_string(), "1 - e0e1");
        assert_eq!(mv(2, "(1+i)*e0e1").to_string(), "(1+i)*e0e1");
        assert_eq!(mv(2, "-3/4*i*e1").to_string(), "-3/4*i*e1");
    }

    #[test]
    fn parse_render_round_trip() {
        let samples = [
            "0",
            "1",
            "-1",
            "e0",
            "1/2 + 1/2*e0e1",
            "1 - e0e1",
            "i*e0 + (1+i)*e1e2 - 3/4*e0e1e2",
            "(1/2-3/4*i)*e0e2",
            "-i",
            "2/7 - e1",
        ];
        for s in samples {
            let x = mv(3, s);
            assert_eq!(Multivector::parse(3, &x.to_string()).unwrap(), x, "through `{s}`");
        }
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(Multivector::parse(2, "e2").is_err()); // outside truncation
        assert!(Multivector::parse(3, "e1e0").is_err()); // not ascending
        assert!(Multivector::parse(3, "e0e0").is_err());
        assert!(Multivector::parse(3, "2 e0").is_err()); // missing '*'
        assert!(Multivector::parse(3, "(1+i*e0").is_err());
        assert!(Multivector::parse(3, "").is_err());
        assert!(Multivector::parse(3, "+").is_err());
    }

    #[test]
    fn parse_merges_duplicate_blades() {
        assert_eq!(mv(2, "e0 + e0"), mv(2, "2*e0"));
        assert!(mv(2, "e0e1 - e0e1").is_zero());
    }

    #[test]
    fn normalization_picks_unit_leading_coefficient() {
        let x = mv(2, "2*e0 + 2*e0e1");
        assert_eq!(x.normalized(), mv(2, "e0 + e0e1"));
        let y = mv(2, "1/3 - e1");
        assert_eq!(y.normalized(), mv(2, "1 - 3*e1"));
    }

    #[test]
    fn blade_constructor_rejects_bad_input() {
        assert!(Blade::from_indices(&[0, 0]).is_err());
        assert!(Blade::from_indices(&[crate::MAX_GENERATORS]).is_err());
        assert_eq!(
            Blade::from_indices(&[2, 0]).unwrap(),
            Blade::from_indices(&[0, 2]).unwrap()
        );
    }

    #[test]
    fn scalar_coefficients_survive_scaling() {
        let x = mv(2, "1 + e0");
        let y = x.scale(&Scalar::new(rat(0, 1), rat(1, 1)));
        assert_eq!(y.to_string(), "i + i*e0");
        assert!(x.scale(&Scalar::zero()).is_zero());
    }
}
