//! Finite rngs presented by structure constants.
//!
//! The additive group is `Z/d₁ ⊕ … ⊕ Z/d_k` with basis `e₁ … e_k`, and the
//! product is the bilinear extension of `eᵢ·eⱼ = Σ_t c[i][j][t] e_t`.
//! Structure constants are validated once, in [`FiniteRng::new`]; every
//! other operation assumes a valid table.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest accepted additive modulus. Keeps every intermediate product of two
/// reduced coefficients inside `i64`.
pub const MAX_MODULUS: i64 = i32::MAX as i64;

#[derive(Debug)]
struct RngData {
    name: String,
    factors: Vec<i64>,
    /// Flattened `k × k × k`, index `(i * k + j) * k + t`.
    consts: Vec<i64>,
    labels: Option<Vec<String>>,
}

/// A finite rng. Cheap to clone; the table is shared.
#[derive(Clone)]
pub struct FiniteRng(Arc<RngData>);

impl FiniteRng {
    /// Validates the table and builds the rng.
    ///
    /// `structure_constants[i][j]` is the coefficient vector of `eᵢ·eⱼ`.
    /// Entries are reduced modulo the matching invariant factor.
    pub fn new(
        name: impl Into<String>,
        invariant_factors: Vec<i64>,
        structure_constants: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let k = invariant_factors.len();
        for &d in &invariant_factors {
            if !(2..=MAX_MODULUS).contains(&d) {
                return Err(Error::InvalidInput(format!(
                    "invariant factor {d} outside 2..={MAX_MODULUS}"
                )));
            }
        }
        if structure_constants.len() != k {
            return Err(Error::InvalidInput(format!(
                "expected {k} rows of structure constants, got {}",
                structure_constants.len()
            )));
        }
        let mut consts = Vec::with_capacity(k * k * k);
        for (i, row) in structure_constants.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidInput(format!(
                    "structure constant row {} has {} entries, expected {k}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != k {
                    return Err(Error::InvalidInput(format!(
                        "e{} e{} has {} coefficients, expected {k}",
                        i + 1,
                        j + 1,
                        v.len()
                    )));
                }
                for (t, &c) in v.iter().enumerate() {
                    consts.push(c.rem_euclid(invariant_factors[t]));
                }
            }
        }
        let rng = FiniteRng(Arc::new(RngData {
            name: name.into(),
            factors: invariant_factors,
            consts,
            labels: None,
        }));
        rng.check_bilinearity()?;
        rng.check_associativity()?;
        Ok(rng)
    }

    /// Same rng with basis labels attached (used for reports only).
    pub fn with_labels(self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "{} labels for rank {}",
                labels.len(),
                self.rank()
            )));
        }
        Ok(FiniteRng(Arc::new(RngData {
            name: self.0.name.clone(),
            factors: self.0.factors.clone(),
            consts: self.0.consts.clone(),
            labels: Some(labels),
        })))
    }

    pub fn renamed(self, name: impl Into<String>) -> Self {
        FiniteRng(Arc::new(RngData {
            name: name.into(),
            factors: self.0.factors.clone(),
            consts: self.0.consts.clone(),
            labels: self.0.labels.clone(),
        }))
    }

    fn check_bilinearity(&self) -> Result<()> {
        let k = self.rank();
        let d = &self.0.factors;
        for i in 0..k {
            for j in 0..k {
                for t in 0..k {
                    let c = self.constant(i, j, t);
                    if (d[i] * c) % d[t] != 0 || (d[j] * c) % d[t] != 0 {
                        return Err(Error::BilinearityViolation {
                            i: i + 1,
                            j: j + 1,
                            t: t + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<()> {
        let k = self.rank();
        for i in 0..k {
            for j in 0..k {
                let ij = self.basis_product(i, j).to_vec();
                for l in 0..k {
                    let left = self.mul_coeffs(&ij, &self.unit_vector(l));
                    let jl = self.basis_product(j, l).to_vec();
                    let right = self.mul_coeffs(&self.unit_vector(i), &jl);
                    if left != right {
                        return Err(Error::AssociativityViolation {
                            i: i + 1,
                            j: j + 1,
                            l: l + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    /// Number of cyclic factors `k`.
    pub fn rank(&self) -> usize {
        self.0.factors.len()
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.0.factors
    }

    /// `|R| = Π dᵢ`, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.0
            .factors
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
            .unwrap_or(u128::MAX)
    }

    fn constant(&self, i: usize, j: usize, t: usize) -> i64 {
        let k = self.rank();
        self.0.consts[(i * k + j) * k + t]
    }

    /// Coefficients of `eᵢ·eⱼ` (0-based indices).
    pub fn basis_product(&self, i: usize, j: usize) -> &[i64] {
        let k = self.rank();
        let start = (i * k + j) * k;
        &self.0.consts[start..start + k]
    }

    pub(crate) fn unit_vector(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    /// Whether both handles describe the same additive group and product.
    pub fn same_structure(&self, other: &FiniteRng) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.factors == other.0.factors && self.0.consts == other.0.consts)
    }

    fn ensure_same(&self, other: &FiniteRng) -> Result<()> {
        if self.same_structure(other) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    // Raw coefficient arithmetic. Inputs must already be reduced.

    pub(crate) fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(&self.0.factors) {
            *x = x.rem_euclid(d);
        }
    }

    pub(crate) fn add_coeffs(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(&self.0.factors)
            .map(|((a, b), d)| (a + b) % d)
            .collect()
    }

    pub(crate) fn sub_coeffs(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(y)
            .zip(&self.0.factors)
            .map(|((a, b), d)| (a - b).rem_euclid(*d))
            .collect()
    }

    pub(crate) fn neg_coeffs(&self, x: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(&self.0.factors)
            .map(|(a, d)| (d - a) % d)
            .collect()
    }

    /// `m·x` for an arbitrary integer `m`.
    pub(crate) fn scale_coeffs(&self, m: i64, x: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(&self.0.factors)
            .map(|(a, d)| (m.rem_euclid(*d) * a) % d)
            .collect()
    }

    pub(crate) fn mul_coeffs(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let k = self.rank();
        let d = &self.0.factors;
        let mut out = vec![0i64; k];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = self.basis_product(i, j);
                let p = xi * yj;
                for t in 0..k {
                    if c[t] != 0 {
                        // Reducing x_i y_j mod d_t first is sound: d_t c ≡ 0 (mod d_t).
                        out[t] = (out[t] + (p % d[t]) * c[t]) % d[t];
                    }
                }
            }
        }
        out
    }

    // Elements.

    pub fn zero(&self) -> RngElement {
        RngElement {
            rng: self.clone(),
            coeffs: vec![0; self.rank()],
        }
    }

    /// Basis element `e_{i+1}` (0-based argument).
    pub fn basis(&self, i: usize) -> RngElement {
        RngElement {
            rng: self.clone(),
            coeffs: self.unit_vector(i),
        }
    }

    /// Element with the given coefficients, reduced into canonical form.
    pub fn element(&self, coeffs: &[i64]) -> Result<RngElement> {
        if coeffs.len() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for rank {}",
                coeffs.len(),
                self.rank()
            )));
        }
        let mut c = coeffs.to_vec();
        self.reduce(&mut c);
        Ok(RngElement {
            rng: self.clone(),
            coeffs: c,
        })
    }

    pub(crate) fn wrap(&self, coeffs: Vec<i64>) -> RngElement {
        debug_assert_eq!(coeffs.len(), self.rank());
        RngElement {
            rng: self.clone(),
            coeffs,
        }
    }

    /// Position of a reduced coefficient vector in lexicographic order.
    pub fn index_of(&self, coeffs: &[i64]) -> u128 {
        coeffs
            .iter()
            .zip(&self.0.factors)
            .fold(0u128, |acc, (&c, &d)| acc * d as u128 + c as u128)
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn coeffs_at(&self, mut index: u128) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        for (x, &d) in v.iter_mut().zip(&self.0.factors).rev() {
            *x = (index % d as u128) as i64;
            index /= d as u128;
        }
        v
    }

    /// Every element exactly once, lexicographic in the coefficients.
    pub fn enumerate_elements(&self, cap: u128) -> Result<Elements> {
        let size = self.order();
        if size > cap {
            return Err(Error::TooLarge { size, cap });
        }
        Ok(Elements {
            rng: self.clone(),
            next: Some(vec![0; self.rank()]),
        })
    }

    /// First `(i, j)` with `eᵢeⱼ ≠ eⱼeᵢ`, 0-based.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let k = self.rank();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| self.basis_product(i, j) != self.basis_product(j, i))
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    /// A two-sided unit `z` (`z·eᵢ = eᵢ·z = eᵢ`) found by exhaustive search.
    pub fn find_unit_exhaustive(&self, cap: u128) -> Result<Option<RngElement>> {
        let k = self.rank();
        for z in self.enumerate_elements(cap)? {
            let ok = (0..k).all(|i| {
                let e = self.unit_vector(i);
                self.mul_coeffs(&z.coeffs, &e) == e && self.mul_coeffs(&e, &z.coeffs) == e
            });
            if ok {
                return Ok(Some(z));
            }
        }
        Ok(None)
    }
}

impl PartialEq for FiniteRng {
    fn eq(&self, other: &Self) -> bool {
        self.same_structure(other) && self.0.name == other.0.name
    }
}

impl Eq for FiniteRng {}

impl fmt::Debug for FiniteRng {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRng")
            .field("name", &self.0.name)
            .field("factors", &self.0.factors)
            .finish_non_exhaustive()
    }
}

/// Iterator returned by [`FiniteRng::enumerate_elements`].
pub struct Elements {
    rng: FiniteRng,
    next: Option<Vec<i64>>,
}

impl Iterator for Elements {
    type Item = RngElement;

    fn next(&mut self) -> Option<RngElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let factors = self.rng.invariant_factors();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < factors[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(self.rng.wrap(current))
    }
}

/// An element of a [`FiniteRng`], coefficients in `0..dᵢ`.
#[derive(Clone, PartialEq, Eq)]
pub struct RngElement {
    rng: FiniteRng,
    coeffs: Vec<i64>,
}

impl RngElement {
    pub fn rng(&self) -> &FiniteRng {
        &self.rng
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &RngElement) -> Result<RngElement> {
        self.rng.ensure_same(&other.rng)?;
        Ok(self.rng.wrap(self.rng.add_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &RngElement) -> Result<RngElement> {
        self.rng.ensure_same(&other.rng)?;
        Ok(self.rng.wrap(self.rng.sub_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn neg(&self) -> RngElement {
        self.rng.wrap(self.rng.neg_coeffs(&self.coeffs))
    }

    pub fn mul(&self, other: &RngElement) -> Result<RngElement> {
        self.rng.ensure_same(&other.rng)?;
        Ok(self.rng.wrap(self.rng.mul_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, m: i64) -> RngElement {
        self.rng.wrap(self.rng.scale_coeffs(m, &self.coeffs))
    }

    /// `x·x = x`.
    pub fn is_idempotent(&self) -> bool {
        self.rng.mul_coeffs(&self.coeffs, &self.coeffs) == self.coeffs
    }

    /// `x^e` for `e ≥ 1`, by repeated squaring.
    pub fn pow(&self, e: u64) -> RngElement {
        assert!(e >= 1, "rng elements have no zeroth power");
        let mut base = self.coeffs.clone();
        let mut acc: Option<Vec<i64>> = None;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => self.rng.mul_coeffs(&a, &base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = self.rng.mul_coeffs(&base, &base);
            }
        }
        self.rng.wrap(acc.expect("e >= 1"))
    }

    /// Position in the canonical (lexicographic) element order.
    pub fn index(&self) -> u128 {
        self.rng.index_of(&self.coeffs)
    }
}

impl PartialOrd for RngElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RngElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl std::hash::Hash for RngElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for RngElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RngElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// An element `m + r` of the unitization `R⁺ = Z ⊕ R`.
///
/// The integer part is exact; overflow is reported, never wrapped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitizationElement {
    int: i64,
    part: RngElement,
}

impl UnitizationElement {
    pub fn new(int: i64, part: RngElement) -> Self {
        UnitizationElement { int, part }
    }

    pub fn zero(rng: &FiniteRng) -> Self {
        UnitizationElement::new(0, rng.zero())
    }

    pub fn one(rng: &FiniteRng) -> Self {
        UnitizationElement::new(1, rng.zero())
    }

    /// The embedding `r ↦ (0, r)`.
    pub fn from_rng(r: RngElement) -> Self {
        UnitizationElement::new(0, r)
    }

    pub fn int_part(&self) -> i64 {
        self.int
    }

    pub fn rng_part(&self) -> &RngElement {
        &self.part
    }

    /// The rng part, provided the integer part is zero.
    pub fn into_rng(self) -> Option<RngElement> {
        (self.int == 0).then_some(self.part)
    }

    pub fn u_add(&self, other: &Self) -> Result<Self> {
        let int = self.int.checked_add(other.int).ok_or(Error::IntegerOverflow)?;
        Ok(UnitizationElement::new(int, self.part.add(&other.part)?))
    }

    pub fn u_neg(&self) -> Result<Self> {
        let int = self.int.checked_neg().ok_or(Error::IntegerOverflow)?;
        Ok(UnitizationElement::new(int, self.part.neg()))
    }

    pub fn u_sub(&self, other: &Self) -> Result<Self> {
        self.u_add(&other.u_neg()?)
    }

    /// `(m, r)(m', r') = (mm', m·r' + m'·r + r·r')`.
    pub fn u_mul(&self, other: &Self) -> Result<Self> {
        let rng = self.part.rng();
        rng.ensure_same(other.part.rng())?;
        let int = self.int.checked_mul(other.int).ok_or(Error::IntegerOverflow)?;
        let a = rng.scale_coeffs(self.int, &other.part.coeffs);
        let b = rng.scale_coeffs(other.int, &self.part.coeffs);
        let c = rng.mul_coeffs(&self.part.coeffs, &other.part.coeffs);
        let sum = rng.add_coeffs(&rng.add_coeffs(&a, &b), &c);
        Ok(UnitizationElement::new(int, rng.wrap(sum)))
    }

    /// Action on the rng: `(m, r)·x = m·x + r·x`.
    pub fn act_left(&self, x: &RngElement) -> Result<RngElement> {
        let rng = self.part.rng();
        rng.ensure_same(x.rng())?;
        let a = rng.scale_coeffs(self.int, &x.coeffs);
        Ok(rng.wrap(rng.add_coeffs(&a, &rng.mul_coeffs(&self.part.coeffs, &x.coeffs))))
    }

    /// `x·(m, r) = m·x + x·r`.
    pub fn act_right(&self, x: &RngElement) -> Result<RngElement> {
        let rng = self.part.rng();
        rng.ensure_same(x.rng())?;
        let a = rng.scale_coeffs(self.int, &x.coeffs);
        Ok(rng.wrap(rng.add_coeffs(&a, &rng.mul_coeffs(&x.coeffs, &self.part.coeffs))))
    }
}

impl fmt::Debug for UnitizationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UnitizationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.int, self.part)
    }
}
