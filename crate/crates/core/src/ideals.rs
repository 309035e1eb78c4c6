//! Additive subgroups, ideals, quotients and weight.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, SmithData};
use crate::rng::{FiniteRng, RngElement};
use crate::search::{first_combination, SearchOutcome};

/// Default cap on `|R|` for anything that enumerates elements.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;
/// Default budget of subsets tried by weight searches.
pub const DEFAULT_SUBSET_BUDGET: u64 = 100_000;

/// A subgroup of `(R, +)` in canonical HNF form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveSubgroup {
    rng: FiniteRng,
    lattice: Lattice,
}

impl AdditiveSubgroup {
    fn from_vectors<'a>(rng: &FiniteRng, vs: impl IntoIterator<Item = &'a [i64]>) -> Self {
        AdditiveSubgroup {
            rng: rng.clone(),
            lattice: Lattice::span(rng.invariant_factors(), vs),
        }
    }

    pub fn rng(&self) -> &FiniteRng {
        &self.rng
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn order(&self) -> u128 {
        self.lattice.order()
    }

    pub fn is_full(&self) -> bool {
        self.lattice.is_full()
    }

    pub fn contains(&self, x: &RngElement) -> bool {
        x.rng().same_structure(&self.rng) && self.lattice.contains(x.coeffs())
    }

    /// Generators read off the HNF rows.
    pub fn generators(&self) -> Vec<RngElement> {
        self.lattice
            .generators()
            .map(|g| self.rng.wrap(g.to_vec()))
            .collect()
    }

    /// All elements, sorted lexicographically.
    pub fn elements(&self) -> Vec<RngElement> {
        let mut v: Vec<Vec<i64>> = self.lattice.elements();
        v.sort();
        v.into_iter().map(|c| self.rng.wrap(c)).collect()
    }

    pub fn is_subgroup_of(&self, other: &AdditiveSubgroup) -> bool {
        self.lattice.is_subset_of(&other.lattice)
    }

    pub fn join(&self, other: &AdditiveSubgroup) -> AdditiveSubgroup {
        AdditiveSubgroup {
            rng: self.rng.clone(),
            lattice: self.lattice.join(&other.lattice),
        }
    }

    fn closed_under(&self, left: bool, right: bool) -> bool {
        let k = self.rng.rank();
        self.lattice.generators().all(|g| {
            (0..k).all(|i| {
                let e = self.rng.unit_vector(i);
                (!left || self.lattice.contains(&self.rng.mul_coeffs(&e, g)))
                    && (!right || self.lattice.contains(&self.rng.mul_coeffs(g, &e)))
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealKind {
    TwoSided,
    Left,
}

/// An ideal: a subgroup together with the side it was closed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    subgroup: AdditiveSubgroup,
    kind: IdealKind,
}

impl Ideal {
    pub fn subgroup(&self) -> &AdditiveSubgroup {
        &self.subgroup
    }

    pub fn kind(&self) -> IdealKind {
        self.kind
    }

    pub fn order(&self) -> u128 {
        self.subgroup.order()
    }

    pub fn is_full(&self) -> bool {
        self.subgroup.is_full()
    }

    pub fn contains(&self, x: &RngElement) -> bool {
        self.subgroup.contains(x)
    }

    /// Closure under multiplication by basis elements on the declared side(s).
    pub fn is_closed(&self) -> bool {
        match self.kind {
            IdealKind::TwoSided => self.subgroup.closed_under(true, true),
            IdealKind::Left => self.subgroup.closed_under(true, false),
        }
    }

    /// Whether the subgroup is closed on both sides, whatever its kind.
    pub fn is_two_sided(&self) -> bool {
        self.subgroup.closed_under(true, true)
    }
}

fn check_ambient(rng: &FiniteRng, zs: &[RngElement]) -> Result<()> {
    if zs.iter().all(|z| z.rng().same_structure(rng)) {
        Ok(())
    } else {
        Err(Error::AmbientMismatch)
    }
}

pub fn subgroup_from_generators(rng: &FiniteRng, elements: &[RngElement]) -> Result<AdditiveSubgroup> {
    check_ambient(rng, elements)?;
    Ok(AdditiveSubgroup::from_vectors(rng, elements.iter().map(|e| e.coeffs())))
}

/// Vectors spanning `Z + RZ + ZR + RZR` (or `Z + RZ` when `two_sided` is off).
fn ideal_spanning_set(rng: &FiniteRng, zs: &[Vec<i64>], two_sided: bool) -> Vec<Vec<i64>> {
    let k = rng.rank();
    let mut out = Vec::with_capacity(zs.len() * (1 + 2 * k + k * k));
    for z in zs {
        out.push(z.clone());
        for i in 0..k {
            let ei = rng.unit_vector(i);
            let ez = rng.mul_coeffs(&ei, z);
            if two_sided {
                out.push(rng.mul_coeffs(z, &ei));
                for j in 0..k {
                    out.push(rng.mul_coeffs(&ez, &rng.unit_vector(j)));
                }
            }
            out.push(ez);
        }
    }
    out
}

fn ideal_lattice(rng: &FiniteRng, zs: &[Vec<i64>]) -> Lattice {
    let vs = ideal_spanning_set(rng, zs, true);
    Lattice::span(rng.invariant_factors(), vs.iter().map(|v| v.as_slice()))
}

/// `⟨Z⟩ = span(Z + RZ + ZR + RZR)`, computed in one pass.
pub fn ideal_generated_by(rng: &FiniteRng, zs: &[RngElement]) -> Result<Ideal> {
    check_ambient(rng, zs)?;
    let raw: Vec<Vec<i64>> = zs.iter().map(|z| z.coeffs().to_vec()).collect();
    let ideal = Ideal {
        subgroup: AdditiveSubgroup {
            rng: rng.clone(),
            lattice: ideal_lattice(rng, &raw),
        },
        kind: IdealKind::TwoSided,
    };
    debug_assert!(ideal.is_closed());
    Ok(ideal)
}

/// `span(Z + RZ)`.
pub fn left_ideal_generated_by(rng: &FiniteRng, zs: &[RngElement]) -> Result<Ideal> {
    check_ambient(rng, zs)?;
    let raw: Vec<Vec<i64>> = zs.iter().map(|z| z.coeffs().to_vec()).collect();
    let vs = ideal_spanning_set(rng, &raw, false);
    let ideal = Ideal {
        subgroup: AdditiveSubgroup::from_vectors(rng, vs.iter().map(|v| v.as_slice())),
        kind: IdealKind::Left,
    };
    debug_assert!(ideal.is_closed());
    Ok(ideal)
}

/// `R² = span{eᵢeⱼ}` as a two-sided ideal.
pub fn square(rng: &FiniteRng) -> Ideal {
    let k = rng.rank();
    let subgroup = AdditiveSubgroup::from_vectors(
        rng,
        (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| rng.basis_product(i, j)),
    );
    Ideal {
        subgroup,
        kind: IdealKind::TwoSided,
    }
}

/// `R² = R`.
pub fn is_irng(rng: &FiniteRng) -> bool {
    square(rng).is_full()
}

pub fn is_single_generator(rng: &FiniteRng, z: &RngElement) -> Result<bool> {
    Ok(ideal_generated_by(rng, std::slice::from_ref(z))?.is_full())
}

/// Tests `span(RZR) = R`, which must hold whenever `R` is an irng and
/// `⟨Z⟩ = R`.
pub fn rzr_span_check(rng: &FiniteRng, zs: &[RngElement]) -> Result<bool> {
    if !is_irng(rng) {
        return Err(Error::PreconditionFailed("R is not an irng".into()));
    }
    if !ideal_generated_by(rng, zs)?.is_full() {
        return Err(Error::PreconditionFailed("Z does not generate R as an ideal".into()));
    }
    let k = rng.rank();
    let mut vs = Vec::new();
    for z in zs {
        for i in 0..k {
            let ez = rng.mul_coeffs(&rng.unit_vector(i), z.coeffs());
            for j in 0..k {
                vs.push(rng.mul_coeffs(&ez, &rng.unit_vector(j)));
            }
        }
    }
    Ok(Lattice::span(rng.invariant_factors(), vs.iter().map(|v| v.as_slice())).is_full())
}

/// `R/I` together with the projection `R → R/I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    source: FiniteRng,
    target: FiniteRng,
    smith: SmithData,
}

impl Quotient {
    pub fn source(&self) -> &FiniteRng {
        &self.source
    }

    pub fn rng(&self) -> &FiniteRng {
        &self.target
    }

    pub fn project(&self, x: &RngElement) -> Result<RngElement> {
        if !x.rng().same_structure(&self.source) {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.target.wrap(self.smith.project(x.coeffs())))
    }

    /// A preimage of the `a`-th basis element of `R/I`.
    pub fn lift_basis(&self, a: usize) -> RngElement {
        self.source.wrap(self.smith.lifts[a].clone())
    }
}

/// Quotient by a two-sided ideal, invariant factors via Smith normal form.
pub fn quotient(rng: &FiniteRng, ideal: &Ideal) -> Result<Quotient> {
    if !ideal.subgroup.rng.same_structure(rng) {
        return Err(Error::AmbientMismatch);
    }
    if !ideal.is_two_sided() {
        return Err(Error::NotTwoSided);
    }
    let smith = ideal.subgroup.lattice.smith()?;
    let kq = smith.invariants.len();
    let consts: Vec<Vec<Vec<i64>>> = (0..kq)
        .map(|a| {
            (0..kq)
                .map(|b| smith.project(&rng.mul_coeffs(&smith.lifts[a], &smith.lifts[b])))
                .collect()
        })
        .collect();
    let target = FiniteRng::new(format!("{}/I", rng.name()), smith.invariants.clone(), consts)?;
    Ok(Quotient {
        source: rng.clone(),
        target,
        smith,
    })
}

/// Minimal number of generators of `R/R²`, and at least one for `R ≠ 0`.
pub fn weight_lower_bound(rng: &FiniteRng) -> Result<usize> {
    if rng.order() == 1 {
        return Ok(0);
    }
    let q = quotient(rng, &square(rng))?;
    Ok(q.rng().rank().max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightResult {
    Exact(usize),
    AtLeast(usize),
}

impl WeightResult {
    /// The proven lower bound carried by either variant.
    pub fn lower(&self) -> usize {
        match *self {
            WeightResult::Exact(n) | WeightResult::AtLeast(n) => n,
        }
    }
}

impl fmt::Display for WeightResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightResult::Exact(n) => write!(f, "exact {n}"),
            WeightResult::AtLeast(n) => write!(f, "at-least {n}"),
        }
    }
}

impl FromStr for WeightResult {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            msg: format!("not a weight result: {s:?}"),
        };
        let mut it = s.split_whitespace();
        let tag = it.next().ok_or_else(bad)?;
        let n: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if it.next().is_some() {
            return Err(bad());
        }
        match tag {
            "exact" => Ok(WeightResult::Exact(n)),
            "at-least" => Ok(WeightResult::AtLeast(n)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub enumeration_cap: u128,
    pub subset_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            subset_budget: DEFAULT_SUBSET_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightSearch {
    pub result: WeightResult,
    /// Canonically least generating subset, when the result is exact.
    pub witness: Option<Vec<RngElement>>,
    pub subsets_tested: u64,
}

/// Least `n` such that some `n` elements generate `R` as a two-sided ideal.
///
/// Sizes are tried from [`weight_lower_bound`] upward; subsets of nonzero
/// elements are tried in lexicographic order of element indices.
pub fn weight_exact(rng: &FiniteRng, limits: SearchLimits) -> Result<WeightSearch> {
    let lower = weight_lower_bound(rng)?;
    if lower == 0 {
        return Ok(WeightSearch {
            result: WeightResult::Exact(0),
            witness: Some(Vec::new()),
            subsets_tested: 0,
        });
    }
    if rng.order() > limits.enumeration_cap {
        return Ok(WeightSearch {
            result: WeightResult::AtLeast(lower),
            witness: None,
            subsets_tested: 0,
        });
    }
    let nonzero: Vec<Vec<i64>> = rng
        .enumerate_elements(limits.enumeration_cap)?
        .skip(1)
        .map(|e| e.into_coeffs())
        .collect();
    let mut tested = 0u64;
    let mut principal: Option<Vec<Lattice>> = None;
    // The basis generates R, so the loop ends by n = rank.
    for n in lower..=rng.rank() {
        let remaining = limits.subset_budget.saturating_sub(tested);
        let outcome = if n == 1 {
            first_combination(nonzero.len(), 1, remaining, |c| {
                ideal_lattice(rng, std::slice::from_ref(&nonzero[c[0]])).is_full()
            })
        } else {
            let p = principal.get_or_insert_with(|| {
                nonzero
                    .par_iter()
                    .map(|z| ideal_lattice(rng, std::slice::from_ref(z)))
                    .collect()
            });
            first_combination(nonzero.len(), n, remaining, |c| {
                let mut acc = p[c[0]].clone();
                for &i in &c[1..] {
                    acc = acc.join(&p[i]);
                    if acc.is_full() {
                        return true;
                    }
                }
                acc.is_full()
            })
        };
        match outcome {
            SearchOutcome::Found(c, t) => {
                tested += t;
                return Ok(WeightSearch {
                    result: WeightResult::Exact(n),
                    witness: Some(c.into_iter().map(|i| rng.wrap(nonzero[i].clone())).collect()),
                    subsets_tested: tested,
                });
            }
            SearchOutcome::Exhausted(t) => tested += t,
            SearchOutcome::BudgetExceeded(t) => {
                return Ok(WeightSearch {
                    result: WeightResult::AtLeast(n),
                    witness: None,
                    subsets_tested: tested + t,
                });
            }
        }
    }
    unreachable!("the basis generates R as an ideal")
}

/// Element-enumeration closures, kept as an independent cross-check of the
/// HNF path for small rngs.
pub mod enumerative {
    use std::collections::BTreeSet;

    use crate::error::{Error, Result};
    use crate::rng::{FiniteRng, RngElement};

    pub const ORACLE_CAP: u128 = 1 << 10;

    fn close(
        rng: &FiniteRng,
        zs: &[RngElement],
        left: bool,
        right: bool,
    ) -> Result<BTreeSet<Vec<i64>>> {
        if rng.order() > ORACLE_CAP {
            return Err(Error::TooLarge {
                size: rng.order(),
                cap: ORACLE_CAP,
            });
        }
        let all: Vec<RngElement> = rng.enumerate_elements(ORACLE_CAP)?.collect();
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        set.insert(rng.zero().into_coeffs());
        let mut frontier: Vec<RngElement> = Vec::new();
        for z in zs {
            if set.insert(z.coeffs().to_vec()) {
                frontier.push(z.clone());
            }
        }
        while let Some(x) = frontier.pop() {
            let mut new = Vec::new();
            for y in set.iter() {
                new.push(x.add(&rng.element(y)?)?);
            }
            for r in &all {
                if left {
                    new.push(r.mul(&x)?);
                }
                if right {
                    new.push(x.mul(r)?);
                }
            }
            for n in new {
                if set.insert(n.coeffs().to_vec()) {
                    frontier.push(n);
                }
            }
        }
        Ok(set)
    }

    pub fn subgroup(rng: &FiniteRng, zs: &[RngElement]) -> Result<BTreeSet<Vec<i64>>> {
        close(rng, zs, false, false)
    }

    pub fn ideal(rng: &FiniteRng, zs: &[RngElement]) -> Result<BTreeSet<Vec<i64>>> {
        close(rng, zs, true, true)
    }

    pub fn left_ideal(rng: &FiniteRng, zs: &[RngElement]) -> Result<BTreeSet<Vec<i64>>> {
        close(rng, zs, true, false)
    }

    /// Weight by brute force over all subsets of nonzero elements.
    pub fn weight(rng: &FiniteRng) -> Result<usize> {
        let order = rng.order() as usize;
        if order == 1 {
            return Ok(0);
        }
        let nonzero: Vec<RngElement> = rng.enumerate_elements(ORACLE_CAP)?.skip(1).collect();
        for n in 1..=nonzero.len() {
            let mut idx: Vec<usize> = (0..n).collect();
            loop {
                let zs: Vec<RngElement> = idx.iter().map(|&i| nonzero[i].clone()).collect();
                if ideal(rng, &zs)?.len() == order {
                    return Ok(n);
                }
                let mut i = n;
                let mut advanced = false;
                while i > 0 {
                    i -= 1;
                    if idx[i] < nonzero.len() - n + i {
                        idx[i] += 1;
                        for j in i + 1..n {
                            idx[j] = idx[j - 1] + 1;
                        }
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
        }
        unreachable!("R generates itself")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn set_of(sg: &AdditiveSubgroup) -> std::collections::BTreeSet<Vec<i64>> {
        sg.elements().into_iter().map(|e| e.into_coeffs()).collect()
    }

    #[test]
    fn subgroup_examples() {
        let z4 = catalog::cyclic_rng(4, 1);
        assert_eq!(subgroup_from_generators(&z4, &[]).unwrap().order(), 1);
        let two = subgroup_from_generators(&z4, &[z4.element(&[2]).unwrap()]).unwrap();
        assert_eq!(set_of(&two), [vec![0], vec![2]].into_iter().collect());
        let v = catalog::zero_mult_rng(&[2, 2]);
        let d = subgroup_from_generators(&v, &[v.element(&[1, 1]).unwrap()]).unwrap();
        assert_eq!(d.order(), 2);
    }

    #[test]
    fn ideal_examples() {
        let z4 = catalog::cyclic_rng(4, 1);
        assert_eq!(ideal_generated_by(&z4, &[z4.zero()]).unwrap().order(), 1);
        assert_eq!(ideal_generated_by(&z4, &[z4.element(&[2]).unwrap()]).unwrap().order(), 2);
        let m2 = catalog::matrix_rng(2, 2);
        assert!(ideal_generated_by(&m2, &[m2.basis(0)]).unwrap().is_full());
    }

    #[test]
    fn left_ideal_examples() {
        let m2 = catalog::matrix_rng(2, 2);
        assert_eq!(left_ideal_generated_by(&m2, &[m2.zero()]).unwrap().order(), 1);
        // R·E11 = {a E11 + b E21}
        let l = left_ideal_generated_by(&m2, &[m2.basis(0)]).unwrap();
        assert_eq!(l.order(), 4);
        assert!(l.contains(&m2.basis(2)));
        assert!(!l.contains(&m2.basis(1)));
        assert!(l.is_closed());
        assert!(!l.is_two_sided());

        let r7 = catalog::remark7_rng();
        // basis E11 E12 E13 E23 E33; R·E33 = span{E13, E23, E33}
        let l = left_ideal_generated_by(&r7, &[r7.basis(4)]).unwrap();
        let oracle = enumerative::left_ideal(&r7, &[r7.basis(4)]).unwrap();
        assert_eq!(set_of(l.subgroup()), oracle);
        assert_eq!(l.order(), 8);
    }

    #[test]
    fn irng_examples() {
        assert!(!is_irng(&catalog::zero_mult_rng(&[2])));
        assert!(is_irng(&catalog::matrix_rng(2, 2)));
        assert!(is_irng(&catalog::remark7_rng()));
        assert!(!is_irng(&catalog::cyclic_rng(4, 2)));
    }

    #[test]
    fn rzr_examples() {
        let m2 = catalog::matrix_rng(2, 2);
        assert!(rzr_span_check(&m2, &[m2.basis(0)]).unwrap());
        let z4 = catalog::cyclic_rng(4, 1);
        assert!(rzr_span_check(&z4, &[z4.basis(0)]).unwrap());
        assert!(matches!(
            rzr_span_check(&z4, &[z4.element(&[2]).unwrap()]),
            Err(Error::PreconditionFailed(_))
        ));
        let zm = catalog::zero_mult_rng(&[2]);
        assert!(matches!(
            rzr_span_check(&zm, &[zm.basis(0)]),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn quotient_examples() {
        let z4 = catalog::cyclic_rng(4, 1);
        let zero = ideal_generated_by(&z4, &[]).unwrap();
        let q = quotient(&z4, &zero).unwrap();
        assert_eq!(q.rng().invariant_factors(), &[4]);
        let full = ideal_generated_by(&z4, &[z4.basis(0)]).unwrap();
        assert_eq!(quotient(&z4, &full).unwrap().rng().order(), 1);

        let two = ideal_generated_by(&z4, &[z4.element(&[2]).unwrap()]).unwrap();
        let q = quotient(&z4, &two).unwrap();
        assert_eq!(q.rng().invariant_factors(), &[2]);
        // Z/2 with the induced (unital) product
        let one = q.project(&z4.basis(0)).unwrap();
        assert_eq!(one.coeffs(), &[1]);
        assert_eq!(one.mul(&one).unwrap(), one);
        assert!(q.project(&z4.element(&[2]).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn quotient_rejects_one_sided() {
        let m2 = catalog::matrix_rng(2, 2);
        let l = left_ideal_generated_by(&m2, &[m2.basis(0)]).unwrap();
        assert_eq!(quotient(&m2, &l).unwrap_err(), Error::NotTwoSided);
    }

    #[test]
    fn quotient_projection_is_a_homomorphism() {
        let r7 = catalog::remark7_rng();
        // ideal generated by E13
        let i = ideal_generated_by(&r7, &[r7.basis(2)]).unwrap();
        let q = quotient(&r7, &i).unwrap();
        assert_eq!(q.rng().order() * i.order(), 32);
        let all: Vec<_> = r7.enumerate_elements(64).unwrap().collect();
        for x in &all {
            let px = q.project(x).unwrap();
            assert_eq!(px.is_zero(), i.contains(x), "kernel is the ideal");
            for y in &all {
                let py = q.project(y).unwrap();
                assert_eq!(q.project(&x.add(y).unwrap()).unwrap(), px.add(&py).unwrap());
                assert_eq!(q.project(&x.mul(y).unwrap()).unwrap(), px.mul(&py).unwrap());
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(weight_lower_bound(&catalog::zero_mult_rng(&[2, 2])).unwrap(), 2);
        assert_eq!(weight_lower_bound(&catalog::remark7_rng()).unwrap(), 1);
        assert_eq!(weight_lower_bound(&catalog::zero_mult_rng(&[6])).unwrap(), 1);
        assert_eq!(weight_lower_bound(&catalog::zero_rng()).unwrap(), 0);
    }

    #[test]
    fn weight_examples() {
        let lim = SearchLimits::default();
        assert_eq!(weight_exact(&catalog::matrix_rng(2, 2), lim).unwrap().result, WeightResult::Exact(1));
        let w = weight_exact(&catalog::zero_mult_rng(&[2, 2]), lim).unwrap();
        assert_eq!(w.result, WeightResult::Exact(2));
        assert_eq!(w.witness.unwrap().len(), 2);
        assert_eq!(weight_exact(&catalog::remark7_rng(), lim).unwrap().result, WeightResult::Exact(1));
        assert_eq!(weight_exact(&catalog::zero_rng(), lim).unwrap().result, WeightResult::Exact(0));
    }

    #[test]
    fn weight_degrades_to_lower_bound() {
        let tight = SearchLimits {
            enumeration_cap: 1 << 20,
            subset_budget: 1,
        };
        // (Z/2)^3 with zero product needs 3 generators; one subset is not enough to decide.
        let w = weight_exact(&catalog::zero_mult_rng(&[2, 2, 2]), tight).unwrap();
        assert_eq!(w.result, WeightResult::AtLeast(3));
        let small_cap = SearchLimits {
            enumeration_cap: 8,
            subset_budget: 1000,
        };
        let w = weight_exact(&catalog::remark7_rng(), small_cap).unwrap();
        assert_eq!(w.result, WeightResult::AtLeast(1));
    }

    #[test]
    fn weight_result_text() {
        for w in [WeightResult::Exact(3), WeightResult::AtLeast(2)] {
            assert_eq!(w.to_string().parse::<WeightResult>().unwrap(), w);
        }
        assert_eq!(WeightResult::Exact(1).to_string(), "exact 1");
        assert!("maybe 2".parse::<WeightResult>().is_err());
    }

    #[test]
    fn hnf_ideals_match_enumeration_on_catalog() {
        for entry in catalog::rng_entries() {
            let r = (entry.build)();
            if r.order() > 256 {
                continue;
            }
            for z in r.enumerate_elements(256).unwrap() {
                let hnf = ideal_generated_by(&r, std::slice::from_ref(&z)).unwrap();
                let naive = enumerative::ideal(&r, std::slice::from_ref(&z)).unwrap();
                assert_eq!(set_of(hnf.subgroup()), naive, "{} at {z}", entry.name);
                assert!(hnf.is_closed());
            }
        }
    }

    #[test]
    fn weight_matches_brute_force_on_small_catalog() {
        for entry in catalog::rng_entries() {
            let r = (entry.build)();
            if r.order() > 64 {
                continue;
            }
            let fast = weight_exact(&r, SearchLimits::default()).unwrap().result;
            let slow = enumerative::weight(&r).unwrap();
            assert_eq!(fast, WeightResult::Exact(slow), "{}", entry.name);
        }
    }

    fn small_rng_and_sets() -> impl Strategy<Value = (usize, Vec<u16>, Vec<u16>)> {
        (0usize..catalog::rng_entries().len(), prop::collection::vec(any::<u16>(), 0..3), prop::collection::vec(any::<u16>(), 0..3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ideal_closure_is_idempotent_and_monotone((e, a, b) in small_rng_and_sets()) {
            let r = (catalog::rng_entries()[e].build)();
            prop_assume!(r.order() <= 1 << 12);
            let pick = |xs: &[u16]| -> Vec<RngElement> {
                xs.iter().map(|&i| r.wrap(r.coeffs_at(i as u128 % r.order()))).collect()
            };
            let za = pick(&a);
            let mut zab = za.clone();
            zab.extend(pick(&b));
            let ia = ideal_generated_by(&r, &za).unwrap();
            let iab = ideal_generated_by(&r, &zab).unwrap();
            prop_assert!(ia.subgroup().is_subgroup_of(iab.subgroup()));
            let again = ideal_generated_by(&r, &ia.subgroup().generators()).unwrap();
            prop_assert_eq!(again.subgroup(), ia.subgroup());
            prop_assert!(ia.is_closed());
        }
    }
}
