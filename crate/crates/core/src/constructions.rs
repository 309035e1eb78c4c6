//! Constructive proofs run on concrete finite rngs: a unit in a commutative
//! irng via the adjugate, idempotents from powers, and a single ideal
//! generator from a chain in the unitization.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::free_idem::Side;
use crate::ideals;
use crate::lattice::Lattice;
use crate::rng::{FiniteRng, RngElement, UnitizationElement};

/// Commutative ring arithmetic with overflow reported as an error.
pub trait RingElem: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_neg(&self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;

    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.try_neg()?)
    }
}

impl RingElem for i64 {
    fn zero_like(&self) -> Self {
        0
    }
    fn one_like(&self) -> Self {
        1
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(*other).ok_or(Error::IntegerOverflow)
    }
    fn try_neg(&self) -> Result<Self> {
        self.checked_neg().ok_or(Error::IntegerOverflow)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(*other).ok_or(Error::IntegerOverflow)
    }
}

impl RingElem for UnitizationElement {
    fn zero_like(&self) -> Self {
        UnitizationElement::zero(self.rng_part().rng())
    }
    fn one_like(&self) -> Self {
        UnitizationElement::one(self.rng_part().rng())
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.u_add(other)
    }
    fn try_neg(&self) -> Result<Self> {
        self.u_neg()
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.u_mul(other)
    }
}

/// Cofactor expansion is exponential; this bounds it.
pub const MAX_ADJUGATE_DIM: usize = 8;

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    if n > 16 {
        return Err(Error::TooLarge {
            size: n as u128,
            cap: 16,
        });
    }
    Ok(n)
}

/// Laplace expansion along rows, memoized on the set of unused columns.
fn det_rec<T: RingElem>(m: &[Vec<T>], mask: u32, one: &T, memo: &mut HashMap<u32, T>) -> Result<T> {
    if mask == 0 {
        return Ok(one.clone());
    }
    if let Some(v) = memo.get(&mask) {
        return Ok(v.clone());
    }
    let n = m.len();
    let row = n - mask.count_ones() as usize;
    let mut acc = one.zero_like();
    let mut sign_neg = false;
    for c in 0..n {
        if mask >> c & 1 == 0 {
            continue;
        }
        let sub = det_rec(m, mask & !(1 << c), one, memo)?;
        let term = m[row][c].try_mul(&sub)?;
        acc = if sign_neg { acc.try_sub(&term)? } else { acc.try_add(&term)? };
        sign_neg = !sign_neg;
    }
    memo.insert(mask, acc.clone());
    Ok(acc)
}

/// Determinant by exact cofactor expansion; `one` fixes the ring for n = 0.
pub fn determinant<T: RingElem>(m: &[Vec<T>], one: &T) -> Result<T> {
    let n = check_square(m)?;
    det_rec(m, (1u32 << n) - 1, one, &mut HashMap::new())
}

/// Transpose of the cofactor matrix.
pub fn adjugate<T: RingElem>(m: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = check_square(m)?;
    if n > MAX_ADJUGATE_DIM {
        return Err(Error::TooLarge {
            size: n as u128,
            cap: MAX_ADJUGATE_DIM as u128,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let one = m[0][0].one_like();
    let mut adj = vec![vec![one.zero_like(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<T>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = determinant(&minor, &one)?;
            adj[j][i] = if (i + j) % 2 == 1 { d.try_neg()? } else { d };
        }
    }
    Ok(adj)
}

pub fn mat_mul<T: RingElem>(a: &[Vec<T>], b: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for row in a {
        let mut r = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = row[0].zero_like();
            for (k, x) in row.iter().enumerate() {
                acc = acc.try_add(&x.try_mul(&b[k][j])?)?;
            }
            r.push(acc);
        }
        out.push(r);
    }
    Ok(out)
}

/// `adj(M)·M = M·adj(M) = det(M)·I`.
pub fn verify_adjugate<T: RingElem>(m: &[Vec<T>], adj: &[Vec<T>], det: &T) -> Result<bool> {
    let n = m.len();
    if n == 0 {
        return Ok(adj.is_empty());
    }
    let zero = det.zero_like();
    let scalar = |i: usize, j: usize| if i == j { det } else { &zero };
    let left = mat_mul(adj, m)?;
    let right = mat_mul(m, adj)?;
    Ok((0..n).all(|i| (0..n).all(|j| &left[i][j] == scalar(i, j) && &right[i][j] == scalar(i, j))))
}

/// Output of [`find_unit_commutative`].
#[derive(Clone, Debug)]
pub struct UnitWitness {
    pub generators: Vec<RngElement>,
    /// `A` with `xᵢ = Σⱼ aᵢⱼxⱼ`.
    pub a: Vec<Vec<RngElement>>,
    /// `det(I − A)` in the unitization.
    pub det: UnitizationElement,
    pub adjugate: Vec<Vec<UnitizationElement>>,
    pub z: RngElement,
}

impl fmt::Display for UnitWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.generators.iter().enumerate() {
            writeln!(f, "x{} = {x}", i + 1)?;
        }
        for (i, row) in self.a.iter().enumerate() {
            let r: Vec<String> = row.iter().map(|a| a.to_string()).collect();
            writeln!(f, "A row {}: {}", i + 1, r.join(" "))?;
        }
        writeln!(f, "det(I - A) = {}", self.det)?;
        writeln!(f, "z = {}", self.z)
    }
}

/// Subrng generated by `xs`: closure of `span(xs)` under left
/// multiplication by the `xᵢ`, which reaches every word.
fn subrng_lattice(rng: &FiniteRng, xs: &[RngElement]) -> Lattice {
    let moduli = rng.invariant_factors();
    let mut lat = Lattice::span(moduli, xs.iter().map(|x| x.coeffs()));
    loop {
        let prods: Vec<Vec<i64>> = lat
            .generators()
            .flat_map(|g| xs.iter().map(move |x| rng.mul_coeffs(x.coeffs(), g)))
            .collect();
        let next = lat.extended(prods.iter().map(|v| v.as_slice()));
        if next == lat {
            return lat;
        }
        lat = next;
    }
}

/// Lexicographically least `(a_{i1}, …, a_{in})` with `Σⱼ aᵢⱼxⱼ = xᵢ`.
///
/// Unknowns are the coefficients of the `aᵢⱼ`. Column layout of the
/// augmented lattice is `[k target coords | n·k unknowns]`; each row records
/// `e_t·xⱼ` next to the unknown it came from.
fn solve_rows(rng: &FiniteRng, xs: &[RngElement]) -> Result<Vec<Vec<RngElement>>> {
    let k = rng.rank();
    let n = xs.len();
    let d = rng.invariant_factors();
    let mut moduli: Vec<i64> = d.to_vec();
    for _ in 0..n {
        moduli.extend_from_slice(d);
    }
    let width = k + n * k;
    let rows: Vec<Vec<i64>> = (0..n)
        .flat_map(|j| (0..k).map(move |t| (j, t)))
        .map(|(j, t)| {
            let mut v = vec![0; width];
            v[..k].copy_from_slice(&rng.mul_coeffs(&rng.unit_vector(t), xs[j].coeffs()));
            v[k + j * k + t] = 1;
            v
        })
        .collect();
    let lat = Lattice::span(&moduli, rows.iter().map(|r| r.as_slice()));
    let hnf = lat.hnf_rows();
    let mut out = Vec::with_capacity(n);
    for (i, x) in xs.iter().enumerate() {
        let mut v = vec![0i64; width];
        v[..k].copy_from_slice(x.coeffs());
        for p in 0..k {
            let h = hnf[p][p];
            if v[p] % h != 0 {
                return Err(Error::SystemUnsolvable(i + 1));
            }
            let q = (v[p] / h) as i128;
            if q != 0 {
                for c in p..width {
                    let y = v[c] as i128 - q * hnf[p][c] as i128;
                    v[c] = y.rem_euclid(moduli[c] as i128) as i64;
                }
            }
        }
        // v = [x | 0] − λ with λ's head equal to x, so −tail solves the row.
        let mut sol = vec![0i64; width];
        for c in k..width {
            sol[c] = (-v[c]).rem_euclid(moduli[c]);
        }
        let sol = lat.reduce(&sol);
        debug_assert!(sol[..k].iter().all(|&c| c == 0));
        out.push(
            (0..n)
                .map(|j| rng.wrap(sol[k + j * k..k + (j + 1) * k].to_vec()))
                .collect(),
        );
    }
    Ok(out)
}

/// A unit of a commutative irng generated (as a rng) by `generators`:
/// from `A·x = x`, `det(I − A)·x = adj(I − A)(I − A)x = 0`, so
/// `z = 1 − det(I − A)` fixes every generator.
pub fn find_unit_commutative(rng: &FiniteRng, generators: &[RngElement]) -> Result<UnitWitness> {
    if let Some((i, j)) = rng.noncommuting_pair() {
        return Err(Error::NotCommutative { i: i + 1, j: j + 1 });
    }
    if !ideals::is_irng(rng) {
        return Err(Error::NotIrng);
    }
    if generators.iter().any(|x| !x.rng().same_structure(rng)) {
        return Err(Error::AmbientMismatch);
    }
    if !subrng_lattice(rng, generators).is_full() {
        return Err(Error::NotRngGenerators);
    }
    let n = generators.len();
    if n > MAX_ADJUGATE_DIM {
        return Err(Error::TooLarge {
            size: n as u128,
            cap: MAX_ADJUGATE_DIM as u128,
        });
    }
    let a = solve_rows(rng, generators)?;
    for (i, row) in a.iter().enumerate() {
        let mut acc = rng.zero();
        for (aij, xj) in row.iter().zip(generators) {
            acc = acc.add(&aij.mul(xj)?)?;
        }
        if acc != generators[i] {
            return Err(Error::SystemUnsolvable(i + 1));
        }
    }
    let one = UnitizationElement::one(rng);
    let m: Vec<Vec<UnitizationElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let delta = UnitizationElement::new(i64::from(i == j), rng.zero());
                    delta.u_sub(&UnitizationElement::from_rng(a[i][j].clone()))
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let det = determinant(&m, &one)?;
    let adj = adjugate(&m)?;
    if !verify_adjugate(&m, &adj, &det)? {
        return Err(Error::LemmaViolated("adj(M)·M != det(M)·I".into()));
    }
    // (I − A)x = 0, hence det·x = adj·(I − A)·x = 0.
    for row in &m {
        let mut acc = rng.zero();
        for (mij, xj) in row.iter().zip(generators) {
            acc = acc.add(&mij.act_left(xj)?)?;
        }
        if !acc.is_zero() {
            return Err(Error::LemmaViolated("(I - A)x != 0".into()));
        }
    }
    for x in generators {
        if !det.act_left(x)?.is_zero() {
            return Err(Error::LemmaViolated("det(I - A)·x != 0".into()));
        }
    }
    let z = one
        .u_sub(&det)?
        .into_rng()
        .ok_or_else(|| Error::LemmaViolated("1 - det(I - A) has nonzero integer part".into()))?;
    for i in 0..rng.rank() {
        let e = rng.basis(i);
        if z.mul(&e)? != e || e.mul(&z)? != e {
            return Err(Error::LemmaViolated(format!("z does not fix e{}", i + 1)));
        }
    }
    Ok(UnitWitness {
        generators: generators.to_vec(),
        a,
        det,
        adjugate: adj,
        z,
    })
}

/// Index, period and idempotent power of a single element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentWitness {
    pub a: RngElement,
    /// Least `μ ≥ 1` with `a^μ` on the cycle.
    pub index: u64,
    /// Least `ρ ≥ 1` with `a^μ = a^{μ+ρ}`.
    pub period: u64,
    /// `t = ρ·⌈μ/ρ⌉`.
    pub exponent: u64,
    pub e: RngElement,
}

/// Brent's cycle detection on `a, a², a³, …`.
pub fn idempotent_from_element(a: &RngElement) -> Result<IdempotentWitness> {
    let step = |x: &RngElement| x.mul(a);
    // Period.
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = a.clone();
    let mut hare = step(a)?;
    while tortoise != hare {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step(&hare)?;
        lam += 1;
    }
    // Index: walk two pointers lam apart until they meet.
    let mut tortoise = a.clone();
    let mut hare = a.clone();
    for _ in 0..lam {
        hare = step(&hare)?;
    }
    let mut mu = 1u64;
    while tortoise != hare {
        tortoise = step(&tortoise)?;
        hare = step(&hare)?;
        mu += 1;
    }
    let t = lam * mu.div_ceil(lam);
    let e = a.pow(t);
    debug_assert!(e.is_idempotent());
    Ok(IdempotentWitness {
        a: a.clone(),
        index: mu,
        period: lam,
        exponent: t,
        e,
    })
}

/// Nonzero idempotents, verified to generate `R`, then greedily thinned.
pub fn idempotent_generators(rng: &FiniteRng, cap: u128) -> Result<Vec<RngElement>> {
    if !ideals::is_irng(rng) {
        return Err(Error::NotIrng);
    }
    let idems: Vec<RngElement> = rng
        .enumerate_elements(cap)?
        .filter(|e| !e.is_zero() && e.is_idempotent())
        .collect();
    let all = ideals::ideal_generated_by(rng, &idems)?;
    if !all.is_full() {
        return Err(Error::CorollaryViolated {
            generated: all.order(),
            order: rng.order(),
        });
    }
    let mut chosen: Vec<RngElement> = Vec::new();
    let mut order = ideals::ideal_generated_by(rng, &[])?.order();
    for e in &idems {
        if order == rng.order() {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(e.clone());
        let o = ideals::ideal_generated_by(rng, &trial)?.order();
        if o > order {
            chosen = trial;
            order = o;
        }
    }
    let mut i = 0;
    while i < chosen.len() {
        let mut rest = chosen.clone();
        rest.remove(i);
        if ideals::ideal_generated_by(rng, &rest)?.is_full() {
            chosen = rest;
        } else {
            i += 1;
        }
    }
    Ok(chosen)
}

/// Transcript of one chain run inside the unitization of a finite rng.
#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub title: String,
    pub rng_name: String,
    pub order: u128,
    pub xs: Vec<RngElement>,
    pub us: Vec<RngElement>,
    pub sides: Vec<Side>,
    pub zs: Vec<RngElement>,
    pub z: RngElement,
    /// How many of `xᵢ = zᵢxᵢ` (or `xᵢzᵢ`) hold.
    pub fixing: usize,
    pub generators_generate: bool,
    pub single_generator: bool,
}

impl MembershipReport {
    pub fn verified(&self) -> bool {
        self.fixing == self.xs.len() && self.generators_generate && self.single_generator
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "NO"
    }
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        writeln!(f, "rng {} order {}", self.rng_name, self.order)?;
        writeln!(f, "generators {}", self.xs.len())?;
        for i in 0..self.xs.len() {
            writeln!(
                f,
                "x{n} = {}  u{n} = {}  side {}",
                self.xs[i],
                self.us[i],
                self.sides[i].letter(),
                n = i + 1
            )?;
        }
        for (i, z) in self.zs.iter().enumerate() {
            writeln!(f, "z{} = {z}", i + 1)?;
        }
        writeln!(f, "z = {}", self.z)?;
        writeln!(f, "fixing identities: {}/{} verified", self.fixing, self.xs.len())?;
        writeln!(f, "generators generate R: {}", yes_no(self.generators_generate))?;
        writeln!(f, "single generator: {}", yes_no(self.single_generator))
    }
}

/// `w₁ = 1 − u₁`, `wᵢ = wᵢ₋₁(1 − uᵢ)` or `(1 − uᵢ)wᵢ₋₁`, `zᵢ = 1 − wᵢ`,
/// computed in `R⁺`, then every claim checked.
pub fn run_finite_chain(
    rng: &FiniteRng,
    title: &str,
    xs: Vec<RngElement>,
    us: Vec<RngElement>,
    sides: Vec<Side>,
) -> Result<MembershipReport> {
    let n = xs.len();
    if us.len() != n || sides.len() != n {
        return Err(Error::InvalidInput("xs, us and sides differ in length".into()));
    }
    if xs.iter().chain(&us).any(|x| !x.rng().same_structure(rng)) {
        return Err(Error::AmbientMismatch);
    }
    for (i, ((x, u), side)) in xs.iter().zip(&us).zip(&sides).enumerate() {
        let holds = match side {
            Side::Left => &u.mul(x)? == x,
            Side::Right => &x.mul(u)? == x,
        };
        if !holds {
            return Err(Error::HypothesisViolation(i + 1));
        }
    }
    let one = UnitizationElement::one(rng);
    let mut w: Option<UnitizationElement> = None;
    let mut zs = Vec::with_capacity(n);
    for (u, side) in us.iter().zip(&sides) {
        let step = one.u_sub(&UnitizationElement::from_rng(u.clone()))?;
        let next = match (w, side) {
            (None, _) => step,
            (Some(prev), Side::Left) => prev.u_mul(&step)?,
            (Some(prev), Side::Right) => step.u_mul(&prev)?,
        };
        let z = one
            .u_sub(&next)?
            .into_rng()
            .ok_or_else(|| Error::LemmaViolated("z has nonzero integer part".into()))?;
        zs.push(z);
        w = Some(next);
    }
    let z = zs.last().cloned().unwrap_or_else(|| rng.zero());
    let mut fixing = 0;
    for ((x, zi), side) in xs.iter().zip(&zs).zip(&sides) {
        let ok = match side {
            Side::Left => &zi.mul(x)? == x,
            Side::Right => &x.mul(zi)? == x,
        };
        fixing += usize::from(ok);
    }
    let generators_generate = ideals::ideal_generated_by(rng, &xs)?.is_full();
    let single_generator = ideals::is_single_generator(rng, &z)?;
    Ok(MembershipReport {
        title: title.to_string(),
        rng_name: rng.name().to_string(),
        order: rng.order(),
        xs,
        us,
        sides,
        zs,
        z,
        fixing,
        generators_generate,
        single_generator,
    })
}

/// A single two-sided ideal generator of a finite irng, from its
/// idempotent generators with `uᵢ = xᵢ` on the left.
pub fn single_generator_finite_irng(rng: &FiniteRng, cap: u128) -> Result<(RngElement, MembershipReport)> {
    let xs = idempotent_generators(rng, cap)?;
    let sides = vec![Side::Left; xs.len()];
    let report = run_finite_chain(
        rng,
        &format!("single generator for {}", rng.name()),
        xs.clone(),
        xs,
        sides,
    )?;
    if !report.verified() {
        return Err(Error::LemmaViolated("chain element does not generate R".into()));
    }
    Ok((report.z.clone(), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ideals::DEFAULT_ENUMERATION_CAP;
    use proptest::prelude::*;

    const CAP: u128 = DEFAULT_ENUMERATION_CAP;

    #[test]
    fn unit_in_sub_z6() {
        let r = catalog::cyclic_rng(3, 2);
        let w = find_unit_commutative(&r, &[r.basis(0)]).unwrap();
        // basis element is 2 ∈ Z/6, A = [4] = [2e], z = 4 = 2e
        assert_eq!(w.a[0][0].coeffs(), &[2]);
        assert_eq!(w.det.int_part(), 1);
        assert_eq!(w.det.rng_part().coeffs(), &[1]);
        assert_eq!(w.z.coeffs(), &[2]);
        assert_eq!(Some(w.z), r.find_unit_exhaustive(CAP).unwrap());
    }

    #[test]
    fn unit_in_z5() {
        let r = catalog::cyclic_rng(5, 1);
        let w = find_unit_commutative(&r, &[r.basis(0)]).unwrap();
        assert_eq!(w.a[0][0].coeffs(), &[1]);
        // 1 − e in the unitization is not zero even though e is a unit of R
        assert_eq!(w.det.int_part(), 1);
        assert_eq!(w.det.rng_part().coeffs(), &[4]);
        assert_eq!(w.z.coeffs(), &[1]);
    }

    #[test]
    fn unit_errors() {
        let m2 = catalog::matrix_rng(2, 2);
        let gens: Vec<_> = (0..4).map(|i| m2.basis(i)).collect();
        assert_eq!(
            find_unit_commutative(&m2, &gens).unwrap_err(),
            Error::NotCommutative { i: 1, j: 2 }
        );
        let n = catalog::zero_mult_rng(&[2]);
        assert_eq!(find_unit_commutative(&n, &[n.basis(0)]).unwrap_err(), Error::NotIrng);
        let f = catalog::direct_sum(&catalog::cyclic_rng(2, 1), &catalog::cyclic_rng(2, 1));
        assert_eq!(find_unit_commutative(&f, &[f.basis(0)]).unwrap_err(), Error::NotRngGenerators);
    }

    #[test]
    fn unit_with_redundant_generators() {
        let r = catalog::cyclic_rng(6, 1);
        let gens = [r.element(&[2]).unwrap(), r.element(&[3]).unwrap()];
        let w = find_unit_commutative(&r, &gens).unwrap();
        assert_eq!(w.z.coeffs(), &[1]);
    }

    #[test]
    fn every_commutative_catalog_irng_has_its_unit() {
        for e in catalog::rng_entries() {
            let r = (e.build)();
            if !r.is_commutative() || !ideals::is_irng(&r) {
                continue;
            }
            let gens: Vec<_> = (0..r.rank()).map(|i| r.basis(i)).collect();
            let w = find_unit_commutative(&r, &gens).unwrap();
            let brute = r.find_unit_exhaustive(CAP).unwrap();
            assert_eq!(Some(w.z.clone()), brute, "{}", e.name);
            for x in r.enumerate_elements(CAP).unwrap() {
                assert_eq!(w.z.mul(&x).unwrap(), x);
            }
        }
    }

    #[test]
    fn adjugate_examples() {
        for n in 0..=3usize {
            let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            assert_eq!(adjugate(&id).unwrap(), id);
        }
        assert_eq!(adjugate(&[vec![7i64]]).unwrap(), vec![vec![1]]);
        let m = vec![vec![2i64, 3], vec![5, 7]];
        assert_eq!(adjugate(&m).unwrap(), vec![vec![7, -3], vec![-5, 2]]);
        assert_eq!(determinant(&m, &1).unwrap(), -1);
        let big = vec![vec![0i64; 9]; 9];
        assert!(matches!(adjugate(&big), Err(Error::TooLarge { .. })));
    }

    fn naive_det(m: &[Vec<i64>]) -> i64 {
        // Leibniz formula over all permutations.
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i64;
        fn rec(k: usize, perm: &mut Vec<usize>, m: &[Vec<i64>], total: &mut i64) {
            let n = perm.len();
            if k == n {
                let mut inv = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if perm[i] > perm[j] {
                            inv += 1;
                        }
                    }
                }
                let prod: i64 = (0..n).map(|i| m[i][perm[i]]).product();
                *total += if inv % 2 == 0 { prod } else { -prod };
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, m, total);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, m, &mut total);
        total
    }

    fn commutative_rngs() -> Vec<FiniteRng> {
        catalog::rng_entries()
            .into_iter()
            .map(|e| (e.build)())
            .filter(|r| r.is_commutative() && r.rank() > 0)
            .collect()
    }

    proptest! {
        #[test]
        fn integer_determinant_matches_leibniz(n in 1usize..5, entries in prop::collection::vec(-9i64..10, 16)) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| entries[i * n..i * n + n].to_vec()).collect();
            prop_assert_eq!(determinant(&m, &1).unwrap(), naive_det(&m));
            let adj = adjugate(&m).unwrap();
            prop_assert!(verify_adjugate(&m, &adj, &naive_det(&m)).unwrap());
        }

        #[test]
        fn adjugate_identity_over_unitizations(
            which in 0usize..64,
            n in 1usize..5,
            seeds in prop::collection::vec((-3i64..4, prop::collection::vec(0i64..1000, 4)), 16),
        ) {
            let rs = commutative_rngs();
            let r = &rs[which % rs.len()];
            let m: Vec<Vec<UnitizationElement>> = (0..n)
                .map(|i| (0..n).map(|j| {
                    let (int, cs) = &seeds[i * n + j];
                    let coeffs: Vec<i64> = (0..r.rank()).map(|t| cs[t % 4]).collect();
                    UnitizationElement::new(*int, r.element(&coeffs).unwrap())
                }).collect())
                .collect();
            let one = UnitizationElement::one(r);
            let det = determinant(&m, &one).unwrap();
            let adj = adjugate(&m).unwrap();
            prop_assert!(verify_adjugate(&m, &adj, &det).unwrap());
        }
    }

    #[test]
    fn idempotent_examples() {
        let z4 = catalog::cyclic_rng(4, 1);
        let w = idempotent_from_element(&z4.element(&[2]).unwrap()).unwrap();
        assert!(w.e.is_zero());

        let sub = catalog::cyclic_rng(3, 2);
        let w = idempotent_from_element(&sub.basis(0)).unwrap();
        assert_eq!((w.index, w.period, w.exponent), (1, 2, 2));
        assert_eq!(w.e.coeffs(), &[2]);

        let m2 = catalog::matrix_rng(2, 2);
        let a = m2.element(&[0, 1, 1, 0]).unwrap();
        let w = idempotent_from_element(&a).unwrap();
        assert_eq!((w.index, w.period), (1, 2));
        assert_eq!(w.e.coeffs(), &[1, 0, 0, 1]);
    }

    /// Scan the powers directly for the unique idempotent.
    fn brute_idempotent(a: &RngElement) -> (u64, u64, RngElement) {
        let mut powers = vec![a.clone()];
        loop {
            let next = powers.last().unwrap().mul(a).unwrap();
            if let Some(pos) = powers.iter().position(|p| *p == next) {
                let mu = pos as u64 + 1;
                let rho = powers.len() as u64 + 1 - mu;
                let idems: Vec<_> = powers.iter().filter(|p| p.is_idempotent()).cloned().collect();
                assert_eq!(idems.len(), 1);
                return (mu, rho, idems[0].clone());
            }
            powers.push(next);
        }
    }

    #[test]
    fn idempotents_match_power_scan() {
        for e in catalog::rng_entries() {
            let r = (e.build)();
            if r.order() > 4096 {
                continue;
            }
            for a in r.enumerate_elements(CAP).unwrap() {
                let w = idempotent_from_element(&a).unwrap();
                let (mu, rho, idem) = brute_idempotent(&a);
                assert_eq!((w.index, w.period), (mu, rho), "{} {a}", e.name);
                assert_eq!(w.e, idem);
                assert!(w.exponent >= w.index && w.exponent.is_multiple_of(w.period));
                // a^m = a^t for m = t + ρ large, and a^{m-t}... is e when m > 2t
                let m = w.exponent * 2 + w.period;
                let m = m + (w.period - (m - w.exponent) % w.period) % w.period;
                assert_eq!(a.pow(m), a.pow(w.exponent));
                assert_eq!(a.pow(m - w.exponent), w.e);
            }
        }
    }

    #[test]
    fn idempotent_generator_examples() {
        let z4 = catalog::cyclic_rng(4, 1);
        assert_eq!(idempotent_generators(&z4, CAP).unwrap(), vec![z4.basis(0)]);
        let m2 = catalog::matrix_rng(2, 2);
        let g = idempotent_generators(&m2, CAP).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].is_idempotent());
        let r7 = catalog::remark7_rng();
        let g = idempotent_generators(&r7, CAP).unwrap();
        assert!(!g.is_empty() && g.len() <= 3);
        assert!(ideals::ideal_generated_by(&r7, &g).unwrap().is_full());
        assert_eq!(
            idempotent_generators(&catalog::zero_mult_rng(&[2]), CAP).unwrap_err(),
            Error::NotIrng
        );
    }

    #[test]
    fn single_generator_examples() {
        let z5 = catalog::cyclic_rng(5, 1);
        let (z, _) = single_generator_finite_irng(&z5, CAP).unwrap();
        assert_eq!(z.coeffs(), &[1]);

        let r7 = catalog::remark7_rng();
        let (z, report) = single_generator_finite_irng(&r7, CAP).unwrap();
        assert!(ideals::is_single_generator(&r7, &z).unwrap());
        assert!(r7.find_unit_exhaustive(CAP).unwrap().is_none());
        assert!(report.to_string().contains("single generator: yes"));

        // F₂ on the semilattice {0 < 1}, basis a = s0, b = s1 with ab = ba = a
        let sl = catalog::semigroup_entries()
            .into_iter()
            .find(|e| e.name == "semilattice")
            .map(|e| (e.build)())
            .unwrap();
        let r = crate::semigroups::semigroup_algebra(2, &sl).unwrap();
        let xs = vec![r.basis(0), r.basis(1)];
        let rep = run_finite_chain(&r, "sl", xs.clone(), xs.clone(), vec![Side::Left; 2]).unwrap();
        let expected = xs[0].add(&xs[1]).unwrap().sub(&xs[0].mul(&xs[1]).unwrap()).unwrap();
        assert_eq!(rep.z, expected);
    }

    #[test]
    fn every_catalog_irng_has_a_single_generator() {
        for e in catalog::rng_entries() {
            let r = (e.build)();
            if !ideals::is_irng(&r) || r.order() > 1 << 16 {
                continue;
            }
            let (z, report) = single_generator_finite_irng(&r, CAP).unwrap();
            assert!(ideals::is_single_generator(&r, &z).unwrap(), "{}", e.name);
            assert!(report.verified());
        }
    }

    #[test]
    fn chain_hypothesis_is_checked() {
        let m2 = catalog::matrix_rng(2, 2);
        let e11 = m2.basis(0);
        let e12 = m2.basis(1);
        // E11·E12 = E12 holds, E12·E11 = 0 does not
        assert!(run_finite_chain(&m2, "t", vec![e12.clone()], vec![e11.clone()], vec![Side::Left]).is_ok());
        assert_eq!(
            run_finite_chain(&m2, "t", vec![e12], vec![e11], vec![Side::Right]).unwrap_err(),
            Error::HypothesisViolation(1)
        );
    }
}
