//! Finite semigroups, the `X₀` extraction for `S = SX`, and semigroup
//! algebras `(Z/m)S` with their single ideal generator.

use std::fmt;

use crate::constructions::{run_finite_chain, MembershipReport};
use crate::error::{Error, Result};
use crate::free_idem::Side;
use crate::rng::{FiniteRng, RngElement};

/// A semigroup on `0..N` given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemigroup {
    name: String,
    n: usize,
    table: Vec<usize>,
}

impl FiniteSemigroup {
    /// Validates shape, range and associativity.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("semigroups must be nonempty".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidInput(format!("entry {x} out of range in row {a}")));
                }
                flat.push(x);
            }
        }
        let s = FiniteSemigroup {
            name: name.into(),
            n,
            table: flat,
        };
        for a in 0..n {
            for b in 0..n {
                let ab = s.mul(a, b);
                for c in 0..n {
                    if s.mul(ab, c) != s.mul(a, s.mul(b, c)) {
                        return Err(Error::SemigroupAssociativityViolation { a, b, c });
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `{a·b : a ∈ A, b ∈ B}` as a membership mask.
    pub fn product_set(&self, a: &[usize], b: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &x in a {
            for &y in b {
                mask[self.mul(x, y)] = true;
            }
        }
        mask
    }

    fn all(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    /// `S² = S`.
    pub fn is_idempotent_semigroup(&self) -> bool {
        let all = self.all();
        self.product_set(&all, &all).iter().all(|&b| b)
    }

    /// Every element idempotent.
    pub fn is_band(&self) -> bool {
        (0..self.n).all(|a| self.mul(a, a) == a)
    }

    /// `S·X = S`, i.e. `X` generates `S` as a left ideal (given `S² = S`).
    pub fn left_ideal_generates(&self, x: &[usize]) -> bool {
        self.product_set(&self.all(), x).iter().all(|&b| b)
    }

    /// `y <₁ x` iff `y ∈ Sx`.
    pub fn less1(&self, y: usize, x: usize) -> bool {
        (0..self.n).any(|s| self.mul(s, x) == y)
    }

    /// `y <₀ x` iff `y ∈ S⁺xS⁺y`, with `S⁺` the monoid from adjoining `1`.
    pub fn less0(&self, y: usize, x: usize) -> bool {
        // α ranges over S⁺, so αx ranges over {x} ∪ Sx; same for β·y.
        let mut ax = vec![false; self.n];
        ax[x] = true;
        for s in 0..self.n {
            ax[self.mul(s, x)] = true;
        }
        let mut by = vec![false; self.n];
        by[y] = true;
        for s in 0..self.n {
            by[self.mul(s, y)] = true;
        }
        (0..self.n)
            .filter(|&p| ax[p])
            .any(|p| (0..self.n).filter(|&q| by[q]).any(|q| self.mul(p, q) == y))
    }

    /// Least `(s, t)` with `x = s·x·t·x`.
    pub fn sxtx_witness(&self, x: usize) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|s| (0..self.n).map(move |t| (s, t)))
            .find(|&(s, t)| self.mul(self.mul(self.mul(s, x), t), x) == x)
    }

    pub fn identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    /// Checks the table is a group; returns the identity.
    pub fn group_identity(&self) -> Result<usize> {
        let e = self
            .identity()
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        for a in 0..self.n {
            let mut row = vec![false; self.n];
            let mut col = vec![false; self.n];
            for b in 0..self.n {
                row[self.mul(a, b)] = true;
                col[self.mul(b, a)] = true;
            }
            if !row.iter().all(|&x| x) || !col.iter().all(|&x| x) {
                return Err(Error::NotAGroup(format!("row or column {a} is not a permutation")));
            }
            if !(0..self.n).any(|b| self.mul(a, b) == e && self.mul(b, a) == e) {
                return Err(Error::NotAGroup(format!("{a} has no inverse")));
            }
        }
        Ok(e)
    }

    /// The same table with elements renamed by `perm` (old `a` becomes `perm[a]`).
    pub fn relabeled(&self, perm: &[usize]) -> Vec<usize> {
        let mut t = vec![0; self.n * self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                t[perm[a] * self.n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        t
    }
}

/// Outcome of the `X₀` extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X0Result {
    pub x: Vec<usize>,
    /// `{x ∈ X : x ∈ Sx}`.
    pub x1: Vec<usize>,
    /// `{x ∈ X₁ : x ∈ S⁺xS⁺x}`.
    pub x0: Vec<usize>,
    /// `(x, s, t)` with `x = s·x·t·x`, one per element of `X₀`.
    pub witnesses: Vec<(usize, usize, usize)>,
}

impl fmt::Display for X0Result {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "X = {{{}}}", list(&self.x))?;
        writeln!(f, "X1 = {{{}}}", list(&self.x1))?;
        writeln!(f, "X0 = {{{}}}", list(&self.x0))?;
        for (x, s, t) in &self.witnesses {
            writeln!(f, "witness {x} = {s}.{x}.{t}.{x}")?;
        }
        Ok(())
    }
}

/// Computes `X₁` and `X₀` for `S = SX` by direct membership tests and
/// verifies `x ∈ SxSx` for `x ∈ X₀` and `S = S·X₀·S`.
pub fn lemma9_extract(s: &FiniteSemigroup, x: &[usize]) -> Result<X0Result> {
    let mut xs: Vec<usize> = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if let Some(&bad) = xs.iter().find(|&&a| a >= s.order()) {
        return Err(Error::InvalidInput(format!("element {bad} not in S")));
    }
    if !s.left_ideal_generates(&xs) {
        return Err(Error::PreconditionFailed("S != SX".into()));
    }
    let x1: Vec<usize> = xs.iter().copied().filter(|&a| s.less1(a, a)).collect();
    let x0: Vec<usize> = x1.iter().copied().filter(|&a| s.less0(a, a)).collect();
    if x0.is_empty() {
        return Err(Error::LemmaViolated("X0 is empty".into()));
    }
    let mut witnesses = Vec::with_capacity(x0.len());
    for &a in &x0 {
        let (p, q) = s
            .sxtx_witness(a)
            .ok_or_else(|| Error::LemmaViolated(format!("{a} is not in SxSx")))?;
        witnesses.push((a, p, q));
    }
    let all = s.all();
    let sx0 = s.product_set(&all, &x0);
    let sx0: Vec<usize> = (0..s.order()).filter(|&a| sx0[a]).collect();
    if !s.product_set(&sx0, &all).iter().all(|&b| b) {
        return Err(Error::LemmaViolated("S != S X0 S".into()));
    }
    Ok(X0Result {
        x: xs,
        x1,
        x0,
        witnesses,
    })
}

/// `(Z/m)S`: one basis vector per element of `S`, product from the table.
pub fn semigroup_algebra(m: i64, s: &FiniteSemigroup) -> Result<FiniteRng> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("modulus {m} must be at least 2")));
    }
    let n = s.order();
    let consts = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut v = vec![0; n];
                    v[s.mul(a, b)] = 1;
                    v
                })
                .collect()
        })
        .collect();
    FiniteRng::new(format!("Z{m}[{}]", s.name()), vec![m; n], consts)?
        .with_labels((0..n).map(|a| format!("s{a}")).collect())
}

/// A single two-sided ideal generator of `(Z/m)S`, for `S = SX` idempotent.
///
/// Each `x ∈ X₀` comes with `x = s·x·t·x`; `u = s·x·t` gives `u·x = x`, and
/// the chain `wᵢ = wᵢ₋₁(1 − uᵢ)` runs in the unitization of `(Z/m)S`.
pub fn corollary8_generator(
    m: i64,
    s: &FiniteSemigroup,
    x: &[usize],
) -> Result<(RngElement, MembershipReport)> {
    if !s.is_idempotent_semigroup() {
        return Err(Error::PreconditionFailed("S is not idempotent".into()));
    }
    let x0 = lemma9_extract(s, x)?;
    let rng = semigroup_algebra(m, s)?;
    let xs: Vec<RngElement> = x0.witnesses.iter().map(|&(a, _, _)| rng.basis(a)).collect();
    let us: Vec<RngElement> = x0
        .witnesses
        .iter()
        .map(|&(a, p, q)| rng.basis(s.mul(s.mul(p, a), q)))
        .collect();
    let sides = vec![Side::Left; xs.len()];
    let report = run_finite_chain(
        &rng,
        &format!("single generator of Z{m}[{}]", s.name()),
        xs,
        us,
        sides,
    )?;
    Ok((report.z.clone(), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ideals;
    use proptest::prelude::*;

    fn left_zero() -> FiniteSemigroup {
        FiniteSemigroup::new("lz2", vec![vec![0, 0], vec![1, 1]]).unwrap()
    }

    fn semilattice() -> FiniteSemigroup {
        // min on {0, 1}
        FiniteSemigroup::new("sl2", vec![vec![0, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(left_zero().is_band());
        assert!(semilattice().is_band());
        assert!(matches!(
            FiniteSemigroup::new("bad", vec![vec![1, 0], vec![0, 0]]),
            Err(Error::SemigroupAssociativityViolation { .. })
        ));
        assert!(FiniteSemigroup::new("bad", vec![vec![2]]).is_err());
        assert!(FiniteSemigroup::new("bad", vec![]).is_err());
    }

    #[test]
    fn idempotent_semigroups() {
        assert!(left_zero().is_idempotent_semigroup());
        let null = FiniteSemigroup::new("null", vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(!null.is_idempotent_semigroup());
        // a, a², a³ with a⁴ = a² (index 2, period 2): S² = {a², a³}
        let mono = FiniteSemigroup::new("mono", vec![vec![1, 2, 1], vec![2, 1, 2], vec![1, 2, 1]]).unwrap();
        assert!(!mono.is_idempotent_semigroup());
        // a³ = a (index 1, period 2) is the group of order 2
        let cyc = FiniteSemigroup::new("c2", vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(cyc.is_idempotent_semigroup());
    }

    #[test]
    fn left_ideal_generation() {
        assert!(left_zero().left_ideal_generates(&[0]));
        assert!(left_zero().left_ideal_generates(&[1]));
        assert!(semilattice().left_ideal_generates(&[1]));
        assert!(!semilattice().left_ideal_generates(&[0]));
    }

    #[test]
    fn x0_examples() {
        let triv = FiniteSemigroup::new("t", vec![vec![0]]).unwrap();
        assert_eq!(lemma9_extract(&triv, &[0]).unwrap().x0, vec![0]);
        let r = lemma9_extract(&semilattice(), &[1]).unwrap();
        assert_eq!(r.x0, vec![1]);
        let r = lemma9_extract(&left_zero(), &[0]).unwrap();
        assert_eq!(r.x1, vec![0]);
        assert_eq!(r.x0, vec![0]);
        assert_eq!(r.witnesses, vec![(0, 0, 0)]);
        assert!(matches!(
            lemma9_extract(&semilattice(), &[0]),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn algebra_examples() {
        let triv = FiniteSemigroup::new("t", vec![vec![0]]).unwrap();
        let r = semigroup_algebra(2, &triv).unwrap();
        assert_eq!(r.order(), 2);
        assert!(r.basis(0).is_idempotent());
        let r = semigroup_algebra(2, &left_zero()).unwrap();
        assert_eq!(r.order(), 4);
        assert_eq!(r.basis(0).mul(&r.basis(1)).unwrap(), r.basis(0));
        let r = semigroup_algebra(3, &semilattice()).unwrap();
        assert_eq!(r.order(), 9);
        assert!(r.is_commutative());
        assert!(semigroup_algebra(1, &triv).is_err());
    }

    #[test]
    fn corollary8_examples() {
        let triv = FiniteSemigroup::new("t", vec![vec![0]]).unwrap();
        let (z, _) = corollary8_generator(2, &triv, &[0]).unwrap();
        assert_eq!(z.coeffs(), &[1]);
        for (s, x) in [(semilattice(), vec![1]), (left_zero(), vec![0])] {
            let (z, report) = corollary8_generator(2, &s, &x).unwrap();
            assert!(report.single_generator);
            assert!(ideals::is_single_generator(z.rng(), &z).unwrap());
        }
    }

    fn any_band() -> impl Strategy<Value = FiniteSemigroup> {
        let corpus = catalog::band_corpus(3);
        (0..corpus.len()).prop_map(move |i| corpus[i].clone())
    }

    proptest! {
        #[test]
        fn relations_are_transitive(s in any_band(), a in 0usize..3, b in 0usize..3, c in 0usize..3) {
            let n = s.order();
            let (a, b, c) = (a % n, b % n, c % n);
            if s.less1(a, b) && s.less1(b, c) {
                prop_assert!(s.less1(a, c));
            }
            if s.less0(a, b) && s.less0(b, c) {
                prop_assert!(s.less0(a, c));
            }
        }
    }

    #[test]
    fn transitivity_on_all_small_semigroups() {
        // Includes non-bands: every associative table of order ≤ 3.
        for s in catalog::semigroup_corpus(3) {
            let n = s.order();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if s.less1(a, b) && s.less1(b, c) {
                            assert!(s.less1(a, c));
                        }
                        if s.less0(a, b) && s.less0(b, c) {
                            assert!(s.less0(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn idempotent_semigroup_algebras_are_irngs() {
        for s in catalog::semigroup_corpus(3) {
            if s.is_idempotent_semigroup() {
                for m in [2, 3] {
                    assert!(ideals::is_irng(&semigroup_algebra(m, &s).unwrap()));
                }
            }
        }
    }

    #[test]
    fn band_corpus_single_generators() {
        for s in catalog::band_corpus(4) {
            let n = s.order();
            let all: Vec<usize> = (0..n).collect();
            for mask in 1u32..(1 << n) {
                let x: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                if !s.product_set(&all, &x).iter().all(|&b| b) {
                    continue;
                }
                for m in [2, 3, 4] {
                    let (z, rep) = corollary8_generator(m, &s, &x).unwrap();
                    let alg = semigroup_algebra(m, &s).unwrap();
                    assert!(rep.verified(), "{rep}");
                    assert!(ideals::is_single_generator(&alg, &z).unwrap());
                }
            }
        }
    }
}
