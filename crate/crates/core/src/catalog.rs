//! Named rngs and semigroups used by the tests and the CLI.
//!
//! Expected properties stored next to each entry are claims; the tests in
//! this module recompute every one of them.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::FiniteRng;
use crate::semigroups::FiniteSemigroup;

/// `Z/m` with `e·e = c·e`.
pub fn cyclic_rng(m: i64, c: i64) -> FiniteRng {
    FiniteRng::new(format!("cyclic-{m}-{c}"), vec![m], vec![vec![vec![c]]]).expect("valid cyclic rng")
}

/// Zero multiplication on `⊕ Z/dᵢ`.
pub fn zero_mult_rng(factors: &[i64]) -> FiniteRng {
    let k = factors.len();
    let name = factors.iter().map(|d| format!("z{d}")).collect::<Vec<_>>().join("x");
    FiniteRng::new(format!("zero-{name}"), factors.to_vec(), vec![vec![vec![0; k]; k]; k])
        .expect("valid zero-multiplication rng")
}

/// The rng with one element.
pub fn zero_rng() -> FiniteRng {
    FiniteRng::new("zero", Vec::new(), Vec::new()).expect("valid zero rng")
}

/// Span of the matrix units at `positions` (1-based) inside `M_n(Z/m)`;
/// the span must be closed under multiplication.
pub fn matrix_span_rng(name: &str, m: i64, n: usize, positions: &[(usize, usize)]) -> Result<FiniteRng> {
    if let Some(&(a, b)) = positions.iter().find(|&&(a, b)| !(1..=n).contains(&a) || !(1..=n).contains(&b)) {
        return Err(Error::InvalidInput(format!("position ({a}, {b}) outside {n}x{n}")));
    }
    let k = positions.len();
    let index = |p: (usize, usize)| positions.iter().position(|&q| q == p);
    let mut consts = vec![vec![vec![0i64; k]; k]; k];
    for (i, &(a, b)) in positions.iter().enumerate() {
        for (j, &(c, d)) in positions.iter().enumerate() {
            if b == c {
                let t = index((a, d)).ok_or_else(|| {
                    Error::InvalidInput(format!("E{a}{b}·E{c}{d} leaves the span"))
                })?;
                consts[i][j][t] = 1;
            }
        }
    }
    let labels = positions.iter().map(|(a, b)| format!("E{a}{b}")).collect();
    FiniteRng::new(name, vec![m; k], consts)?.with_labels(labels)
}

/// `M_n(Z/m)` with basis `E₁₁, E₁₂, …` in row-major order.
pub fn matrix_rng(m: i64, n: usize) -> FiniteRng {
    let pos: Vec<(usize, usize)> = (1..=n).flat_map(|a| (1..=n).map(move |b| (a, b))).collect();
    matrix_span_rng(&format!("m{n}z{m}"), m, n, &pos).expect("valid matrix rng")
}

/// Matrices over `Z/2` supported on row 1 and column 3 of a 3×3 matrix:
/// basis `E₁₁, E₁₂, E₁₃, E₂₃, E₃₃`. An irng without a unit.
pub fn remark7_rng() -> FiniteRng {
    matrix_span_rng("remark7", 2, 3, &[(1, 1), (1, 2), (1, 3), (2, 3), (3, 3)]).expect("valid remark7 rng")
}

/// Componentwise sum `R₁ ⊕ R₂`.
pub fn direct_sum(a: &FiniteRng, b: &FiniteRng) -> FiniteRng {
    let (ka, kb) = (a.rank(), b.rank());
    let k = ka + kb;
    let mut consts = vec![vec![vec![0i64; k]; k]; k];
    for i in 0..ka {
        for j in 0..ka {
            consts[i][j][..ka].copy_from_slice(a.basis_product(i, j));
        }
    }
    for i in 0..kb {
        for j in 0..kb {
            consts[ka + i][ka + j][ka..].copy_from_slice(b.basis_product(i, j));
        }
    }
    let factors = a.invariant_factors().iter().chain(b.invariant_factors()).copied().collect();
    FiniteRng::new(format!("{}+{}", a.name(), b.name()), factors, consts).expect("sum of valid rngs is valid")
}

/// `ω_{Z/m}(G)` with basis `g − 1` for `g ≠ 1`, from
/// `(g−1)(h−1) = (gh−1) − (g−1) − (h−1)`.
pub fn augmentation_ideal(m: i64, g: &FiniteSemigroup) -> Result<FiniteRng> {
    let e = g.group_identity()?;
    let others: Vec<usize> = (0..g.order()).filter(|&a| a != e).collect();
    let k = others.len();
    let idx = |a: usize| others.iter().position(|&b| b == a);
    let mut consts = vec![vec![vec![0i64; k]; k]; k];
    for (i, &a) in others.iter().enumerate() {
        for (j, &b) in others.iter().enumerate() {
            let v = &mut consts[i][j];
            if let Some(t) = idx(g.mul(a, b)) {
                v[t] += 1;
            }
            v[i] -= 1;
            v[j] -= 1;
        }
    }
    let labels = others.iter().map(|a| format!("g{a}-1")).collect();
    FiniteRng::new(format!("aug-{m}-{}", g.name()), vec![m; k], consts)?.with_labels(labels)
}

fn table(rows: &[&[usize]]) -> Vec<Vec<usize>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn cyclic_group(name: &str, n: usize) -> FiniteSemigroup {
    let t = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteSemigroup::new(name, t).expect("valid cyclic group")
}

/// `S₃` as permutations of `{0,1,2}`, listed lexicographically.
fn symmetric3() -> FiniteSemigroup {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let find = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let t = perms
        .iter()
        .map(|a| perms.iter().map(|b| find([a[b[0]], a[b[1]], a[b[2]]])).collect())
        .collect();
    FiniteSemigroup::new("s3", t).expect("valid s3")
}

pub struct SemigroupEntry {
    pub name: &'static str,
    pub build: fn() -> FiniteSemigroup,
    pub band: bool,
    pub idempotent: bool,
    pub group: bool,
}

pub fn semigroup_entries() -> Vec<SemigroupEntry> {
    fn trivial() -> FiniteSemigroup {
        FiniteSemigroup::new("trivial", table(&[&[0]])).unwrap()
    }
    fn left_zero() -> FiniteSemigroup {
        FiniteSemigroup::new("left-zero", table(&[&[0, 0], &[1, 1]])).unwrap()
    }
    fn right_zero() -> FiniteSemigroup {
        FiniteSemigroup::new("right-zero", table(&[&[0, 1], &[0, 1]])).unwrap()
    }
    fn semilattice() -> FiniteSemigroup {
        FiniteSemigroup::new("semilattice", table(&[&[0, 0], &[0, 1]])).unwrap()
    }
    fn z2() -> FiniteSemigroup {
        cyclic_group("z2", 2)
    }
    fn z3() -> FiniteSemigroup {
        cyclic_group("z3", 3)
    }
    fn mono() -> FiniteSemigroup {
        // a, a², a³ with a⁴ = a²
        FiniteSemigroup::new("mono", table(&[&[1, 2, 1], &[2, 1, 2], &[1, 2, 1]])).unwrap()
    }
    fn null() -> FiniteSemigroup {
        FiniteSemigroup::new("null", table(&[&[0, 0], &[0, 0]])).unwrap()
    }
    let e = |name, build, band, idempotent, group| SemigroupEntry {
        name,
        build,
        band,
        idempotent,
        group,
    };
    vec![
        e("trivial", trivial, true, true, true),
        e("left-zero", left_zero, true, true, false),
        e("right-zero", right_zero, true, true, false),
        e("semilattice", semilattice, true, true, false),
        e("z2", z2, false, true, true),
        e("z3", z3, false, true, true),
        e("s3", symmetric3, false, true, true),
        e("mono", mono, false, false, false),
        e("null", null, false, false, false),
    ]
}

pub fn semigroup_by_name(name: &str) -> Option<FiniteSemigroup> {
    semigroup_entries().into_iter().find(|e| e.name == name).map(|e| (e.build)())
}

pub struct RngEntry {
    pub name: &'static str,
    pub build: fn() -> FiniteRng,
    pub irng: bool,
    pub unit: bool,
    pub commutative: bool,
    /// Weight when known by hand or by exhaustive search in the tests.
    pub weight: Option<usize>,
}

fn sg(name: &str) -> FiniteSemigroup {
    semigroup_by_name(name).expect("catalog semigroup")
}

pub fn rng_entries() -> Vec<RngEntry> {
    fn f4() -> FiniteRng {
        // basis 1, a with a² = a + 1
        FiniteRng::new(
            "f4",
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
        )
        .unwrap()
    }
    fn dual() -> FiniteRng {
        // basis 1, ε with ε² = 0
        FiniteRng::new(
            "dual-f2",
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]],
        )
        .unwrap()
    }
    fn named(r: FiniteRng, name: &str) -> FiniteRng {
        r.renamed(name)
    }
    let e = |name, build, irng, unit, commutative, weight| RngEntry {
        name,
        build,
        irng,
        unit,
        commutative,
        weight,
    };
    vec![
        e("zero", zero_rng, true, true, true, Some(0)),
        e("z2", || named(cyclic_rng(2, 1), "z2"), true, true, true, Some(1)),
        e("z4", || named(cyclic_rng(4, 1), "z4"), true, true, true, Some(1)),
        e("z5", || named(cyclic_rng(5, 1), "z5"), true, true, true, Some(1)),
        e("z6", || named(cyclic_rng(6, 1), "z6"), true, true, true, Some(1)),
        e("sub-z6", || named(cyclic_rng(3, 2), "sub-z6"), true, true, true, Some(1)),
        e("cyclic-4-2", || cyclic_rng(4, 2), false, false, true, Some(1)),
        e("zero-z2", || zero_mult_rng(&[2]), false, false, true, Some(1)),
        e("zero-z2xz2", || zero_mult_rng(&[2, 2]), false, false, true, Some(2)),
        e("zero-z6", || zero_mult_rng(&[6]), false, false, true, Some(1)),
        e("zero-z2xz2xz2", || zero_mult_rng(&[2, 2, 2]), false, false, true, Some(3)),
        e(
            "f2xf2",
            || named(direct_sum(&cyclic_rng(2, 1), &cyclic_rng(2, 1)), "f2xf2"),
            true,
            true,
            true,
            Some(1),
        ),
        e(
            "z2xz4",
            || named(direct_sum(&cyclic_rng(2, 1), &cyclic_rng(4, 1)), "z2xz4"),
            true,
            true,
            true,
            Some(1),
        ),
        e("f4", f4, true, true, true, Some(1)),
        e("dual-f2", dual, true, true, true, Some(1)),
        e("m2z2", || matrix_rng(2, 2), true, true, false, Some(1)),
        e("m2z4", || matrix_rng(4, 2), true, true, false, Some(1)),
        e("m3z2", || matrix_rng(2, 3), true, true, false, Some(1)),
        e(
            "t2z2",
            || matrix_span_rng("t2z2", 2, 2, &[(1, 1), (1, 2), (2, 2)]).unwrap(),
            true,
            true,
            false,
            Some(1),
        ),
        e("remark7", remark7_rng, true, false, false, Some(1)),
        e(
            "remark7+z2",
            || named(direct_sum(&remark7_rng(), &cyclic_rng(2, 1)), "remark7+z2"),
            true,
            false,
            false,
            Some(1),
        ),
        e(
            "lz2-f2",
            || named(crate::semigroups::semigroup_algebra(2, &sg("left-zero")).unwrap(), "lz2-f2"),
            true,
            false,
            false,
            Some(1),
        ),
        e(
            "semilattice-f2",
            || named(crate::semigroups::semigroup_algebra(2, &sg("semilattice")).unwrap(), "semilattice-f2"),
            true,
            true,
            true,
            Some(1),
        ),
        e("aug-2-z2", || augmentation_ideal(2, &sg("z2")).unwrap(), false, false, true, Some(1)),
        e("aug-3-z2", || augmentation_ideal(3, &sg("z2")).unwrap(), true, true, true, Some(1)),
        e("aug-2-z3", || augmentation_ideal(2, &sg("z3")).unwrap(), true, true, true, Some(1)),
        e("aug-2-s3", || augmentation_ideal(2, &sg("s3")).unwrap(), false, false, false, Some(1)),
        e("aug-3-s3", || augmentation_ideal(3, &sg("s3")).unwrap(), true, false, false, Some(1)),
    ]
}

pub fn rng_by_name(name: &str) -> Option<FiniteRng> {
    rng_entries().into_iter().find(|e| e.name == name).map(|e| (e.build)())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Every associative table on `0..n` (optionally with `a·a = a`), by
/// backtracking over cells in row-major order.
fn all_tables(n: usize, band: bool) -> Vec<Vec<usize>> {
    fn consistent(t: &[Option<usize>], n: usize) -> bool {
        let at = |a: usize, b: usize| t[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = at(a, b) else { continue };
                for c in 0..n {
                    let (Some(l), Some(bc)) = (at(ab, c), at(b, c)) else { continue };
                    if let Some(r) = at(a, bc) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    fn rec(cell: usize, t: &mut Vec<Option<usize>>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cell == n * n {
            out.push(t.iter().map(|x| x.unwrap()).collect());
            return;
        }
        if t[cell].is_some() {
            rec(cell + 1, t, n, out);
            return;
        }
        for v in 0..n {
            t[cell] = Some(v);
            if consistent(t, n) {
                rec(cell + 1, t, n, out);
            }
        }
        t[cell] = None;
    }
    let mut t = vec![None; n * n];
    if band {
        for a in 0..n {
            t[a * n + a] = Some(a);
        }
    }
    let mut out = Vec::new();
    rec(0, &mut t, n, &mut out);
    out
}

/// Representatives of associative tables up to isomorphism, canonical form
/// being the least relabeled table.
fn corpus(max_order: usize, band: bool, prefix: &str) -> Vec<FiniteSemigroup> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        let perms = permutations(n);
        let canon: BTreeSet<Vec<usize>> = all_tables(n, band)
            .into_par_iter()
            .map(|t| {
                let s = FiniteSemigroup::new("", t.chunks(n).map(|r| r.to_vec()).collect())
                    .expect("backtracking yields associative tables");
                perms.iter().map(|p| s.relabeled(p)).min().expect("at least one permutation")
            })
            .collect();
        for (i, t) in canon.into_iter().enumerate() {
            let rows = t.chunks(n).map(|r| r.to_vec()).collect();
            out.push(FiniteSemigroup::new(format!("{prefix}{n}-{i}"), rows).expect("canonical table is associative"));
        }
    }
    out
}

/// All bands of order `≤ max_order` up to isomorphism.
pub fn band_corpus(max_order: usize) -> Vec<FiniteSemigroup> {
    assert!(max_order <= 4, "band corpus is limited to order 4");
    corpus(max_order, true, "band")
}

/// All semigroups of order `≤ max_order` up to isomorphism.
pub fn semigroup_corpus(max_order: usize) -> Vec<FiniteSemigroup> {
    assert!(max_order <= 3, "semigroup corpus is limited to order 3");
    corpus(max_order, false, "sg")
}
