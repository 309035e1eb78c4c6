//! Subgroups of `Z/d₁ ⊕ … ⊕ Z/d_k` via Hermite normal form.
//!
//! A subgroup `H` is stored as the HNF of its preimage lattice
//! `L = H + span(dᵢ eᵢ)` in `Zᵏ`. Because `L` contains every relation row,
//! it has full rank and its HNF is a `k × k` upper-triangular matrix with
//! pivot `hᵢᵢ | dᵢ`. Any coordinate of any vector may be reduced modulo
//! its `dⱼ` without leaving the coset, which keeps all entries bounded.

use crate::error::{Error, Result};

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Canonical HNF presentation of a subgroup. Two subgroups of the same
/// group are equal iff their `Lattice` values are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    moduli: Vec<i64>,
    rows: Vec<Vec<i64>>,
}

impl Lattice {
    /// The zero subgroup.
    pub fn zero(moduli: &[i64]) -> Self {
        let k = moduli.len();
        let rows = (0..k)
            .map(|i| {
                let mut r = vec![0; k];
                r[i] = moduli[i];
                r
            })
            .collect();
        Lattice {
            moduli: moduli.to_vec(),
            rows,
        }
    }

    /// Smallest subgroup containing every vector in `gens`.
    pub fn span<'a>(moduli: &[i64], gens: impl IntoIterator<Item = &'a [i64]>) -> Self {
        Lattice::zero(moduli).extended(gens)
    }

    /// `self + span(gens)`.
    pub fn extended<'a>(&self, gens: impl IntoIterator<Item = &'a [i64]>) -> Self {
        let mut rows = self.rows.clone();
        let mut changed = false;
        for g in gens {
            changed |= insert(&mut rows, &self.moduli, g);
        }
        if changed {
            normalize(&mut rows, &self.moduli);
        }
        Lattice {
            moduli: self.moduli.clone(),
            rows,
        }
    }

    pub fn join(&self, other: &Lattice) -> Self {
        assert_eq!(self.moduli, other.moduli, "lattices over different groups");
        self.extended(other.generators())
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    /// The HNF rows, row `i` carrying pivot `hᵢᵢ` at column `i`.
    pub fn hnf_rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows.iter().enumerate().map(|(i, r)| r[i])
    }

    /// Rows that are nonzero in the group; they generate the subgroup.
    pub fn generators(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, r)| r[*i] < self.moduli[*i])
            .map(|(_, r)| r.as_slice())
    }

    /// Subgroup order `Π dᵢ / hᵢᵢ`, saturating.
    pub fn order(&self) -> u128 {
        self.pivots()
            .zip(&self.moduli)
            .try_fold(1u128, |acc, (h, &d)| acc.checked_mul((d / h) as u128))
            .unwrap_or(u128::MAX)
    }

    /// Whether the subgroup is the whole group.
    pub fn is_full(&self) -> bool {
        self.pivots().all(|h| h == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.pivots().zip(&self.moduli).all(|(h, &d)| h == d)
    }

    /// Canonical representative of the coset `v + H`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let k = self.moduli.len();
        let mut w: Vec<i64> = v
            .iter()
            .zip(&self.moduli)
            .map(|(x, d)| x.rem_euclid(*d))
            .collect();
        for i in 0..k {
            let h = self.rows[i][i];
            let q = w[i].div_euclid(h);
            if q != 0 {
                for j in i..k {
                    let x = w[j] as i128 - q as i128 * self.rows[i][j] as i128;
                    w[j] = x.rem_euclid(self.moduli[j] as i128) as i64;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subset_of(&self, other: &Lattice) -> bool {
        self.generators().all(|g| other.contains(g))
    }

    /// Every element of the subgroup, each once (not in lexicographic order).
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let k = self.moduli.len();
        let gens: Vec<(usize, i64)> = (0..k)
            .filter(|&i| self.rows[i][i] < self.moduli[i])
            .map(|i| (i, self.moduli[i] / self.rows[i][i]))
            .collect();
        let mut out = Vec::new();
        let mut counter = vec![0i64; gens.len()];
        loop {
            let mut v = vec![0i64; k];
            for (&(row, _), &c) in gens.iter().zip(&counter) {
                for j in 0..k {
                    v[j] = (v[j] + c * self.rows[row][j]) % self.moduli[j];
                }
            }
            out.push(v);
            let mut pos = gens.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                counter[pos] += 1;
                if counter[pos] < gens[pos].1 {
                    break;
                }
                counter[pos] = 0;
            }
        }
    }

    /// Smith normal form of the preimage lattice, giving the quotient group.
    pub fn smith(&self) -> Result<SmithData> {
        smith(&self.rows, &self.moduli)
    }
}

/// Inserts `v` into `rows` (HNF shape, possibly not normalized).
/// Returns whether the lattice grew.
fn insert(rows: &mut [Vec<i64>], moduli: &[i64], v: &[i64]) -> bool {
    let k = moduli.len();
    assert_eq!(v.len(), k, "vector length does not match the group rank");
    let mut v: Vec<i64> = v
        .iter()
        .zip(moduli)
        .map(|(x, d)| x.rem_euclid(*d))
        .collect();
    let mut changed = false;
    for i in 0..k {
        if v[i] == 0 {
            continue;
        }
        let a = rows[i][i] as i128;
        let b = v[i] as i128;
        if b % a == 0 {
            // v[i] is already a multiple of the pivot: plain elimination.
            let q = b / a;
            for j in i..k {
                let x = v[j] as i128 - q * rows[i][j] as i128;
                v[j] = x.rem_euclid(moduli[j] as i128) as i64;
            }
            continue;
        }
        let (g, s, t) = ext_gcd(a, b);
        let (ag, bg) = (a / g, b / g);
        let mut new_row = vec![0i64; k];
        let mut rest = vec![0i64; k];
        for j in i..k {
            let r = rows[i][j] as i128;
            let x = v[j] as i128;
            let m = moduli[j] as i128;
            new_row[j] = (s * r + t * x).rem_euclid(m) as i64;
            rest[j] = (bg * r - ag * x).rem_euclid(m) as i64;
        }
        new_row[i] = g as i64;
        rest[i] = 0;
        rows[i] = new_row;
        v = rest;
        changed = true;
    }
    changed
}

fn normalize(rows: &mut [Vec<i64>], moduli: &[i64]) {
    let k = moduli.len();
    for i in 0..k {
        for j in i + 1..k {
            let h = rows[j][j];
            let q = rows[i][j].div_euclid(h);
            if q != 0 {
                for c in j..k {
                    let x = rows[i][c] as i128 - q as i128 * rows[j][c] as i128;
                    rows[i][c] = x.rem_euclid(moduli[c] as i128) as i64;
                }
            }
        }
    }
}

/// Quotient `Zᵏ / L` in Smith coordinates.
///
/// `project(x)` gives the quotient coordinates of `x`; `lifts[a]` is a
/// preimage of the `a`-th quotient basis vector.
#[derive(Clone, Debug)]
pub struct SmithData {
    /// Invariant factors greater than one, each dividing the next.
    pub invariants: Vec<i64>,
    /// `k × k'` matrix; column `a` is reduced mod `invariants[a]`.
    pub projection: Vec<Vec<i64>>,
    pub lifts: Vec<Vec<i64>>,
}

impl SmithData {
    pub fn project(&self, x: &[i64]) -> Vec<i64> {
        self.invariants
            .iter()
            .enumerate()
            .map(|(a, &s)| {
                let mut acc = 0i128;
                for (xi, row) in x.iter().zip(&self.projection) {
                    acc = (acc + *xi as i128 * row[a] as i128).rem_euclid(s as i128);
                }
                acc as i64
            })
            .collect()
    }
}

fn smith(basis: &[Vec<i64>], moduli: &[i64]) -> Result<SmithData> {
    let k = basis.len();
    let ovf = || Error::IntegerOverflow;
    let mut h: Vec<Vec<i128>> = basis
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let ident = |k: usize| -> Vec<Vec<i128>> {
        (0..k)
            .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
            .collect()
    };
    // Column operations on h are mirrored in v; w tracks v⁻¹.
    let mut v = ident(k);
    let mut w = ident(k);

    // col_a += q·col_b
    fn col_add(
        h: &mut [Vec<i128>],
        v: &mut [Vec<i128>],
        w: &mut [Vec<i128>],
        a: usize,
        b: usize,
        q: i128,
    ) -> Option<()> {
        for row in h.iter_mut().chain(v.iter_mut()) {
            row[a] = row[a].checked_add(q.checked_mul(row[b])?)?;
        }
        let k = w.len();
        for c in 0..k {
            w[b][c] = w[b][c].checked_sub(q.checked_mul(w[a][c])?)?;
        }
        Some(())
    }

    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize, i128)> = None;
            for (i, row) in h.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b) {
                        best = Some((i, j, x.abs()));
                    }
                }
            }
            let Some((bi, bj, _)) = best else { break };
            h.swap(t, bi);
            if bj != t {
                for row in h.iter_mut().chain(v.iter_mut()) {
                    row.swap(t, bj);
                }
                w.swap(t, bj);
            }
            let p = h[t][t];
            let mut clean = true;
            for i in t + 1..k {
                let q = h[i][t] / p;
                if q != 0 {
                    for c in t..k {
                        h[i][c] = h[i][c].checked_sub(q.checked_mul(h[t][c]).ok_or_else(ovf)?).ok_or_else(ovf)?;
                    }
                }
                if h[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..k {
                let q = h[t][j] / p;
                if q != 0 {
                    col_add(&mut h, &mut v, &mut w, j, t, -q).ok_or_else(ovf)?;
                }
                if h[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..k).find(|&i| (t + 1..k).any(|j| h[i][j] % p != 0));
            match bad_row {
                Some(i) => {
                    for c in t..k {
                        h[t][c] = h[t][c].checked_add(h[i][c]).ok_or_else(ovf)?;
                    }
                }
                None => break,
            }
        }
        if h[t][t] < 0 {
            for row in h.iter_mut().chain(v.iter_mut()) {
                row[t] = -row[t];
            }
            for x in w[t].iter_mut() {
                *x = -*x;
            }
        }
    }

    let mut invariants = Vec::new();
    let mut projection = vec![Vec::new(); k];
    let mut lifts = Vec::new();
    for t in 0..k {
        let s = h[t][t];
        if s == 1 {
            continue;
        }
        invariants.push(i64::try_from(s).map_err(|_| ovf())?);
        for (i, row) in v.iter().enumerate() {
            projection[i].push(row[t].rem_euclid(s) as i64);
        }
        lifts.push(
            w[t].iter()
                .zip(moduli)
                .map(|(x, &d)| x.rem_euclid(d as i128) as i64)
                .collect(),
        );
    }
    Ok(SmithData {
        invariants,
        projection,
        lifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Closure by repeated addition; independent of the HNF path.
    fn naive_span(moduli: &[i64], gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0; moduli.len()]);
        let mut frontier = vec![vec![0; moduli.len()]];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<i64> = x
                    .iter()
                    .zip(g)
                    .zip(moduli)
                    .map(|((a, b), d)| (a + b).rem_euclid(*d))
                    .collect();
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -12i128..12 {
            for b in -12i128..12 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert!(g >= 0);
            }
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(Lattice::span(&[4], []).order(), 1);
        let two = Lattice::span(&[4], [&[2i64][..]]);
        assert_eq!(two.order(), 2);
        assert!(two.contains(&[2]) && !two.contains(&[1]));
        let diag = Lattice::span(&[2, 2], [&[1i64, 1][..]]);
        assert_eq!(diag.order(), 2);
        assert!(Lattice::span(&[4], [&[3i64][..]]).is_full());
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let l = Lattice::span(&[4], [&[2i64][..]]);
        let s = l.smith().unwrap();
        assert_eq!(s.invariants, vec![2]);
        assert_eq!(s.project(&[1]), vec![1]);
        assert_eq!(s.project(&[2]), vec![0]);
    }

    #[test]
    fn smith_of_mixed_moduli() {
        // Z/2 ⊕ Z/4 ⊕ Z/3 modulo nothing is Z/2 ⊕ Z/12.
        let l = Lattice::zero(&[2, 4, 3]);
        let s = l.smith().unwrap();
        assert_eq!(s.invariants, vec![2, 12]);
    }

    fn moduli_and_gens() -> impl Strategy<Value = (Vec<i64>, Vec<Vec<i64>>)> {
        prop::collection::vec(2i64..7, 1..4).prop_flat_map(|m| {
            let k = m.len();
            let gens = prop::collection::vec(prop::collection::vec(0i64..12, k), 0..4);
            (Just(m), gens)
        })
    }

    proptest! {
        #[test]
        fn hnf_agrees_with_naive_closure((moduli, gens) in moduli_and_gens()) {
            let l = Lattice::span(&moduli, gens.iter().map(|g| g.as_slice()));
            let naive = naive_span(&moduli, &gens);
            prop_assert_eq!(l.order(), naive.len() as u128);
            let listed: BTreeSet<Vec<i64>> = l.elements().into_iter().collect();
            prop_assert_eq!(&listed, &naive);
            for x in &naive {
                prop_assert!(l.contains(x));
            }
        }

        #[test]
        fn hnf_is_canonical((moduli, gens) in moduli_and_gens()) {
            let a = Lattice::span(&moduli, gens.iter().map(|g| g.as_slice()));
            let b = Lattice::span(&moduli, gens.iter().rev().map(|g| g.as_slice()));
            let c = Lattice::span(&moduli, a.elements().iter().map(|g| g.as_slice()));
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(&a, &c);
        }

        #[test]
        fn smith_quotient_has_right_order((moduli, gens) in moduli_and_gens()) {
            let l = Lattice::span(&moduli, gens.iter().map(|g| g.as_slice()));
            let s = l.smith().unwrap();
            let q: u128 = s.invariants.iter().map(|&x| x as u128).product();
            let total: u128 = moduli.iter().map(|&x| x as u128).product();
            prop_assert_eq!(q * l.order(), total);
            for w in s.invariants.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            // kernel of the projection is exactly the subgroup
            let units: Vec<Vec<i64>> = (0..moduli.len())
                .map(|i| (0..moduli.len()).map(|j| i64::from(i == j)).collect())
                .collect();
            for x in &naive_span(&moduli, &units) {
                let in_l = l.contains(x);
                let proj_zero = s.project(x).iter().all(|&c| c == 0);
                prop_assert_eq!(in_l, proj_zero);
            }
            // lifts project to unit vectors
            for (a, lift) in s.lifts.iter().enumerate() {
                let p = s.project(lift);
                for (b, &c) in p.iter().enumerate() {
                    prop_assert_eq!(c, i64::from(a == b));
                }
            }
        }
    }
}
