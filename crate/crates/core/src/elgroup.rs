//! Elementary matrix groups `EL_n(R)` over a finite rng.
//!
//! A group element `I + M` is stored as the pair `(M, M')` with
//! `(I + M)(I + M') = I`, where `(I + A)(I + B) = I + A + B + AB` only ever
//! multiplies entries of `R`. Ring elements are indices into precomputed
//! addition and multiplication tables.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ideals::{self, SearchLimits, WeightResult};
use crate::rng::{FiniteRng, RngElement};
use crate::search::{first_combination, SearchOutcome};

/// Largest rng for which the operation tables are built.
pub const MAX_TABLE_ORDER: u128 = 1024;
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;
pub const DEFAULT_GROUP_SUBSETS: u64 = 100_000;

/// `R` with its tables, and the matrix size `n`.
pub struct ElRing {
    rng: FiniteRng,
    n: usize,
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

impl fmt::Debug for ElRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElRing({}, n = {})", self.rng.name(), self.n)
    }
}

impl ElRing {
    pub fn new(rng: &FiniteRng, n: usize) -> Result<Arc<ElRing>> {
        check_convention()?;
        Self::build(rng, n)
    }

    fn build(rng: &FiniteRng, n: usize) -> Result<Arc<ElRing>> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix size must be at least 1".into()));
        }
        let order = rng.order();
        if order > MAX_TABLE_ORDER {
            return Err(Error::TooLarge {
                size: order,
                cap: MAX_TABLE_ORDER,
            });
        }
        let elems: Vec<RngElement> = rng.enumerate_elements(MAX_TABLE_ORDER)?.collect();
        let size = elems.len();
        let idx = |x: &RngElement| x.index() as u32;
        let mut add = vec![0u32; size * size];
        let mut mul = vec![0u32; size * size];
        for (a, x) in elems.iter().enumerate() {
            for (b, y) in elems.iter().enumerate() {
                add[a * size + b] = idx(&x.add(y)?);
                mul[a * size + b] = idx(&x.mul(y)?);
            }
        }
        let neg = elems.iter().map(|x| idx(&x.neg())).collect();
        Ok(Arc::new(ElRing {
            rng: rng.clone(),
            n,
            size,
            add,
            mul,
            neg,
        }))
    }

    pub fn rng(&self) -> &FiniteRng {
        &self.rng
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn index_of(&self, x: &RngElement) -> Result<u32> {
        if !x.rng().same_structure(&self.rng) {
            return Err(Error::AmbientMismatch);
        }
        Ok(x.index() as u32)
    }

    pub fn value(&self, i: u32) -> RngElement {
        self.rng.wrap(self.rng.coeffs_at(i as u128))
    }

    fn mat_add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    fn mat_neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| self.neg(x)).collect()
    }

    fn mat_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.n;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = b[k * n + j];
                    if y != 0 {
                        out[i * n + j] = self.add(out[i * n + j], self.mul(x, y));
                    }
                }
            }
        }
        out
    }

    /// `A + B + AB`, the `M` of `(I + A)(I + B)`.
    fn compose(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.mat_add(&self.mat_add(a, b), &self.mat_mul(a, b))
    }

    fn matrix(self: &Arc<Self>, m: Vec<u32>, minv: Vec<u32>) -> ElMatrix {
        ElMatrix {
            ring: Arc::clone(self),
            m,
            minv,
        }
    }

    pub fn identity(self: &Arc<Self>) -> ElMatrix {
        let z = vec![0; self.n * self.n];
        self.matrix(z.clone(), z)
    }

    fn check_indices(&self, i: usize, j: usize) -> Result<()> {
        if i == j || !(1..=self.n).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(Error::BadIndices { i, j, n: self.n });
        }
        Ok(())
    }

    fn elementary_idx(self: &Arc<Self>, i: usize, j: usize, r: u32) -> ElMatrix {
        let n = self.n;
        let mut m = vec![0; n * n];
        let mut minv = vec![0; n * n];
        m[(i - 1) * n + j - 1] = r;
        minv[(i - 1) * n + j - 1] = self.neg(r);
        self.matrix(m, minv)
    }

    /// `E_{i,j}(r)`, indices 1-based.
    pub fn elementary(self: &Arc<Self>, i: usize, j: usize, r: &RngElement) -> Result<ElMatrix> {
        self.check_indices(i, j)?;
        let r = self.index_of(r)?;
        Ok(self.elementary_idx(i, j, r))
    }

    /// `E_{i,j}(e_t)` for every basis element and every `i ≠ j`.
    pub fn generators(self: &Arc<Self>) -> Vec<ElMatrix> {
        let basis: Vec<u32> = (0..self.rng.rank())
            .map(|t| self.rng.basis(t).index() as u32)
            .filter(|&x| x != 0)
            .collect();
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                if i != j {
                    for &b in &basis {
                        out.push(self.elementary_idx(i, j, b));
                    }
                }
            }
        }
        out
    }

    /// Slots of the packed matrix: strict upper triangle minus `(1, n)`,
    /// row-major, 1-based.
    pub fn pack_slots(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .filter(|&p| p != (1, n))
            .collect()
    }

    /// Upper unitriangular `I + M` with `entries` placed row-major in
    /// [`ElRing::pack_slots`]. The inverse is `Σ (−M)^k`, finite because `M`
    /// is nilpotent.
    pub fn pack_matrix(self: &Arc<Self>, entries: &[RngElement]) -> Result<ElMatrix> {
        let slots = self.pack_slots();
        if entries.len() > slots.len() {
            return Err(Error::TooManyEntries {
                given: entries.len(),
                slots: slots.len(),
            });
        }
        let n = self.n;
        let mut m = vec![0u32; n * n];
        for (&(i, j), e) in slots.iter().zip(entries) {
            m[(i - 1) * n + j - 1] = self.index_of(e)?;
        }
        let neg = self.mat_neg(&m);
        let mut power = neg.clone();
        let mut minv = vec![0u32; n * n];
        while power.iter().any(|&x| x != 0) {
            minv = self.mat_add(&minv, &power);
            power = self.mat_mul(&power, &neg);
        }
        let a = self.matrix(m, minv);
        debug_assert!(a.check_inverse());
        Ok(a)
    }
}

/// `I + M` together with `M'` such that `(I + M)(I + M') = I`.
#[derive(Clone)]
pub struct ElMatrix {
    ring: Arc<ElRing>,
    m: Vec<u32>,
    minv: Vec<u32>,
}

impl PartialEq for ElMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for ElMatrix {}

impl std::hash::Hash for ElMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.m.hash(state);
    }
}

impl ElMatrix {
    pub fn ring(&self) -> &Arc<ElRing> {
        &self.ring
    }

    /// Canonical serialization: entries of `M` row-major as element indices.
    pub fn key(&self) -> &[u32] {
        &self.m
    }

    /// Entry `(i, j)` of `M`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> RngElement {
        self.ring.value(self.m[(i - 1) * self.ring.n + j - 1])
    }

    fn entry_idx(&self, i: usize, j: usize) -> u32 {
        self.m[(i - 1) * self.ring.n + j - 1]
    }

    pub fn mul(&self, other: &ElMatrix) -> ElMatrix {
        assert!(Arc::ptr_eq(&self.ring, &other.ring), "matrices over different rings");
        let r = &self.ring;
        ElMatrix {
            ring: Arc::clone(r),
            m: r.compose(&self.m, &other.m),
            minv: r.compose(&other.minv, &self.minv),
        }
    }

    pub fn inv(&self) -> ElMatrix {
        ElMatrix {
            ring: Arc::clone(&self.ring),
            m: self.minv.clone(),
            minv: self.m.clone(),
        }
    }

    /// `[a, b] = a·b·a⁻¹·b⁻¹`.
    pub fn commutator(&self, other: &ElMatrix) -> ElMatrix {
        self.mul(other).mul(&self.inv()).mul(&other.inv())
    }

    pub fn conjugate_by(&self, g: &ElMatrix) -> ElMatrix {
        g.mul(self).mul(&g.inv())
    }

    pub fn is_identity(&self) -> bool {
        self.m.iter().all(|&x| x == 0)
    }

    /// `(I + M)(I + M') = (I + M')(I + M) = I`.
    pub fn check_inverse(&self) -> bool {
        let r = &self.ring;
        r.compose(&self.m, &self.minv).iter().all(|&x| x == 0)
            && r.compose(&self.minv, &self.m).iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for ElMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I + {:?}", self.m)
    }
}

impl fmt::Display for ElMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ring.n;
        f.write_str("I +")?;
        for i in 1..=n {
            let row: Vec<String> = (1..=n).map(|j| self.entry(i, j).to_string()).collect();
            write!(f, " ({})", row.join(", "))?;
        }
        Ok(())
    }
}

/// Verifies once that `[E₁₂(1), E₂₃(1)] = E₁₃(1)` over `Z/4` with the
/// multiplication order used here. Over `Z/4` the opposite convention gives
/// `E₁₃(−1) ≠ E₁₃(1)`, so the check discriminates.
fn check_convention() -> Result<()> {
    static CHECK: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    CHECK
        .get_or_init(|| {
            let z4 = FiniteRng::new("z4", vec![4], vec![vec![vec![1]]]).map_err(|e| e.to_string())?;
            let r = ElRing::build(&z4, 3).map_err(|e| e.to_string())?;
            let one = z4.basis(0).index() as u32;
            let a = r.elementary_idx(1, 2, one);
            let b = r.elementary_idx(2, 3, one);
            let want = r.elementary_idx(1, 3, one);
            if a.commutator(&b) == want {
                Ok(())
            } else if a.inv().mul(&b.inv()).mul(&a).mul(&b) == want {
                Err("the relation holds for a^-1 b^-1 a b instead of a b a^-1 b^-1".into())
            } else {
                Err("neither commutator convention gives E13(rs)".into())
            }
        })
        .clone()
        .map_err(Error::ConventionMismatch)
}

/// A finite subgroup of `EL_n(R)` listed in BFS order, with a generating set.
#[derive(Clone, Debug)]
pub struct ElGroup {
    ring: Arc<ElRing>,
    elements: Vec<ElMatrix>,
    index: HashMap<Vec<u32>, usize>,
    generators: Vec<ElMatrix>,
}

impl ElGroup {
    pub fn ring(&self) -> &Arc<ElRing> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ElMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[ElMatrix] {
        &self.generators
    }

    pub fn contains(&self, g: &ElMatrix) -> bool {
        self.index.contains_key(&g.m)
    }

    pub fn is_subgroup_of(&self, other: &ElGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
}

/// Closure of `gens` under products, by BFS from the identity. Frontier
/// products are computed in parallel; insertion order stays sequential.
fn closure(ring: &Arc<ElRing>, gens: Vec<ElMatrix>, cap: usize) -> Result<ElGroup> {
    let id = ring.identity();
    let mut index = HashMap::new();
    index.insert(id.m.clone(), 0);
    let mut elements = vec![id];
    let mut start = 0;
    while start < elements.len() {
        let frontier = &elements[start..];
        start = elements.len();
        let products: Vec<ElMatrix> = frontier
            .par_iter()
            .flat_map_iter(|g| gens.iter().map(move |h| g.mul(h)))
            .collect();
        for p in products {
            if !index.contains_key(&p.m) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded {
                        visited: elements.len(),
                    });
                }
                index.insert(p.m.clone(), elements.len());
                elements.push(p);
            }
        }
    }
    Ok(ElGroup {
        ring: Arc::clone(ring),
        elements,
        index,
        generators: gens,
    })
}

/// `EL_n(R)` by BFS over all `E_{i,j}(e_t)`.
pub fn generate_group(ring: &Arc<ElRing>, cap: usize) -> Result<ElGroup> {
    closure(ring, ring.generators(), cap)
}

/// Smallest subgroup of `g` containing `seeds` and closed under conjugation
/// by the generators of `g`.
pub fn normal_closure(g: &ElGroup, seeds: &[ElMatrix]) -> Result<ElGroup> {
    let mut gens: Vec<ElMatrix> = Vec::new();
    for s in seeds {
        if !s.is_identity() && !gens.contains(s) {
            gens.push(s.clone());
        }
    }
    loop {
        let h = closure(&g.ring, gens.clone(), g.order().max(1))?;
        let missing = gens
            .iter()
            .flat_map(|x| g.generators.iter().map(move |y| x.conjugate_by(y)))
            .find(|c| !h.contains(c));
        match missing {
            Some(c) => gens.push(c),
            None => return Ok(h),
        }
    }
}

/// `[G, G]`: normal closure of the commutators of the generators.
pub fn derived_subgroup(g: &ElGroup) -> Result<ElGroup> {
    let gens = &g.generators;
    let comms: Vec<ElMatrix> = gens
        .iter()
        .flat_map(|a| gens.iter().map(move |b| a.commutator(b)))
        .collect();
    normal_closure(g, &comms)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Minimal number of generators of the abelianization: for each prime `p`,
/// `G/K_p` with `K_p` the normal closure of commutators and `p`-th powers of
/// the generators is elementary abelian of rank `log_p |G/K_p|`.
pub fn abelianization_rank(g: &ElGroup) -> Result<usize> {
    let gens = &g.generators;
    let mut best = 0;
    for p in prime_factors(g.order()) {
        let mut seeds: Vec<ElMatrix> = gens
            .iter()
            .flat_map(|a| gens.iter().map(move |b| a.commutator(b)))
            .collect();
        for a in gens {
            let mut pow = a.clone();
            for _ in 1..p {
                pow = pow.mul(a);
            }
            seeds.push(pow);
        }
        let k = normal_closure(g, &seeds)?;
        let mut q = g.order() / k.order();
        let mut rank = 0;
        while q > 1 {
            q /= p;
            rank += 1;
        }
        best = best.max(rank);
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct GroupWeight {
    pub result: WeightResult,
    pub witness: Option<Vec<ElMatrix>>,
    pub lower_bound: usize,
}

/// Least number of normal generators of `g`.
///
/// Starts at the abelianization rank. If greedily chosen generators already
/// meet that bound they are the witness; otherwise subsets of non-identity
/// elements (in key order) are searched, at most `budget` of them.
pub fn group_weight(g: &ElGroup, budget: u64) -> Result<GroupWeight> {
    if g.order() == 1 {
        return Ok(GroupWeight {
            result: WeightResult::Exact(0),
            witness: Some(Vec::new()),
            lower_bound: 0,
        });
    }
    let lower = abelianization_rank(g)?.max(1);
    let mut greedy: Vec<ElMatrix> = Vec::new();
    let mut current = 1;
    for x in &g.generators {
        let mut trial = greedy.clone();
        trial.push(x.clone());
        let o = normal_closure(g, &trial)?.order();
        if o > current {
            greedy = trial;
            current = o;
        }
        if current == g.order() {
            break;
        }
    }
    if greedy.len() == lower {
        return Ok(GroupWeight {
            result: WeightResult::Exact(lower),
            witness: Some(greedy),
            lower_bound: lower,
        });
    }
    let mut candidates: Vec<ElMatrix> = g.elements.iter().filter(|x| !x.is_identity()).cloned().collect();
    candidates.sort_by(|a, b| a.m.cmp(&b.m));
    let mut tested = 0u64;
    for n in lower..greedy.len() {
        let outcome = first_combination(candidates.len(), n, budget.saturating_sub(tested), |c| {
            let seeds: Vec<ElMatrix> = c.iter().map(|&i| candidates[i].clone()).collect();
            normal_closure(g, &seeds).is_ok_and(|h| h.order() == g.order())
        });
        match outcome {
            SearchOutcome::Found(c, _) => {
                return Ok(GroupWeight {
                    result: WeightResult::Exact(n),
                    witness: Some(c.into_iter().map(|i| candidates[i].clone()).collect()),
                    lower_bound: lower,
                });
            }
            SearchOutcome::Exhausted(t) => tested += t,
            SearchOutcome::BudgetExceeded(_) => {
                return Ok(GroupWeight {
                    result: WeightResult::AtLeast(n),
                    witness: None,
                    lower_bound: lower,
                });
            }
        }
    }
    Ok(GroupWeight {
        result: WeightResult::Exact(greedy.len()),
        witness: Some(greedy),
        lower_bound: lower,
    })
}

/// One Steinberg relation family and its tally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTally {
    pub name: &'static str,
    pub checked: u64,
    pub violations: u64,
}

#[derive(Clone, Debug)]
pub struct SteinbergReport {
    pub rng_name: String,
    pub n: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub relations: Vec<RelationTally>,
}

impl SteinbergReport {
    pub fn verified(&self) -> usize {
        self.relations.iter().filter(|r| r.violations == 0).count()
    }

    pub fn all_verified(&self) -> bool {
        self.verified() == self.relations.len()
    }
}

impl fmt::Display for SteinbergReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rng {} n = {}", self.rng_name, self.n)?;
        match self.seed {
            Some(s) if !self.exhaustive => writeln!(f, "mode sampled seed {s}")?,
            _ => writeln!(f, "mode exhaustive")?,
        }
        for r in &self.relations {
            writeln!(f, "{}: {} checked, {} violations", r.name, r.checked, r.violations)?;
        }
        writeln!(f, "relations verified: {}/{}", self.verified(), self.relations.len())
    }
}

const ADDITIVITY: &str = "E_ij(r) E_ij(s) = E_ij(r+s)";
const CHAIN: &str = "[E_ij(r), E_jk(s)] = E_ik(rs)";
const COMMUTE: &str = "[E_ij(r), E_kl(s)] = 1";

fn additivity_holds(ring: &Arc<ElRing>, i: usize, j: usize, r: u32, s: u32) -> bool {
    ring.elementary_idx(i, j, r).mul(&ring.elementary_idx(i, j, s)) == ring.elementary_idx(i, j, ring.add(r, s))
}

fn chain_holds(ring: &Arc<ElRing>, (i, j, k): (usize, usize, usize), r: u32, s: u32) -> bool {
    ring.elementary_idx(i, j, r).commutator(&ring.elementary_idx(j, k, s)) == ring.elementary_idx(i, k, ring.mul(r, s))
}

fn commute_holds(ring: &Arc<ElRing>, (i, j, k, l): (usize, usize, usize, usize), r: u32, s: u32) -> bool {
    ring.elementary_idx(i, j, r).commutator(&ring.elementary_idx(k, l, s)).is_identity()
}

fn index_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i != j && j != k && i != k {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

fn index_quads(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if i != j && k != l && i != l && j != k {
                        out.push((i, j, k, l));
                    }
                }
            }
        }
    }
    out
}

/// Checks the three Steinberg relations, over every index choice and pair
/// of ring elements, or on `samples` random instances of each.
pub fn steinberg_check(ring: &Arc<ElRing>, exhaustive: bool, samples: u64, seed: u64) -> SteinbergReport {
    let n = ring.n;
    let size = ring.size as u32;
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let triples = index_triples(n);
    let quads = index_quads(n);
    let tally = |name, results: Vec<bool>| RelationTally {
        name,
        checked: results.len() as u64,
        violations: results.iter().filter(|&&ok| !ok).count() as u64,
    };
    let elems: Vec<(u32, u32)> = (0..size).flat_map(|r| (0..size).map(move |s| (r, s))).collect();
    let relations = if exhaustive {
        vec![
            tally(
                ADDITIVITY,
                pairs
                    .par_iter()
                    .flat_map_iter(|&(i, j)| elems.iter().map(move |&(r, s)| additivity_holds(ring, i, j, r, s)))
                    .collect(),
            ),
            tally(
                CHAIN,
                triples
                    .par_iter()
                    .flat_map_iter(|&t| elems.iter().map(move |&(r, s)| chain_holds(ring, t, r, s)))
                    .collect(),
            ),
            tally(
                COMMUTE,
                quads
                    .par_iter()
                    .flat_map_iter(|&q| elems.iter().map(move |&(r, s)| commute_holds(ring, q, r, s)))
                    .collect(),
            ),
        ]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = |len: usize| rng.gen_range(0..len);
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        for _ in 0..samples {
            let (i, j) = pairs[pick(pairs.len())];
            let (r, s) = elems[pick(elems.len())];
            a.push(additivity_holds(ring, i, j, r, s));
            if !triples.is_empty() {
                let t = triples[pick(triples.len())];
                let (r, s) = elems[pick(elems.len())];
                b.push(chain_holds(ring, t, r, s));
            }
            if !quads.is_empty() {
                let q = quads[pick(quads.len())];
                let (r, s) = elems[pick(elems.len())];
                c.push(commute_holds(ring, q, r, s));
            }
        }
        vec![tally(ADDITIVITY, a), tally(CHAIN, b), tally(COMMUTE, c)]
    };
    SteinbergReport {
        rng_name: ring.rng.name().to_string(),
        n,
        exhaustive,
        seed: (!exhaustive).then_some(seed),
        relations,
    }
}

/// With `A = I + M` packed: `[A, E_{j,n}(t)] = Π_{k≠j} E_{k,n}(m_{k,j}t)`
/// and `[E_{2,i}(s), [A, E_{j,n}(t)]] = E_{2,n}(s·m_{i,j}·t)`, for
/// `1 ≤ i, j < n`, `i ≠ 2`. Returns whether both identities hold.
pub fn thm11_commutator_check(a: &ElMatrix, i: usize, j: usize, s: &RngElement, t: &RngElement) -> Result<bool> {
    let ring = a.ring();
    let n = ring.n;
    if n < 3 || i == 2 || !(1..n).contains(&i) || !(1..n).contains(&j) {
        return Err(Error::BadIndices { i, j, n });
    }
    let (s, t) = (ring.index_of(s)?, ring.index_of(t)?);
    let inner = a.commutator(&ring.elementary_idx(j, n, t));
    let mut product = ring.identity();
    for k in (1..n).filter(|&k| k != j) {
        product = product.mul(&ring.elementary_idx(k, n, ring.mul(a.entry_idx(k, j), t)));
    }
    let outer = ring.elementary_idx(2, i, s).commutator(&inner);
    let want = ring.elementary_idx(2, n, ring.mul(ring.mul(s, a.entry_idx(i, j)), t));
    Ok(inner == product && outer == want)
}

/// The mirror family reaching rows below the first:
/// `[[A⁻¹, E_{1,i}(s)], E_{j,q}(t)] = E_{1,q}(s·m_{i,j}·t)` for
/// `i, j > 1` and `q ∉ {1, j}`.
pub fn thm11_dual_check(
    a: &ElMatrix,
    (i, j, q): (usize, usize, usize),
    s: &RngElement,
    t: &RngElement,
) -> Result<bool> {
    let ring = a.ring();
    let n = ring.n;
    let ok = n >= 3 && (2..=n).contains(&i) && (2..=n).contains(&j) && (2..=n).contains(&q) && q != j;
    if !ok {
        return Err(Error::BadIndices { i, j, n });
    }
    let (s, t) = (ring.index_of(s)?, ring.index_of(t)?);
    let inner = a.inv().commutator(&ring.elementary_idx(1, i, s));
    let outer = inner.commutator(&ring.elementary_idx(j, q, t));
    let want = ring.elementary_idx(1, q, ring.mul(ring.mul(s, a.entry_idx(i, j)), t));
    Ok(outer == want)
}

/// Totals of both commutator families over every admissible argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorTally {
    pub checked: u64,
    pub passed: u64,
}

pub fn thm11_exhaustive(a: &ElMatrix) -> Result<CommutatorTally> {
    let ring = a.ring();
    let n = ring.n;
    let elems: Vec<RngElement> = (0..ring.size as u32).map(|x| ring.value(x)).collect();
    let mut jobs: Vec<(u8, usize, usize, usize)> = Vec::new();
    for i in (1..n).filter(|&i| i != 2) {
        for j in 1..n {
            jobs.push((0, i, j, 0));
        }
    }
    for i in 2..=n {
        for j in 2..=n {
            for q in (2..=n).filter(|&q| q != j) {
                jobs.push((1, i, j, q));
            }
        }
    }
    let results: Vec<bool> = jobs
        .par_iter()
        .flat_map_iter(|&(kind, i, j, q)| {
            let elems = &elems;
            elems.iter().flat_map(move |s| {
                elems.iter().map(move |t| {
                    if kind == 0 {
                        thm11_commutator_check(a, i, j, s, t)
                    } else {
                        thm11_dual_check(a, (i, j, q), s, t)
                    }
                })
            })
        })
        .collect::<Result<_>>()?;
    Ok(CommutatorTally {
        checked: results.len() as u64,
        passed: results.iter().filter(|&&x| x).count() as u64,
    })
}

#[derive(Clone, Debug)]
pub struct Thm11Report {
    pub rng_name: String,
    pub n: usize,
    pub rng_weight: WeightResult,
    pub packed_count: usize,
    pub group_order: usize,
    pub closure_order: usize,
    pub group_weight: WeightResult,
    pub commutators: CommutatorTally,
}

impl Thm11Report {
    pub fn upper_ok(&self) -> bool {
        self.closure_order == self.group_order
    }

    /// `w(R) ≤ n²·w(EL_n(R))`, using the proven lower bound on `w(EL_n(R))`.
    pub fn lower_ok(&self) -> bool {
        self.rng_weight.lower() <= self.n * self.n * self.group_weight.lower()
    }

    pub fn all_ok(&self) -> bool {
        self.upper_ok()
            && self.lower_ok()
            && self.commutators.passed == self.commutators.checked
            && matches!(self.rng_weight, WeightResult::Exact(_))
    }
}

impl fmt::Display for Thm11Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |b: bool| if b { "verified" } else { "FAILED" };
        writeln!(f, "rng {} n = {}", self.rng_name, self.n)?;
        writeln!(f, "w(R) = {}", self.rng_weight)?;
        writeln!(f, "|EL_n(R)| = {}", self.group_order)?;
        writeln!(f, "packed matrices: {}", self.packed_count)?;
        writeln!(f, "normal closure of packed matrices: {}", self.closure_order)?;
        writeln!(f, "upper bound: {}", verdict(self.upper_ok()))?;
        writeln!(f, "w(EL_n(R)) = {}", self.group_weight)?;
        writeln!(f, "lower bound w(R) <= n^2 w(EL_n(R)): {}", verdict(self.lower_ok()))?;
        writeln!(
            f,
            "commutator identities: {}/{} verified",
            self.commutators.passed, self.commutators.checked
        )
    }
}

/// Packs a minimal ideal generating set of `R` into
/// `⌈2w(R)/(n² − n − 2)⌉` matrices and checks that their normal closure is
/// all of `EL_n(R)`; then compares `w(R)` with `n²·w(EL_n(R))`.
pub fn thm11_upper_bound_witness(
    rng: &FiniteRng,
    n: usize,
    limits: SearchLimits,
    group_cap: usize,
    group_budget: u64,
) -> Result<Thm11Report> {
    if n < 3 {
        return Err(Error::InvalidInput("n must be at least 3".into()));
    }
    if !ideals::is_irng(rng) {
        return Err(Error::NotIrng);
    }
    let ring = ElRing::new(rng, n)?;
    let w = ideals::weight_exact(rng, limits)?;
    let zs = w
        .witness
        .clone()
        .ok_or_else(|| Error::PreconditionFailed(format!("w(R) undecided: {}", w.result)))?;
    let slots = ring.pack_slots().len();
    let packed: Vec<ElMatrix> = zs
        .chunks(slots)
        .map(|c| ring.pack_matrix(c))
        .collect::<Result<_>>()?;
    let g = generate_group(&ring, group_cap)?;
    let closure = normal_closure(&g, &packed)?;
    let gw = group_weight(&g, group_budget)?;
    let sample = packed.first().cloned().unwrap_or_else(|| ring.identity());
    let commutators = thm11_exhaustive(&sample)?;
    Ok(Thm11Report {
        rng_name: rng.name().to_string(),
        n,
        rng_weight: w.result,
        packed_count: packed.len(),
        group_order: g.order(),
        closure_order: closure.order(),
        group_weight: gw.result,
        commutators,
    })
}

#[derive(Clone, Debug)]
pub struct QuotientHomReport {
    pub samples: u64,
    pub seed: u64,
    pub hom_failures: u64,
    pub kernel_failures: u64,
    pub image_order: u128,
}

impl QuotientHomReport {
    pub fn ok(&self) -> bool {
        self.hom_failures == 0 && self.kernel_failures == 0
    }
}

impl fmt::Display for QuotientHomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        writeln!(f, "|R/<Z>| = {}", self.image_order)?;
        writeln!(f, "products preserved: {}/{}", self.samples - self.hom_failures, self.samples)?;
        writeln!(f, "ideal matrices killed: {}/{}", self.samples - self.kernel_failures, self.samples)
    }
}

pub const DEFAULT_WORD_LENGTH: usize = 8;

fn random_word(ring: &Arc<ElRing>, gens: &[ElMatrix], len: usize, rng: &mut ChaCha8Rng) -> ElMatrix {
    let mut acc = ring.identity();
    for _ in 0..len {
        let g = &gens[rng.gen_range(0..gens.len())];
        acc = if rng.gen_bool(0.5) { acc.mul(g) } else { acc.mul(&g.inv()) };
    }
    acc
}

/// Entrywise reduction `EL_n(R) → EL_n(R/⟨Z⟩)` on sampled words: products go
/// to products, and words in `E_{i,j}(⟨Z⟩)` go to the identity.
pub fn quotient_hom_check(rng: &FiniteRng, zs: &[RngElement], n: usize, samples: u64, seed: u64) -> Result<QuotientHomReport> {
    let ideal = ideals::ideal_generated_by(rng, zs)?;
    let q = ideals::quotient(rng, &ideal)?;
    let src = ElRing::new(rng, n)?;
    let dst = ElRing::new(q.rng(), n)?;
    let image_of: Vec<u32> = (0..src.size as u32)
        .map(|x| q.project(&src.value(x)).map(|y| y.index() as u32))
        .collect::<Result<_>>()?;
    let project = |g: &ElMatrix| {
        let m = g.m.iter().map(|&x| image_of[x as usize]).collect();
        let minv = g.minv.iter().map(|&x| image_of[x as usize]).collect();
        dst.matrix(m, minv)
    };
    let gens = src.generators();
    let ideal_elems: Vec<u32> = ideal
        .subgroup()
        .elements()
        .iter()
        .map(|x| x.index() as u32)
        .filter(|&x| x != 0)
        .collect();
    let ideal_gens: Vec<ElMatrix> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .flat_map(|(i, j)| ideal_elems.iter().map(move |&z| (i, j, z)))
        .map(|(i, j, z)| src.elementary_idx(i, j, z))
        .collect();
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut hom_failures = 0;
    let mut kernel_failures = 0;
    for _ in 0..samples {
        let a = random_word(&src, &gens, DEFAULT_WORD_LENGTH, &mut r);
        let b = random_word(&src, &gens, DEFAULT_WORD_LENGTH, &mut r);
        let ok = project(&a.mul(&b)) == project(&a).mul(&project(&b)) && project(&a).check_inverse();
        hom_failures += u64::from(!ok);
        if !ideal_gens.is_empty() {
            let k = random_word(&src, &ideal_gens, DEFAULT_WORD_LENGTH, &mut r);
            let entries_in_ideal = k.m.iter().all(|&x| ideal.contains(&src.value(x)));
            kernel_failures += u64::from(!(entries_in_ideal && project(&k).is_identity()));
        }
    }
    Ok(QuotientHomReport {
        samples,
        seed,
        hom_failures,
        kernel_failures,
        image_order: q.rng().order(),
    })
}

/// Whether `EL_n(R)` equals its derived subgroup.
pub fn is_perfect(g: &ElGroup) -> Result<bool> {
    Ok(derived_subgroup(g)?.order() == g.order())
}

/// Distinct elements, for tests and reports.
pub fn element_set(g: &ElGroup) -> HashSet<Vec<u32>> {
    g.elements.iter().map(|x| x.m.clone()).collect()
}
