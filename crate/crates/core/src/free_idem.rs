//! The free rng on idempotents `x₁, …, x_n`, symbolically.
//!
//! Elements are integer combinations of reduced words: words with no two
//! equal adjacent letters, the normal form under `xᵢxᵢ → xᵢ`. Letters are
//! 1-based so that `x1` in text is letter `1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which fixing identity a generator satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `x = u·x`, chain step `wᵢ = wᵢ₋₁(1 − uᵢ)`.
    Left,
    /// `x = x·u`, chain step `wᵢ = (1 − uᵢ)wᵢ₋₁`.
    Right,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// Parses strings like `LLR`.
pub fn parse_sides(s: &str) -> Result<Vec<Side>> {
    s.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'L' => Ok(Side::Left),
            'R' => Ok(Side::Right),
            _ => Err(Error::InvalidInput(format!("side must be L or R, found {c:?}"))),
        })
        .collect()
}

/// A reduced word; the empty word is the unit of the unitization.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord(Vec<u16>);

impl ReducedWord {
    pub fn new(letters: Vec<u16>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::InvalidInput("generator indices start at 1".into()));
        }
        if letters.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("word {letters:?} is not reduced")));
        }
        Ok(ReducedWord(letters))
    }

    pub fn empty() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn letter(i: u16) -> Self {
        assert!(i >= 1, "generator indices start at 1");
        ReducedWord(vec![i])
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Concatenation with at most one collapse at the seam.
    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let skip = usize::from(matches!((self.0.last(), other.0.first()), (Some(a), Some(b)) if a == b));
        let mut v = Vec::with_capacity(self.0.len() + other.0.len() - skip);
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0[skip..]);
        ReducedWord(v)
    }
}

/// Shortlex: shorter words first, then lexicographic.
impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<1>");
        }
        for (n, l) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(".")?;
            }
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Whether the empty word may appear.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyContext {
    /// Element of the unitization.
    Unital,
    /// Element of the rng itself.
    Rng,
}

/// Integer combination of reduced words. Equality ignores the context flag.
#[derive(Clone)]
pub struct FreePoly {
    terms: BTreeMap<ReducedWord, i64>,
    context: PolyContext,
}

fn checked(a: i64, b: i64, op: fn(i64, i64) -> Option<i64>) -> i64 {
    op(a, b).expect("free rng coefficient overflow")
}

impl FreePoly {
    pub fn zero(context: PolyContext) -> Self {
        FreePoly {
            terms: BTreeMap::new(),
            context,
        }
    }

    pub fn one() -> Self {
        FreePoly::from_word(ReducedWord::empty(), 1)
    }

    /// The generator `xᵢ`.
    pub fn generator(i: u16) -> Self {
        FreePoly::from_word(ReducedWord::letter(i), 1)
    }

    pub fn from_word(w: ReducedWord, coeff: i64) -> Self {
        let context = if w.is_empty() { PolyContext::Unital } else { PolyContext::Rng };
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(w, coeff);
        }
        FreePoly { terms, context }
    }

    pub fn from_terms(context: PolyContext, terms: impl IntoIterator<Item = (ReducedWord, i64)>) -> Result<Self> {
        let mut p = FreePoly::zero(context);
        for (w, c) in terms {
            if w.is_empty() && context == PolyContext::Rng {
                return Err(Error::InvalidInput("empty word in an rng-context polynomial".into()));
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, w: ReducedWord, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(w);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = checked(*o.get(), c, i64::checked_add);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn context(&self) -> PolyContext {
        self.context
    }

    /// No empty-word term.
    pub fn is_in_rng(&self) -> bool {
        !self.terms.contains_key(&ReducedWord::empty())
    }

    /// Re-tags as rng context when there is no empty-word term.
    pub fn into_rng(self) -> Result<Self> {
        if self.is_in_rng() {
            Ok(FreePoly {
                terms: self.terms,
                context: PolyContext::Rng,
            })
        } else {
            Err(Error::InvalidInput("polynomial has a constant term".into()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ReducedWord, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &ReducedWord) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn scale(&self, k: i64) -> FreePoly {
        let mut p = FreePoly::zero(self.context);
        for (w, &c) in &self.terms {
            p.add_term(w.clone(), checked(c, k, i64::checked_mul));
        }
        p
    }

    /// Highest generator index appearing.
    pub fn max_letter(&self) -> u16 {
        self.terms
            .keys()
            .flat_map(|w| w.0.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

fn join_context(a: PolyContext, b: PolyContext) -> PolyContext {
    if a == PolyContext::Unital || b == PolyContext::Unital {
        PolyContext::Unital
    } else {
        PolyContext::Rng
    }
}

impl PartialEq for FreePoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for FreePoly {}

impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        let mut p = self.clone();
        p.context = join_context(self.context, rhs.context);
        for (w, &c) in &rhs.terms {
            p.add_term(w.clone(), c);
        }
        p
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        self.scale(-1)
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        self + &(-rhs)
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        let context = if self.context == PolyContext::Unital && rhs.context == PolyContext::Unital {
            PolyContext::Unital
        } else {
            PolyContext::Rng
        };
        let mut p = FreePoly::zero(context);
        for (u, &a) in &self.terms {
            for (v, &b) in &rhs.terms {
                p.add_term(u.mul(v), checked(a, b, i64::checked_mul));
            }
        }
        p
    }
}

/// Canonical text: shortlex order, unit coefficients omitted.
impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (w, &c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            match (n, c < 0) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_word(s: &str) -> Result<ReducedWord> {
    let bad = || Error::Parse {
        line: 1,
        msg: format!("bad word {s:?}"),
    };
    if s == "<1>" {
        return Ok(ReducedWord::empty());
    }
    let mut w = ReducedWord::empty();
    for part in s.split('.') {
        let idx = part.strip_prefix('x').ok_or_else(bad)?;
        let i: u16 = idx.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        w = w.mul(&ReducedWord::letter(i));
    }
    Ok(w)
}

/// Accepts `3*x1.x2 - 1*x2 + 2*<1>`; unreduced words are reduced.
impl FromStr for FreePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<FreePoly> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |msg: &str| Error::Parse {
            line: 1,
            msg: msg.to_string(),
        };
        if compact.is_empty() {
            return Err(bad("empty polynomial"));
        }
        let mut p = FreePoly::zero(PolyContext::Rng);
        if compact == "0" {
            return Ok(p);
        }
        let mut terms: Vec<(i64, &str)> = Vec::new();
        let mut sign = 1i64;
        let mut start = 0usize;
        let bytes = compact.as_bytes();
        let mut i = 0;
        if bytes[0] == b'-' || bytes[0] == b'+' {
            sign = if bytes[0] == b'-' { -1 } else { 1 };
            i = 1;
            start = 1;
        }
        while i <= bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start) {
                terms.push((sign, &compact[start..i]));
                if i < bytes.len() {
                    sign = if bytes[i] == b'-' { -1 } else { 1 };
                }
                start = i + 1;
            }
            i += 1;
        }
        for (sign, t) in terms {
            if t.is_empty() {
                return Err(bad("empty term"));
            }
            let (coef, word) = match t.split_once('*') {
                Some((c, w)) => (c.parse::<i64>().map_err(|_| bad(&format!("bad coefficient in {t:?}")))?, w),
                None => (1, t),
            };
            let w = parse_word(word)?;
            if w.is_empty() {
                p.context = PolyContext::Unital;
            }
            p.add_term(w, checked(sign, coef, i64::checked_mul));
        }
        Ok(p)
    }
}

/// The elements `w₁…w_n` and `z₁…z_n` built from `u₁…u_n`.
#[derive(Clone, Debug)]
pub struct Chain {
    pub n: usize,
    pub sides: Vec<Side>,
    pub us: Vec<FreePoly>,
    /// Whether every `uᵢ = xᵢ`.
    pub default_u: bool,
    pub ws: Vec<FreePoly>,
    pub zs: Vec<FreePoly>,
}

impl Chain {
    /// `z_n`, the claimed single generator.
    pub fn generator(&self) -> &FreePoly {
        self.zs.last().expect("chains have n >= 1")
    }
}

/// Builds `w₁ = 1 − u₁`, `wᵢ = wᵢ₋₁(1 − uᵢ)` (left) or `(1 − uᵢ)wᵢ₋₁`
/// (right), and `zᵢ = 1 − wᵢ`, after checking each declared identity.
pub fn theorem3_chain(n: usize, sides: &[Side], us: Option<Vec<FreePoly>>) -> Result<Chain> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one generator".into()));
    }
    if n > u16::MAX as usize {
        return Err(Error::InvalidInput("too many generators".into()));
    }
    if sides.len() != n {
        return Err(Error::InvalidInput(format!("{} sides for {n} generators", sides.len())));
    }
    let default_u = us.is_none();
    let us = us.unwrap_or_else(|| (1..=n as u16).map(FreePoly::generator).collect());
    if us.len() != n {
        return Err(Error::InvalidInput(format!("{} multipliers for {n} generators", us.len())));
    }
    let one = FreePoly::one();
    let mut ws = Vec::with_capacity(n);
    let mut zs = Vec::with_capacity(n);
    for (i, (u, &side)) in us.iter().zip(sides).enumerate() {
        if !u.is_in_rng() {
            return Err(Error::InvalidInput(format!("u{} has a constant term", i + 1)));
        }
        let x = FreePoly::generator(i as u16 + 1);
        let holds = match side {
            Side::Left => u * &x == x,
            Side::Right => &x * u == x,
        };
        if !holds {
            return Err(Error::HypothesisViolation(i + 1));
        }
        let step = &one - u;
        let w = match (ws.last(), side) {
            (None, _) => step,
            (Some(prev), Side::Left) => prev * &step,
            (Some(prev), Side::Right) => &step * prev,
        };
        zs.push((&one - &w).into_rng()?);
        ws.push(w);
    }
    Ok(Chain {
        n,
        sides: sides.to_vec(),
        us,
        default_u,
        ws,
        zs,
    })
}

/// `xᵢ = zᵢxᵢ` for left steps, `xᵢ = xᵢzᵢ` for right steps.
pub fn verify_fixing_identities(chain: &Chain) -> bool {
    fixing_count(chain) == chain.n
}

pub fn fixing_count(chain: &Chain) -> usize {
    chain
        .zs
        .iter()
        .zip(&chain.sides)
        .enumerate()
        .filter(|(i, (z, side))| {
            let x = FreePoly::generator(*i as u16 + 1);
            match side {
                Side::Left => *z * &x == x,
                Side::Right => &x * *z == x,
            }
        })
        .count()
}

/// `target = Σ pⱼ · generator · qⱼ`.
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub target: FreePoly,
    pub generator: FreePoly,
    pub terms: Vec<(FreePoly, FreePoly)>,
}

impl MembershipCertificate {
    /// Monomials across all multipliers.
    pub fn size(&self) -> usize {
        self.terms.iter().map(|(p, q)| p.num_terms() + q.num_terms()).sum()
    }
}

pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

fn term_count(terms: &[(FreePoly, FreePoly)]) -> usize {
    terms.iter().map(|(p, q)| p.num_terms() + q.num_terms()).sum()
}

/// Expresses `xᵢ` (1-based `i`) as `Σ pⱼ z_n qⱼ` by walking the chain back
/// from `z_n`: `xⱼ = zⱼxⱼ` (or `xⱼzⱼ`) and `zⱼ₋₁ = zⱼ − wⱼ₋₁uⱼ` (or
/// `zⱼ − uⱼwⱼ₋₁`), with `uⱼ = xⱼ` re-expanded by its own certificate.
pub fn build_membership_certificate(chain: &Chain, i: usize, budget: usize) -> Result<MembershipCertificate> {
    if !chain.default_u {
        return Err(Error::PreconditionFailed(
            "certificates need the chain with u_i = x_i".into(),
        ));
    }
    if !(1..=chain.n).contains(&i) {
        return Err(Error::InvalidInput(format!("generator index {i} out of 1..={}", chain.n)));
    }
    let target = FreePoly::generator(i as u16);
    let generator = chain.generator().clone();
    let one = FreePoly::one();
    if target == generator {
        return Ok(MembershipCertificate {
            target,
            generator,
            terms: vec![(one.clone(), one)],
        });
    }
    let check = |terms: &[(FreePoly, FreePoly)]| -> Result<()> {
        let reached = term_count(terms);
        if reached > budget {
            Err(Error::SubstitutionBlowup { reached, budget })
        } else {
            Ok(())
        }
    };
    // z_j as Σ p z_n q, starting from j = n.
    let mut z_terms: Vec<(FreePoly, FreePoly)> = vec![(one.clone(), one)];
    let mut j = chain.n;
    loop {
        let x = FreePoly::generator(j as u16);
        let side = chain.sides[j - 1];
        let cert: Vec<(FreePoly, FreePoly)> = z_terms
            .iter()
            .map(|(p, q)| match side {
                Side::Left => (p.clone(), q * &x),
                Side::Right => (&x * p, q.clone()),
            })
            .collect();
        check(&cert)?;
        if j == i {
            return Ok(MembershipCertificate {
                target,
                generator,
                terms: cert,
            });
        }
        let w_prev = &chain.ws[j - 2];
        for (p, q) in cert {
            z_terms.push(match side {
                Side::Left => (-&(w_prev * &p), q),
                Side::Right => (p, -&(&q * w_prev)),
            });
        }
        check(&z_terms)?;
        j -= 1;
    }
}

pub fn verify_certificate(cert: &MembershipCertificate) -> bool {
    let mut sum = FreePoly::zero(PolyContext::Rng);
    for (p, q) in &cert.terms {
        sum = &sum + &(&(p * &cert.generator) * q);
    }
    sum == cert.target
}

/// Everything the free-rng pipeline produces for one `(n, sides)`.
#[derive(Clone, Debug)]
pub struct FreeReport {
    pub chain: Chain,
    pub fixing: usize,
    pub certificates: Vec<std::result::Result<MembershipCertificate, Error>>,
    pub verified: usize,
}

impl FreeReport {
    pub fn all_verified(&self) -> bool {
        self.fixing == self.chain.n && self.verified == self.chain.n
    }
}

pub fn free_pipeline(n: usize, sides: &[Side], budget: usize) -> Result<FreeReport> {
    let chain = theorem3_chain(n, sides, None)?;
    let fixing = fixing_count(&chain);
    let certificates: Vec<_> = (1..=n)
        .map(|i| build_membership_certificate(&chain, i, budget))
        .collect();
    let verified = certificates
        .iter()
        .filter(|c| c.as_ref().is_ok_and(verify_certificate))
        .count();
    Ok(FreeReport {
        chain,
        fixing,
        certificates,
        verified,
    })
}

impl fmt::Display for FreeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.chain.n;
        let sides: String = self.chain.sides.iter().map(|s| s.letter()).collect();
        writeln!(f, "n = {n}")?;
        writeln!(f, "sides = {sides}")?;
        writeln!(f, "z = {}", self.chain.generator())?;
        writeln!(f, "fixing identities: {}/{n} verified", self.fixing)?;
        for (i, c) in self.certificates.iter().enumerate() {
            match c {
                Ok(c) => writeln!(f, "x{} certificate: {} terms, {} monomials", i + 1, c.terms.len(), c.size())?,
                Err(e) => writeln!(f, "x{} certificate: {e}", i + 1)?,
            }
        }
        writeln!(f, "certificates: {}/{n} verified", self.verified)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[u16]) -> ReducedWord {
        ReducedWord::new(v.to_vec()).unwrap()
    }

    fn x(i: u16) -> FreePoly {
        FreePoly::generator(i)
    }

    #[test]
    fn word_products() {
        assert_eq!(w(&[1, 2]).mul(&w(&[2, 1])), w(&[1, 2, 1]));
        assert_eq!(w(&[1]).mul(&w(&[2])), w(&[1, 2]));
        assert_eq!(w(&[1, 2, 1]).mul(&w(&[1, 2])), w(&[1, 2, 1, 2]));
        assert_eq!(ReducedWord::empty().mul(&w(&[3])), w(&[3]));
        assert!(ReducedWord::new(vec![1, 1]).is_err());
        assert!(ReducedWord::new(vec![0]).is_err());
    }

    #[test]
    fn poly_products() {
        let one = FreePoly::one();
        let a = &one - &x(1);
        assert_eq!(&a * &a, a);
        assert!((&x(1) * &a).is_zero());
        assert!((&a * &FreePoly::zero(PolyContext::Unital)).is_zero());
        assert_eq!(&x(1) * &x(1), x(1));
    }

    #[test]
    fn chain_examples() {
        let c = theorem3_chain(1, &[Side::Left], None).unwrap();
        assert_eq!(c.generator(), &x(1));
        let c = theorem3_chain(2, &[Side::Left, Side::Left], None).unwrap();
        assert_eq!(c.generator().to_string(), "x1 + x2 - x1.x2");
        let c = theorem3_chain(2, &[Side::Right, Side::Right], None).unwrap();
        assert_eq!(c.generator().to_string(), "x1 + x2 - x2.x1");
        assert_eq!(c.generator().context(), PolyContext::Rng);
    }

    #[test]
    fn hypothesis_is_checked() {
        // u1 = x2 does not satisfy x1 = u1 x1
        let err = theorem3_chain(2, &[Side::Left, Side::Left], Some(vec![x(2), x(2)])).unwrap_err();
        assert_eq!(err, Error::HypothesisViolation(1));
        // u2 = x1.x2 satisfies x2 = x2 u2? x2.x1.x2 != x2
        let err = theorem3_chain(2, &[Side::Left, Side::Right], Some(vec![x(1), "x1.x2".parse().unwrap()])).unwrap_err();
        assert_eq!(err, Error::HypothesisViolation(2));
        // but x2 = u2 x2 holds for u2 = x2.x1.x2? x2.x1.x2.x2 = x2.x1.x2 != x2; use u2 = x2
        assert!(theorem3_chain(2, &[Side::Left, Side::Right], Some(vec![x(1), x(2)])).is_ok());
    }

    #[test]
    fn fixing_identities() {
        let c = theorem3_chain(1, &[Side::Left], None).unwrap();
        assert!(verify_fixing_identities(&c));
        let mut c = theorem3_chain(2, &[Side::Left, Side::Left], None).unwrap();
        assert!(verify_fixing_identities(&c));
        c.zs[1] = x(1);
        assert!(!verify_fixing_identities(&c));
    }

    #[test]
    fn certificate_examples() {
        let c = theorem3_chain(1, &[Side::Left], None).unwrap();
        let cert = build_membership_certificate(&c, 1, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(cert.terms, vec![(FreePoly::one(), FreePoly::one())]);
        assert!(verify_certificate(&cert));

        let c = theorem3_chain(2, &[Side::Left, Side::Left], None).unwrap();
        let cert = build_membership_certificate(&c, 2, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(cert.terms, vec![(FreePoly::one(), x(2))]);
        assert!(verify_certificate(&cert));

        let c = theorem3_chain(3, &[Side::Left; 3], None).unwrap();
        let cert = build_membership_certificate(&c, 1, DEFAULT_TERM_BUDGET).unwrap();
        assert!(verify_certificate(&cert));
        assert_eq!(cert.terms.len(), 4);

        let mut bad = cert.clone();
        bad.terms[0].0 = &bad.terms[0].0 + &FreePoly::one();
        assert!(!verify_certificate(&bad));
        let empty = MembershipCertificate {
            target: x(1),
            generator: c.generator().clone(),
            terms: vec![],
        };
        assert!(!verify_certificate(&empty));
    }

    #[test]
    fn certificate_budget() {
        let c = theorem3_chain(5, &[Side::Left; 5], None).unwrap();
        let err = build_membership_certificate(&c, 1, 10).unwrap_err();
        assert!(matches!(err, Error::SubstitutionBlowup { budget: 10, .. }));
    }

    #[test]
    fn certificates_need_default_multipliers() {
        let c = theorem3_chain(1, &[Side::Left], Some(vec![x(1)])).unwrap();
        assert!(matches!(
            build_membership_certificate(&c, 1, 100),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn all_side_patterns_up_to_five() {
        for n in 1..=5usize {
            for mask in 0..(1u32 << n) {
                let sides: Vec<Side> = (0..n)
                    .map(|b| if mask >> b & 1 == 1 { Side::Right } else { Side::Left })
                    .collect();
                let r = free_pipeline(n, &sides, DEFAULT_TERM_BUDGET).unwrap();
                assert!(r.all_verified(), "n={n} sides={sides:?}");
                assert!(r.chain.generator().is_in_rng());
            }
        }
    }

    #[test]
    fn text_format() {
        let p: FreePoly = "3*x1.x2 - 1*x2 + 2*<1>".parse().unwrap();
        assert_eq!(p.coeff(&w(&[1, 2])), 3);
        assert_eq!(p.coeff(&w(&[2])), -1);
        assert_eq!(p.coeff(&ReducedWord::empty()), 2);
        assert_eq!(p.to_string(), "2*<1> - x2 + 3*x1.x2");
        assert_eq!(p.to_string().parse::<FreePoly>().unwrap(), p);
        assert_eq!("x1.x1".parse::<FreePoly>().unwrap(), x(1));
        assert_eq!("-x1 + x1".parse::<FreePoly>().unwrap().to_string(), "0");
        assert!("x0".parse::<FreePoly>().is_err());
        assert!("3*".parse::<FreePoly>().is_err());
        assert!("x1 +".parse::<FreePoly>().is_err());
        assert!("".parse::<FreePoly>().is_err());
    }

    fn word_strategy() -> impl Strategy<Value = ReducedWord> {
        prop::collection::vec(1u16..=5, 0..12).prop_map(|v| {
            let mut out: Vec<u16> = Vec::new();
            for l in v {
                if out.last() != Some(&l) {
                    out.push(l);
                }
            }
            ReducedWord(out)
        })
    }

    fn poly_strategy() -> impl Strategy<Value = FreePoly> {
        prop::collection::vec((word_strategy(), -3i64..=3), 0..5).prop_map(|ts| {
            FreePoly::from_terms(PolyContext::Unital, ts).unwrap()
        })
    }

    proptest! {
        #[test]
        fn word_products_are_reduced_and_associative(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
            let ab = a.mul(&b);
            prop_assert!(ab.0.windows(2).all(|p| p[0] != p[1]));
            prop_assert_eq!(ab.mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn any_bracketing_agrees(words in prop::collection::vec(word_strategy(), 1..6)) {
            let left = words.iter().skip(1).fold(words[0].clone(), |acc, w| acc.mul(w));
            let right = words.iter().rev().skip(1).fold(words.last().unwrap().clone(), |acc, w| w.mul(&acc));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn poly_ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }

        #[test]
        fn text_round_trip(a in poly_strategy()) {
            let s = a.to_string();
            let back: FreePoly = s.parse().unwrap();
            prop_assert_eq!(back.to_string(), s);
            prop_assert_eq!(back, a);
        }
    }
}
