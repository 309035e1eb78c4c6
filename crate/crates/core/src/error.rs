use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Basis indices carried by the variants are 1-based, matching the `eᵢ`
/// numbering used in rng files and reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("structure constant c[{i}][{j}] entry {t} is not well defined for the given moduli")]
    BilinearityViolation { i: usize, j: usize, t: usize },
    #[error("associativity fails on basis triple (e{i}, e{j}, e{l})")]
    AssociativityViolation { i: usize, j: usize, l: usize },
    #[error("semigroup associativity fails on ({a}, {b}, {c})")]
    SemigroupAssociativityViolation { a: usize, b: usize, c: usize },
    #[error("elements belong to different rngs")]
    AmbientMismatch,
    #[error("integer overflow in exact arithmetic")]
    IntegerOverflow,
    #[error("{size} elements exceeds the enumeration cap of {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("ideal is not two-sided")]
    NotTwoSided,
    #[error("rng is not commutative (e{i} e{j} != e{j} e{i})")]
    NotCommutative { i: usize, j: usize },
    #[error("rng is not idempotent (R^2 != R)")]
    NotIrng,
    #[error("the given elements do not generate the rng as a rng")]
    NotRngGenerators,
    #[error("no expression x{0} = sum a_j x_j exists")]
    SystemUnsolvable(usize),
    #[error("idempotents do not generate the rng as an ideal ({generated} of {order} elements)")]
    CorollaryViolated { generated: u128, order: u128 },
    #[error("construction check fails: {0}")]
    LemmaViolated(String),
    #[error("declared identity fails for generator {0}")]
    HypothesisViolation(usize),
    #[error("certificate term count reached {reached}, budget is {budget}")]
    SubstitutionBlowup { reached: usize, budget: usize },
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("bad elementary indices ({i}, {j}) for n = {n}")]
    BadIndices { i: usize, j: usize, n: usize },
    #[error("{given} entries do not fit in {slots} packed slots")]
    TooManyEntries { given: usize, slots: usize },
    #[error("group closure exceeded the cap after visiting {visited} elements")]
    CapExceeded { visited: usize },
    #[error("commutator convention check failed: {0}")]
    ConventionMismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
