//! Command-line front end. [`run`] returns the exit code and both output
//! streams so tests can drive it without spawning a process.
//!
//! `--rng` and `--semigroup` take a file path; when no such file exists the
//! argument (minus a `.rng` or `.sg` extension) is looked up in the catalog.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};

use crate::catalog;
use crate::constructions;
use crate::elgroup::{self, ElRing};
use crate::error::{Error, Result};
use crate::format;
use crate::free_idem::{self, parse_sides};
use crate::ideals::{self, SearchLimits};
use crate::rng::{FiniteRng, RngElement};
use crate::semigroups::{self, FiniteSemigroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "irng", version, about = "Ideal generators of finite rngs and elementary matrix groups")]
pub struct Cli {
    /// Threads for parallel searches; output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest rng enumerated by exhaustive searches.
    #[arg(long, global = true, env = "IRNG_ENUM_CAP", default_value_t = ideals::DEFAULT_ENUMERATION_CAP)]
    enum_cap: u128,
    /// Subsets tried by weight searches before giving a lower bound.
    #[arg(long, global = true, env = "IRNG_SUBSET_CAP", default_value_t = ideals::DEFAULT_SUBSET_BUDGET)]
    subset_cap: u64,
    /// Largest matrix group generated by BFS.
    #[arg(long, global = true, env = "IRNG_GROUP_CAP", default_value_t = elgroup::DEFAULT_GROUP_CAP)]
    group_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RngArg {
    /// Rng file or catalog name.
    #[arg(long)]
    rng: String,
}

#[derive(Args, Debug)]
struct ElArgs {
    #[command(flatten)]
    rng: RngArg,
    /// Matrix size.
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate an rng, then summarize it.
    Verify(RngArg),
    /// Two-sided (or left) ideal generated by elements.
    Ideal {
        #[command(flatten)]
        rng: RngArg,
        /// Element as coefficients, e.g. `1,0,2`; repeatable.
        #[arg(long = "z", required = true)]
        zs: Vec<String>,
        #[arg(long)]
        left: bool,
    },
    /// Least number of ideal generators.
    Weight(RngArg),
    /// Unit of a commutative irng from a finite generating set.
    Unit {
        #[command(flatten)]
        rng: RngArg,
        /// Generators; defaults to the basis.
        #[arg(long = "x")]
        xs: Vec<String>,
    },
    /// Single ideal generator of a finite irng from its idempotents.
    Cor6(RngArg),
    /// Chain in the free rng on idempotents, with membership certificates.
    #[command(name = "thm3-free")]
    Thm3Free {
        #[arg(long)]
        n: usize,
        /// One letter per generator, `L` or `R`.
        #[arg(long)]
        sides: String,
        #[arg(long, default_value_t = free_idem::DEFAULT_TERM_BUDGET)]
        budget: usize,
    },
    /// `X₁` and `X₀` for a generating set `X` with `S = SX`.
    X0 {
        #[command(flatten)]
        sg: SemigroupArg,
    },
    /// Single ideal generator of the semigroup algebra over `Z/m`.
    Cor8 {
        #[command(flatten)]
        sg: SemigroupArg,
        #[arg(long, default_value_t = 2)]
        m: i64,
    },
    /// Elementary matrix groups.
    El {
        #[command(subcommand)]
        cmd: ElCommand,
    },
    /// Built-in rngs and semigroups.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCommand,
    },
}

#[derive(Args, Debug)]
struct SemigroupArg {
    /// Semigroup file or catalog name.
    #[arg(long)]
    semigroup: String,
    /// Elements of `X`, 0-based, comma separated; defaults to all of `S`.
    #[arg(long)]
    x: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ElCommand {
    /// Order of `EL_n(R)` by BFS.
    Generate(ElArgs),
    /// Least number of normal generators of `EL_n(R)`.
    Weight(ElArgs),
    /// Packed-matrix upper bound, weight comparison and commutator identities.
    Thm11(ElArgs),
    /// The three Steinberg relations.
    Steinberg {
        #[command(flatten)]
        el: ElArgs,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List,
    /// Write a catalog entry in its file format.
    Emit {
        name: String,
        #[arg(long)]
        out: Option<String>,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn verdict(stdout: String, ok: bool) -> Self {
        Outcome {
            code: if ok { EXIT_OK } else { EXIT_VERIFICATION },
            stdout,
            stderr: String::new(),
        }
    }
}

/// Exit code for an error: malformed input is a usage error, anything else
/// a failed verification.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidInput(_)
        | Error::BadIndices { .. }
        | Error::TooManyEntries { .. }
        | Error::AmbientMismatch
        | Error::BilinearityViolation { .. }
        | Error::AssociativityViolation { .. }
        | Error::SemigroupAssociativityViolation { .. } => EXIT_USAGE,
        _ => EXIT_VERIFICATION,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn strip_ext<'a>(s: &'a str, ext: &str) -> &'a str {
    Path::new(s)
        .file_name()
        .and_then(|f| f.to_str())
        .map(|f| f.strip_suffix(ext).unwrap_or(f))
        .unwrap_or(s)
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

fn load_rng(arg: &str) -> Result<FiniteRng> {
    if Path::new(arg).is_file() {
        return format::parse_rng(&read_file(arg)?);
    }
    catalog::rng_by_name(strip_ext(arg, ".rng"))
        .ok_or_else(|| Error::InvalidInput(format!("{arg}: no such file or catalog rng")))
}

fn load_semigroup(arg: &str) -> Result<FiniteSemigroup> {
    if Path::new(arg).is_file() {
        return format::parse_semigroup(&read_file(arg)?);
    }
    catalog::semigroup_by_name(strip_ext(arg, ".sg"))
        .ok_or_else(|| Error::InvalidInput(format!("{arg}: no such file or catalog semigroup")))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidInput(format!("not an integer: {t:?}")))
        })
        .collect()
}

fn parse_element(rng: &FiniteRng, s: &str) -> Result<RngElement> {
    let coeffs: Vec<i64> = parse_list(s)?;
    if coeffs.len() != rng.rank() {
        return Err(Error::InvalidInput(format!(
            "element {s:?} has {} coefficients, rank is {}",
            coeffs.len(),
            rng.rank()
        )));
    }
    rng.element(&coeffs)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn limits(cli: &Cli) -> SearchLimits {
    SearchLimits {
        enumeration_cap: cli.enum_cap,
        subset_budget: cli.subset_cap,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let mut out = String::new();
    match &cli.command {
        Command::Verify(a) => {
            let r = load_rng(&a.rng)?;
            let factors: Vec<String> = r.invariant_factors().iter().map(|d| d.to_string()).collect();
            writeln!(out, "rng {}", r.name()).unwrap();
            writeln!(out, "factors {}", factors.join(" ")).unwrap();
            writeln!(out, "order {}", r.order()).unwrap();
            writeln!(out, "bilinear and associative: yes").unwrap();
            writeln!(out, "commutative: {}", yes_no(r.is_commutative())).unwrap();
            writeln!(out, "irng: {}", yes_no(ideals::is_irng(&r))).unwrap();
            Ok(Outcome::ok(out))
        }
        Command::Ideal { rng, zs, left } => {
            let r = load_rng(&rng.rng)?;
            let zs: Vec<RngElement> = zs.iter().map(|z| parse_element(&r, z)).collect::<Result<_>>()?;
            let ideal = if *left {
                ideals::left_ideal_generated_by(&r, &zs)?
            } else {
                ideals::ideal_generated_by(&r, &zs)?
            };
            writeln!(out, "rng {} order {}", r.name(), r.order()).unwrap();
            writeln!(out, "kind {}", if *left { "left" } else { "two-sided" }).unwrap();
            writeln!(out, "order {}", ideal.order()).unwrap();
            for g in ideal.subgroup().generators() {
                writeln!(out, "generator {g}").unwrap();
            }
            writeln!(out, "closed: {}", yes_no(ideal.is_closed())).unwrap();
            writeln!(out, "equals R: {}", yes_no(ideal.is_full())).unwrap();
            Ok(Outcome::verdict(out, ideal.is_closed()))
        }
        Command::Weight(a) => {
            let r = load_rng(&a.rng)?;
            let w = ideals::weight_exact(&r, limits(cli))?;
            writeln!(out, "{}", w.result).unwrap();
            if let Some(wit) = &w.witness {
                for z in wit {
                    writeln!(out, "witness {z}").unwrap();
                }
            }
            writeln!(out, "subsets tested {}", w.subsets_tested).unwrap();
            Ok(Outcome::ok(out))
        }
        Command::Unit { rng, xs } => {
            let r = load_rng(&rng.rng)?;
            let xs: Vec<RngElement> = if xs.is_empty() {
                (0..r.rank()).map(|t| r.basis(t)).collect()
            } else {
                xs.iter().map(|x| parse_element(&r, x)).collect::<Result<_>>()?
            };
            let w = constructions::find_unit_commutative(&r, &xs)?;
            write!(out, "{w}").unwrap();
            writeln!(out, "unit verified: yes").unwrap();
            Ok(Outcome::ok(out))
        }
        Command::Cor6(a) => {
            let r = load_rng(&a.rng)?;
            let (_, report) = constructions::single_generator_finite_irng(&r, cli.enum_cap)?;
            write!(out, "{report}").unwrap();
            Ok(Outcome::verdict(out, report.verified()))
        }
        Command::Thm3Free { n, sides, budget } => {
            let sides = parse_sides(sides)?;
            let report = free_idem::free_pipeline(*n, &sides, *budget)?;
            write!(out, "{report}").unwrap();
            Ok(Outcome::verdict(out, report.all_verified()))
        }
        Command::X0 { sg } => {
            let s = load_semigroup(&sg.semigroup)?;
            let x = semigroup_subset(&s, sg)?;
            let res = semigroups::lemma9_extract(&s, &x)?;
            writeln!(out, "semigroup {} order {}", s.name(), s.order()).unwrap();
            write!(out, "{res}").unwrap();
            writeln!(out, "S = S X0 S: yes").unwrap();
            Ok(Outcome::ok(out))
        }
        Command::Cor8 { sg, m } => {
            if *m < 2 {
                return Err(Error::InvalidInput("modulus must be at least 2".into()));
            }
            let s = load_semigroup(&sg.semigroup)?;
            let x = semigroup_subset(&s, sg)?;
            let (_, report) = semigroups::corollary8_generator(*m, &s, &x)?;
            write!(out, "{report}").unwrap();
            Ok(Outcome::verdict(out, report.verified()))
        }
        Command::El { cmd } => el(cli, cmd),
        Command::Catalog { cmd } => catalog_cmd(cmd),
    }
}

fn semigroup_subset(s: &FiniteSemigroup, a: &SemigroupArg) -> Result<Vec<usize>> {
    match &a.x {
        Some(x) => parse_list(x),
        None => Ok((0..s.order()).collect()),
    }
}

fn el(cli: &Cli, cmd: &ElCommand) -> Result<Outcome> {
    let mut out = String::new();
    match cmd {
        ElCommand::Generate(a) => {
            let r = load_rng(&a.rng.rng)?;
            let ring = ElRing::new(&r, a.n)?;
            let g = elgroup::generate_group(&ring, cli.group_cap)?;
            writeln!(out, "rng {} n = {}", r.name(), a.n).unwrap();
            writeln!(out, "|EL_n(R)| = {}", g.order()).unwrap();
            writeln!(out, "perfect: {}", yes_no(elgroup::is_perfect(&g)?)).unwrap();
            Ok(Outcome::ok(out))
        }
        ElCommand::Weight(a) => {
            let r = load_rng(&a.rng.rng)?;
            let ring = ElRing::new(&r, a.n)?;
            let g = elgroup::generate_group(&ring, cli.group_cap)?;
            let w = elgroup::group_weight(&g, cli.subset_cap)?;
            writeln!(out, "rng {} n = {}", r.name(), a.n).unwrap();
            writeln!(out, "|EL_n(R)| = {}", g.order()).unwrap();
            writeln!(out, "abelianization lower bound {}", w.lower_bound).unwrap();
            writeln!(out, "{}", w.result).unwrap();
            for x in w.witness.iter().flatten() {
                writeln!(out, "witness {x}").unwrap();
            }
            Ok(Outcome::ok(out))
        }
        ElCommand::Thm11(a) => {
            let r = load_rng(&a.rng.rng)?;
            let rep = elgroup::thm11_upper_bound_witness(&r, a.n, limits(cli), cli.group_cap, cli.subset_cap)?;
            write!(out, "{rep}").unwrap();
            Ok(Outcome::verdict(out, rep.all_ok()))
        }
        ElCommand::Steinberg { el, exhaustive, samples } => {
            let r = load_rng(&el.rng.rng)?;
            let ring = ElRing::new(&r, el.n)?;
            let rep = elgroup::steinberg_check(&ring, *exhaustive, *samples, cli.seed);
            write!(out, "{rep}").unwrap();
            Ok(Outcome::verdict(out, rep.all_verified()))
        }
    }
}

fn catalog_cmd(cmd: &CatalogCommand) -> Result<Outcome> {
    let mut out = String::new();
    match cmd {
        CatalogCommand::List => {
            for e in catalog::rng_entries() {
                let r = (e.build)();
                let w = e.weight.map_or("?".to_string(), |w| w.to_string());
                writeln!(
                    out,
                    "rng {} order {} irng {} unit {} commutative {} weight {}",
                    e.name,
                    r.order(),
                    yes_no(e.irng),
                    yes_no(e.unit),
                    yes_no(e.commutative),
                    w
                )
                .unwrap();
            }
            for e in catalog::semigroup_entries() {
                let s = (e.build)();
                writeln!(
                    out,
                    "semigroup {} order {} band {} idempotent {} group {}",
                    e.name,
                    s.order(),
                    yes_no(e.band),
                    yes_no(e.idempotent),
                    yes_no(e.group)
                )
                .unwrap();
            }
            Ok(Outcome::ok(out))
        }
        CatalogCommand::Emit { name, out: path } => {
            let text = if let Some(r) = catalog::rng_by_name(name) {
                format::write_rng(&r)
            } else if let Some(s) = catalog::semigroup_by_name(name) {
                format::write_semigroup(&s)
            } else {
                return Err(Error::InvalidInput(format!("no catalog entry {name:?}")));
            };
            match path {
                Some(p) => {
                    std::fs::write(p, &text).map_err(|e| Error::InvalidInput(format!("{p}: {e}")))?;
                    writeln!(out, "wrote {p}").unwrap();
                    Ok(Outcome::ok(out))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irng(args: &str) -> Outcome {
        run(std::iter::once("irng").chain(args.split_whitespace()))
    }

    #[test]
    fn documented_examples() {
        let o = irng("weight --rng remark7.rng");
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(o.stdout.lines().next(), Some("exact 1"));

        let o = irng("thm3-free --n 2 --sides LL");
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("z = x1 + x2 - x1.x2\n"));
        assert!(o.stdout.contains("certificates: 2/2 verified\n"));

        let o = irng("el steinberg --rng z2.rng --n 3 --exhaustive");
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("relations verified: 3/3\n"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(irng("weight").code, 2);
        assert_eq!(irng("weight --rng nosuch").code, 2);
        assert_eq!(irng("weight --rng z2 --bogus").code, 2);
        assert_eq!(irng("thm3-free --n 2 --sides LX").code, 2);
        assert_eq!(irng("ideal --rng z4 --z 1,2").code, 2);
        assert_eq!(irng("--help").code, 0);
    }

    #[test]
    fn failed_hypotheses_exit_1() {
        assert_eq!(irng("unit --rng m2z2").code, 1);
        assert_eq!(irng("cor6 --rng cyclic-4-2").code, 1);
    }

    #[test]
    fn element_lists() {
        assert_eq!(parse_list::<i64>("[1 0 2]").unwrap(), vec![1, 0, 2]);
        assert_eq!(parse_list::<i64>("1,0,2").unwrap(), vec![1, 0, 2]);
        assert!(parse_list::<i64>("1,x").is_err());
    }
}
