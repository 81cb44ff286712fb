//! The `matfp` command line.
//!
//! Exit codes: 0 on success, 2 on invalid input or flags, 3 when a theorem
//! check fails (a witness is printed or written to disk).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use matfp_core::coalgebra::{coproduct, multisection, q_primitive};
use matfp_core::enumerate::{enumerate_up_to, Catalog, RankNullityTable};
use matfp_core::factorization::{factor_irreducible, is_irreducible, primary_factorization};
use matfp_core::format::{parse_matroid, parse_set, write_matroid, MatroidFormat};
use matfp_core::free_product::multi_free_product;
use matfp_core::verify::{run_suite, Suite, VerifyConfig};
use matfp_core::{Matroid, MatroidError};

#[derive(Parser, Debug)]
#[command(name = "matfp", version, about = "Free products and factorization of small matroids")]
struct Cli {
    /// Serialization used for matroids in the output.
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Full)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Compact,
    Full,
}

impl From<FormatArg> for MatroidFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Compact => MatroidFormat::Compact,
            FormatArg::Full => MatroidFormat::Full,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free product of the given matroids, left to right.
    Freeprod {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Dual matroid.
    Dual { file: PathBuf },
    /// The minor `(M|R)/C`, relabeled to 0..|R|-|C|.
    Minor {
        file: PathBuf,
        /// Elements kept; defaults to the whole ground set.
        #[arg(long)]
        restrict: Option<String>,
        /// Elements contracted; must lie inside the restriction.
        #[arg(long, default_value = "-")]
        contract: String,
    },
    /// Factorization into irreducibles (default) or the primary factorization.
    Factor {
        file: PathBuf,
        #[arg(long, conflicts_with = "irreducible")]
        primary: bool,
        #[arg(long)]
        irreducible: bool,
    },
    /// Prints IRREDUCIBLE or REDUCIBLE.
    Irreducible { file: PathBuf },
    /// Enumerates isomorphism classes and writes the catalog.
    Enumerate {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Class counts by size and by (rank, nullity).
    Tables {
        #[arg(long)]
        max_n: usize,
        /// Reads classes from a catalog file instead of enumerating.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Runs a property sweep.
    Verify(VerifyArgs),
    /// Coalgebra queries.
    Coalg {
        #[arg(long, value_enum)]
        op: CoalgOp,
        /// Matroid files: one for coproduct and q; L then M_1 .. M_k for section.
        #[arg(long, num_args = 1.., required = true)]
        args: Vec<PathBuf>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest class size in the catalog the sweep draws from.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Directory for counterexample files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CoalgOp {
    Coproduct,
    Section,
    Q,
}

/// Errors that exit with status 3.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            let theorem = e.downcast_ref::<CheckFailed>().is_some()
                || e.chain().any(|c| {
                    matches!(
                        c.downcast_ref::<MatroidError>(),
                        Some(MatroidError::TheoremViolation(_))
                    )
                });
            if theorem {
                3
            } else {
                2
            }
        }
    }
}

fn read_matroid(path: &Path) -> anyhow::Result<Matroid> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_matroid(&text).map_err(|e| match e {
        MatroidError::Parse {
            line,
            column,
            message,
        } => anyhow!("{}:{line}:{column}: {message}", path.display()),
        other => anyhow!("{}: {other}", path.display()),
    })
}

fn read_catalog(path: &Path) -> anyhow::Result<Catalog> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Catalog::parse(&text).with_context(|| format!("{}", path.display()))
}

fn load_catalog(path: Option<&PathBuf>, max_n: usize) -> anyhow::Result<Catalog> {
    match path {
        Some(p) => {
            let cat = read_catalog(p)?;
            if cat.max_n < max_n {
                bail!("{} stops at {} elements, {max_n} needed", p.display(), cat.max_n);
            }
            Ok(cat)
        }
        None => Ok(enumerate_up_to(max_n)?),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let format: MatroidFormat = cli.format.into();
    match &cli.command {
        Command::Freeprod { files } => {
            let ms = files.iter().map(|f| read_matroid(f)).collect::<anyhow::Result<Vec<_>>>()?;
            write!(out, "{}", write_matroid(&multi_free_product(&ms)?, format))?;
        }
        Command::Dual { file } => {
            write!(out, "{}", write_matroid(&read_matroid(file)?.dual(), format))?;
        }
        Command::Minor {
            file,
            restrict,
            contract,
        } => {
            let m = read_matroid(file)?;
            let keep = match restrict {
                Some(s) => parse_set(s, m.n()).context("--restrict")?,
                None => m.ground(),
            };
            let con = parse_set(contract, m.n()).context("--contract")?;
            write!(out, "{}", write_matroid(&m.minor(con, keep)?, format))?;
        }
        Command::Factor {
            file,
            primary,
            irreducible: _,
        } => {
            let m = read_matroid(file)?;
            if m.is_empty() {
                bail!("the empty matroid has no factors");
            }
            let label = if is_irreducible(&m)? { "IRREDUCIBLE" } else { "REDUCIBLE" };
            let f = if *primary {
                primary_factorization(&m)?
            } else {
                factor_irreducible(&m)?
            };
            if f.reconstruct()? != m {
                return Err(CheckFailed(format!("factors do not multiply back to\n{m}")).into());
            }
            writeln!(out, "{label}")?;
            write!(out, "{}", f.write(format))?;
        }
        Command::Irreducible { file } => {
            let m = read_matroid(file)?;
            if m.is_empty() {
                bail!("irreducibility is not defined for the empty matroid");
            }
            writeln!(out, "{}", if is_irreducible(&m)? { "IRREDUCIBLE" } else { "REDUCIBLE" })?;
        }
        Command::Enumerate { max_n, out: path } => {
            let cat = enumerate_up_to(*max_n)?;
            fs::write(path, cat.write()).with_context(|| format!("cannot write {}", path.display()))?;
            write_table1(&cat, out)?;
        }
        Command::Tables { max_n, catalog } => {
            let mut cat = load_catalog(catalog.as_ref(), *max_n)?;
            cat.classes.retain(|k, _| k.n() <= *max_n);
            cat.max_n = *max_n;
            write_table1(&cat, out)?;
            let t = cat.counts_by_rank_nullity();
            write_grid("TABLE2 matroids", &t, &t.matroids, out)?;
            write_grid("TABLE2 irreducibles", &t, &t.irreducibles, out)?;
        }
        Command::Verify(args) => return verify(args, format, out),
        Command::Coalg { op, args, catalog } => coalg(*op, args, catalog.as_ref(), out)?,
    }
    Ok(0)
}

fn write_table1(cat: &Catalog, out: &mut dyn Write) -> anyhow::Result<()> {
    let (m, i) = cat.counts_by_size();
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let sizes: Vec<u64> = (0..=cat.max_n as u64).collect();
    writeln!(out, "TABLE1 max_n={}", cat.max_n)?;
    writeln!(out, "n {}", join(&sizes))?;
    writeln!(out, "m {}", join(&m))?;
    writeln!(out, "i {}", join(&i))?;
    Ok(())
}

/// Rows are ranks, columns nullities; cells with `r + k > max_n` print `.`.
fn write_grid(title: &str, t: &RankNullityTable, grid: &[Vec<u64>], out: &mut dyn Write) -> anyhow::Result<()> {
    writeln!(out, "{title}")?;
    let header: Vec<String> = (0..=t.max_n).map(|k| k.to_string()).collect();
    writeln!(out, "r\\k {}", header.join(" "))?;
    for (r, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(k, x)| if r + k <= t.max_n { x.to_string() } else { ".".into() })
            .collect();
        writeln!(out, "{r} {}", cells.join(" "))?;
    }
    Ok(())
}

fn verify(args: &VerifyArgs, format: MatroidFormat, out: &mut dyn Write) -> anyhow::Result<i32> {
    let suite: Suite = args.suite.parse().map_err(|e: String| anyhow!(e))?;
    let cat = load_catalog(args.catalog.as_ref(), args.max_n)?;
    let cfg = VerifyConfig::with_samples(args.samples, args.seed);
    let reports = run_suite(suite, &cat, &cfg)?;
    let mut failed = false;
    for report in &reports {
        writeln!(out, "{report}")?;
        if let Some(c) = &report.failure {
            failed = true;
            fs::create_dir_all(&args.out_dir)
                .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
            for (label, m) in &c.matroids {
                let path = args
                    .out_dir
                    .join(format!("counterexample-{suite}-{}-{label}.mat", report.property));
                fs::write(&path, write_matroid(m, format))
                    .with_context(|| format!("cannot write {}", path.display()))?;
                writeln!(out, "  witness {label}: {}", path.display())?;
            }
        }
    }
    Ok(if failed { 3 } else { 0 })
}

fn coalg(op: CoalgOp, files: &[PathBuf], catalog: Option<&PathBuf>, out: &mut dyn Write) -> anyhow::Result<()> {
    let ms = files.iter().map(|f| read_matroid(f)).collect::<anyhow::Result<Vec<_>>>()?;
    match op {
        CoalgOp::Coproduct => {
            let [m] = ms.as_slice() else {
                bail!("coproduct takes exactly one matroid");
            };
            writeln!(out, "{}", coproduct(m))?;
        }
        CoalgOp::Section => {
            let Some((l, parts)) = ms.split_first().filter(|(_, p)| !p.is_empty()) else {
                bail!("section takes L followed by at least one matroid");
            };
            writeln!(out, "{}", multisection(l, parts))?;
        }
        CoalgOp::Q => {
            let [m] = ms.as_slice() else {
                bail!("q takes exactly one matroid");
            };
            let cat = load_catalog(catalog, m.n())?;
            writeln!(out, "{}", q_primitive(m, &cat)?)?;
        }
    }
    Ok(())
}
