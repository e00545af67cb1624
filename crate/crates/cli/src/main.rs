//! Command-line front end: counting, enumeration, conversion, series
//! expansion, and formula-vs-oracle verification. JSON goes to stdout,
//! diagnostics to stderr. Exit codes: 0 success, 1 validation failure,
//! 2 usage error (from clap).

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use fuss_schroder::bijections::{
    forest_to_sequence, forest_type, path_to_sequence, sequence_to_forest, sequence_to_path,
    HeightSequence, PlaneForest, Tree,
};
use fuss_schroder::formulas::count_class;
use fuss_schroder::paths::{count_by_type_bruteforce, enumerate_paths};
use fuss_schroder::series::{solve_system, TruncatedSeries};
use fuss_schroder::verify::{
    check_cardinality_dependence, check_lif, check_oracle_vs_formulas, check_reductions,
    check_roundtrips, check_series_vs_formulas, Mismatch,
};
use fuss_schroder::{Bounds, FamilySpec, LatticePath, Partition, SizeClass};

#[derive(Parser)]
#[command(
    name = "fuss-schroder",
    version,
    about = "Exact enumeration of Fuss-Schroder lattice paths by type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count paths by type, as a census or a single number
    Count(CountArgs),
    /// List all paths of a family in D < E < N lexicographic order
    Enumerate(EnumerateArgs),
    /// Convert between path, height sequence, and plane forest
    Convert(ConvertArgs),
    /// Dump the truncated generating series A, B, or A*B
    Series(SeriesArgs),
    /// Cross-check formulas, series, and bijections against brute force
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// Slope parameter k >= 1
    #[arg(long)]
    k: u32,
    /// Number of East steps
    #[arg(long)]
    n: usize,
    /// Residue set S as a comma list, e.g. --set 1,2
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "r",
        conflicts_with = "r"
    )]
    set: Option<Vec<u32>>,
    /// Single residue r; shorthand for --set r
    #[arg(long)]
    r: Option<u32>,
}

impl FamilyArgs {
    fn residues(&self) -> Vec<u32> {
        match (&self.set, self.r) {
            (Some(s), _) => s.clone(),
            (None, Some(r)) => vec![r],
            (None, None) => unreachable!("clap enforces one of --set/--r"),
        }
    }

    fn spec(&self) -> Result<FamilySpec, String> {
        FamilySpec::new(self.n, self.k, self.residues()).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct BoundArgs {
    /// Largest n accepted for brute-force enumeration
    #[arg(long, env = "FS_MAX_BRUTE_N", default_value_t = 8)]
    max_brute_n: usize,
    /// Largest k accepted for brute-force enumeration
    #[arg(long, env = "FS_MAX_BRUTE_K", default_value_t = 4)]
    max_brute_k: u32,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_n: self.max_brute_n,
            max_k: self.max_brute_k,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Small,
    Large,
    Diag,
}

impl ClassArg {
    fn class(self) -> SizeClass {
        match self {
            ClassArg::Small => SizeClass::Small,
            ClassArg::Large => SizeClass::Large,
            ClassArg::Diag => SizeClass::LargeEndingInDiagonal,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Method {
    Formula,
    Bruteforce,
    Series,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Size class to count
    #[arg(long, value_enum)]
    class: ClassArg,
    /// Single partition to count, e.g. --type [2,1]; omit for the census
    #[arg(long = "type")]
    type_: Option<String>,
    /// How to compute; omitted: formula, cross-checked against brute
    /// force when within bounds
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[command(flatten)]
    bounds: BoundArgs,
    /// Largest series truncation order accepted
    #[arg(long, env = "FS_MAX_SERIES_N", default_value_t = 8)]
    max_series_n: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Steps,
    Json,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum, default_value = "large")]
    class: ClassArg,
    #[arg(long, value_enum, default_value = "steps")]
    format: Format,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum Repr {
    Path,
    Sequence,
    Forest,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Which representation --input holds
    #[arg(long, value_enum)]
    from: Repr,
    /// Step string, integer array, or nested-array forest
    #[arg(long)]
    input: String,
}

#[derive(Copy, Clone, ValueEnum)]
#[allow(clippy::upper_case_acronyms)]
enum Which {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "AB", alias = "ab")]
    AB,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    k: u32,
    /// Cardinality of the residue set
    #[arg(long)]
    d: u32,
    /// Truncation order
    #[arg(long = "N")]
    n_max: usize,
    #[arg(long, value_enum)]
    which: Which,
    /// Largest truncation order accepted
    #[arg(long, env = "FS_MAX_SERIES_N", default_value_t = 8)]
    max_series_n: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    max_k: u32,
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    /// Subset of check families to run (default: all)
    #[arg(long, value_delimiter = ',', value_parser = ["oracle", "reductions", "lif", "series", "roundtrip", "cardinality"])]
    families: Option<Vec<String>>,
    #[command(flatten)]
    bounds: BoundArgs,
    /// Perturb every formula value by one (negative-path test hook)
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(args) => cmd_count(&args),
        Command::Enumerate(args) => cmd_enumerate(&args),
        Command::Convert(args) => cmd_convert(&args),
        Command::Series(args) => cmd_series(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

/// Parses "[2,1]" or "[]" into a partition.
fn parse_partition(s: &str) -> Result<Partition, String> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("partition must look like [2,1] or [], got {s:?}"))?;
    let mut parts = Vec::new();
    for piece in inner.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let p: i64 = piece
            .parse()
            .map_err(|_| format!("bad partition part {piece:?}"))?;
        parts.push(p);
    }
    Partition::new(parts).map_err(|e| e.to_string())
}

/// Census rendered as a JSON object, zero entries omitted, keys in the
/// canonical weight-then-lexicographic order.
fn census_json<'a, I>(entries: I) -> String
where
    I: IntoIterator<Item = (&'a Partition, &'a BigUint)>,
{
    let body: Vec<String> = entries
        .into_iter()
        .filter(|(_, v)| *v != &BigUint::ZERO)
        .map(|(p, v)| format!("\"{p}\":{v}"))
        .collect();
    format!("{{{}}}", body.join(","))
}

/// The series whose degree-n coefficients count the given class: A for
/// small, B for diagonal-ending, A*B for large. When k is not in S the
/// large census equals the small one and the diagonal one is empty.
fn class_series(
    k: u32,
    d: u32,
    contains_k: bool,
    n: usize,
    cls: SizeClass,
) -> Result<TruncatedSeries, String> {
    let (a, b, _) = solve_system(k, d, n);
    match (cls, contains_k) {
        (SizeClass::Small, _) | (SizeClass::Large, false) => Ok(a),
        (SizeClass::Large, true) => a.mul(&b).map_err(|e| e.to_string()),
        (SizeClass::LargeEndingInDiagonal, true) => Ok(b),
        (SizeClass::LargeEndingInDiagonal, false) => Ok(TruncatedSeries::zero(n)),
    }
}

fn cmd_count(args: &CountArgs) -> Result<(), String> {
    let family = args.family.spec()?;
    let (k, n) = (family.k(), family.n());
    let s: BTreeSet<u32> = family.residues().clone();
    let cls = args.class.class();
    let bounds = args.bounds.bounds();
    let lambdas = match &args.type_ {
        Some(t) => vec![parse_partition(t)?],
        None => Partition::all_up_to_weight(n as u64),
    };

    let mut census: Vec<(Partition, BigUint)> = Vec::new();
    match args.method {
        Some(Method::Bruteforce) => {
            let counted =
                count_by_type_bruteforce(&family, cls, &bounds).map_err(|e| e.to_string())?;
            for lambda in lambdas {
                let v = counted.get(&lambda);
                census.push((lambda, v));
            }
        }
        Some(Method::Series) => {
            if n > args.max_series_n {
                return Err(format!(
                    "series truncation order {n} exceeds bound {}",
                    args.max_series_n
                ));
            }
            let series = class_series(k, family.d(), family.contains_k(), n, cls)?;
            for lambda in lambdas {
                let v = series.get(n, &lambda).map_err(|e| e.to_string())?;
                let v: BigUint = v.try_into().expect("counts are nonnegative");
                census.push((lambda, v));
            }
        }
        Some(Method::Formula) | None => {
            let crosscheck = if args.method.is_none() && n <= bounds.max_n && k <= bounds.max_k {
                Some(count_by_type_bruteforce(&family, cls, &bounds).map_err(|e| e.to_string())?)
            } else {
                None
            };
            for lambda in lambdas {
                let v = count_class(k, &s, n as u64, cls, &lambda).value;
                if let Some(oracle) = &crosscheck {
                    let brute = oracle.get(&lambda);
                    if brute != v {
                        return Err(format!(
                            "formula disagrees with brute force at lambda={lambda}: formula={v} bruteforce={brute}"
                        ));
                    }
                }
                census.push((lambda, v));
            }
        }
    }

    if args.type_.is_some() {
        println!("{}", census[0].1);
    } else {
        println!("{}", census_json(census.iter().map(|(p, v)| (p, v))));
    }
    Ok(())
}

fn classes_json(path: &LatticePath) -> serde_json::Value {
    serde_json::Value::Array(
        path.classify()
            .iter()
            .map(|c| serde_json::Value::String(c.id().to_string()))
            .collect(),
    )
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<(), String> {
    let family = args.family.spec()?;
    let paths = enumerate_paths(&family, args.class.class(), &args.bounds.bounds())
        .map_err(|e| e.to_string())?;
    for path in paths {
        match args.format {
            Format::Steps => println!("{path}"),
            Format::Json => {
                let mut record = serde_json::Map::new();
                record.insert("steps".into(), path.to_string().into());
                record.insert("type".into(), path.path_type().to_string().into());
                record.insert("classes".into(), classes_json(&path));
                println!("{}", serde_json::Value::Object(record));
            }
        }
    }
    Ok(())
}

fn tree_to_json(tree: &Tree) -> serde_json::Value {
    serde_json::Value::Array(tree.children().iter().map(tree_to_json).collect())
}

fn tree_from_json(value: &serde_json::Value) -> Result<Tree, String> {
    let children = value
        .as_array()
        .ok_or_else(|| format!("forest nodes must be arrays, got {value}"))?;
    Ok(Tree::new(
        children
            .iter()
            .map(tree_from_json)
            .collect::<Result<_, _>>()?,
    ))
}

fn cmd_convert(args: &ConvertArgs) -> Result<(), String> {
    let family = args.family.spec()?;

    // normalize to a path; the other two representations follow from it
    let path = match args.from {
        Repr::Path => LatticePath::parse(&args.input, family.clone()).map_err(|e| e.to_string())?,
        Repr::Sequence => {
            let values: Vec<u64> =
                serde_json::from_str(&args.input).map_err(|e| format!("bad sequence: {e}"))?;
            let seq = HeightSequence::new(values, family.clone()).map_err(|e| e.to_string())?;
            sequence_to_path(&seq)
        }
        Repr::Forest => {
            let value: serde_json::Value =
                serde_json::from_str(&args.input).map_err(|e| format!("bad forest: {e}"))?;
            let trees = value
                .as_array()
                .ok_or_else(|| format!("forest must be an array of trees, got {value}"))?
                .iter()
                .map(tree_from_json)
                .collect::<Result<_, _>>()?;
            let forest = PlaneForest::new(trees);
            let seq = forest_to_sequence(&forest, &family).map_err(|e| e.to_string())?;
            sequence_to_path(&seq)
        }
    };

    let seq = path_to_sequence(&path);
    let forest = sequence_to_forest(&seq);
    let ftype = forest_type(&forest, &family).map_err(|e| e.to_string())?;
    debug_assert_eq!(ftype, path.path_type());

    let mut doc = serde_json::Map::new();
    doc.insert("path".into(), path.to_string().into());
    doc.insert("sequence".into(), serde_json::json!(seq.values()));
    doc.insert(
        "forest".into(),
        serde_json::Value::Array(forest.trees().iter().map(tree_to_json).collect()),
    );
    doc.insert("type".into(), ftype.to_string().into());
    doc.insert("classes".into(), classes_json(&path));
    println!("{}", serde_json::Value::Object(doc));
    Ok(())
}

fn cmd_series(args: &SeriesArgs) -> Result<(), String> {
    if args.d == 0 || args.d > args.k {
        return Err(format!("need 1 <= d <= k, got d={} k={}", args.d, args.k));
    }
    if args.n_max > args.max_series_n {
        return Err(format!(
            "truncation order {} exceeds bound {}",
            args.n_max, args.max_series_n
        ));
    }
    let (a, b, _) = solve_system(args.k, args.d, args.n_max);
    let series = match args.which {
        Which::A => a,
        Which::B => b,
        Which::AB => a.mul(&b).map_err(|e| e.to_string())?,
    };
    let mut degrees = Vec::new();
    for n in 0..=args.n_max {
        let coeff = series.coefficient(n).map_err(|e| e.to_string())?;
        let mut map = serde_json::Map::new();
        for (lambda, c) in coeff.terms() {
            map.insert(lambda.to_string(), c.to_string().into());
        }
        degrees.push(serde_json::Value::Object(map));
    }
    println!("{}", serde_json::Value::Array(degrees));
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), String> {
    let bounds = args.bounds.bounds();
    let run = |name: &str| {
        args.families
            .as_ref()
            .is_none_or(|fs| fs.iter().any(|f| f == name))
    };
    let mut all: Vec<(&str, Vec<Mismatch>)> = Vec::new();
    if run("oracle") {
        let found = check_oracle_vs_formulas(args.max_k, args.max_n, &bounds, args.inject_fault)
            .map_err(|e| e.to_string())?;
        all.push(("oracle", found));
    }
    if run("reductions") {
        all.push((
            "reductions",
            check_reductions(args.max_k.max(1), args.max_n),
        ));
    }
    if run("lif") {
        all.push(("lif", check_lif(args.max_k, args.max_n)));
    }
    if run("series") {
        all.push(("series", check_series_vs_formulas(args.max_k, args.max_n)));
    }
    if run("roundtrip") {
        let found = check_roundtrips(args.max_k, args.max_n, &bounds).map_err(|e| e.to_string())?;
        all.push(("roundtrip", found));
    }
    if run("cardinality") {
        let mut found = Vec::new();
        for k in 1..=args.max_k {
            found.extend(
                check_cardinality_dependence(k, args.max_n, &bounds).map_err(|e| e.to_string())?,
            );
        }
        all.push(("cardinality", found));
    }

    let mut failed = false;
    for (name, mismatches) in &all {
        if mismatches.is_empty() {
            println!("PASS {name}");
        } else {
            failed = true;
            println!("FAIL {name} ({} mismatches)", mismatches.len());
            for m in mismatches {
                eprintln!("  {m}");
            }
        }
    }
    if failed {
        return Err("verification found mismatches".into());
    }
    Ok(())
}
