//! Command-line front end: JSON in, verdicts out.
//!
//! Exit codes: 0 on success, 1 on domain errors (unparseable input,
//! non-orthogonal blocks, windows out of range), 2 when an internal
//! invariant breaks — most importantly when the determinant criterion and
//! the witness solver disagree.

use std::io::Read;

use clap::{Args, Parser, Subcommand};

use crate::clifford::{Algebra, Multivector};
use crate::error::{Error, Result};
use crate::finitary::{FinitaryInput, FinitaryOrthogonal};
use crate::innerness;
use crate::linalg::Matrix;
use crate::selftest;
use crate::MAX_GENERATORS;

#[derive(Parser)]
#[command(
    name = "cliffbog",
    version,
    about = "Exact innerness decisions for Bogolyubov automorphisms of Clifford algebras over Q(i)"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether a transformation's block is orthogonal (BᵀB = I)
    CheckOrthogonal(MapArgs),
    /// Decide innerness by the determinant criterion and the witness solver
    Decide(MapArgs),
    /// Solve for a conjugating witness and print it
    Witness(MapArgs),
    /// Print a basis of the centralizer of the first k generators in Cl_n
    Centralizer(CentralizerArgs),
    /// Multiply multivector expressions; factors are separated by a `*`
    /// with whitespace on both sides, e.g. "e0e1 * e1e2"
    Mul(MulArgs),
    /// Run the deterministic self-test suites and print a summary table
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Transformation JSON {"block": [[...]], "tail": "+1"|"-1"}: a file
    /// path, `-` for stdin, or an inline JSON object
    #[arg(long)]
    input: String,
    /// Truncation size (default: block size rounded up to even, plus 2)
    #[arg(long)]
    n: Option<usize>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Reject inputs needing more generators than this
    #[arg(long, default_value_t = MAX_GENERATORS)]
    max_generators: usize,
}

#[derive(Args)]
struct CentralizerArgs {
    /// Number of leading generators spanning U (must be even)
    k: usize,
    /// Ambient truncation size
    #[arg(long)]
    n: usize,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = MAX_GENERATORS)]
    max_generators: usize,
}

#[derive(Args)]
struct MulArgs {
    /// Expression like "e0e1 * e1e2"; multivector grammar per the README
    expr: String,
    /// Truncation size (default: inferred from the largest index used)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = MAX_GENERATORS)]
    max_generators: usize,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    json: bool,
}

/// Parse argv, run, and return the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e);
            match e {
                Error::Internal(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::CheckOrthogonal(args) => check_orthogonal(&args),
        Command::Decide(args) => decide(&args),
        Command::Witness(args) => witness(&args),
        Command::Centralizer(args) => centralizer(&args),
        Command::Mul(args) => mul(&args),
        Command::Selftest(args) => selftest_cmd(&args),
    }
}

fn read_input(input: &str) -> Result<String> {
    if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else if input.trim_start().starts_with('{') {
        Ok(input.to_string())
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| Error::Parse(format!("cannot read `{input}`: {e}")))
    }
}

fn parse_spec(input: &str) -> Result<FinitaryInput> {
    let text = read_input(input)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad transformation JSON: {e}")))
}

fn cap_check(n: usize, max_generators: usize) -> Result<()> {
    let cap = max_generators.min(MAX_GENERATORS);
    if n > cap {
        return Err(Error::GeneratorCap { n, max: cap });
    }
    Ok(())
}

/// Default truncation: block size rounded up to even, plus two tail
/// coordinates so the tail action is visible in the window.
fn default_truncation(m: usize) -> usize {
    m + m % 2 + 2
}

fn check_orthogonal(args: &MapArgs) -> Result<i32> {
    let spec = parse_spec(&args.input)?;
    let map =
        FinitaryOrthogonal::new_unvalidated(Matrix::from_rows(spec.block)?, spec.tail)?;
    cap_check(map.m(), args.max_generators)?;
    let ok = map.is_orthogonal();
    if args.json {
        println!("{}", serde_json::json!({ "orthogonal": ok }));
    } else {
        println!("orthogonal: {ok}");
    }
    Ok(0)
}

fn resolve_map(args: &MapArgs) -> Result<(FinitaryOrthogonal, usize)> {
    let map = parse_spec(&args.input)?.build()?;
    let n = args.n.unwrap_or_else(|| default_truncation(map.m()));
    cap_check(n.max(map.m()), args.max_generators)?;
    Ok((map, n))
}

fn decide(args: &MapArgs) -> Result<i32> {
    let (map, n) = resolve_map(args)?;
    let verdict = innerness::decide(&map, n)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string(&verdict).map_err(|e| Error::Internal(e.to_string()))?
        );
    } else {
        println!("inner: {}", verdict.inner);
        println!("branch: {}", verdict.branch.as_str());
        match verdict.k {
            Some(k) => println!("k: {k}"),
            None => println!("k: -"),
        }
        match &verdict.quotient_det {
            Some(d) => println!("quotient det: {d}"),
            None => println!("quotient det: -"),
        }
        match &verdict.witness {
            Some(w) => println!("witness: {w}"),
            None => println!("witness: none"),
        }
        println!("routes agree: {}", verdict.routes_agree);
    }
    Ok(if verdict.routes_agree { 0 } else { 2 })
}

fn witness(args: &MapArgs) -> Result<i32> {
    let (map, n) = resolve_map(args)?;
    let found = innerness::solve_witness(&map, n)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({ "witness": found.as_ref().map(|w| w.to_string()) })
        );
    } else {
        match &found {
            Some(w) => println!("witness: {w}"),
            None => println!("witness: none"),
        }
    }
    Ok(0)
}

fn centralizer(args: &CentralizerArgs) -> Result<i32> {
    cap_check(args.n, args.max_generators)?;
    let z = innerness::centralizer(args.n, args.k)?;
    let rendered: Vec<String> = z.basis.iter().map(|b| b.to_string()).collect();
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "n": args.n,
                "k": args.k,
                "dim": z.dim(),
                "basis": rendered,
            })
        );
    } else {
        println!("dim: {}", z.dim());
        for b in rendered {
            println!("{b}");
        }
    }
    Ok(0)
}

fn mul(args: &MulArgs) -> Result<i32> {
    let factors = split_factors(&args.expr);
    if factors.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let n = match args.n {
        Some(n) => n,
        None => infer_truncation(&args.expr),
    };
    cap_check(n, args.max_generators)?;
    let algebra = Algebra::orthonormal(n)?;
    let mut product = Multivector::one(n);
    for f in &factors {
        let factor = Multivector::parse(n, f)?;
        product = algebra.mul(&product, &factor)?;
    }
    if args.json {
        println!("{}", serde_json::json!({ "product": product.to_string() }));
    } else {
        println!("{product}");
    }
    Ok(0)
}

/// Split on `*` at parenthesis depth 0 when it has whitespace on both sides;
/// the `*` glueing a coefficient to its blade ("2*e0") never does.
fn split_factors(expr: &str) -> Vec<String> {
    let chars: Vec<char> = expr.chars().collect();
    let mut depth = 0usize;
    let mut parts = Vec::new();
    let mut start = 0usize;
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '*' if depth == 0 => {
                let before_ws = i > 0 && chars[i - 1].is_whitespace();
                let after_ws = i + 1 < chars.len() && chars[i + 1].is_whitespace();
                if before_ws && after_ws {
                    parts.push(chars[start..i].iter().collect::<String>());
                    start = i + 1;
                }
            }
            _ => {}
        }
    }
    parts.push(chars[start..].iter().collect::<String>());
    parts
        .into_iter()
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect()
}

/// Smallest truncation covering every generator mentioned in the expression.
fn infer_truncation(expr: &str) -> usize {
    let mut n = 0usize;
    let bytes = expr.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'e' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
            let mut j = i + 1;
            let mut value = 0usize;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                value = value * 10 + (bytes[j] - b'0') as usize;
                j += 1;
            }
            n = n.max(value + 1);
            i = j;
        } else {
            i += 1;
        }
    }
    n
}

fn selftest_cmd(args: &SelftestArgs) -> Result<i32> {
    let reports = selftest::run_all();
    let failures = selftest::total_failures(&reports);
    if args.json {
        println!(
            "{}",
            serde_json::to_string(&reports).map_err(|e| Error::Internal(e.to_string()))?
        );
    } else {
        println!("{:<28} {:>6} {:>9}", "suite", "cases", "failures");
        for r in &reports {
            println!("{:<28} {:>6} {:>9}", r.suite, r.cases, r.failures);
            for note in &r.notes {
                println!("    ! {note}");
            }
        }
        let total_cases: usize = reports.iter().map(|r| r.cases).sum();
        println!("{:<28} {:>6} {:>9}", "total", total_cases, failures);
    }
    Ok(if failures == 0 { 0 } else { 2 })
}
