//! Command-line front end: `simplify`, `gen`, `bench`, and `check`.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::ast::{fold_constants, Width};
use crate::datagen::{benchmark_ground_truths, gen_dataset, read_dataset, GenSpec};
use crate::error::Error;
use crate::oracle::{exhaustive_equiv, matrix_equiv, random_equiv, Verdict, DEFAULT_SEED};
use crate::parse::parse;
use crate::semilinear::simplify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "mba-simplify",
    about = "Simplify linear and semi-linear mixed boolean-arithmetic expressions",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simplify one expression or every record of a dataset.
    Simplify(SimplifyArgs),
    /// Generate an obfuscated dataset from a ground truth.
    Gen(GenArgs),
    /// Simplify a dataset and write a CSV benchmark report.
    Bench(BenchArgs),
    /// Check two expressions for equivalence.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct SimplifyArgs {
    /// Expression to simplify.
    #[arg(short = 'e', long = "expr", conflicts_with = "dataset")]
    pub expr: Option<String>,
    /// Dataset file whose obfuscated column is simplified line by line.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Bit width (ignored for datasets, which carry their own).
    #[arg(short = 'b', long, default_value_t = 64)]
    pub width: u32,
    /// Verify each output against its input with the matrix oracle.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Ground-truth expression to obfuscate.
    #[arg(long, conflicts_with = "table3")]
    pub truth: Option<String>,
    /// Emit the five stand-in benchmark classes (e1..e5) as separate files.
    #[arg(long)]
    pub table3: bool,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 3)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Target variable count (defaults to the ground truth's own).
    #[arg(long)]
    pub vars: Option<usize>,
    #[arg(short = 'b', long, default_value_t = 64)]
    pub width: u32,
    /// Output file, or output directory with --table3.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// CSV report destination.
    #[arg(long)]
    pub csv: PathBuf,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
    #[arg(short = 'b', long, default_value_t = 64)]
    pub width: u32,
    /// matrix, exhaustive, random, or auto.
    #[arg(long, default_value = "auto")]
    pub method: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// One benchmark line; `verified` is the matrix-oracle verdict for
/// input == output.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub input: String,
    pub output: String,
    pub input_nodes: usize,
    pub output_nodes: usize,
    pub ground_truth_nodes: Option<usize>,
    pub runtime_us: u128,
    pub verified: bool,
}

/// Run a parsed command, writing human output to `out`. Returns the exit
/// code; errors are printed to stderr by the caller.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Simplify(args) => cmd_simplify(&args, out),
        Command::Gen(args) => cmd_gen(&args, out),
        Command::Bench(args) => cmd_bench(&args, out),
        Command::Check(args) => cmd_check(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn cmd_simplify(args: &SimplifyArgs, out: &mut dyn Write) -> Result<i32, Error> {
    match (&args.expr, &args.dataset) {
        (Some(text), None) => {
            let width = Width::new(args.width)?;
            let e = parse(text, width)?;
            let simplified = simplify(&e, width)?;
            if args.check && !matrix_equiv(&e, &simplified, width).is_equivalent() {
                writeln!(out, "{simplified}").ok();
                eprintln!("verification failed: output is not equivalent to input");
                return Ok(EXIT_VERIFY);
            }
            writeln!(out, "{simplified}").ok();
            Ok(EXIT_OK)
        }
        (None, Some(path)) => {
            let dataset = read_dataset(path)?;
            let width = dataset.width;
            let mut code = EXIT_OK;
            for (obf, _) in dataset.records {
                let e = parse(&obf, width)?;
                let simplified = simplify(&e, width)?;
                if args.check && !matrix_equiv(&e, &simplified, width).is_equivalent() {
                    code = EXIT_VERIFY;
                }
                writeln!(out, "{simplified}").ok();
            }
            Ok(code)
        }
        _ => Err(Error::Generation(
            "exactly one of --expr or --dataset is required".to_string(),
        )),
    }
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let width = Width::new(args.width)?;
    if args.table3 {
        std::fs::create_dir_all(&args.out).map_err(|e| Error::Dataset {
            path: args.out.display().to_string(),
            message: e.to_string(),
        })?;
        for (name, gt) in benchmark_ground_truths() {
            let gt_vars = gt.variables().len();
            let vars = args.vars.unwrap_or(gt_vars).max(gt_vars);
            let template = GenSpec {
                ground_truth: gt,
                width,
                vars,
                steps: args.steps.max(vars),
                seed: args.seed,
            };
            let path = args.out.join(format!("{name}.txt"));
            let retries = gen_dataset(args.count, &template, &path)?;
            writeln!(
                out,
                "wrote {} ({} records, {} retries)",
                path.display(),
                args.count,
                retries
            )
            .ok();
        }
        return Ok(EXIT_OK);
    }
    let truth = args
        .truth
        .as_ref()
        .ok_or_else(|| Error::Generation("either --truth or --table3 is required".to_string()))?;
    let gt = fold_constants(&parse(truth, width)?, width);
    let gt_vars = gt.variables().len();
    let vars = args.vars.unwrap_or(gt_vars).max(gt_vars);
    let template = GenSpec {
        ground_truth: gt,
        width,
        vars,
        steps: args.steps,
        seed: args.seed,
    };
    let retries = gen_dataset(args.count, &template, &args.out)?;
    writeln!(
        out,
        "wrote {} ({} records, {} retries)",
        args.out.display(),
        args.count,
        retries
    )
    .ok();
    Ok(EXIT_OK)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let dataset = read_dataset(&args.dataset)?;
    let width = dataset.width;
    let rows: Result<Vec<BenchRow>, Error> = dataset
        .records
        .par_iter()
        .map(|(obf, gt)| {
            let input = parse(obf, width)?;
            let gt_expr = parse(gt, width)?;
            let started = Instant::now();
            let output = simplify(&input, width)?;
            let runtime_us = started.elapsed().as_micros();
            let verified = matrix_equiv(&input, &output, width).is_equivalent();
            Ok(BenchRow {
                input: obf.clone(),
                output: output.to_string(),
                input_nodes: input.node_count(),
                output_nodes: output.node_count(),
                ground_truth_nodes: Some(gt_expr.node_count()),
                runtime_us,
                verified,
            })
        })
        .collect();
    let rows = rows?;

    let mut csv = String::from("input,output,in_nodes,out_nodes,gt_nodes,runtime_us,verified\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.input,
            r.output,
            r.input_nodes,
            r.output_nodes,
            r.ground_truth_nodes
                .map(|n| n.to_string())
                .unwrap_or_default(),
            r.runtime_us,
            r.verified
        ));
    }
    if !rows.is_empty() {
        let mean_rt = rows.iter().map(|r| r.runtime_us).sum::<u128>() as f64 / rows.len() as f64;
        let mean_out =
            rows.iter().map(|r| r.output_nodes).sum::<usize>() as f64 / rows.len() as f64;
        let mean_gt = rows
            .iter()
            .filter_map(|r| r.ground_truth_nodes)
            .sum::<usize>() as f64
            / rows.len() as f64;
        csv.push_str(&format!(
            "# mean runtime_us={mean_rt:.2} nodes={mean_out:.2} / {mean_gt:.2}\n"
        ));
        writeln!(
            out,
            "{} rows, mean runtime {mean_rt:.2} us, nodes {mean_out:.2} / {mean_gt:.2}",
            rows.len()
        )
        .ok();
    }
    std::fs::write(&args.csv, csv).map_err(|e| Error::Dataset {
        path: args.csv.display().to_string(),
        message: e.to_string(),
    })?;
    if rows.iter().any(|r| !r.verified) {
        eprintln!(
            "verification failed on {} row(s)",
            rows.iter().filter(|r| !r.verified).count()
        );
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let width = Width::new(args.width)?;
    let lhs = parse(&args.lhs, width)?;
    let rhs = parse(&args.rhs, width)?;
    let report = match args.method.as_str() {
        "matrix" => matrix_equiv(&lhs, &rhs, width),
        "exhaustive" => exhaustive_equiv(&lhs, &rhs, width),
        "random" => random_equiv(&lhs, &rhs, width, args.samples, args.seed),
        "auto" => {
            let r = matrix_equiv(&lhs, &rhs, width);
            if r.verdict == Verdict::Inconclusive {
                random_equiv(&lhs, &rhs, width, args.samples, args.seed)
            } else {
                r
            }
        }
        other => {
            return Err(Error::Generation(format!(
                "unknown method `{other}` (expected matrix, exhaustive, random, or auto)"
            )))
        }
    };
    match &report.verdict {
        Verdict::Equivalent => {
            writeln!(
                out,
                "equivalent ({:?}, {} samples, seed {})",
                report.method, report.samples, args.seed
            )
            .ok();
            Ok(EXIT_OK)
        }
        Verdict::Counterexample(cx) => {
            let cx: Vec<String> = cx.iter().map(|(n, v)| format!("{n}={v}")).collect();
            writeln!(out, "not equivalent: counterexample {}", cx.join(", ")).ok();
            Ok(EXIT_VERIFY)
        }
        Verdict::Inconclusive => {
            writeln!(out, "inconclusive ({:?})", report.method).ok();
            Ok(EXIT_VERIFY)
        }
    }
}
