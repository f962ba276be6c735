use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tropspec::assignment::{decompose_circulation, max_cycle_mean, PartialPermutation};
use tropspec::bounds::{self, companion_comparison, hop_check, upper_bound_report, BoundReport, ReportOptions};
use tropspec::trop_poly::{max_times_relative, NewtonPolygon, RootMultiset, TropicalPolynomial};
use tropspec::trop_spectra::{tropical_eigenvalues_with, Method, TropicalSpectrum};
use tropspec::verify::{self, run_suite, Suite, SuiteConfig};
use tropspec::ComplexMatrix;

mod input;
mod output;

use input::MatrixFormat;
use output::{machine, pretty, table};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "tropspec", version, about = "Tropical roots, tropical eigenvalues and log-majorization bounds")]
struct Cli {
    /// Relative tolerance for inequality verdicts
    #[arg(long, global = true, default_value_t = bounds::DEFAULT_TOL)]
    tol: f64,
    /// Seed for randomized commands (recorded in report metadata)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV
    #[arg(long, global = true)]
    csv: bool,
    /// Only print errors (machine output is still written)
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixInput {
    /// Matrix file (`-` for stdin)
    file: PathBuf,
    /// Input format; guessed from the extension or content when absent
    #[arg(long, value_enum)]
    format: Option<MatrixFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Tropical roots of a polynomial
    Troots {
        /// Coefficients a_0 .. a_n, lowest degree first (`-` for stdin)
        file: PathBuf,
        /// Read max-plus coefficients ("-inf" for absent terms) instead of complex ones
        #[arg(long)]
        max_plus: bool,
        /// Append the root bound table (complex input only)
        #[arg(long, conflicts_with = "max_plus")]
        hop: bool,
    },
    /// Tropical eigenvalues of |A|
    Teig {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, value_enum, default_value_t = MethodArg::Coeff)]
        method: MethodArg,
        /// Treat the file as a polynomial and use its companion matrix
        #[arg(long)]
        poly: bool,
    },
    /// Upper (and optionally lower) bounds on eigenvalue products
    Bounds {
        /// Matrix file; omit when using --random
        #[arg(required_unless_present = "random")]
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<MatrixFormat>,
        /// Use a random complex n×n matrix drawn with --seed
        #[arg(long, value_name = "N", conflicts_with = "file")]
        random: Option<usize>,
        /// Orders to report, as `k`, `a..b` or `a-b`
        #[arg(long, value_parser = parse_k_range)]
        k_range: Option<(usize, usize)>,
        /// Check the lower-bound hypotheses and report L_k where they hold
        #[arg(long)]
        lower: bool,
    },
    /// Run a randomized property suite
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Largest dimension (degree for the hop suite)
        #[arg(long, default_value_t = 6)]
        nmax: usize,
    },
    /// Compare companion-matrix constants with Pólya's constants
    Companion {
        /// Coefficients a_0 .. a_n, lowest degree first (`-` for stdin)
        file: PathBuf,
    },
    /// Decompose an integer circulation matrix into partial permutations
    Decompose {
        /// JSON array of rows or CSV of nonnegative integers
        file: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Coeff,
    Eval,
    Both,
}

fn parse_k_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad order {x:?}"));
    match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => parse(s).map(|k| (k, k)),
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

type CmdResult = Result<(), Failure>;

fn parse_failure(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn violation(msg: impl Into<String>) -> Failure {
    Failure { code: 4, error: anyhow!(msg.into()) }
}

impl From<tropspec::Error> for Failure {
    fn from(e: tropspec::Error) -> Self {
        use tropspec::Error as E;
        let code = match e {
            E::Oversize { .. } | E::SizeCap { .. } | E::NonConvergence { .. } => 3,
            _ => 2,
        };
        Failure { code, error: e.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure { code: 1, error: e }
    }
}

struct Ctx {
    tol: f64,
    seed: Option<u64>,
    json: bool,
    csv: bool,
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let ctx = Ctx { tol: cli.tol, seed: cli.seed, json: cli.json, csv: cli.csv, quiet: cli.quiet };
    let result = match cli.command {
        Command::Troots { file, max_plus, hop } => cmd_troots(&ctx, &file, max_plus, hop),
        Command::Teig { input, method, poly } => cmd_teig(&ctx, &input, method, poly),
        Command::Bounds { file, format, random, k_range, lower } => {
            cmd_bounds(&ctx, file, format, random, k_range, lower)
        }
        Command::Verify { suite, instances, nmax } => cmd_verify(&ctx, suite, instances, nmax),
        Command::Companion { file } => cmd_companion(&ctx, &file),
        Command::Decompose { file } => cmd_decompose(&ctx, &file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

#[derive(Serialize)]
struct RootsOutput {
    mode: &'static str,
    degree: usize,
    roots: RootMultiset,
    /// Root values as max-times numbers.
    max_times: Vec<f64>,
    newton_polygon: NewtonPolygon,
    #[serde(skip_serializing_if = "Option::is_none")]
    hop: Option<bounds::HopReport>,
}

fn cmd_troots(ctx: &Ctx, file: &PathBuf, max_plus: bool, hop: bool) -> CmdResult {
    let (poly, complex) = if max_plus {
        let coeffs = input::read_max_plus(file).map_err(parse_failure)?;
        (TropicalPolynomial::new(coeffs)?, None)
    } else {
        let coeffs = input::read_polynomial(file).map_err(parse_failure)?;
        (max_times_relative(&coeffs)?, Some(coeffs))
    };
    if poly.degree() == 0 {
        return Err(parse_failure(anyhow!("degree ≥ 1 required")));
    }
    let roots = poly.roots();
    let hop = match (&complex, hop) {
        (Some(c), true) => Some(hop_check(c, ctx.tol)?),
        _ => None,
    };
    let out = RootsOutput {
        mode: if max_plus { "max-plus" } else { "complex" },
        degree: poly.degree(),
        max_times: roots.max_times_values(),
        roots,
        newton_polygon: poly.newton_polygon(),
        hop,
    };
    if ctx.json {
        output::json(&out)?;
    } else if ctx.csv {
        let mut w = output::csv_writer();
        w.write_record(["value", "max_times", "multiplicity"])?;
        for r in out.roots.entries() {
            w.write_record([machine(r.value), machine(r.value.exp()), r.multiplicity.to_string()])?;
        }
        w.flush()?;
    } else if !ctx.quiet {
        println!("degree {} ({} coefficients)", out.degree, out.mode);
        let rows: Vec<Vec<String>> = out
            .roots
            .entries()
            .iter()
            .map(|r| vec![pretty(r.value), pretty(r.value.exp()), r.multiplicity.to_string()])
            .collect();
        println!("{}", table(&["root (max-plus)", "root (max-times)", "multiplicity"], &rows));
        let verts: Vec<String> =
            out.newton_polygon.vertices.iter().map(|(i, v)| format!("({i}, {})", pretty(*v))).collect();
        println!("newton polygon vertices: {}", verts.join(" "));
        let sat: Vec<String> = out.newton_polygon.saturated.iter().map(usize::to_string).collect();
        println!("saturated indices: {}", sat.join(" "));
        if let Some(h) = &out.hop {
            println!();
            print_hop(h);
        }
    }
    if out.hop.as_ref().is_some_and(|h| !h.all_hold()) {
        return Err(violation("a root bound is violated beyond tolerance"));
    }
    Ok(())
}

fn print_hop(h: &bounds::HopReport) {
    let rows: Vec<Vec<String>> = h
        .rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                pretty(r.zeta_prefix),
                pretty(r.alpha_prefix),
                pretty(r.lower_constant),
                pretty(r.upper_constant),
                pretty(r.ostrowski),
                pretty(r.hadamard),
                verdict(r.lower_holds),
                verdict(r.upper_holds),
            ]
        })
        .collect();
    println!(
        "{}",
        table(
            &["k", "|ζ1..ζk|", "α1..αk", "1/C(n,k)", "min f", "sqrt(e(k+1))", "k+1", "lower", "upper"],
            &rows
        )
    );
}

fn verdict(ok: bool) -> String {
    if ok { "ok" } else { "VIOLATED" }.to_string()
}

#[derive(Serialize)]
struct TeigOutput {
    n: usize,
    gammas: Vec<f64>,
    spectra: Vec<TropicalSpectrum>,
    rho_max: f64,
    routes_agree: bool,
}

fn cmd_teig(ctx: &Ctx, input: &MatrixInput, method: MethodArg, poly: bool) -> CmdResult {
    let a = if poly {
        let coeffs = input::read_polynomial(&input.file).map_err(parse_failure)?;
        ComplexMatrix::companion(&coeffs)?
    } else {
        input::read_matrix(&input.file, input.format).map_err(parse_failure)?
    };
    let m = a.abs();
    let methods: &[Method] = match method {
        MethodArg::Coeff => &[Method::Coeff],
        MethodArg::Eval => &[Method::Eval],
        MethodArg::Both => &[Method::Coeff, Method::Eval],
    };
    let spectra: Vec<TropicalSpectrum> = methods.iter().map(|&me| tropical_eigenvalues_with(&m, me)).collect();
    let routes_agree = spectra.windows(2).all(|w| w[0].gammas.approx_eq(&w[1].gammas, 1e-9));
    let rho_max = max_cycle_mean(&m);
    let out = TeigOutput { n: a.n(), gammas: spectra[0].max_times(), spectra, rho_max, routes_agree };
    if ctx.json {
        output::json(&out)?;
    } else if ctx.csv {
        let mut w = output::csv_writer();
        w.write_record(["method", "value", "max_times", "multiplicity"])?;
        for s in &out.spectra {
            for r in s.gammas.entries() {
                w.write_record([
                    method_name(s.method).to_string(),
                    machine(r.value),
                    machine(r.value.exp()),
                    r.multiplicity.to_string(),
                ])?;
            }
        }
        w.flush()?;
    } else if !ctx.quiet {
        for s in &out.spectra {
            println!("method {}", method_name(s.method));
            let rows: Vec<Vec<String>> = s
                .gammas
                .entries()
                .iter()
                .map(|r| vec![pretty(r.value.exp()), pretty(r.value), r.multiplicity.to_string()])
                .collect();
            println!("{}", table(&["gamma", "log gamma", "multiplicity"], &rows));
            let sat: Vec<String> = s.saturated.iter().map(usize::to_string).collect();
            println!("saturated indices: {}", sat.join(" "));
        }
        println!("gamma_1 = {}, max cycle mean = {}", pretty(out.gammas[0]), pretty(out.rho_max));
    }
    let g1 = out.gammas.first().copied().unwrap_or(0.0);
    let cycle_ok = g1 == out.rho_max || (g1 - out.rho_max).abs() <= 1e-9 * g1.max(out.rho_max);
    if !out.routes_agree || !cycle_ok {
        return Err(violation("tropical eigenvalue cross-checks disagree"));
    }
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Coeff => "coeff",
        Method::Eval => "eval",
    }
}

fn cmd_bounds(
    ctx: &Ctx,
    file: Option<PathBuf>,
    format: Option<MatrixFormat>,
    random: Option<usize>,
    k_range: Option<(usize, usize)>,
    lower: bool,
) -> CmdResult {
    let (a, seed) = match (file, random) {
        (_, Some(n)) => {
            if n == 0 {
                return Err(parse_failure(anyhow!("--random needs n ≥ 1")));
            }
            let seed = ctx.seed.unwrap_or(DEFAULT_SEED);
            let mut rng = verify::instance_rng(seed, 0);
            (verify::random_complex(&mut rng, n, 1.0, -4.0, 4.0), Some(seed))
        }
        (Some(f), None) => (input::read_matrix(&f, format).map_err(parse_failure)?, ctx.seed),
        (None, None) => unreachable!("clap requires a file or --random"),
    };
    let report = upper_bound_report(&a, &ReportOptions { tol: ctx.tol, k_range, lower, seed })?;
    if ctx.json {
        output::json(&report)?;
    } else if ctx.csv {
        write_bounds_csv(&report)?;
    } else if !ctx.quiet {
        print_bounds(&report);
    }
    if !report.all_upper_hold() || !report.all_lower_hold() {
        return Err(violation("a proven bound is violated beyond tolerance"));
    }
    Ok(())
}

fn write_bounds_csv(report: &BoundReport) -> CmdResult {
    let mut w = output::csv_writer();
    w.write_record([
        "k",
        "eig_prefix",
        "trop_prefix",
        "upper_constant",
        "ratio",
        "upper_holds",
        "lower_constant",
        "lower_holds",
        "diagnostics",
    ])?;
    for r in &report.rows {
        w.write_record([
            r.k.to_string(),
            machine(r.eig_prefix),
            machine(r.trop_prefix),
            machine(r.upper_constant),
            machine(r.ratio),
            r.upper_holds.to_string(),
            r.lower_constant.map(machine).unwrap_or_default(),
            r.lower_holds.map(|b| b.to_string()).unwrap_or_default(),
            r.diagnostics.join("; "),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn print_bounds(report: &BoundReport) {
    println!("n = {}, input sha256 {}", report.n, report.meta.input_hash);
    if let Some(seed) = report.meta.seed {
        println!("seed {seed}");
    }
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                pretty(r.eig_prefix),
                pretty(r.trop_prefix),
                pretty(r.upper_constant),
                pretty(r.ratio),
                verdict(r.upper_holds),
                r.lower_constant.map(pretty).unwrap_or_else(|| "-".into()),
                r.lower_holds.map(verdict).unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    println!(
        "{}",
        table(&["k", "|λ1..λk|", "γ1..γk", "U_k", "ratio", "upper", "L_k", "lower"], &rows)
    );
    for r in &report.rows {
        for d in &r.diagnostics {
            println!("note: {d}");
        }
    }
}

fn cmd_verify(ctx: &Ctx, suite: Suite, instances: usize, nmax: usize) -> CmdResult {
    let seed = ctx.seed.unwrap_or(DEFAULT_SEED);
    let summary = run_suite(&SuiteConfig { suite, instances, nmax, seed, tol: ctx.tol });
    if ctx.json {
        output::json(&summary)?;
    } else if ctx.csv {
        let mut w = output::csv_writer();
        w.write_record(["suite", "instances", "passed", "failed", "worst_ratio", "seed"])?;
        w.write_record([
            suite.to_string(),
            summary.instances.to_string(),
            summary.passed.to_string(),
            summary.failed.to_string(),
            machine(summary.worst_ratio),
            seed.to_string(),
        ])?;
        w.flush()?;
    } else if !ctx.quiet {
        println!(
            "suite {suite}: {}/{} pass, {} fail, worst ratio {} (seed {seed})",
            summary.passed,
            summary.instances,
            summary.failed,
            pretty(summary.worst_ratio)
        );
        for f in &summary.failures {
            println!("  instance {} (n = {}): {}", f.index, f.n, f.detail);
        }
    }
    if !summary.ok() {
        return Err(violation(format!("{} of {} instances failed", summary.failed, summary.instances)));
    }
    Ok(())
}

fn cmd_companion(ctx: &Ctx, file: &PathBuf) -> CmdResult {
    let coeffs = input::read_polynomial(file).map_err(parse_failure)?;
    let rows = companion_comparison(&coeffs, ctx.tol)?;
    if ctx.json {
        output::json(&rows)?;
    } else if ctx.csv {
        let mut w = output::csv_writer();
        w.write_record(["k", "root_ratio", "exact_upper", "norm_constant", "polya_constant", "all_hold"])?;
        for r in &rows {
            w.write_record([
                r.k.to_string(),
                machine(r.root_ratio),
                machine(r.exact_upper),
                machine(r.norm_constant),
                machine(r.polya_constant),
                r.all_hold().to_string(),
            ])?;
        }
        w.flush()?;
    } else if !ctx.quiet {
        let body: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    pretty(r.root_ratio),
                    pretty(r.exact_upper),
                    pretty(r.norm_constant),
                    pretty(r.polya_constant),
                    verdict(r.all_hold()),
                ]
            })
            .collect();
        println!(
            "{}",
            table(&["k", "|ζ1..ζk|/α1..αk", "exact U_k", "min(k+1,n-k+1)", "Pólya", "check"], &body)
        );
    }
    if !rows.iter().all(|r| r.all_hold()) {
        return Err(violation("a companion bound is violated beyond tolerance"));
    }
    Ok(())
}

fn cmd_decompose(ctx: &Ctx, file: &PathBuf) -> CmdResult {
    let b = input::read_integer_matrix(file).map_err(parse_failure)?;
    let parts = decompose_circulation(&b);
    let one_based = |p: &PartialPermutation| -> Vec<(usize, usize)> {
        p.support().into_iter().map(|i| (i + 1, p.get(i).unwrap() + 1)).collect()
    };
    if ctx.json {
        #[derive(Serialize)]
        struct Out {
            n: usize,
            weight: u64,
            /// 1-based (row, column) pairs per part.
            parts: Vec<Vec<(usize, usize)>>,
        }
        output::json(&Out { n: b.n(), weight: b.weight(), parts: parts.iter().map(one_based).collect() })?;
    } else if ctx.csv {
        let mut w = output::csv_writer();
        w.write_record(["part", "row", "col"])?;
        for (idx, p) in parts.iter().enumerate() {
            for (i, j) in one_based(p) {
                w.write_record([(idx + 1).to_string(), i.to_string(), j.to_string()])?;
            }
        }
        w.flush()?;
    } else if !ctx.quiet {
        println!("weight {}, {} parts", b.weight(), parts.len());
        for (idx, p) in parts.iter().enumerate() {
            let arrows: Vec<String> = one_based(p).iter().map(|(i, j)| format!("{i}->{j}")).collect();
            println!("part {}: {}", idx + 1, arrows.join(" "));
        }
    }
    Ok(())
}
