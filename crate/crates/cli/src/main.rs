//! Command line front end: parse chain files, run the condition checks,
//! the vector bundle solver and the structural decomposition, generate
//! chains, and ship the built-in dimension-jump chain as a demo.
//!
//! Exit codes: 0 success; 1 a condition or decomposition check failed;
//! 2 the solver verdict disagrees with the expectation; 3 I/O, parse or
//! usage error; 4 internal assertion failure.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linked_hom::arith::{parse_rational, Poly, Rational};
use linked_hom::chain::io::{chain_to_json, parse_chain_json};
use linked_hom::chain::{
    Condition, ConditionReport, FiberPoint, LinkedChain, ReportPoint,
};
use linked_hom::generator::{gen_broken_chain, gen_valid_chain, GenParams};
use linked_hom::linalg::{Matrix, RingScalar};
use linked_hom::solver::{
    structure_decomposition, vector_bundle_check_with, LinkedHomTuple, SolveReport,
    StructureDecomposition,
};
use serde::Serialize;

const EXIT_CONDITION_FAILURE: u8 = 1;
const EXIT_VERDICT_MISMATCH: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "linked-hom",
    version,
    about = "Exact verification of linked chains of free modules over Q[t]"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the composite, kernel/image and complementarity conditions.
    Check {
        /// Chain file (JSON).
        file: String,
        /// Additional rational points to check the fiberwise conditions at
        /// (repeatable). Non-special points are reported as warnings.
        #[arg(long = "point", value_name = "A")]
        points: Vec<String>,
    },
    /// Decide whether the linked Hom fibers form a vector bundle of rank
    /// r*m, reporting the dimensions.
    Solve {
        /// Chain file (JSON).
        file: String,
        /// Also print the global basis of the linked Hom module.
        #[arg(long)]
        basis: bool,
        /// Invert the verdict mapping: exit 0 when the chain is NOT a
        /// vector bundle of rank r*m.
        #[arg(long = "expect-failure")]
        expect_failure: bool,
    },
    /// Split the chain fibers at a special point into the two transported
    /// blocks and print the block data.
    Structure {
        /// Chain file (JSON).
        file: String,
        /// The rational point to decompose at.
        #[arg(long, value_name = "A")]
        point: String,
    },
    /// Generate a chain and write it as a chain file.
    Gen {
        /// Rank of the f-side modules.
        #[arg(long)]
        r: usize,
        /// Rank of the g-side modules.
        #[arg(long)]
        m: usize,
        /// Width of the block on which forward maps stay invertible at
        /// special points.
        #[arg(long)]
        m1: usize,
        /// Number of modules in the chain.
        #[arg(long)]
        n: usize,
        /// The scalar s as comma-separated rational coefficients, constant
        /// term first ("0,0,1" is t^2).
        #[arg(long)]
        s: String,
        /// Random seed.
        #[arg(long)]
        seed: u64,
        /// Output path for the chain file.
        #[arg(long)]
        out: String,
        /// Break exactly this condition instead of generating a valid
        /// chain.
        #[arg(long = "break", value_enum, value_name = "CONDITION")]
        break_target: Option<BreakTarget>,
        /// Emit the bare block model without random changes of basis.
        #[arg(long)]
        raw: bool,
        /// Bound on the numerators and denominators of random entries.
        #[arg(long = "entry-bound", default_value_t = 3)]
        entry_bound: i64,
    },
    /// Run the built-in demonstration chain.
    Demo {
        /// Which demonstration to run.
        #[arg(value_parser = ["counterexample"])]
        what: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BreakTarget {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
}

impl From<BreakTarget> for Condition {
    fn from(t: BreakTarget) -> Condition {
        match t {
            BreakTarget::I => Condition::I,
            BreakTarget::II => Condition::II,
            BreakTarget::III => Condition::III,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(EXIT_USAGE)
                }
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((message, code)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

type Failure = (String, u8);

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check { file, points } => cmd_check(cli.format, &file, &points),
        Command::Solve {
            file,
            basis,
            expect_failure,
        } => cmd_solve(cli.format, &file, basis, expect_failure),
        Command::Structure { file, point } => cmd_structure(cli.format, &file, &point),
        Command::Gen {
            r,
            m,
            m1,
            n,
            s,
            seed,
            out,
            break_target,
            raw,
            entry_bound,
        } => {
            let params = GenParams {
                r,
                m,
                n,
                m1,
                s: parse_poly_arg(&s)?,
                entry_bound,
                seed,
                conjugate: !raw,
            };
            cmd_gen(cli.format, params, break_target, &out)
        }
        Command::Demo { .. } => cmd_demo(cli.format),
    }
}

fn load_chain(path: &str) -> Result<(LinkedChain, Vec<Rational>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| (format!("cannot read {path}: {e}"), EXIT_USAGE))?;
    parse_chain_json(&text).map_err(|e| (format!("{path}: {e}"), EXIT_USAGE))
}

fn parse_point_arg(text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| (format!("invalid point: {e}"), EXIT_USAGE))
}

fn parse_poly_arg(text: &str) -> Result<Poly, Failure> {
    let coeffs: Vec<&str> = text.split(',').map(str::trim).collect();
    Poly::from_coeff_strings(&coeffs)
        .map_err(|e| (format!("invalid coefficient list for --s: {e}"), EXIT_USAGE))
}

// ---- reports ---------------------------------------------------------------

#[derive(Serialize)]
struct ConditionJson {
    condition: String,
    point: String,
    passed: bool,
    failures: Vec<FailureJson>,
}

#[derive(Serialize)]
struct FailureJson {
    index: usize,
    kind: String,
    detail: String,
}

#[derive(Serialize)]
struct CheckJson {
    format_version: u32,
    command: &'static str,
    conditions: Vec<ConditionJson>,
    warnings: Vec<String>,
    all_passed: bool,
}

fn condition_json(report: &ConditionReport) -> ConditionJson {
    ConditionJson {
        condition: report.condition.to_string(),
        point: match &report.point {
            ReportPoint::Global => "global".to_string(),
            ReportPoint::Fiber(p) => p.to_string(),
        },
        passed: report.passed(),
        failures: report
            .failures
            .iter()
            .map(|f| FailureJson {
                index: f.index,
                kind: f.kind.to_string(),
                detail: f.detail.clone(),
            })
            .collect(),
    }
}

fn render_condition_text(out: &mut String, report: &ConditionReport) {
    let where_ = match &report.point {
        ReportPoint::Global => "global".to_string(),
        ReportPoint::Fiber(p) => p.to_string(),
    };
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    out.push_str(&format!(
        "condition {} ({where_}): {verdict}\n",
        report.condition
    ));
    for f in &report.failures {
        out.push_str(&format!("  at index {}: {}\n", f.index, f.kind));
        for line in f.detail.lines() {
            out.push_str(&format!("    {line}\n"));
        }
    }
}

fn cmd_check(format: Format, file: &str, point_args: &[String]) -> Result<u8, Failure> {
    let (chain, _) = load_chain(file)?;
    let (mut reports, mut warnings) = chain.check_all();
    let standard: Vec<FiberPoint> = chain.check_points().0;
    for text in point_args {
        let a = parse_point_arg(text)?;
        let point = FiberPoint::At(a);
        if standard.contains(&point) {
            continue;
        }
        if !chain.is_special(&point) {
            warnings.push(format!(
                "{point} is not a special point; the fiberwise conditions do not apply there"
            ));
            continue;
        }
        reports.push(chain.check_condition_ii(&point).expect("point is special"));
        reports.push(chain.check_condition_iii(&point).expect("point is special"));
    }
    let all_passed = reports.iter().all(ConditionReport::passed);

    let rendered = match format {
        Format::Json => to_json(&CheckJson {
            format_version: 1,
            command: "check",
            conditions: reports.iter().map(condition_json).collect(),
            warnings: warnings.clone(),
            all_passed,
        }),
        Format::Text => {
            let mut out = String::new();
            for report in &reports {
                render_condition_text(&mut out, report);
            }
            for w in &warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            out.push_str(&format!(
                "result: {}\n",
                if all_passed { "PASS" } else { "FAIL" }
            ));
            out
        }
    };
    print!("{rendered}");
    Ok(if all_passed { 0 } else { EXIT_CONDITION_FAILURE })
}

#[derive(Serialize)]
struct FiberJson {
    point: String,
    dim: usize,
}

#[derive(Serialize)]
struct SolveJson {
    format_version: u32,
    command: &'static str,
    rm: usize,
    generic_dim: usize,
    fibers: Vec<FiberJson>,
    is_vector_bundle: bool,
    flatness_failure: Option<FiberJson>,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Vec<Vec<Vec<Vec<String>>>>>>,
}

fn tuple_repr(tuple: &LinkedHomTuple<Poly>) -> Vec<Vec<Vec<Vec<String>>>> {
    tuple
        .parts()
        .iter()
        .map(|part| {
            (0..part.rows())
                .map(|i| {
                    (0..part.cols())
                        .map(|j| part.get(i, j).to_coeff_strings())
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn matrix_lines<K: RingScalar>(m: &Matrix<K>, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let cells: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&format!("{indent}[{}]\n", cells.join(", ")));
    }
    if m.rows() == 0 {
        out.push_str(&format!("{indent}[] ({} columns)\n", m.cols()));
    }
    out
}

fn render_solve_text(report: &SolveReport, with_basis: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("rm: {}\n", report.rm));
    out.push_str(&format!("generic dim: {}\n", report.generic_dim));
    for (point, dim) in &report.fiber_dims {
        out.push_str(&format!("fiber dim at {point}: {dim}\n"));
    }
    if report.is_vector_bundle {
        out.push_str(&format!(
            "verdict: FLAT - vector bundle of rank {}\n",
            report.rm
        ));
    } else {
        out.push_str("verdict: NOT FLAT - no vector bundle of rank rm\n");
        if let Some((point, dim)) = &report.flatness_failure {
            out.push_str(&format!("first deviation: dimension {dim} at {point}\n"));
        }
    }
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    if with_basis {
        for (k, tuple) in report.kernel_basis.iter().enumerate() {
            out.push_str(&format!("basis element {}:\n", k + 1));
            for (i, part) in tuple.parts().iter().enumerate() {
                out.push_str(&format!("  phi_{}:\n", i + 1));
                out.push_str(&matrix_lines(part, "    "));
            }
        }
    }
    out
}

fn solve_json(report: &SolveReport, with_basis: bool) -> SolveJson {
    SolveJson {
        format_version: 1,
        command: "solve",
        rm: report.rm,
        generic_dim: report.generic_dim,
        fibers: report
            .fiber_dims
            .iter()
            .map(|(point, dim)| FiberJson {
                point: point.to_string(),
                dim: *dim,
            })
            .collect(),
        is_vector_bundle: report.is_vector_bundle,
        flatness_failure: report.flatness_failure.as_ref().map(|(point, dim)| FiberJson {
            point: point.to_string(),
            dim: *dim,
        }),
        warnings: report.warnings.clone(),
        basis: with_basis.then(|| report.kernel_basis.iter().map(tuple_repr).collect()),
    }
}

fn cmd_solve(
    format: Format,
    file: &str,
    with_basis: bool,
    expect_failure: bool,
) -> Result<u8, Failure> {
    let (chain, extra) = load_chain(file)?;
    let report = vector_bundle_check_with(&chain, &extra);
    let rendered = match format {
        Format::Json => to_json(&solve_json(&report, with_basis)),
        Format::Text => render_solve_text(&report, with_basis),
    };
    print!("{rendered}");
    Ok(if report.is_vector_bundle != expect_failure {
        0
    } else {
        EXIT_VERDICT_MISMATCH
    })
}

#[derive(Serialize)]
struct StructureJson {
    format_version: u32,
    command: &'static str,
    point: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_prime: Option<Vec<Vec<Vec<Vec<String>>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_dblprime: Option<Vec<Vec<Vec<Vec<String>>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    block_maps_fwd: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    block_maps_bwd: Option<Vec<Vec<Vec<String>>>>,
}

fn poly_matrices_repr(mats: &[Matrix<Poly>]) -> Vec<Vec<Vec<Vec<String>>>> {
    mats.iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| m.get(i, j).to_coeff_strings())
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn ratfunc_matrices_repr<K: RingScalar>(mats: &[Matrix<K>]) -> Vec<Vec<Vec<String>>> {
    mats.iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
                .collect()
        })
        .collect()
}

fn render_structure_text(dec: &StructureDecomposition) -> String {
    let mut out = String::new();
    out.push_str(&format!("decomposition at {}\n", dec.point));
    out.push_str(&format!("ell: {}\n", dec.ell));
    for (i, (bp, bdp)) in dec
        .basis_prime
        .iter()
        .zip(&dec.basis_dblprime)
        .enumerate()
    {
        out.push_str(&format!("module {}: prime basis\n", i + 1));
        out.push_str(&matrix_lines(bp, "  "));
        out.push_str(&format!("module {}: double prime basis\n", i + 1));
        out.push_str(&matrix_lines(bdp, "  "));
    }
    for (i, g) in dec.gp_fwd.iter().enumerate() {
        out.push_str(&format!("prime block map {}:\n", i + 1));
        out.push_str(&matrix_lines(g, "  "));
    }
    for (i, g) in dec.gdp_bwd.iter().enumerate() {
        out.push_str(&format!("double prime block map {}:\n", i + 1));
        out.push_str(&matrix_lines(g, "  "));
    }
    out
}

fn cmd_structure(format: Format, file: &str, point_text: &str) -> Result<u8, Failure> {
    let (chain, _) = load_chain(file)?;
    let a = parse_point_arg(point_text)?;
    let point = FiberPoint::At(a);
    match structure_decomposition(&chain, &point) {
        Ok(dec) => {
            let rendered = match format {
                Format::Json => to_json(&StructureJson {
                    format_version: 1,
                    command: "structure",
                    point: point.to_string(),
                    error: None,
                    ell: Some(dec.ell),
                    basis_prime: Some(poly_matrices_repr(&dec.basis_prime)),
                    basis_dblprime: Some(poly_matrices_repr(&dec.basis_dblprime)),
                    block_maps_fwd: Some(ratfunc_matrices_repr(&dec.gp_fwd)),
                    block_maps_bwd: Some(ratfunc_matrices_repr(&dec.gdp_bwd)),
                }),
                Format::Text => render_structure_text(&dec),
            };
            print!("{rendered}");
            Ok(0)
        }
        Err(e) => {
            let rendered = match format {
                Format::Json => to_json(&StructureJson {
                    format_version: 1,
                    command: "structure",
                    point: point.to_string(),
                    error: Some(e.to_string()),
                    ell: None,
                    basis_prime: None,
                    basis_dblprime: None,
                    block_maps_fwd: None,
                    block_maps_bwd: None,
                }),
                Format::Text => format!("decomposition at {point} failed: {e}\n"),
            };
            print!("{rendered}");
            Ok(EXIT_CONDITION_FAILURE)
        }
    }
}

#[derive(Serialize)]
struct GenJson {
    format_version: u32,
    command: &'static str,
    out: String,
    r: usize,
    m: usize,
    m1: usize,
    n: usize,
    s: Vec<String>,
    seed: u64,
    conjugated: bool,
    broken: Option<String>,
}

fn cmd_gen(
    format: Format,
    params: GenParams,
    break_target: Option<BreakTarget>,
    out_path: &str,
) -> Result<u8, Failure> {
    let chain = match break_target {
        None => gen_valid_chain(&params),
        Some(t) => gen_broken_chain(&params, t.into()),
    }
    .map_err(|e| (e.to_string(), EXIT_USAGE))?;
    let text = chain_to_json(&chain, &[]);
    fs::write(out_path, text).map_err(|e| (format!("cannot write {out_path}: {e}"), EXIT_USAGE))?;
    let rendered = match format {
        Format::Json => to_json(&GenJson {
            format_version: 1,
            command: "gen",
            out: out_path.to_string(),
            r: params.r,
            m: params.m,
            m1: params.m1,
            n: params.n,
            s: params.s.to_coeff_strings(),
            seed: params.seed,
            conjugated: params.conjugate,
            broken: break_target.map(|t| Condition::from(t).to_string()),
        }),
        Format::Text => {
            let broken = match break_target {
                None => "valid".to_string(),
                Some(t) => format!("breaking condition {}", Condition::from(t)),
            };
            format!(
                "wrote {out_path}: r={} m={} m1={} n={} s={} seed={} ({broken})\n",
                params.r, params.m, params.m1, params.n, params.s, params.seed
            )
        }
    };
    print!("{rendered}");
    Ok(0)
}

#[derive(Serialize)]
struct DemoJson {
    format_version: u32,
    command: &'static str,
    check: CheckJson,
    solve: SolveJson,
}

fn cmd_demo(format: Format) -> Result<u8, Failure> {
    let chain = LinkedChain::counterexample();
    let zero = FiberPoint::At(Rational::from_integer(0.into()));
    let (reports, warnings) = chain.check_all();
    let solve = vector_bundle_check_with(&chain, &[]);

    // The demo asserts the expected anomaly before reporting it.
    let dim_at_zero = solve
        .fiber_dims
        .iter()
        .find(|(p, _)| *p == zero)
        .map(|(_, d)| *d);
    let internal = |message: String| -> Failure { (message, EXIT_INTERNAL) };
    if dim_at_zero != Some(4) {
        return Err(internal(format!(
            "internal assertion failed: fiber dimension at t=0 is {dim_at_zero:?}, expected 4"
        )));
    }
    if solve.generic_dim != 3 || solve.rm != 3 {
        return Err(internal(format!(
            "internal assertion failed: generic dim {} and rm {}, expected 3 and 3",
            solve.generic_dim, solve.rm
        )));
    }
    if solve.is_vector_bundle {
        return Err(internal(
            "internal assertion failed: the built-in chain must not be flat".to_string(),
        ));
    }

    let all_passed = reports.iter().all(ConditionReport::passed);
    let rendered = match format {
        Format::Json => to_json(&DemoJson {
            format_version: 1,
            command: "demo",
            check: CheckJson {
                format_version: 1,
                command: "check",
                conditions: reports.iter().map(condition_json).collect(),
                warnings: warnings.clone(),
                all_passed,
            },
            solve: solve_json(&solve, false),
        }),
        Format::Text => {
            let mut out = String::new();
            out.push_str("built-in chain: r=1 m=3 n=3 s=t^2\n");
            for report in &reports {
                render_condition_text(&mut out, report);
            }
            out.push_str(&render_solve_text(&solve, false));
            out.push_str(
                "the dimension jump 3 -> 4 at t=0 shows the fiberwise conditions
do not force a vector bundle once complementarity fails\n",
            );
            out
        }
    };
    print!("{rendered}");
    Ok(0)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    text.push('\n');
    text
}
