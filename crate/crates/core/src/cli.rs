//! Command-line front end. Data goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 2 input error, 3 non-positive entry, 4 `K = 1`
//! without `--allow-degenerate`, 5 not two-valued or not symmetric, 6 no
//! unique positive root.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::diophantine::{cbrt, cbrt_approximants, cbrt_minus_one, cfrac_algebraic, compare_report, ContinuedFraction};
use crate::equivalence::{classify_two_valued, transport_by, Class, EquivalenceWitness};
use crate::error::{Error, Result};
use crate::families::{FamilyLimit, FamilySpec, FamilyTag, MbnParams, StochasticCheck, DEFAULT_PRECISION};
use crate::matrix::{read_matrix_file, AnyMatrix, Matrix, Mode, Scalar};
use crate::numerics::{format_rational, parse_rational, to_decimal, RationalInterval, Rounding};
use crate::roots::Polynomial;
use crate::scaling::{sinkhorn_iterate, sinkhorn_limit, sinkhorn_pairs, SinkhornOptions};

#[derive(Debug, Parser)]
#[command(name = "sinkhorn", version, about = "Sinkhorn scaling, closed-form limits and cube-root approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Alternate row and column scaling of a matrix.
    Scale(ScaleArgs),
    /// Closed-form Sinkhorn limit of a family.
    Limit(LimitArgs),
    /// Equivalence class of a two-valued 3x3 matrix.
    Classify(ClassifyArgs),
    /// Exact iterates of A6(K) as approximations of K^(1/3).
    Approx(ApproxArgs),
    /// Continued fraction of an algebraic number.
    Cfrac(CfracArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Decimal places in printed values.
    #[arg(long, env = "SINKHORN_PRECISION", default_value_t = 10)]
    digits: u32,
    /// Truncate decimals instead of rounding to nearest.
    #[arg(long)]
    truncate: bool,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

impl Output {
    fn rounding(&self) -> Rounding {
        if self.truncate {
            Rounding::Truncate
        } else {
            Rounding::Nearest
        }
    }
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// A1..A7 or MBN.
    #[arg(long)]
    family: Option<String>,
    /// Family parameter, e.g. 2, 3/2 or 0.5 (exact).
    #[arg(long = "K")]
    big_k: Option<String>,
    /// MBN: size of the first block.
    #[arg(long = "k")]
    k: Option<usize>,
    /// MBN: size of the second block.
    #[arg(long = "l")]
    l: Option<usize>,
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long = "B")]
    b: Option<String>,
    #[arg(long = "N")]
    n: Option<String>,
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>> {
        let Some(family) = &self.family else { return Ok(None) };
        let tag: FamilyTag = family.parse()?;
        let value = |name: &str, v: &Option<String>| -> Result<BigRational> {
            let s = v.as_deref().ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for {tag}")))?;
            parse_rational(s)
        };
        if tag == FamilyTag::Mbn {
            let size = |name: &str, v: Option<usize>| v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for MBN")));
            let params = MbnParams::new(
                size("k", self.k)?,
                size("l", self.l)?,
                value("M", &self.m)?,
                value("B", &self.b)?,
                value("N", &self.n)?,
            )?;
            return Ok(Some(FamilySpec::mbn(params)));
        }
        Ok(Some(FamilySpec::family(tag, value("K", &self.big_k)?)?))
    }
}

#[derive(Debug, Args)]
struct ScaleArgs {
    /// Matrix file, text or JSON.
    #[arg(long, conflicts_with = "family")]
    file: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
    /// Arithmetic: float or rational. Defaults to the file's declared mode.
    #[arg(long)]
    mode: Option<Mode>,
    /// Row+column pairs to run.
    #[arg(long, conflicts_with = "steps")]
    pairs: Option<usize>,
    /// Elementary scalings to run, the first a row scaling.
    #[arg(long)]
    steps: Option<usize>,
    /// Stop once every row and column sum is within this of one.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_pairs: usize,
    /// Print every snapshot, not only the last.
    #[arg(long)]
    trace: bool,
    /// Also write the final matrix here (JSON if the name ends in .json).
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Replace K = 1 by the uniform matrix instead of failing.
    #[arg(long)]
    allow_degenerate: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    /// Integer K >= 2.
    #[arg(long = "K")]
    k: BigInt,
    #[arg(long, default_value_t = 6)]
    steps: usize,
    /// Compare against this many continued-fraction convergents.
    #[arg(long)]
    compare: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct CfracArgs {
    /// Expand K^(1/3).
    #[arg(long, conflicts_with = "poly")]
    cbrt: Option<String>,
    /// With --cbrt: expand K^(1/3) - 1 instead.
    #[arg(long, requires = "cbrt")]
    minus_one: bool,
    /// Polynomial coefficients, constant term first, comma separated.
    #[arg(long, requires_all = ["lo", "hi"])]
    poly: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<String>,
    #[arg(long, default_value_t = 10)]
    terms: usize,
    #[command(flatten)]
    out: Output,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Scale(a) => cmd_scale(a),
        Command::Limit(a) => cmd_limit(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Approx(a) => cmd_approx(a),
        Command::Cfrac(a) => cmd_cfrac(a),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = writeln!(out);
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn render_matrix<T: Scalar>(m: &Matrix<T>, places: u32, rounding: Rounding) -> String {
    let cells = m.render(places, rounding);
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    cells
        .iter()
        .map(|row| row.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn json_cells<T: Scalar>(m: &Matrix<T>, places: u32, rounding: Rounding) -> Value {
    json!(m.render(places, rounding))
}

fn write_matrix<T: Scalar>(path: &Path, m: &Matrix<T>) -> Result<()> {
    let body = if path.extension().is_some_and(|e| e == "json") {
        serde_json::to_string_pretty(&m.to_json()).expect("matrix JSON") + "\n"
    } else {
        m.to_text()
    };
    std::fs::write(path, body).map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn load_input(a: &ScaleArgs) -> Result<AnyMatrix> {
    let m = match (&a.file, a.family.spec()?) {
        (Some(path), _) => read_matrix_file(path)?,
        (None, Some(spec)) => AnyMatrix::Rational(spec.matrix()),
        (None, None) => return Err(Error::InvalidParameter("give --file or --family".into())),
    };
    let default = if a.file.is_some() { m.mode() } else { Mode::Float };
    m.into_mode(a.mode.unwrap_or(default))
}

fn cmd_scale(a: &ScaleArgs) -> Result<String> {
    if !(a.tol > 0.0) {
        return Err(Error::InvalidParameter("--tol must be positive".into()));
    }
    match load_input(a)? {
        AnyMatrix::Float(m) => scale_float(a, &m),
        AnyMatrix::Rational(m) => scale_exact(a, &m),
    }
}

fn steps_requested(a: &ScaleArgs) -> Result<Option<usize>> {
    match (a.pairs, a.steps) {
        (Some(0), _) | (_, Some(0)) => Err(Error::InvalidParameter("step counts must be at least 1".into())),
        (Some(p), _) => Ok(Some(2 * p)),
        (None, s) => Ok(s),
    }
}

fn summary<T: Scalar>(m: &Matrix<T>, steps: usize, converged: Option<bool>, out: &Output) -> (String, Value) {
    let residual = m.stochastic_residual();
    let places = out.digits;
    let rounding = out.rounding();
    let mut text = format!("{}\n", render_matrix(m, places, rounding));
    text.push_str(&format!("steps: {steps} ({} pairs)\n", steps / 2));
    text.push_str(&format!("residual: {:.3e}\n", residual.to_f64()));
    if let Some(c) = converged {
        text.push_str(&format!("converged: {c}\n"));
    }
    let json = json!({
        "mode": T::MODE.to_string(),
        "steps": steps,
        "pairs": steps / 2,
        "converged": converged,
        "residual": residual.render(places.max(3), rounding),
        "entries": json_cells(m, places, rounding),
        "matrix": m.to_json(),
    });
    (text, json)
}

fn scale_float(a: &ScaleArgs, m: &Matrix<f64>) -> Result<String> {
    let (last, steps, converged, trace) = match steps_requested(a)? {
        Some(steps) if steps % 2 == 1 || a.trace => {
            let t = sinkhorn_iterate(m, steps)?;
            (t.last().clone(), steps, None, Some(t))
        }
        Some(steps) => {
            let r = sinkhorn_pairs(m, steps / 2)?;
            (r.limit, steps, None, None)
        }
        None => {
            let opts = SinkhornOptions { tol: a.tol, max_pairs: a.max_pairs };
            let r = sinkhorn_limit(m, &opts)?;
            if a.trace {
                let t = sinkhorn_iterate(m, r.steps_taken)?;
                (r.limit, r.steps_taken, Some(r.converged), Some(t))
            } else {
                (r.limit, r.steps_taken, Some(r.converged), None)
            }
        }
    };
    finish_scale(a, &last, steps, converged, trace.map(|t| t.to_json(a.out.digits, a.out.rounding())))
}

fn scale_exact(a: &ScaleArgs, m: &Matrix<BigRational>) -> Result<String> {
    let steps = steps_requested(a)?
        .ok_or_else(|| Error::InvalidParameter("rational mode needs --steps or --pairs".into()))?;
    let t = sinkhorn_iterate(m, steps)?;
    let trace = a.trace.then(|| t.to_json(a.out.digits, a.out.rounding()));
    finish_scale(a, t.last(), steps, None, trace)
}

fn finish_scale<T: Scalar>(
    a: &ScaleArgs,
    last: &Matrix<T>,
    steps: usize,
    converged: Option<bool>,
    trace: Option<Value>,
) -> Result<String> {
    if let Some(path) = &a.output {
        write_matrix(path, last)?;
    }
    let (text, mut json) = summary(last, steps, converged, &a.out);
    if a.out.json {
        if let Some(t) = trace {
            json["trace"] = t;
        }
        return Ok(serde_json::to_string_pretty(&json).expect("JSON"));
    }
    let Some(Value::Array(snaps)) = trace else { return Ok(text) };
    let mut s = String::new();
    for snap in &snaps {
        s.push_str(&format!("step {} ({})\n", snap["index"], snap["kind"].as_str().unwrap_or("")));
        if let Some(rows) = snap["entries"].as_array() {
            for row in rows {
                let cells: Vec<&str> = row.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                s.push_str(&cells.join("  "));
                s.push('\n');
            }
        }
        s.push('\n');
    }
    s.push_str(&text);
    Ok(s)
}

fn check_limit(limit: &FamilyLimit, digits: u32) -> Result<()> {
    match limit.check {
        StochasticCheck::Exact => Ok(()),
        StochasticCheck::Numeric(d) if d <= 10f64.powi(-(digits as i32)).max(1e-20) => Ok(()),
        StochasticCheck::Numeric(_) => Err(Error::NotDoublyStochastic),
    }
}

fn limit_text(limit: &FamilyLimit, places: u32, rounding: Rounding) -> String {
    let mut s = format!("family: {}\nshape: {}\n", limit.tag, limit.shape);
    if limit.degenerate {
        s.push_str("degenerate: K = 1, uniform limit\n");
    }
    let line = |e: &crate::families::LimitEntry| match &e.exact {
        Some(x) => format!("{} = {} = {}\n", e.name, x, to_decimal(&e.value, places, rounding)),
        None => format!("{} = {}\n", e.name, to_decimal(&e.value, places, rounding)),
    };
    s.push_str("entries:\n");
    for e in &limit.entries {
        s.push_str("  ");
        s.push_str(&line(e));
    }
    s.push_str("scaling X = diag(");
    s.push_str(&limit.scaling_pattern.iter().map(|&i| limit.scaling[i].name.as_str()).collect::<Vec<_>>().join(", "));
    s.push_str("):\n");
    for e in &limit.scaling {
        s.push_str("  ");
        s.push_str(&line(e));
    }
    if let Some((p, iv)) = &limit.root {
        s.push_str(&format!("root of {} in [{}, {}]\n", p.display_in("y"), to_decimal(iv.lo(), places + 2, Rounding::Truncate), to_decimal(iv.hi(), places + 2, Rounding::Truncate)));
    }
    s.push_str("limit:\n");
    for row in limit.value_matrix().to_rows() {
        let cells: Vec<String> = row.iter().map(|v| to_decimal(v, places, rounding)).collect();
        s.push_str(&format!("  {}\n", cells.join("  ")));
    }
    s.push_str(&match limit.check {
        StochasticCheck::Exact => "doubly stochastic: exact\n".to_string(),
        StochasticCheck::Numeric(d) => format!("doubly stochastic: within {d:.1e}\n"),
    });
    s
}

fn cmd_limit(a: &LimitArgs) -> Result<String> {
    let spec = a.family.spec()?.ok_or_else(|| Error::InvalidParameter("--family is required".into()))?;
    let precision = DEFAULT_PRECISION.max(a.out.digits + 10);
    let limit = if a.allow_degenerate { spec.limit_allowing_degenerate(precision)? } else { spec.limit(precision)? };
    check_limit(&limit, a.out.digits)?;
    if a.out.json {
        return Ok(serde_json::to_string_pretty(&limit.to_json(a.out.digits, a.out.rounding())).expect("JSON"));
    }
    Ok(limit_text(&limit, a.out.digits, a.out.rounding()))
}

/// `S(A) = P⁻¹·S(B)·Q⁻¹` from the closed form of the canonical `B`.
fn classified_limit<T: Scalar>(w: &EquivalenceWitness<T>) -> Result<Matrix<f64>> {
    let canonical = match w.family {
        Class::Uniform => Matrix::uniform(3),
        Class::Family(tag) => {
            let k = w.k.to_rational().ok_or_else(|| Error::InvalidParameter("K is not finite".into()))?;
            FamilySpec::family(tag, k)?.limit_allowing_degenerate(DEFAULT_PRECISION)?.matrix
        }
    };
    transport_by(&canonical, &w.equivalence().inverse())
}

fn witness_output<T: Scalar>(w: &EquivalenceWitness<T>, out: &Output) -> Result<String> {
    let limit = classified_limit(w)?;
    let rounding = out.rounding();
    if out.json {
        let mut j = w.to_json();
        j["limit"] = json_cells(&limit, out.digits, rounding);
        return Ok(serde_json::to_string_pretty(&j).expect("JSON"));
    }
    let scalar = |v: &T| v.to_rational().map_or_else(|| v.to_f64().to_string(), |r| format_rational(&r));
    let perm = |p: &crate::matrix::Permutation| p.one_based().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    Ok(format!(
        "family: {}\nK: {}\nlambda: {}\nP: [{}]\nQ: [{}]\nlimit:\n{}\n",
        w.family,
        scalar(&w.k),
        scalar(&w.lambda),
        perm(&w.p),
        perm(&w.q),
        render_matrix(&limit, out.digits, rounding)
    ))
}

fn cmd_classify(a: &ClassifyArgs) -> Result<String> {
    match read_matrix_file(&a.file)? {
        AnyMatrix::Rational(m) => witness_output(&classify_two_valued(&m)?, &a.out),
        AnyMatrix::Float(m) => witness_output(&classify_two_valued(&m)?, &a.out),
    }
}

fn cmd_approx(a: &ApproxArgs) -> Result<String> {
    let (places, rounding) = (a.out.digits, a.out.rounding());
    if let Some(terms) = a.compare {
        let report = compare_report(&a.k, a.steps, terms)?;
        return Ok(if a.out.json {
            serde_json::to_string_pretty(&report.to_json(places, rounding)).expect("JSON")
        } else {
            report.to_text(places, rounding)
        });
    }
    let table = cbrt_approximants(&a.k, a.steps)?;
    Ok(if a.out.json {
        serde_json::to_string_pretty(&table.to_json(places, rounding)).expect("JSON")
    } else {
        table.to_text(places, rounding)
    })
}

fn parse_poly(s: &str) -> Result<Polynomial> {
    let coeffs = s.split(',').map(|c| parse_rational(c.trim())).collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs))
}

fn cfrac_output(terms: &[BigInt], convergents: &[BigRational], finite: bool, out: &Output) -> String {
    if out.json {
        let j = json!({
            "terms": terms.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "convergents": convergents.iter().map(format_rational).collect::<Vec<_>>(),
            "finite": finite,
        });
        return serde_json::to_string_pretty(&j).expect("JSON");
    }
    let list = terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let mut s = format!("[{list}{}]\n", if finite { "" } else { ", ..." });
    for (i, c) in convergents.iter().enumerate() {
        s.push_str(&format!("{i:>3}  {:>24}  {}\n", format_rational(c), to_decimal(c, out.digits, out.rounding())));
    }
    s
}

fn cmd_cfrac(a: &CfracArgs) -> Result<String> {
    let (p, iv) = match (&a.cbrt, &a.poly) {
        (Some(k), _) => {
            let k = parse_rational(k)?;
            if a.minus_one {
                cbrt_minus_one(&k)?
            } else {
                cbrt(&k)?
            }
        }
        (None, Some(poly)) => {
            let bound = |v: &Option<String>| parse_rational(v.as_deref().expect("required by clap"));
            (parse_poly(poly)?, RationalInterval::new(bound(&a.lo)?, bound(&a.hi)?)?)
        }
        (None, None) => return Err(Error::InvalidParameter("give --cbrt or --poly".into())),
    };
    match cfrac_algebraic(&p, &iv, a.terms) {
        Ok(cf) => Ok(cfrac_output(&cf.terms, &cf.convergents, false, &a.out)),
        Err(Error::RationalRoot(terms)) => {
            let cf = ContinuedFraction::from_terms(terms, Vec::new());
            Ok(cfrac_output(&cf.terms, &cf.convergents, true, &a.out))
        }
        Err(e) => Err(e),
    }
}
