use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bmhad_core::exactfield::json::{from_json, from_json_in};
use bmhad_core::exactfield::linalg::Matrix;
use bmhad_core::exactfield::{complex_embed, int, TowerElement};
use bmhad_core::pell::integral_r;
use bmhad_core::report::{run, ReportConfig, Suite};
use bmhad_core::scheme::build_petersen_line_scheme;
use bmhad_core::typeii::{
    dense_to_csv, dense_to_json, dense_type_ii, family_coefficients, family_to_json, is_hadamard, is_type_ii,
    non_butson_witness, span_condition, Case, TypeIIMatrix,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bmhad", version, about = "Type-II and complex Hadamard matrices in a 3-class Bose-Mesner algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a weight family, or the dense 15x15 matrix at q = 4.
    Construct(ConstructArgs),
    /// Check type-II, Hadamard, Butson and isolation properties.
    Verify(VerifyArgs),
    /// Run check suites and print a pass/fail report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args)]
struct FamilyArgs {
    /// One of i, ii, iii, iv, v, vi.
    #[arg(long)]
    case: Case,
    #[arg(long, default_value_t = 4)]
    q: i64,
    /// Sign choice of the quadratic branch (+ or -).
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    branch: i8,
    /// Sign of r (only matters for case vi).
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    r_sign: i8,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Write the dense matrix; defaults to on when q = 4.
    #[arg(long)]
    dense: Option<bool>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Decimal digits for numeric displays.
    #[arg(long, default_value_t = 30)]
    precision: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "input")]
    case: Option<Case>,
    #[arg(long, default_value_t = 4)]
    q: i64,
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    branch: i8,
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    r_sign: i8,
    /// Dense matrix file written by `construct`.
    #[arg(long, conflicts_with = "case")]
    input: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 4)]
    q: i64,
    /// Range of Pell sequence indices, as lo..hi.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<(i64, i64)>,
    /// Largest q in the non-vanishing sweeps.
    #[arg(long, env = "HW_SWEEP_BOUND", default_value_t = 200)]
    sweep_bound: i64,
    /// Skip the span-condition rank computations.
    #[arg(long)]
    no_span: bool,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s {
        "+" | "+1" | "1" | "plus" => Ok(1),
        "-" | "-1" | "minus" => Ok(-1),
        _ => Err(format!("expected + or -, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err("empty range".into());
    }
    Ok((lo, hi))
}

fn check_q(q: i64) -> Result<()> {
    if q < 4 || q % 2 != 0 {
        bail!("q must be an even integer >= 4, got {q}");
    }
    Ok(())
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn build(f: &FamilyArgs) -> Result<TypeIIMatrix> {
    check_q(f.q)?;
    let fam = family_coefficients(f.case, &int(f.q), f.r_sign, f.branch)?;
    let mut tm = TypeIIMatrix::from_family(&fam);
    if f.q == 4 {
        tm = tm.with_scheme(build_petersen_line_scheme()?);
    }
    Ok(tm)
}

fn construct(a: ConstructArgs) -> Result<()> {
    check_q(a.family.q)?;
    let fam = family_coefficients(a.family.case, &int(a.family.q), a.family.r_sign, a.family.branch)?;
    let want_dense = a.dense.unwrap_or(a.family.q == 4);
    if !want_dense {
        let text = match a.format {
            Format::Csv => bail!("csv output needs a dense matrix"),
            Format::Json => {
                let mut v = family_to_json(&fam);
                v["r_integral"] = json!(integral_r(a.family.q).map(|r| r.to_string()));
                json_text(&v)
            }
            Format::Pretty => {
                let mut s = format!("case {} q={} branch={} r_sign={}\n", fam.case.label(), fam.q, fam.branch, fam.r_sign);
                if let Some(r) = &fam.r {
                    s.push_str(&format!("r = {}\n", r.reduce()));
                } else if let Some(r) = integral_r(a.family.q) {
                    s.push_str(&format!("r = {r} (integral)\n"));
                }
                for (k, w) in fam.weights.iter().enumerate() {
                    s.push_str(&format!("w{k} = {}\n", w.reduce()));
                }
                s
            }
        };
        return emit(&text, &a.output);
    }
    if a.family.q != 4 {
        bail!("no concrete scheme for q = {}; dense output is only available at q = 4", a.family.q);
    }
    let tm = TypeIIMatrix::from_family(&fam).with_scheme(build_petersen_line_scheme()?);
    let dense = tm.dense().context("dense expansion failed")?;
    let text = match a.format {
        Format::Json => json_text(&dense_to_json(&dense)),
        Format::Csv => dense_to_csv(&dense, a.precision)?,
        Format::Pretty => {
            let mut s = String::new();
            for row in &dense {
                let cells: Vec<String> = row.iter().map(|x| x.reduce().to_string()).collect();
                s.push_str(&cells.join("  "));
                s.push('\n');
            }
            s
        }
    };
    emit(&text, &a.output)
}

fn read_dense(path: &PathBuf) -> Result<Matrix<TowerElement>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text)?;
    if v.get("format_version").and_then(Value::as_u64) != Some(1) {
        bail!("unsupported or missing format_version");
    }
    let rows = v.get("entries").and_then(Value::as_array).context("missing entries")?;
    let first = rows.first().and_then(|r| r.get(0)).context("empty matrix")?;
    let tower = from_json(first)?.tower().clone();
    rows.iter()
        .map(|r| {
            r.as_array()
                .context("row must be an array")?
                .iter()
                .map(|e| Ok(from_json_in(e, &tower)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let (report, ok) = if let Some(path) = &a.input {
        let m = read_dense(path)?;
        let type_ii = dense_type_ii(&m);
        let mut defect: f64 = 0.0;
        for x in m.iter().flatten() {
            let b = complex_embed(x, &vec![1; x.tower().depth()], 20)?;
            defect = defect.max(((b.re_f64().powi(2) + b.im_f64().powi(2)).sqrt() - 1.0).abs());
        }
        let hadamard = type_ii && defect < 1e-12;
        let mut v = json!({"n": m.len(), "type_ii": type_ii, "hadamard": hadamard, "modulus_defect": defect});
        if hadamard {
            v["isolated"] = json!(span_condition(&m)?);
        }
        (v, type_ii)
    } else {
        let fam = FamilyArgs { case: a.case.expect("clap enforces case"), q: a.q, branch: a.branch, r_sign: a.r_sign };
        let tm = build(&fam)?;
        let f = family_coefficients(fam.case, &int(fam.q), fam.r_sign, fam.branch)?;
        let cert = is_type_ii(&tm);
        let h = is_hadamard(&tm)?;
        let mut v = json!({
            "case": fam.case.label(),
            "q": fam.q,
            "branch": fam.branch,
            "r_sign": fam.r_sign,
            "type_ii": cert.holds(),
            "hadamard": h.hadamard,
        });
        if h.hadamard {
            v["non_butson_witness"] = match non_butson_witness(&f) {
                Ok(((i, j), x)) => json!({"pair": [i, j], "a": x.to_string()}),
                Err(_) => Value::Null,
            };
            if let Some(d) = tm.dense() {
                v["isolated"] = json!(span_condition(&d)?);
            }
        }
        (v, cert.holds())
    };
    emit(&json_text(&report), &a.output)?;
    Ok(ok)
}

fn report(a: ReportArgs) -> Result<ExitCode> {
    check_q(a.q)?;
    if a.sweep_bound < a.q || a.sweep_bound % 2 != 0 {
        bail!("sweep bound must be even and at least q");
    }
    let mut cfg = ReportConfig { q: a.q, sweep_bound: a.sweep_bound, include_span: !a.no_span, ..ReportConfig::default() };
    if let Some(r) = a.range {
        cfg.pell_range = r;
    }
    let r = run(a.suite, &cfg);
    let text = match a.format {
        Format::Json => json_text(&r.to_json()),
        Format::Csv => r.to_csv(),
        Format::Pretty => r.to_pretty(),
    };
    emit(&text, &a.output)?;
    Ok(match r.first_failing_suite() {
        None => ExitCode::SUCCESS,
        Some(s) => ExitCode::from(s.exit_code() as u8),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a).map(|_| ExitCode::SUCCESS),
        Command::Verify(a) => verify(a).map(|ok| if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE }),
        Command::Report(a) => report(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
