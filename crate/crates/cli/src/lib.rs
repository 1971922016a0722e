//! Argument parsing and dispatch for the `seqmat` binary.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::builder::PossibleValuesParser;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seqmat::exact::{big, display, format_rational, parse_rational};
use seqmat::norms::summary;
use seqmat::recurrence::window;
use seqmat::structmat::{circulant, hankel, left_circulant, r_circulant, semi_circulant, toeplitz};
use seqmat::theorems::{self, Shape};
use seqmat::verify::{check_identity, golden_ledger, run_preset};
use seqmat::{
    BigRational, BoundCheck, Error, Family, GridPreset, IdentityId, RecurrenceSpec, SeqKind,
    StructuredMatrix, TheoremId, Variant,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_LEDGER_DIVERGED: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "seqmat",
    version,
    about = "Third-order recurrences, structured-matrix norms and an errata ledger"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the terms Q[lo..=hi]
    Seq {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        hi: i64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build a structured matrix on the sequence and serialize it
    Matrix {
        #[command(flatten)]
        mat: MatrixArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Norm summary of a structured matrix
    Norm {
        #[command(flatten)]
        mat: MatrixArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate one closed-form identity next to its literal sum
    Identity {
        #[arg(long, value_parser = PossibleValuesParser::new(IdentityId::ALL.map(|i| i.as_str())))]
        id: String,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::AsPrinted)]
        variant: VariantArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check one norm theorem
    Bounds {
        #[arg(long, value_parser = PossibleValuesParser::new(TheoremId::ALL.map(|t| t.as_str())))]
        theorem: String,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        n: usize,
        /// Scalar of the r-circulant, as "p" or "p/q"
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        r: String,
        #[arg(long, value_enum, default_value_t = VariantArg::AsPrinted)]
        variant: VariantArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the verification grids and compare the ledger with the committed one
    Verify {
        #[arg(long, value_enum, default_value_t = PresetArg::Default)]
        grid_preset: PresetArg,
        /// Compare with this ledger file instead of the committed one
        #[arg(long)]
        golden: Option<std::path::PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct SeqArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    r0: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
}

#[derive(Args, Debug, Clone)]
struct MatrixArgs {
    #[command(flatten)]
    seq: SeqArgs,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    /// Scalar of the r-circulant, as "p" or "p/q"
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    r: String,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the output here instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyArg {
    Trib,
    Pp,
    General,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FormatArg {
    Json,
    Csv,
    Table,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum VariantArg {
    AsPrinted,
    Corrected,
    Repaired,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum KindArg {
    Rcirc,
    Circ,
    Lcirc,
    Semicirc,
    Hankel,
    Toeplitz,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PresetArg {
    Default,
    Smoke,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsPrinted => Variant::AsPrinted,
            VariantArg::Corrected => Variant::Corrected,
            VariantArg::Repaired => Variant::Repaired,
        }
    }
}

impl From<PresetArg> for GridPreset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Default => GridPreset::Default,
            PresetArg::Smoke => GridPreset::Smoke,
        }
    }
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
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

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(EXIT_USAGE, format!("error: {e}\n"))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, format!("error: {}\n", msg.into()))
}

/// Parses `argv` (including the program name) and runs the command.
/// `max_index` is the raw value of `SEQMAT_MAX_INDEX`, if set.
pub fn dispatch<I, T>(argv: I, max_index: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome::fail(EXIT_USAGE, text),
            };
        }
    };
    let cap = match max_index.map(str::parse::<u32>) {
        None => None,
        Some(Ok(cap)) => Some(cap),
        Some(Err(_)) => {
            return Outcome::fail(
                EXIT_USAGE,
                format!(
                    "error: SEQMAT_MAX_INDEX must be a non-negative integer, got {:?}\n",
                    max_index.unwrap_or("")
                ),
            )
        }
    };
    match run(cli.command, cap) {
        Ok((text, out)) => match write_out(&out, text) {
            Ok(o) => o,
            Err(Failure(code, msg)) => Outcome::fail(code, msg),
        },
        Err(Failure(code, msg)) => Outcome::fail(code, msg),
    }
}

fn write_out(out: &OutArgs, text: Rendered) -> Result<Outcome, Failure> {
    let Rendered { body, code, note } = text;
    let stdout = match &out.out {
        Some(path) => {
            std::fs::write(path, &body)
                .map_err(|e| usage(format!("--out {}: {e}", path.display())))?;
            String::new()
        }
        None => body,
    };
    Ok(Outcome {
        code,
        stdout,
        stderr: note,
    })
}

struct Rendered {
    body: String,
    code: i32,
    note: String,
}

impl Rendered {
    fn plain(body: String) -> Self {
        Rendered {
            body,
            code: EXIT_OK,
            note: String::new(),
        }
    }
}

fn build_spec(
    seq: &SeqArgs,
    family: FamilyArg,
    cap: Option<u32>,
) -> Result<RecurrenceSpec, Failure> {
    let (da, db, dc) = match family {
        FamilyArg::Pp => (1, 1, 1),
        _ => (0, 1, 1),
    };
    let seeds = (
        seq.a.unwrap_or(da),
        seq.b.unwrap_or(db),
        seq.c.unwrap_or(dc),
    );
    let coeffs_given = seq.p.is_some() || seq.q.is_some() || seq.r0.is_some();
    let spec = match family {
        FamilyArg::General => RecurrenceSpec::general(
            seq.p.unwrap_or(1),
            seq.q.unwrap_or(1),
            seq.r0.unwrap_or(1),
            seeds.0,
            seeds.1,
            seeds.2,
        )?,
        _ if coeffs_given => return Err(usage("--p/--q/--r0 only apply to --family general")),
        FamilyArg::Trib if seeds == (0, 1, 1) => RecurrenceSpec::tribonacci(),
        FamilyArg::Trib => RecurrenceSpec::generalized_tribonacci(seeds.0, seeds.1, seeds.2),
        FamilyArg::Pp => RecurrenceSpec::pell_padovan(seeds.0, seeds.1, seeds.2),
    };
    Ok(match cap {
        Some(cap) => spec.with_index_cap(cap),
        None => spec,
    })
}

/// The family an identifier is written for; `--family` may repeat it but not contradict it.
fn family_for(kind: SeqKind, seq: &SeqArgs, flag: &str, name: &str) -> Result<FamilyArg, Failure> {
    let implied = match kind {
        SeqKind::Tribonacci => Some(FamilyArg::Trib),
        SeqKind::PellPadovan => Some(FamilyArg::Pp),
        SeqKind::General => None,
    };
    match (implied, seq.family) {
        (Some(i), Some(f)) if i != f => Err(usage(format!(
            "{flag} {name} needs --family {}",
            i.to_possible_value().expect("named").get_name()
        ))),
        (Some(i), _) => Ok(i),
        (None, f) => Ok(f.unwrap_or(FamilyArg::General)),
    }
}

fn parse_r(r: &str) -> Result<BigRational, Failure> {
    parse_rational(r)
        .map_err(|_| usage(format!("--r expects an integer or p/q rational, got {r:?}")))
}

fn run(cmd: Command, cap: Option<u32>) -> Result<(Rendered, OutArgs), Failure> {
    match cmd {
        Command::Seq { seq, lo, hi, out } => {
            let spec = build_spec(&seq, seq.family.unwrap_or(FamilyArg::Trib), cap)?;
            let w = window(&spec, lo, hi)?;
            let body = match out.format.unwrap_or(FormatArg::Table) {
                FormatArg::Json => json(&w),
                FormatArg::Csv => csv_rows(
                    ["index", "term"],
                    w.terms
                        .iter()
                        .enumerate()
                        .map(|(k, t)| vec![(w.lo + k as i64).to_string(), t.to_string()]),
                )?,
                FormatArg::Table => {
                    let terms: Vec<String> = w.terms.iter().map(ToString::to_string).collect();
                    terms.join(" ") + "\n"
                }
            };
            Ok((Rendered::plain(body), out))
        }
        Command::Matrix { mat, out } => {
            let m = build_matrix(&mat, cap)?;
            let body = match out.format.unwrap_or(FormatArg::Table) {
                FormatArg::Json => m.to_json() + "\n",
                FormatArg::Csv => csv_rows_headless(
                    m.rows()
                        .iter()
                        .map(|r| r.iter().map(format_rational).collect()),
                )?,
                FormatArg::Table => matrix_table(&m),
            };
            Ok((Rendered::plain(body), out))
        }
        Command::Norm { mat, out } => {
            let s = summary(&build_matrix(&mat, cap)?)?;
            let body = match out.format.unwrap_or(FormatArg::Table) {
                FormatArg::Json => json(&s),
                FormatArg::Csv => csv_record(&s)?,
                FormatArg::Table => {
                    let mut t = String::new();
                    let rows: [(&str, String); 11] = [
                        ("frobenius_sq", display(&s.frobenius_sq)),
                        ("frobenius", s.frobenius.to_string()),
                        ("spectral_estimate", s.spectral_estimate.to_string()),
                        (
                            "spectral_lower_witness",
                            s.spectral_lower_witness.to_string(),
                        ),
                        ("spectral_iterations", s.spectral_iterations.to_string()),
                        ("spectral_converged", s.spectral_converged.to_string()),
                        ("max_abs", display(&s.max_abs)),
                        ("op_one", display(&s.op_one)),
                        ("op_inf", display(&s.op_inf)),
                        ("r1", s.r1.to_string()),
                        ("c1", s.c1.to_string()),
                    ];
                    for (k, v) in rows {
                        let _ = writeln!(t, "{k:<24}{v}");
                    }
                    t
                }
            };
            Ok((Rendered::plain(body), out))
        }
        Command::Identity {
            id,
            seq,
            n,
            variant,
            out,
        } => {
            let id: IdentityId = id.parse()?;
            let family = family_for(id.kind(), &seq, "--id", id.as_str())?;
            let spec = build_spec(&seq, family, cap)?;
            let c = check_identity(id, &spec, n, variant.into())?;
            let body = match out.format.unwrap_or(FormatArg::Table) {
                FormatArg::Json => json(&c),
                FormatArg::Csv => csv_rows(
                    ["identity_id", "variant", "n", "closed", "oracle", "verdict"],
                    [vec![
                        c.identity_id.as_str().to_string(),
                        c.variant.to_string(),
                        n.to_string(),
                        format_rational(&c.closed),
                        format_rational(&c.oracle),
                        format!("{:?}", c.verdict),
                    ]],
                )?,
                FormatArg::Table => format!(
                    "identity {} ({})\nn        {n}\nclosed   {}\noracle   {}\nverdict  {:?}\n",
                    c.identity_id.as_str(),
                    c.variant,
                    display(&c.closed),
                    display(&c.oracle),
                    c.verdict
                ),
            };
            Ok((Rendered::plain(body), out))
        }
        Command::Bounds {
            theorem,
            seq,
            n,
            r,
            variant,
            out,
        } => {
            let t: TheoremId = theorem.parse()?;
            let family = family_for(t.kind, &seq, "--theorem", t.as_str())?;
            let spec = build_spec(&seq, family, cap)?;
            let v: Variant = variant.into();
            let check = match t.shape {
                Shape::RcircBounds => theorems::rcirc_bounds(&spec, n, &parse_r(&r)?)?,
                Shape::Circ => theorems::circulant_report(&spec, n)?,
                Shape::Semicirc => theorems::semicirculant_frobenius(&spec, n, v)?,
                Shape::HankelFrob => theorems::hankel_frobenius(&spec, n, v)?,
                Shape::HankelSpec => theorems::hankel_spectral_bounds(&spec, n, v)?,
                Shape::HankelOneInf => theorems::hankel_one_inf(&spec, n)?,
            };
            let body = match out.format.unwrap_or(FormatArg::Table) {
                FormatArg::Json => json(&check),
                FormatArg::Csv => bounds_csv(&check)?,
                FormatArg::Table => bounds_table(&check),
            };
            Ok((Rendered::plain(body), out))
        }
        Command::Verify {
            grid_preset,
            golden,
            out,
        } => {
            let preset: GridPreset = grid_preset.into();
            let golden = match &golden {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("--golden {}: {e}", path.display())))?,
                None => golden_ledger(preset).to_string(),
            };
            let (_, ledger) = run_preset(preset)?;
            let fresh = ledger.to_json();
            let body = match out.format.unwrap_or(FormatArg::Table) {
                FormatArg::Json => fresh.clone(),
                FormatArg::Csv => ledger.to_csv()?,
                FormatArg::Table => ledger.to_markdown(),
            };
            let (code, note) = if fresh == golden {
                (EXIT_OK, String::new())
            } else {
                let first = divergence(&fresh, &golden);
                (
                    EXIT_LEDGER_DIVERGED,
                    format!(
                        "ledger differs from the committed {} ledger{first}\n",
                        preset.name()
                    ),
                )
            };
            Ok((Rendered { body, code, note }, out))
        }
    }
}

fn divergence(fresh: &str, golden: &str) -> String {
    fresh
        .lines()
        .zip(golden.lines())
        .position(|(a, b)| a != b)
        .map(|i| format!(" (first difference at line {})", i + 1))
        .unwrap_or_default()
}

fn build_matrix(mat: &MatrixArgs, cap: Option<u32>) -> Result<StructuredMatrix, Failure> {
    if mat.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let spec = build_spec(&mat.seq, mat.seq.family.unwrap_or(FamilyArg::Trib), cap)?;
    let n = mat.n as i64;
    let row = || -> Result<Vec<BigRational>, Failure> {
        let w = window(&spec, 0, n - 1)?;
        Ok(w.terms.iter().map(big).collect())
    };
    Ok(match mat.kind {
        KindArg::Rcirc => r_circulant(&row()?, &parse_r(&mat.r)?)?,
        KindArg::Circ => circulant(&row()?)?,
        KindArg::Lcirc => left_circulant(&row()?)?,
        KindArg::Semicirc => semi_circulant(&window(&spec, 1, n)?, mat.n)?,
        KindArg::Hankel => hankel(&window(&spec, 1, 2 * n - 1)?, mat.n)?,
        KindArg::Toeplitz => toeplitz(&window(&spec, -(n - 1), n - 1)?, mat.n)?,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn csv_error(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, format!("error: csv: {e}\n"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

fn csv_rows<const N: usize>(
    header: [&str; N],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_error)?;
    for r in rows {
        w.write_record(&r).map_err(csv_error)?;
    }
    finish(w)
}

fn csv_rows_headless(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(csv_error)?;
    }
    finish(w)
}

fn csv_record<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(value).map_err(csv_error)?;
    finish(w)
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn observed_text(c: &BoundCheck) -> String {
    match &c.observed {
        theorems::Observed::Norm(x) => x.to_string(),
        theorems::Observed::Exact(q) => format_rational(q),
    }
}

fn bounds_csv(c: &BoundCheck) -> Result<String, Failure> {
    csv_rows(
        [
            "theorem_id",
            "variant",
            "family",
            "n",
            "scalar_r",
            "lower",
            "upper",
            "closed_form",
            "observed",
            "verdict",
            "margin",
        ],
        [vec![
            c.theorem_id.as_str().to_string(),
            c.variant.to_string(),
            family_name(c.family).to_string(),
            c.n.to_string(),
            c.scalar_r.as_ref().map(format_rational).unwrap_or_default(),
            opt_f64(c.lower),
            opt_f64(c.upper),
            c.closed_form
                .as_ref()
                .map(format_rational)
                .unwrap_or_default(),
            observed_text(c),
            format!("{:?}", c.verdict),
            c.margin.to_string(),
        ]],
    )
}

fn family_name(f: Family) -> &'static str {
    f.name()
}

fn bounds_table(c: &BoundCheck) -> String {
    let mut t = String::new();
    let (a, b, cc) = c.seeds;
    let _ = writeln!(t, "theorem   {} ({})", c.theorem_id, c.variant);
    let _ = writeln!(t, "sequence  {} seeds ({a}, {b}, {cc})", c.family);
    let _ = writeln!(t, "n         {}", c.n);
    if let Some(r) = &c.scalar_r {
        let _ = writeln!(t, "r         {}", display(r));
    }
    if let Some(l) = c.lower {
        let _ = writeln!(t, "lower     {l}");
    }
    if let Some(u) = c.upper {
        let _ = writeln!(t, "upper     {u}");
    }
    if let Some(q) = &c.closed_form {
        let _ = writeln!(t, "closed    {}", display(q));
    }
    let observed = match &c.observed {
        theorems::Observed::Norm(x) => format!("≈{x}"),
        theorems::Observed::Exact(q) => display(q),
    };
    let _ = writeln!(t, "observed  {observed}");
    let _ = writeln!(t, "verdict   {:?}", c.verdict);
    if let Some(b) = c.bracket_verdict {
        let _ = writeln!(t, "bracket   {b:?}");
    }
    for d in &c.displays {
        let state = if d.agrees() { "agrees" } else { "differs" };
        let _ = writeln!(
            t,
            "display   {} {} vs direct {} ({state})",
            d.variant,
            display(&d.display),
            display(&d.direct)
        );
    }
    t
}

fn matrix_table(m: &StructuredMatrix) -> String {
    let cells: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(display).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let mut t = String::new();
    let _ = write!(t, "{:?} n={}", m.kind(), m.n());
    if let Some(r) = m.scalar_r() {
        let _ = write!(t, " r={}", display(r));
    }
    t.push('\n');
    for row in cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        let _ = writeln!(t, "{}", line.join(" "));
    }
    t
}
