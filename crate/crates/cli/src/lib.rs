//! The `mingap` command line: family construction, spectra, bands, recurrence
//! sweeps, audits and SVG figures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use mingap_core::analysis::{
    build_clique_cover, convergence_study, gap_interval_audit, interlacing_check, leading_blocks,
    minus_one_multiplicity_from, recurrence_kind, simplicity_audit_with, AuditRecord,
};
use mingap_core::eigen::{sym_eigen, DEFAULT_CLUSTER_TOL};
use mingap_core::equitable::{
    quotient_matrix, quotient_spectrum, split_spectra, structural_partition, SPLIT_TOL,
};
use mingap_core::figures::{band_diagram, eigenvector_chart, lattice_for, spectrum_scatter};
use mingap_core::floquet::{sample_bands, DEFAULT_SAMPLES};
use mingap_core::format::{csv_row, fmt_num};
use mingap_core::graph::adjacency_matrix;
use mingap_core::recurrence::boundary_residual;
use mingap_core::verify::{verify_all, VerifyConfig};
use mingap_core::{BlockKind, Family, FamilyDescriptor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mingap", version, about = "Spectra of minimal-spectral-gap cubic and quartic graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit a family member as graph JSON.
    Construct(ConstructArgs),
    /// Full adjacency spectrum with multiplicity clusters.
    Spectrum(SpectrumArgs),
    /// Block partition, quotient matrix and the first/second type split.
    Quotient(MemberArgs),
    /// Sampled Bloch bands of the periodic lattice.
    Bands(BandsArgs),
    /// Gap-interval audit over a range of orders.
    Gaps(RangeArgs),
    /// Smallest-eigenvalue convergence table.
    Converge(RangeArgs),
    /// Simplicity, -1 multiplicity, clique-cover and interlacing audits.
    Audit(AuditArgs),
    /// Boundary residual of the main-component recurrence.
    Residual(ResidualArgs),
    /// SVG figures.
    Plot(PlotArgs),
    /// Run every acceptance check and print a JSON summary.
    VerifyAll(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Delta,
    Cubic,
    Gamma,
    Quartic,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Delta => Family::Delta,
            FamilyArg::Cubic => Family::Cubic,
            FamilyArg::Gamma => Family::Gamma,
            FamilyArg::Quartic => Family::Quartic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct MemberArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum, required_unless_present = "left")]
    pub family: Option<FamilyArg>,
    #[arg(long, required_unless_present = "left")]
    pub n: Option<usize>,
    /// Quartic assembly instead of a family member: left end block (D1..D5).
    #[arg(long, requires_all = ["q", "right"], conflicts_with_all = ["family", "n"])]
    pub left: Option<String>,
    /// Number of middle blocks of the assembly.
    #[arg(long)]
    pub q: Option<usize>,
    /// Right end block (D1m..D5m).
    #[arg(long)]
    pub right: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub member: MemberArgs,
    /// Include unit eigenvectors (JSON only).
    #[arg(long)]
    pub vectors: bool,
    #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BandsArgs {
    /// Lattice of this family (delta/cubic or gamma/quartic).
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RangeArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Orders as `start:stop:step` (inclusive), or a single order.
    #[arg(long)]
    pub range: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AuditKind {
    Simplicity,
    Multiplicity,
    CliqueCover,
    Interlacing,
    All,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub range: String,
    #[arg(long, value_enum, default_value = "all")]
    pub check: AuditKind,
    #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ResidualArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Comma-separated eigenvalue candidates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub lambda: Vec<f64>,
    /// Recurrence lengths as `start:stop:step`.
    #[arg(long, default_value = "2:40:1")]
    pub m: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Band,
    Scatter,
    Eigenvector,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Order for eigenvector charts.
    #[arg(long)]
    pub n: Option<usize>,
    /// Orders for the scatter.
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Eigenvectors drawn, from the smallest eigenvalue up.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 202)]
    pub max_cubic_n: usize,
    #[arg(long, default_value_t = 101)]
    pub max_quartic_n: usize,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(mingap_core::Error),
    Io(std::io::Error),
}

impl From<mingap_core::Error> for CliError {
    fn from(e: mingap_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `start:stop:step` (or a bare order) and keeps the orders the family
/// admits. Skipped orders are reported through `warn`.
pub fn parse_range(text: &str, family: Family, mut warn: impl FnMut(String)) -> CliResult<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad number {s:?} in range {text:?}")))
    };
    let (start, stop, step) = match parts.as_slice() {
        [a] => {
            let a = num(a)?;
            (a, a, 1)
        }
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(CliError::Usage(format!("range {text:?} is not start:stop:step"))),
    };
    if step == 0 || stop < start {
        return Err(CliError::Usage(format!("range {text:?} is empty")));
    }
    let mut out = Vec::new();
    for n in (start..=stop).step_by(step) {
        if family.admits(n) {
            out.push(n);
        } else {
            warn(format!("skipping n = {n}: not an order of the {} family", family.as_str()));
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!(
            "range {text:?} has no valid {} orders",
            family.as_str()
        )));
    }
    Ok(out)
}

fn warn(msg: String) {
    eprintln!("warning: {msg}");
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(p: &Path, text: &str) -> CliResult<()> {
    std::fs::write(p, text).map_err(CliError::Io)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn member(family: FamilyArg, n: usize) -> CliResult<FamilyDescriptor> {
    FamilyDescriptor::for_family(family.into(), n).map_err(|e| CliError::Usage(e.to_string()))
}

fn construct(a: &ConstructArgs) -> CliResult<i32> {
    let fd = match (&a.left, a.family, a.n) {
        (Some(l), _, _) => {
            let left = BlockKind::parse(l).map_err(|e| CliError::Usage(e.to_string()))?;
            let right = BlockKind::parse(a.right.as_deref().unwrap_or_default())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            FamilyDescriptor::quartic(left, a.q.unwrap_or_default(), right)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, Some(f), Some(n)) => member(f, n)?,
        _ => return Err(CliError::Usage("need --family and --n, or --left/--q/--right".into())),
    };
    emit(&a.out, &fd.build().to_json())?;
    Ok(EXIT_OK)
}

fn spectrum(a: &SpectrumArgs) -> CliResult<i32> {
    let fd = member(a.member.family, a.member.n)?;
    let s = sym_eigen(&adjacency_matrix(&fd.build()), a.vectors)?;
    let text = match a.format {
        Format::Csv => {
            if a.vectors {
                warn("eigenvectors are only written in JSON".into());
            }
            s.to_csv(a.tol)
        }
        Format::Json => pretty(&json!({
            "family": fd.family, "n": fd.n,
            "values": s.values,
            "clusters": s.clusters_with(a.tol),
            "vectors": s.vectors,
        })),
    };
    emit(&a.member.out, &text)?;
    Ok(EXIT_OK)
}

fn quotient(a: &MemberArgs) -> CliResult<i32> {
    let fd = member(a.family, a.n)?;
    let g = fd.build();
    let p = structural_partition(&fd, &g)?;
    let qm = quotient_matrix(&g, &p)?;
    let first = quotient_spectrum(&qm)?;
    let full = sym_eigen(&adjacency_matrix(&g), false)?;
    let second = split_spectra(&full, &first, SPLIT_TOL)?;
    let v = json!({
        "family": fd.family, "n": fd.n,
        "blocks": fd.blocks.iter().map(|b| b.name()).collect::<Vec<_>>(),
        "partition": p,
        "quotient": qm,
        "first_type": first.values,
        "second_type": second.values,
    });
    emit(&a.out, &pretty(&v))?;
    Ok(EXIT_OK)
}

fn bands(a: &BandsArgs) -> CliResult<i32> {
    let bs = sample_bands(&lattice_for(a.family.into()), a.samples)?;
    let text = match a.format {
        Format::Csv => bs.to_csv(),
        Format::Json => bs.summary_json(),
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

/// Gap of the family: `(lo, hi, closed_lo, closed_hi)`.
fn family_gap(f: Family) -> (f64, f64, bool, bool) {
    if f.is_cubic() {
        (1.0, 5f64.sqrt(), false, true)
    } else {
        ((-1.0 + 17f64.sqrt()) / 2.0, 3.0, true, true)
    }
}

fn gaps(a: &RangeArgs) -> CliResult<i32> {
    let family: Family = a.family.into();
    let ns = parse_range(&a.range, family, warn)?;
    let (lo, hi, clo, chi) = family_gap(family);
    let reports = ns
        .par_iter()
        .map(|&n| {
            let fd = FamilyDescriptor::for_family(family, n)?;
            let s = sym_eigen(&adjacency_matrix(&fd.build()), false)?;
            Ok(gap_interval_audit(&s, lo, hi, clo, chi, a.tol).labelled(family.as_str()))
        })
        .collect::<mingap_core::Result<Vec<_>>>()?;
    let text = match a.format {
        Format::Csv => {
            let mut t = String::from("n,pass,offending,min_distance\n");
            for r in &reports {
                let off: Vec<String> = r.offending.iter().map(|&x| fmt_num(x)).collect();
                t.push_str(&csv_row(&[
                    r.n.to_string(),
                    r.pass.to_string(),
                    off.join(";"),
                    fmt_num(r.min_distance),
                ]));
            }
            t
        }
        Format::Json => pretty(&json!(reports)),
    };
    emit(&a.out, &text)?;
    Ok(if reports.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_AUDIT })
}

fn converge(a: &RangeArgs) -> CliResult<i32> {
    let family: Family = a.family.into();
    let ns = parse_range(&a.range, family, warn)?;
    let t = convergence_study(family, &ns)?;
    let text = match a.format {
        Format::Csv => t.to_csv(),
        Format::Json => pretty(&json!(t)),
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn audit_member(fd: &FamilyDescriptor, kind: AuditKind, tol: f64) -> mingap_core::Result<Vec<AuditRecord>> {
    let g = fd.build();
    let s = sym_eigen(&adjacency_matrix(&g), false)?;
    let name = fd.family.as_str();
    let mut out = Vec::new();
    let all = kind == AuditKind::All;
    if all || kind == AuditKind::Simplicity {
        let r = simplicity_audit_with(fd, &g, &s, tol)?;
        out.push(AuditRecord::new("simplicity", name, fd.n, r.pass, &r));
    }
    if all || kind == AuditKind::Multiplicity {
        let r = minus_one_multiplicity_from(&s, fd.family);
        out.push(AuditRecord::new("minus-one-multiplicity", name, fd.n, r.pass, &r));
    }
    if (all || kind == AuditKind::CliqueCover) && matches!(fd.family, Family::Delta | Family::Gamma) {
        let r = build_clique_cover(fd)?.check_identity(&g);
        out.push(AuditRecord::new("clique-cover", name, fd.n, r.holds, &r));
    }
    if all || kind == AuditKind::Interlacing {
        // the first two graph blocks, cut vertex included
        let count = fd.blocks.len().min(2);
        let r = interlacing_check(&g, &leading_blocks(fd, count)?, 1e-9)?;
        out.push(AuditRecord::new("interlacing", name, fd.n, r.holds, &r));
    }
    Ok(out)
}

fn audit(a: &AuditArgs) -> CliResult<i32> {
    let family: Family = a.family.into();
    let ns = parse_range(&a.range, family, warn)?;
    if a.check == AuditKind::CliqueCover && !matches!(family, Family::Delta | Family::Gamma) {
        return Err(CliError::Usage("clique-cover audits need --family delta or gamma".into()));
    }
    let records: Vec<AuditRecord> = ns
        .par_iter()
        .map(|&n| {
            let fd = FamilyDescriptor::for_family(family, n)?;
            audit_member(&fd, a.check, a.tol)
        })
        .collect::<mingap_core::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut text = String::new();
    for r in &records {
        let _ = writeln!(text, "{}", serde_json::to_string(r).unwrap_or_default());
    }
    emit(&a.out, &text)?;
    Ok(if records.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_AUDIT })
}

fn residual(a: &ResidualArgs) -> CliResult<i32> {
    let kind = recurrence_kind(a.family.into());
    let ms: Vec<usize> = parse_m_range(&a.m)?;
    let mut text = String::from("lambda,m,residual\n");
    for &l in &a.lambda {
        for &m in &ms {
            let r = boundary_residual(kind, l, m)?;
            text.push_str(&csv_row(&[fmt_num(l), m.to_string(), fmt_num(r)]));
        }
    }
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn parse_m_range(text: &str) -> CliResult<Vec<usize>> {
    // same syntax as orders, no residue rule
    let parts: Vec<usize> = text
        .split(':')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad m range {text:?}")))?;
    let (start, stop, step) = match parts.as_slice() {
        [a] => (*a, *a, 1),
        [a, b] => (*a, *b, 1),
        [a, b, c] => (*a, *b, *c),
        _ => return Err(CliError::Usage(format!("bad m range {text:?}"))),
    };
    if step == 0 || stop < start || start < 2 {
        return Err(CliError::Usage(format!("m range {text:?} must be nonempty with m >= 2")));
    }
    Ok((start..=stop).step_by(step).collect())
}

fn plot(a: &PlotArgs) -> CliResult<i32> {
    let family: Family = a.family.into();
    let chart = match a.kind {
        PlotKind::Band => band_diagram(family, a.samples)?,
        PlotKind::Scatter => {
            let text = a
                .range
                .as_deref()
                .ok_or_else(|| CliError::Usage("scatter needs --range".into()))?;
            spectrum_scatter(family, &parse_range(text, family, warn)?)?
        }
        PlotKind::Eigenvector => {
            let n = a.n.ok_or_else(|| CliError::Usage("eigenvector plot needs --n".into()))?;
            eigenvector_chart(family, n, a.count).map_err(|e| match e {
                mingap_core::Error::BadOrder { .. } | mingap_core::Error::UnsupportedFamily(_) => {
                    CliError::Usage(e.to_string())
                }
                e => CliError::Core(e),
            })?
        }
    };
    emit(&a.out, &chart.to_svg()?)?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs) -> CliResult<i32> {
    if a.max_cubic_n < 14 || a.max_quartic_n < 11 {
        return Err(CliError::Usage("need --max-cubic-n >= 14 and --max-quartic-n >= 11".into()));
    }
    let cfg = VerifyConfig {
        max_cubic_n: a.max_cubic_n,
        max_quartic_n: a.max_quartic_n,
        seed: a.seed,
    };
    let summary = verify_all(&cfg)?;
    for c in &summary.checks {
        eprintln!("{:>2} {:<24} {}", c.id, c.name, if c.pass { "pass" } else { "FAIL" });
    }
    emit(&a.out, &pretty(&json!(summary)))?;
    Ok(if summary.pass { EXIT_OK } else { EXIT_AUDIT })
}

fn init_threads() {
    if let Some(k) = std::env::var("MINGAP_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if k > 0 {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Quotient(a) => quotient(a),
        Command::Bands(a) => bands(a),
        Command::Gaps(a) => gaps(a),
        Command::Converge(a) => converge(a),
        Command::Audit(a) => audit(a),
        Command::Residual(a) => residual(a),
        Command::Plot(a) => plot(a),
        Command::VerifyAll(a) => verify(a),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    init_threads();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Core(mingap_core::Error::AuditFailure(_)) => EXIT_AUDIT,
                _ => EXIT_USAGE,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_filters_residues() {
        let mut skipped = Vec::new();
        let ns = parse_range("10:30:2", Family::Delta, |m| skipped.push(m)).unwrap();
        assert_eq!(ns, vec![10, 14, 18, 22, 26, 30]);
        assert_eq!(skipped.len(), 5);
        assert_eq!(parse_range("11:31:5", Family::Gamma, |_| {}).unwrap(), vec![11, 16, 21, 26, 31]);
        assert_eq!(parse_range("42", Family::Delta, |_| {}).unwrap(), vec![42]);
    }

    #[test]
    fn empty_ranges_are_usage_errors() {
        assert!(matches!(parse_range("12:13:1", Family::Delta, |_| {}), Err(CliError::Usage(_))));
        assert!(matches!(parse_range("30:10:4", Family::Delta, |_| {}), Err(CliError::Usage(_))));
        assert!(matches!(parse_range("10:30:0", Family::Delta, |_| {}), Err(CliError::Usage(_))));
        assert!(matches!(parse_range("a:b", Family::Delta, |_| {}), Err(CliError::Usage(_))));
    }

    #[test]
    fn m_ranges() {
        assert_eq!(parse_m_range("2:6:2").unwrap(), vec![2, 4, 6]);
        assert!(parse_m_range("1:4").is_err());
    }
}
