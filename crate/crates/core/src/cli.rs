//! Command-line front end. `run` is the whole program minus process exit.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boolfn::{Degree, VectorialFunction};
use crate::counting::{self, CountMode, CountQuery};
use crate::degree_drop::{is_apn, quadratic_stability_sides, scan, ScanOptions, DEFAULT_EXTREMAL_LIMIT};
use crate::error::{Error, Result};
use crate::field::{format_modulus_hex, parse_modulus_hex, FieldCtx};
use crate::formats::{parse_truth_table, parse_univariate};
use crate::power::{self, AnalyzeOptions, ExponentProfile, Family, MooreChecker};
use crate::subspace::{scan_cost_estimate, subspace_count, within_default_caps, Scope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;

pub const WORKERS_ENV: &str = "DEGDROP_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "degdrop", version, about = "Degree-drop subspaces of vectorial Boolean functions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Defining polynomial of GF(2^n) as a hex bitmask, e.g. 0x11b
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, env = WORKERS_ENV, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run enumerations beyond the default size caps
    #[arg(long, global = true, requires = "i_understand_the_cost")]
    pub override_caps: bool,
    /// Acknowledges that an overridden cap may mean hours of work
    #[arg(long, global = true)]
    pub i_understand_the_cost: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Codimension-by-codimension verdicts for a power function x^d
    AnalyzePower(AnalyzePowerArgs),
    /// Exhaustive restriction-degree histogram over all codim-k subspaces
    Scan(ScanArgs),
    /// Exact counts of homogeneous functions by drop/fast-point dimension
    Count(CountArgs),
    /// Is a set of exponents a Moore exponent set for GF(2^n)?
    MooreCheck(MooreArgs),
    /// Codim-2 and codim-3 structure of the inverse function
    InverseReport(InverseArgs),
    /// Field parameters for GF(2^n)
    FieldInfo(FieldArgs),
    /// Recompute a reference table and compare against known values
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzePowerArgs {
    #[arg(long)]
    pub n: u32,
    /// Exponent in decimal
    #[arg(long, conflicts_with_all = ["zeros", "family"])]
    pub d: Option<u128>,
    /// Zero digit positions of the exponent, comma separated
    #[arg(long, value_delimiter = ',', conflicts_with = "family")]
    pub zeros: Option<Vec<u32>>,
    /// gold:J, kasami:I, welch, inverse or ones-run:J:U
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub kmax: u32,
    #[arg(long)]
    pub no_scan: bool,
    #[arg(long)]
    pub no_moore: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, conflicts_with_all = ["table", "univariate"])]
    pub power: Option<u64>,
    #[arg(long, conflicts_with = "univariate")]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub univariate: Option<PathBuf>,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "linear")]
    pub scope: Scope,
    #[arg(long, default_value_t = DEFAULT_EXTREMAL_LIMIT)]
    pub extremal_limit: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    DropNone,
    DropExact,
    FastPointsNone,
    FastPointsExact,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    pub mode: CountKind,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub j: Option<u32>,
    /// Count all functions of degree r, not only homogeneous ones
    #[arg(long)]
    pub non_homogeneous: bool,
    /// Also run the enumeration census and compare
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct MooreArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub set: Vec<u32>,
    /// Try every ordered tuple instead of one basis per subspace
    #[arg(long)]
    pub full_sweep: bool,
}

#[derive(Args, Debug)]
pub struct InverseArgs {
    #[arg(long)]
    pub n: u32,
    /// List the codimension-2 generator pairs
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    pub n: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    InverseN8,
    ZTable,
    SpecialCounts,
    FastPointCount,
    GoldApn,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub table: Table,
}

/// A command result in all three renderings.
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Set when a comparison against expected values failed.
    pub mismatch: bool,
}

impl Output {
    fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output { json, header: header.iter().map(|s| s.to_string()).collect(), rows, mismatch: false }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize") + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            Format::Text => {
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|i| {
                        self.rows.iter().map(|r| r[i].len()).chain([self.header[i].len()]).max().unwrap_or(0)
                    })
                    .collect();
                let line = |cells: &[String]| {
                    let padded: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                let mut s = line(&self.header);
                for r in &self.rows {
                    s += &line(r);
                }
                s
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::Parse(_) => EXIT_USAGE,
        Error::CapExceeded(_) => EXIT_CAP,
        Error::Consistency(_) => EXIT_CONSISTENCY,
    }
}

struct Ctx<'a> {
    global: &'a GlobalArgs,
    modulus: Option<u64>,
    scan: ScanOptions,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn field(&self, n: u32) -> Result<FieldCtx> {
        FieldCtx::new(n, self.modulus)
    }

    fn announce_cost(&mut self, n: u32, k: u32, scope: Scope) -> Result<()> {
        if self.global.override_caps && !within_default_caps(n, k) {
            let est = scan_cost_estimate(n, k, scope)?;
            let _ = writeln!(
                self.err,
                "caps overridden: {} {scope} subspaces of codim {k} in F_2^{n}, about {est:.2e} table operations",
                subspace_count(n, k, scope)?
            );
        }
        Ok(())
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let modulus = match cli.global.modulus.as_deref().map(parse_modulus_hex).transpose() {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let scan = ScanOptions {
        workers: cli.global.workers,
        override_caps: cli.global.override_caps,
        ..Default::default()
    };
    let mut ctx = Ctx { global: &cli.global, modulus, scan, err };
    match dispatch(&cli.command, &mut ctx) {
        Ok(o) => {
            let _ = write!(out, "{}", o.render(cli.global.format));
            if o.mismatch {
                let _ = writeln!(ctx.err, "error: reproduced values differ from the expected ones");
                EXIT_CONSISTENCY
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command, ctx: &mut Ctx<'_>) -> Result<Output> {
    match cmd {
        Command::AnalyzePower(a) => analyze_power(a, ctx),
        Command::Scan(a) => scan_cmd(a, ctx),
        Command::Count(a) => count_cmd(a, ctx),
        Command::MooreCheck(a) => moore_cmd(a, ctx),
        Command::InverseReport(a) => inverse_cmd(a, ctx),
        Command::FieldInfo(a) => field_cmd(a, ctx),
        Command::Reproduce(a) => reproduce_cmd(a, ctx),
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, |x| x.to_string())
}

fn analyze_power(a: &AnalyzePowerArgs, ctx: &mut Ctx<'_>) -> Result<Output> {
    let mut family_report = None;
    let d = match (&a.d, &a.zeros, &a.family) {
        (Some(d), None, None) => *d,
        (None, Some(z), None) => ExponentProfile::from_zero_set(a.n, z)?.d,
        (None, None, Some(f)) => {
            let fam: Family = f.parse()?;
            family_report = Some(power::named_family_report(fam, a.n, !a.no_scan, &ctx.scan)?);
            fam.exponent(a.n)?
        }
        _ => return Err(Error::InvalidParameter("give exactly one of --d, --zeros, --family".into())),
    };
    let kmax = a.kmax.min(a.n);
    if !a.no_scan && a.n <= 16 {
        for k in 1..=kmax {
            ctx.announce_cost(a.n, k, Scope::Linear)?;
        }
    }
    let opts = AnalyzeOptions {
        scan: ctx.scan.clone(),
        modulus: ctx.modulus,
        run_scans: !a.no_scan,
        run_moore: !a.no_moore,
    };
    let report = power::analyze_power(a.n, d, kmax, &opts)?;
    let rows = report
        .codims
        .iter()
        .map(|c| {
            vec![
                c.codim.to_string(),
                opt(&c.codim1_no_drop),
                opt(&c.codim2_no_drop),
                opt(&c.progression_sufficient),
                opt(&c.moore_sufficient),
                opt(&c.scan_has_drop),
                c.verdict.clone(),
            ]
        })
        .collect();
    let mut json = to_value(&report);
    if let Some(f) = family_report {
        json["family"] = to_value(&f);
    }
    Ok(Output::new(
        json,
        &["codim", "codim1_no_drop", "codim2_no_drop", "progression", "moore", "scan_has_drop", "verdict"],
        rows,
    ))
}

fn scan_cmd(a: &ScanArgs, ctx: &mut Ctx<'_>) -> Result<Output> {
    let read = |p: &PathBuf| {
        std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))
    };
    let (f, name) = match (&a.power, &a.table, &a.univariate) {
        (Some(d), None, None) => {
            let n = a.n.ok_or_else(|| Error::InvalidParameter("--power needs --n".into()))?;
            let fctx = ctx.field(n)?;
            (VectorialFunction::power(&fctx, *d), format!("x^{d} over GF(2^{n}) mod {}", format_modulus_hex(fctx.modulus())))
        }
        (None, Some(p), None) => (parse_truth_table(&read(p)?)?, format!("table {}", p.display())),
        (None, None, Some(p)) => {
            let u = parse_univariate(&read(p)?, ctx.modulus)?;
            (u.to_table(), format!("polynomial {}", p.display()))
        }
        _ => return Err(Error::InvalidParameter("give one of --power, --table, --univariate".into())),
    };
    if let Some(n) = a.n {
        if n != f.n() {
            return Err(Error::InvalidParameter(format!("--n {n} does not match the function's n = {}", f.n())));
        }
    }
    ctx.announce_cost(f.n(), a.k, a.scope)?;
    let opts = ScanOptions { extremal_limit: a.extremal_limit, ..ctx.scan.clone() };
    let mut rep = scan(&f, a.k, a.scope, &opts)?;
    rep.function = name;
    let rows = rep.histogram.iter().map(|b| vec![b.degree.to_string(), b.count.to_string()]).collect();
    Ok(Output::new(to_value(&rep), &["degree", "count"], rows))
}

fn count_cmd(a: &CountArgs, ctx: &mut Ctx<'_>) -> Result<Output> {
    let (mode, exact) = match a.mode {
        CountKind::DropNone => (CountMode::DropHyperplanes, false),
        CountKind::DropExact => (CountMode::DropHyperplanes, true),
        CountKind::FastPointsNone => (CountMode::FastPoints, false),
        CountKind::FastPointsExact => (CountMode::FastPoints, true),
    };
    let mut q = CountQuery::new(a.n, a.m, a.r);
    match (exact, a.j) {
        (true, Some(j)) => q = q.with_j(j),
        (true, None) => return Err(Error::InvalidParameter("exact modes need --j".into())),
        (false, Some(_)) => return Err(Error::InvalidParameter("--j only applies to exact modes".into())),
        (false, None) => {}
    }
    if a.non_homogeneous {
        q = q.non_homogeneous();
    }
    let value = counting::count(&q, mode)?;
    let total = counting::total_homogeneous(a.n, a.m, a.r)?;
    let homogeneous_value = counting::count(&CountQuery { homogeneous: true, ..q }, mode)?;
    let proportion = (!homogeneous_value.is_zero()).then(|| counting::proportion(&homogeneous_value, &total)).transpose()?;
    let mut json = json!({
        "mode": format!("{mode}"),
        "query": to_value(&q),
        "count": value.to_string(),
        "total_homogeneous": total.to_string(),
        "proportion": proportion.as_ref().map(to_value),
    });
    let mut rows = vec![vec!["count".into(), value.to_string()]];
    if let Some(p) = &proportion {
        rows.push(vec!["log2_proportion".into(), format!("{:.4}", p.log2)]);
    }
    let mut mismatch = false;
    if a.oracle {
        if a.non_homogeneous {
            return Err(Error::InvalidParameter("the census only covers homogeneous functions".into()));
        }
        let census = counting::brute_force_count(a.n, a.m, a.r, mode, &ctx.scan)?;
        let j = q.j.unwrap_or(0);
        let observed = census.get(&j).copied().unwrap_or(0);
        let agree = BigUint::from(observed) == value;
        mismatch = !agree;
        json["oracle"] = json!({ "census": census, "count": observed, "agrees": agree });
        rows.push(vec!["oracle".into(), observed.to_string()]);
        rows.push(vec!["agrees".into(), agree.to_string()]);
    }
    let mut o = Output::new(json, &["field", "value"], rows);
    o.mismatch = mismatch;
    Ok(o)
}

fn moore_cmd(a: &MooreArgs, ctx: &mut Ctx<'_>) -> Result<Output> {
    let fctx = ctx.field(a.n)?;
    let checker = MooreChecker::new(&fctx, a.full_sweep)?.with_workers(ctx.scan.workers);
    let v = checker.check(&a.set)?;
    let witness = v
        .witness
        .as_ref()
        .map(|w| w.iter().map(|x| format!("{x:#x}")).collect::<Vec<_>>().join(" "))
        .unwrap_or_default();
    let set = v.exponent_set.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
    let mut json = to_value(&v);
    json["modulus"] = json!(format_modulus_hex(fctx.modulus()));
    Ok(Output::new(json, &["set", "is_moore", "witness"], vec![vec![set, v.is_moore.to_string(), witness]]))
}

fn inverse_cmd(a: &InverseArgs, ctx: &mut Ctx<'_>) -> Result<Output> {
    let fctx = ctx.field(a.n)?;
    let c2 = power::inverse_codim2_classification(&fctx, a.list)?;
    let mut rows = vec![
        vec!["codim2_total".into(), c2.total_linear.to_string()],
        vec!["codim2_drop_by_2".into(), c2.special_count.to_string()],
    ];
    let mut json = json!({ "n": a.n, "modulus": format_modulus_hex(fctx.modulus()), "codim2": to_value(&c2) });
    if a.n >= 3 && a.n <= power::Z_SWEEP_MAX_N {
        let z = power::inverse_codim3_z(&fctx, &ctx.scan)?;
        let special = power::special_count_from_z(a.n, z)?;
        rows.push(vec!["z".into(), z.to_string()]);
        rows.push(vec!["codim3_drop_by_3".into(), special.to_string()]);
        json["codim3"] = json!({ "z": z, "special_count": special });
    }
    Ok(Output::new(json, &["quantity", "value"], rows))
}

fn field_cmd(a: &FieldArgs, ctx: &mut Ctx<'_>) -> Result<Output> {
    let f = ctx.field(a.n)?;
    let modulus = format_modulus_hex(f.modulus());
    let prim = f.primitive_element().map(|p| format!("{:#x}", p.value()));
    let json = json!({
        "n": a.n,
        "modulus": modulus,
        "size": f.size(),
        "primitive_element": prim,
        "log_tables": prim.is_some(),
    });
    Ok(Output::new(
        json,
        &["n", "modulus", "size", "primitive_element"],
        vec![vec![a.n.to_string(), modulus, f.size().to_string(), prim.unwrap_or_default()]],
    ))
}

#[derive(Serialize)]
struct Check {
    item: String,
    expected: String,
    observed: String,
    pass: bool,
}

fn check(item: impl Into<String>, expected: impl ToString, observed: impl ToString) -> Check {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    Check { item: item.into(), pass: expected == observed, expected, observed }
}

fn histogram_string(h: &[(Degree, u64)]) -> String {
    h.iter().map(|(d, c)| format!("{d}:{c}")).collect::<Vec<_>>().join(" ")
}

const Z_TABLE: [u64; 10] = [24, 0, 0, 24, 168, 336, 528, 840, 1848, 4224];
const SPECIAL_COUNTS: [u64; 10] = [1, 0, 0, 9, 127, 510, 1606, 5115, 22517, 102960];
const FAST_POINT_COUNT: u64 = 85885;

fn reproduce_cmd(a: &ReproduceArgs, ctx: &mut Ctx<'_>) -> Result<Output> {
    let opts = ctx.scan.clone();
    let mut checks = Vec::new();
    match a.table {
        Table::InverseN8 => {
            let f = ctx.field(8)?;
            let inv = VectorialFunction::inverse(&f);
            let expected: [&[(Degree, u64)]; 3] = [
                &[(Degree::Finite(7), 255)],
                &[(Degree::Finite(6), 10710), (Degree::Finite(5), 85)],
                &[(Degree::Finite(5), 96645), (Degree::Finite(4), 510)],
            ];
            for (k, exp) in (1..=3).zip(expected) {
                let rep = scan(&inv, k, Scope::Linear, &opts)?;
                let got: Vec<(Degree, u64)> = rep.histogram.iter().map(|b| (b.degree, b.count)).collect();
                checks.push(check(format!("codim {k}"), histogram_string(exp), histogram_string(&got)));
            }
        }
        Table::ZTable => {
            for (n, &z) in (3..=12).zip(&Z_TABLE) {
                checks.push(check(format!("z({n})"), z, power::inverse_codim3_z(&ctx.field(n)?, &opts)?));
            }
        }
        Table::SpecialCounts => {
            for (n, &s) in (3..=12).zip(&SPECIAL_COUNTS) {
                let f = ctx.field(n)?;
                checks.push(check(format!("n = {n}"), s, power::inverse_codim3_special_count(&f, &opts)?));
                if n <= 8 {
                    let rep = scan(&VectorialFunction::inverse(&f), 3, Scope::Linear, &opts)?;
                    let dropped: u64 = rep
                        .histogram
                        .iter()
                        .filter(|b| b.degree < Degree::Finite(n - 3))
                        .map(|b| b.count)
                        .sum();
                    checks.push(check(format!("n = {n} scan"), s, dropped));
                }
            }
        }
        Table::FastPointCount => {
            let q = CountQuery::new(6, 6, 3).with_j(3);
            let c = counting::count_exact_fast_dimension(&q)?;
            checks.push(check("(6,6)-functions of degree 3 with 7 fast points", FAST_POINT_COUNT, &c));
            let p = counting::proportion(&c, &counting::total_homogeneous(6, 6, 3)?)?;
            checks.push(check("log2 proportion in (-104, -102)", true, p.log2 > -104.0 && p.log2 < -102.0));
        }
        Table::GoldApn => {
            for n in 4..=6u32 {
                let f = ctx.field(n)?;
                for j in 1..n {
                    let g = VectorialFunction::power(&f, (1u64 << j) + 1);
                    let coprime = num_integer::gcd(j, n) == 1;
                    let sides = quadratic_stability_sides(&g, &opts)?;
                    let apn = is_apn(&g)?;
                    checks.push(check(format!("n = {n}, j = {j}: apn"), coprime, apn));
                    checks.push(check(format!("n = {n}, j = {j}: no 2-dim drop"), coprime, sides.left));
                }
            }
        }
    }
    let mismatch = checks.iter().any(|c| !c.pass);
    let rows = checks
        .iter()
        .map(|c| vec![c.item.clone(), c.expected.clone(), c.observed.clone(), if c.pass { "pass" } else { "FAIL" }.into()])
        .collect();
    let mut o = Output::new(json!({ "checks": to_value(&checks), "pass": !mismatch }), &["item", "expected", "observed", "status"], rows);
    o.mismatch = mismatch;
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("degdrop").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["count", "--mode", "drop-exact", "--n", "4", "--m", "1", "--r", "2", "--j", "3"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--modulus", "zz", "field-info", "--n", "4"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["field-info", "--n", "4", "--modulus", "0x15"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["scan", "--n", "4", "--power", "15", "--k", "1"]).0, EXIT_OK);
        assert_eq!(run_args(&["scan", "--n", "4", "--power", "0", "--k", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn caps_and_override() {
        let (code, _, err) = run_args(&["scan", "--n", "12", "--power", "7", "--k", "5"]);
        assert_eq!(code, EXIT_CAP, "{err}");
        assert_eq!(run_args(&["--override-caps", "scan", "--n", "12", "--power", "7", "--k", "5"]).0, EXIT_USAGE);
        let (code, _, err) = run_args(&["count", "--mode", "drop-none", "--n", "6", "--m", "2", "--r", "3", "--oracle"]);
        assert_eq!(code, EXIT_CAP, "{err}");
    }

    #[test]
    fn field_info_formats() {
        let (code, out, _) = run_args(&["field-info", "--n", "8"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["modulus"], "0x11B");
        let (_, csv, _) = run_args(&["--format", "csv", "field-info", "--n", "8", "--modulus", "0x11d"]);
        assert!(csv.starts_with("n,modulus,size,primitive_element\n8,0x11D,256,"));
        let (_, text, _) = run_args(&["--format", "text", "field-info", "--n", "4"]);
        assert!(text.lines().nth(1).unwrap().starts_with("4  0x13"));
    }

    #[test]
    fn scan_output_is_deterministic() {
        let a = run_args(&["--workers", "1", "scan", "--n", "6", "--power", "62", "--k", "2"]);
        let b = run_args(&["--workers", "3", "scan", "--n", "6", "--power", "62", "--k", "2"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        let v: Value = serde_json::from_str(&a.1).unwrap();
        assert_eq!(v["total"], 651);
    }

    #[test]
    fn count_with_oracle() {
        let (code, out, _) = run_args(&["count", "--mode", "drop-none", "--n", "4", "--m", "1", "--r", "2", "--oracle"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["oracle"]["agrees"], true);
        let (code, out, _) = run_args(&["count", "--mode", "fast-points-exact", "--n", "6", "--m", "6", "--r", "3", "--j", "3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], "87885");
    }

    #[test]
    fn analyze_and_moore() {
        let (code, out, err) = run_args(&["analyze-power", "--n", "70", "--zeros", "0,6,21", "--kmax", "2"]);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["codims"][1]["codim2_no_drop"], true);
        let (code, out, _) = run_args(&["--format", "csv", "moore-check", "--n", "6", "--set", "0,2"]);
        assert_eq!(code, 0);
        assert!(out.contains("0 2,false,"));
        let (code, out, _) = run_args(&["analyze-power", "--n", "5", "--family", "gold:1", "--kmax", "3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["family"]["is_apn"], true);
    }

    #[test]
    fn scan_from_files() {
        let dir = std::env::temp_dir().join(format!("degdrop-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let t = dir.join("inv5.txt");
        let f = FieldCtx::new(5, None).unwrap();
        std::fs::write(&t, crate::formats::write_truth_table(&VectorialFunction::inverse(&f))).unwrap();
        let u = dir.join("inv5.poly");
        std::fs::write(&u, "5 0x25\n30:1\n").unwrap();
        let a = run_args(&["scan", "--table", t.to_str().unwrap(), "--k", "2"]);
        let b = run_args(&["scan", "--univariate", u.to_str().unwrap(), "--k", "2"]);
        assert_eq!(a.0, 0);
        let va: Value = serde_json::from_str(&a.1).unwrap();
        let vb: Value = serde_json::from_str(&b.1).unwrap();
        assert_eq!(va["histogram"], vb["histogram"]);
        std::fs::write(&t, "5 5\n1 2\n").unwrap();
        assert_eq!(run_args(&["scan", "--table", t.to_str().unwrap(), "--k", "2"]).0, EXIT_USAGE);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn reproduce_fast_point_count_reports_mismatch() {
        let (code, out, _) = run_args(&["--format", "text", "reproduce", "fast-point-count"]);
        assert_eq!(code, EXIT_CONSISTENCY);
        assert!(out.contains("FAIL"));
        assert!(out.contains("87885"));
    }

    #[test]
    fn reproduce_gold() {
        let (code, out, _) = run_args(&["reproduce", "gold-apn"]);
        assert_eq!(code, 0, "{out}");
    }
}
