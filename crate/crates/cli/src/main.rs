use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glinj::exec::Execution;
use glinj::gl2::{Gl2Engine, DEFAULT_ORACLE_THRESHOLD};
use glinj::injectivity::{criterion_report, Verdict};
use glinj::schur::{h_character, schur_character, schur_character_jt};
use glinj::selfcheck::{run_selfcheck, Fault, SelfCheckConfig};
use glinj::table::{build_table, render_table, Format, TableRow};
use glinj::{digit_expansion, Character, Error, GroupParams, Weight};
use serde_json::json;

/// Characters, divisibility indices and injectivity of polynomial injective
/// modules for GL_n and its quantisation at a root of unity.
#[derive(Debug, Parser)]
#[command(name = "glinj", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutFormat::Text)]
    format: OutFormat,

    /// Run bulk work on one thread instead of the rayon pool.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Order of the root of unity q (1 for the classical group).
    #[arg(long, default_value_t = 1)]
    l: i64,
    /// Field characteristic (0 or a prime).
    #[arg(long)]
    p: i64,
}

impl ParamArgs {
    fn params(&self) -> Result<GroupParams, Error> {
        GroupParams::new(self.l, self.p)
    }
}

#[derive(Debug, Args)]
struct WeightArg {
    /// Weight entries, e.g. `2,1`; the rank is the number of entries.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
}

impl WeightArg {
    fn weight(&self) -> Result<Weight, Error> {
        self.weight.parse()
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The quantum digit and the classical digits of a weight.
    Expand {
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// A character: Schur, simple, injective or symmetric power.
    Char {
        #[arg(value_enum)]
        kind: CharKind,
        /// Required for schur, simple and injective.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Degree r of S^r E (sympow only).
        #[arg(long)]
        degree: Option<i64>,
        /// Order of the root of unity q.
        #[arg(long, default_value_t = 1)]
        l: i64,
        /// Field characteristic; not needed for schur.
        #[arg(long)]
        p: Option<i64>,
        /// Recompute by an independent route and compare.
        #[arg(long)]
        check: bool,
    },
    /// Divisibility index of I(lambda).
    Divind {
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        params: ParamArgs,
        /// Also compute it from the good-filtration oracle.
        #[arg(long)]
        check: bool,
    },
    /// Criticality, divisibility index, injectivity and standard form.
    Classify {
        #[command(flatten)]
        weight: WeightArg,
        #[command(flatten)]
        params: ParamArgs,
        /// Run the character oracles whatever the degree.
        #[arg(long)]
        check: bool,
        /// Largest Frobenius kernel G_m to test.
        #[arg(long, default_value_t = 3)]
        gm_max: u32,
    },
    /// Classification of every lambda of rank 2 up to a degree.
    Table {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        deg_max: i64,
        #[arg(long, default_value_t = 3)]
        gm_max: u32,
    },
    /// Run every invariant suite over a parameter grid.
    Selfcheck {
        #[arg(long, default_value_t = 20)]
        deg_max: i64,
        /// Parameter grid as `l:p,l:p,...`; defaults to the standard grid.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CharKind {
    Schur,
    Simple,
    Injective,
    Sympow,
}

/// Why a command did not succeed, with its exit status.
enum Failure {
    Usage(String),
    Disagreement(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Disagreement { .. } => Failure::Disagreement(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn csv_lines<I: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: I) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn render_character(chi: &Character, format: OutFormat) -> String {
    match format {
        OutFormat::Text => format!("{chi}\n"),
        OutFormat::Json => pretty(&serde_json::to_value(chi).expect("characters serialize")),
        OutFormat::Csv => {
            csv_lines(&["exponent", "multiplicity"], chi.terms().rev().map(|(w, m)| vec![w.to_string(), m.to_string()]))
        }
    }
}

fn check_equal(
    what: &'static str,
    lam: &Weight,
    params: GroupParams,
    a: &Character,
    b: &Character,
) -> Result<(), Failure> {
    if a == b {
        return Ok(());
    }
    Err(Error::Disagreement { what, lam: lam.clone(), params, left: a.to_string(), right: b.to_string() }.into())
}

fn cmd_expand(weight: &WeightArg, params: &ParamArgs, format: OutFormat) -> Outcome {
    let (lam, params) = (weight.weight()?, params.params()?);
    let exp = digit_expansion(&lam, params)?;
    Ok(match format {
        OutFormat::Text => {
            let digits: Vec<String> = exp.classical_digits.iter().map(|d| d.to_string()).collect();
            format!(
                "lambda = {lam}  ({params}, e={})\nlambda0 = {}\nlambda_bar = {}\nclassical digits = [{}]\n",
                params.e(),
                exp.quantum_digit,
                exp.bar(),
                digits.join(", ")
            )
        }
        OutFormat::Json => pretty(&json!({
            "lam": lam,
            "params": params,
            "e": params.e(),
            "quantum_digit": exp.quantum_digit,
            "lambda_bar": exp.bar(),
            "classical_digits": exp.classical_digits,
        })),
        OutFormat::Csv => csv_lines(
            &["layer", "factor", "digit"],
            exp.layers().iter().enumerate().map(|(i, (f, d))| vec![i.to_string(), f.to_string(), d.to_string()]),
        ),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_char(
    kind: CharKind,
    weight: Option<&str>,
    degree: Option<i64>,
    l: i64,
    p: Option<i64>,
    check: bool,
    format: OutFormat,
) -> Outcome {
    let lam = match (kind, weight) {
        (CharKind::Sympow, _) => None,
        (_, Some(w)) => Some(w.parse::<Weight>()?),
        (_, None) => return Err(usage("--weight is required for this character")),
    };
    if kind == CharKind::Schur {
        let lam = lam.expect("checked above");
        if !lam.is_partition() {
            return Err(Error::NotDominantPolynomial(lam).into());
        }
        let chi = schur_character(&lam);
        if check && chi != schur_character_jt(&lam) {
            return Err(Failure::Disagreement(format!("tableau and Jacobi-Trudi Schur characters differ at {lam}")));
        }
        return Ok(render_character(&chi, format));
    }
    let p = p.ok_or_else(|| usage("--p is required for this character"))?;
    let params = GroupParams::new(l, p)?;
    let engine = Gl2Engine::shared(params);
    let chi = match kind {
        CharKind::Sympow => {
            let r = degree.ok_or_else(|| usage("--degree is required for sympow"))?;
            if r < 0 {
                return Err(usage("--degree must be nonnegative"));
            }
            let chi = engine.sympow_character_recursive(r);
            if check {
                let lam = Weight::from([r, 0]);
                check_equal("symmetric power recursion vs h_r", &lam, params, &chi, &h_character(r, 2))?;
            }
            chi
        }
        CharKind::Simple => {
            let lam = lam.expect("checked above");
            let chi = engine.simple_character(&lam)?;
            if check && (!chi.is_symmetric() || chi.min_last_entry()? != lam.get(1)) {
                return Err(Failure::Disagreement(format!("simple character of {lam} is malformed")));
            }
            chi
        }
        CharKind::Injective => {
            let lam = lam.expect("checked above");
            let chi = engine.injective_character(&lam)?;
            if check {
                if let Ok(form) = engine.standard_form(&lam) {
                    check_equal(
                        "injective character vs standard form",
                        &lam,
                        params,
                        &chi,
                        &engine.standard_form_character(&form)?,
                    )?;
                }
                let m = engine.divind_injective_closed(&lam)?;
                if chi.min_last_entry()? != m {
                    return Err(Failure::Disagreement(format!(
                        "min last entry of ch I({lam}) differs from divind {m}"
                    )));
                }
            }
            chi
        }
        CharKind::Schur => unreachable!(),
    };
    Ok(render_character(&chi, format))
}

fn cmd_divind(weight: &WeightArg, params: &ParamArgs, check: bool, format: OutFormat) -> Outcome {
    let (lam, params) = (weight.weight()?, params.params()?);
    let engine = Gl2Engine::shared(params);
    let d = engine.divind_injective_closed(&lam)?;
    let oracle = if check { Some(engine.divind_injective_oracle(&lam)?) } else { None };
    if let Some(o) = oracle.filter(|&o| o != d) {
        return Err(Error::Disagreement {
            what: "divind closed vs oracle",
            lam,
            params,
            left: d.to_string(),
            right: o.to_string(),
        }
        .into());
    }
    Ok(match format {
        OutFormat::Text => {
            let mut s = format!("divind I{lam} = {d}  ({params})\n");
            if oracle.is_some() {
                s += "oracle: agrees\n";
            }
            s
        }
        OutFormat::Json => pretty(&json!({ "lam": lam, "params": params, "divind": d, "oracle": oracle })),
        OutFormat::Csv => csv_lines(
            &["weight", "l", "p", "divind"],
            [vec![lam.to_string(), params.l().to_string(), params.p().to_string(), d.to_string()]],
        ),
    })
}

fn cmd_classify(weight: &WeightArg, params: &ParamArgs, check: bool, gm_max: u32, format: OutFormat) -> Outcome {
    let (lam, params) = (weight.weight()?, params.params()?);
    if lam.rank() != 2 {
        return classify_general(&lam, params, format);
    }
    let engine = Gl2Engine::shared(params);
    let threshold = if check { i64::MAX } else { DEFAULT_ORACLE_THRESHOLD };
    let c = engine.classify_with_threshold(&lam, threshold)?;
    let gm = engine.gm_injective_up_to(&lam, gm_max)?;
    Ok(match format {
        OutFormat::Text => {
            let mut s = format!(
                "lambda: {}\nparams: {} (e={})\ncritical: {}\ndivind: {}\ninf_injective: {}\ngm_injective_up_to: {gm}\n",
                c.lam,
                c.params,
                params.e(),
                c.critical,
                c.divind,
                c.inf_injective
            );
            match &c.standard_form {
                Some(f) => s += &format!("standard_form: {f}\n"),
                None => s += "standard_form: -\n",
            }
            if c.oracle_checked {
                s += "oracle check: agrees\n";
            }
            s
        }
        OutFormat::Json => {
            let mut v = serde_json::to_value(&c).expect("classification serializes");
            v["gm_injective_up_to"] = json!(gm);
            pretty(&v)
        }
        OutFormat::Csv => {
            let row = TableRow {
                lam: c.lam.clone(),
                params,
                critical: c.critical,
                divind: c.divind,
                inf_injective: c.inf_injective,
                gm_injective_up_to: gm,
                standard_form: c.standard_form.as_ref().map(|f| f.to_string()),
            };
            render_table(&[row], Format::Csv, gm_max)?
        }
    })
}

fn classify_general(lam: &Weight, params: GroupParams, format: OutFormat) -> Outcome {
    let r = criterion_report(lam, params)?;
    let verdict = match r.verdict {
        Verdict::Injective => "infinitesimally injective",
        Verdict::NotInjective => "not infinitesimally injective",
        Verdict::Conditional => "conditional (needs divind oracle)",
    };
    Ok(match format {
        OutFormat::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
        OutFormat::Text => format!(
            "lambda: {}\nparams: {} (e={})\nlambda0: {}\nlambda_bar: {}\nsteinberg range applies: {}\ndivind_bar: {}\nverdict: {verdict}\n",
            r.lam,
            r.params,
            params.e(),
            r.lambda0,
            r.lambda_bar,
            r.steinberg_range,
            r.divind_bar.map(|d| d.to_string()).unwrap_or_else(|| "unknown".into()),
        ),
        OutFormat::Csv => csv_lines(
            &["weight", "lambda0", "lambda_bar", "steinberg_range", "divind_bar", "verdict"],
            [vec![
                r.lam.to_string(),
                r.lambda0.to_string(),
                r.lambda_bar.to_string(),
                r.steinberg_range.to_string(),
                r.divind_bar.map(|d| d.to_string()).unwrap_or_default(),
                serde_json::to_value(r.verdict).expect("verdict serializes").as_str().unwrap_or_default().to_string(),
            ]],
        ),
    })
}

fn cmd_table(params: &ParamArgs, deg_max: i64, gm_max: u32, format: OutFormat, exec: Execution) -> Outcome {
    if deg_max < 0 {
        return Err(usage("--deg-max must be nonnegative"));
    }
    let rows = build_table(params.params()?, deg_max, gm_max, exec)?;
    Ok(render_table(&rows, format.into(), gm_max)?)
}

fn parse_grid(s: &str) -> Result<Vec<GroupParams>, Failure> {
    s.split(',')
        .map(|item| {
            let (l, p) =
                item.split_once(':').ok_or_else(|| usage(format!("grid entry {item:?} is not of the form l:p")))?;
            let l = l.trim().parse().map_err(|_| usage(format!("bad l in {item:?}")))?;
            let p = p.trim().parse().map_err(|_| usage(format!("bad p in {item:?}")))?;
            Ok(GroupParams::new(l, p)?)
        })
        .collect()
}

fn cmd_selfcheck(deg_max: i64, grid: Option<&str>, fault: Option<&str>, format: OutFormat, exec: Execution) -> Outcome {
    let mut config = SelfCheckConfig::new(deg_max);
    if let Some(g) = grid {
        config.grid = parse_grid(g)?;
    }
    config.exec = exec;
    config.fault = fault.map(str::parse::<Fault>).transpose()?;
    let report = run_selfcheck(&config);
    let out = match format {
        OutFormat::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
        OutFormat::Csv => csv_lines(
            &["suite", "instances", "param_sets", "passed", "counterexample"],
            report.suites.iter().map(|s| {
                vec![
                    s.name.to_string(),
                    s.instances.to_string(),
                    s.param_sets.to_string(),
                    s.passed().to_string(),
                    s.counterexample.clone().unwrap_or_default(),
                ]
            }),
        ),
        OutFormat::Text => report.to_string(),
    };
    if report.passed() {
        Ok(out)
    } else {
        // The report is the useful part of a failure: print it, then fail.
        print!("{out}");
        let names: Vec<&str> = report.failures().map(|s| s.name).collect();
        Err(Failure::Disagreement(format!("failed suites: {}", names.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let f = cli.format;
    match &cli.command {
        Command::Expand { weight, params } => cmd_expand(weight, params, f),
        Command::Char { kind, weight, degree, l, p, check } => {
            cmd_char(*kind, weight.as_deref(), *degree, *l, *p, *check, f)
        }
        Command::Divind { weight, params, check } => cmd_divind(weight, params, *check, f),
        Command::Classify { weight, params, check, gm_max } => cmd_classify(weight, params, *check, *gm_max, f),
        Command::Table { params, deg_max, gm_max } => cmd_table(params, *deg_max, *gm_max, f, exec),
        Command::Selfcheck { deg_max, grid, inject_fault } => {
            cmd_selfcheck(*deg_max, grid.as_deref(), inject_fault.as_deref(), f, exec)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Disagreement(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(2)
        }
    }
}
