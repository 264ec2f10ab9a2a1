mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wmult_core::catalog::{verify_wmult, BlowupSpec, CyclicQuotient, Model, WmultReport};
use wmult_core::divisor::{kawamata_wmult_divisor, weighted_order, MonomialSupport};
use wmult_core::enclosure::Enclosure;
use wmult_core::freeness::{
    check_cor45, check_thm41, check_thm44, check_thm51, lemma33_lambda_bound, lemma33_lhs,
    lemma33_rhs, step22_feasibility, AuxParams, Condition, FreenessInput, FreenessVerdict,
    PointKind,
};
use wmult_core::rational::{fmt_rat, int, parse_rat, rat};
use wmult_core::suite::{run_all, VerifyConfig};
use wmult_core::wps::{
    adjoint_cartier_degrees, canonical_degree, paper_example, wps_degree, ExampleId, WpsSpace,
};
use wmult_core::{Error, Rat};

use report::{rat_value, real_value, Format, Report};

const DEFAULT_DIGITS: u32 = 30;

#[derive(Parser, Debug)]
#[command(
    name = "wmult",
    version,
    about = "Weighted multiplicities, freeness thresholds and sharpness examples"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Exit with status 1 unless the primary verdict matches.
    #[arg(long, value_enum, global = true)]
    expect: Option<Expect>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    Pass,
    Fail,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weighted multiplicity: closed form against extraction and the analytic value.
    #[command(subcommand)]
    Wmult(WmultCmd),
    /// Weighted order of a divisor given by its monomial support.
    Word(WordArgs),
    /// Numerical freeness criteria.
    Freeness {
        #[arg(value_enum)]
        checker: Checker,
        #[command(flatten)]
        args: FreenessArgs,
    },
    /// The auxiliary inequality, its lambda bound and the surface-step sweep.
    #[command(subcommand)]
    Lemma33(Lemma33Cmd),
    /// Intersection numbers on coordinate faces of a weighted projective space.
    Wps(WpsArgs),
    /// One of the sharpness examples on weighted projective space.
    Example(ExampleArgs),
    /// Rerun every closed-form-against-oracle check.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum WmultCmd {
    /// C^n / Z_r(1, a, ...).
    Quotient {
        #[arg(long)]
        r: u32,
        /// Residues after the leading 1; three values are taken as the full tuple.
        #[arg(long, value_delimiter = ',')]
        a: Vec<u32>,
        /// uniform | kawamata | custom W1,W2,W3
        #[arg(long, num_args = 1..=2, default_values = ["uniform"])]
        blowup: Vec<String>,
    },
    /// Non-quotient terminal point of Mori's list.
    Terminal {
        #[arg(long, value_parser = ["cA", "cAx4", "cAx2", "cD2", "cD3", "cE2"])]
        case: String,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        a: Option<u32>,
        /// cD2: cubic | xyz | y2z; cD3: fermat | yz2 | y3
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Subvariety model, e.g. "subvariety S2 r=4 a=3 b=3 n=2" or "S2 r=4 a=3 b=3 n=2".
    Subvariety {
        #[arg(long)]
        model: String,
    },
}

#[derive(Args, Debug)]
struct WordArgs {
    #[arg(long, value_parser = rational, value_delimiter = ',')]
    weights: Vec<Rat>,
    /// Semicolon-separated exponent tuples, e.g. "4,0,0;0,3,0;0,0,2".
    #[arg(long)]
    support: String,
    /// Also compute the multiplicity under the Kawamata blow-up of 1/R(A, -A, 1).
    #[arg(long, num_args = 2, value_names = ["R", "A"])]
    kawamata: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Checker {
    Thm41,
    Thm44,
    Cor45,
    Thm51,
}

#[derive(Args, Debug)]
struct FreenessArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long = "L3", value_parser = rational)]
    l3: Option<Rat>,
    #[arg(long = "L2S", value_parser = rational)]
    l2s: Option<Rat>,
    #[arg(long = "LC", value_parser = rational)]
    lc: Option<Rat>,
    /// Self-intersection on a surface (thm51).
    #[arg(long = "L2", value_parser = rational)]
    l2: Option<Rat>,
}

// parsed once per process, so the size spread between variants is irrelevant
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand, Debug)]
enum Lemma33Cmd {
    /// Exact left-hand side.
    Lhs {
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = rational)]
        e: Rat,
        #[arg(long, value_parser = rational)]
        k: Rat,
        #[arg(long = "k-prime", value_parser = rational)]
        k_prime: Rat,
        #[arg(long, value_parser = rational)]
        lambda: Rat,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_parser = rational)]
        t: Option<Rat>,
        #[arg(long, value_parser = rational)]
        t0: Option<Rat>,
        /// L^n, to report the right-hand side L^n / r^(n-1) as well.
        #[arg(long = "Ln", value_parser = rational)]
        ln: Option<Rat>,
    },
    /// max{1 - de, (den)^(-1/(n-1))}.
    LambdaBound {
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = rational)]
        e: Rat,
        #[arg(long)]
        n: u32,
    },
    /// Sweep lambda for the surface step with d = 2.
    Step22 {
        #[arg(long, value_parser = rational)]
        e: Rat,
        #[arg(long, value_parser = rational, default_value = "1/1000")]
        grid: Rat,
    },
}

#[derive(Args, Debug)]
struct WpsArgs {
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u32>,
    #[arg(long)]
    degree: u32,
    /// Coordinate face as an index list; defaults to the whole space.
    #[arg(long, value_delimiter = ',')]
    face: Option<Vec<u32>>,
    #[arg(long)]
    canonical: bool,
    #[arg(long = "adjoint-vertex")]
    adjoint_vertex: Option<usize>,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[arg(long, value_parser = ["4.2", "4.3", "5.2", "5.3"])]
    id: String,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    a: Option<u32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "max-r", default_value_t = VerifyConfig::default().max_r)]
    max_r: u32,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
}

fn rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// How a command ended, beyond its report.
enum Failure {
    /// Bad arguments or inputs outside a function's domain: exit 2.
    Usage(String),
    /// A computation that could not be completed: exit 1.
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unstable { .. } | Error::Overflow => Failure::Compute(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Outcome {
    report: Report,
    /// The primary verdict, compared against `--expect`.
    verdict: Option<bool>,
    /// False when an internal cross-check disagrees.
    verified: bool,
}

impl Outcome {
    fn new(report: Report, verdict: Option<bool>, verified: bool) -> Self {
        Self {
            report,
            verdict,
            verified,
        }
    }
}

type Run = Result<Outcome, Failure>;

fn precision() -> Result<u32, Failure> {
    match std::env::var("WMULT_PRECISION") {
        Err(_) => Ok(DEFAULT_DIGITS),
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(d) if (1..=1000).contains(&d) => Ok(d),
            _ => Err(Failure::Usage(format!(
                "WMULT_PRECISION must be an integer in 1..=1000, got '{s}'"
            ))),
        },
    }
}

fn wmult_report(mut report: Report, rep: WmultReport) -> Outcome {
    let closed = rep.closed.as_ref().map_or("-".into(), fmt_rat);
    report
        .input("model", rep.model.clone())
        .input("blowup", rep.blowup.clone());
    report.result("dimension", rep.dimension);
    report.result("closed", rep.closed.as_ref().map_or(Value::Null, rat_value));
    report.result("extracted", rat_value(&rep.extracted));
    report.result("analytic", rat_value(&rep.analytic));
    if let Some(v) = &rep.extracted_without_dedupe {
        report.result("extracted_without_dedupe", rat_value(v));
    }
    report
        .result("period", rep.period)
        .result("start", rep.start);
    report.result(
        "summary",
        format!(
            "closed {closed}, extracted {}, analytic {}",
            fmt_rat(&rep.extracted),
            fmt_rat(&rep.analytic)
        ),
    );
    let agrees = rep.agrees();
    report.verdict("agree", agrees);
    report.notes(rep.notes);
    Outcome::new(report, Some(agrees), agrees)
}

fn wmult(cmd: WmultCmd, report: Report) -> Run {
    match cmd {
        WmultCmd::Quotient { r, a, blowup } => {
            let q = match a.len() {
                1 | 2 => CyclicQuotient::with_unit_first(r, &a)?,
                3 => CyclicQuotient::new(r, a)?,
                n => {
                    return Err(Failure::Usage(format!(
                        "--a takes 1 to 3 residues, got {n}"
                    )))
                }
            };
            let spec = BlowupSpec::parse_for(&q, &blowup.join(" "))?;
            let rep = verify_wmult(&Model::Quotient(q), Some(&spec))?;
            Ok(wmult_report(report, rep))
        }
        WmultCmd::Terminal {
            case,
            r,
            a,
            form,
            n,
        } => {
            let r = match (case.as_str(), r) {
                (_, Some(r)) => r,
                ("cAx4", None) => 4,
                ("cD3", None) => 3,
                ("cA", None) => return Err(Failure::Usage("cA needs --r and --a".into())),
                (_, None) => 2,
            };
            let mut text = format!("terminal {case} r={r}");
            for (k, v) in [
                ("a", a.map(|x| x.to_string())),
                ("form", form),
                ("n", n.map(|x| x.to_string())),
            ] {
                if let Some(v) = v {
                    text.push_str(&format!(" {k}={v}"));
                }
            }
            let rep = verify_wmult(&text.parse()?, None)?;
            Ok(wmult_report(report, rep))
        }
        WmultCmd::Subvariety { model } => {
            let text = if model.trim_start().starts_with("subvariety") {
                model
            } else {
                format!("subvariety {model}")
            };
            let rep = verify_wmult(&text.parse()?, None)?;
            Ok(wmult_report(report, rep))
        }
    }
}

fn word(args: WordArgs, mut report: Report) -> Run {
    let support: MonomialSupport = args.support.parse()?;
    report.input("support", support.to_string());
    report.input(
        "weights",
        args.weights.iter().map(fmt_rat).collect::<Vec<_>>(),
    );
    let order = weighted_order(&support, &args.weights)?;
    report.result("weighted_order", rat_value(&order));
    let mut verified = true;
    if let Some(ra) = args.kawamata {
        let (r, a) = (ra[0], ra[1]);
        report.input("kawamata", json!({ "r": r, "a": a }));
        let k = kawamata_wmult_divisor(&support, r, a)?;
        let kawamata_weights = [
            rat(a as i64, r as i64),
            rat((r - a) as i64, r as i64),
            rat(1, r as i64),
        ];
        let scaled = int(r as i64) * weighted_order(&support, &kawamata_weights)?;
        verified = k == scaled;
        report.result("kawamata_wmult", rat_value(&k));
        report.result("r_times_order", rat_value(&scaled));
        report.verdict("kawamata_consistent", verified);
    }
    Ok(Outcome::new(report, None, verified))
}

fn condition_value(c: &Condition) -> Value {
    json!({
        "name": c.name,
        "power": c.power,
        "threshold": fmt_rat(&c.threshold),
        "attained": fmt_rat(&c.attained),
        "strict": c.strict,
        "margin": fmt_rat(&c.margin),
        "pass": c.pass,
    })
}

fn verdict_outcome(mut report: Report, v: FreenessVerdict) -> Outcome {
    report.result(
        "conditions",
        v.conditions.iter().map(condition_value).collect::<Vec<_>>(),
    );
    report.verdict("checker", v.checker.clone());
    report.verdict("pass", v.pass);
    report.verdict("summary", v.summary());
    report.notes(v.notes);
    Outcome::new(report, Some(v.pass), true)
}

fn freeness(checker: Checker, args: FreenessArgs, mut report: Report) -> Run {
    let need = |v: Option<Rat>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("{flag} is required here")))
    };
    let r = args.r;
    if checker == Checker::Thm51 {
        let (l2, lc) = (need(args.l2, "--L2")?, need(args.lc, "--LC")?);
        report
            .input("r", r)
            .input("L2", rat_value(&l2))
            .input("LC", rat_value(&lc));
        return Ok(verdict_outcome(report, check_thm51(r, &l2, &lc)?));
    }
    let point = match (checker, args.a, args.b) {
        (Checker::Thm41, Some(a), Some(b)) => PointKind::Quotient { r, a, b },
        (Checker::Thm41, _, _) => return Err(Failure::Usage("thm41 needs --a and --b".into())),
        (_, Some(a), Some(b)) => PointKind::Quotient { r, a, b },
        (_, None, None) if r == 1 => PointKind::Gorenstein,
        (_, None, None) => PointKind::Terminal { r },
        _ => return Err(Failure::Usage("give both --a and --b or neither".into())),
    };
    let inp = FreenessInput::new(
        point,
        need(args.l3, "--L3")?,
        need(args.l2s, "--L2S")?,
        need(args.lc, "--LC")?,
    )?;
    report.input("point", inp.point.to_string());
    report
        .input("L3", rat_value(&inp.l3))
        .input("L2S", rat_value(&inp.l2s))
        .input("LC", rat_value(&inp.lc));
    let v = match checker {
        Checker::Thm41 => check_thm41(&inp)?,
        Checker::Thm44 => check_thm44(&inp)?,
        _ => check_cor45(&inp)?,
    };
    Ok(verdict_outcome(report, v))
}

/// Endpoints rounded outward, so the printed interval still contains the value.
fn enclosure_value(e: &Enclosure, digits: u32) -> Value {
    let (lo, hi) = e.decimal_bounds(digits);
    json!({ "lo": lo, "hi": hi, "digits": digits })
}

fn lemma33(cmd: Lemma33Cmd, mut report: Report) -> Run {
    let digits = precision()?;
    match cmd {
        Lemma33Cmd::Lhs {
            d,
            e,
            k,
            k_prime,
            lambda,
            n,
            r,
            t,
            t0,
            ln,
        } => {
            let p = AuxParams {
                d,
                e,
                k,
                k_prime,
                lambda,
                n,
                r,
                t,
                t0,
            };
            report
                .input("d", d)
                .input("e", rat_value(&p.e))
                .input("k", rat_value(&p.k));
            report
                .input("k_prime", rat_value(&p.k_prime))
                .input("lambda", rat_value(&p.lambda));
            report.input("n", n).input("r", r);
            for (key, v) in [("t", &p.t), ("t0", &p.t0)] {
                if let Some(v) = v {
                    report.input(key, rat_value(v));
                }
            }
            let v = lemma33_lhs(&p)?;
            report.result("lhs", rat_value(&v.value));
            report.result("lhs_decimal", real_value(&v.value, digits));
            if let Some(two) = &v.exponent_two {
                report.result("lhs_exponent_two", rat_value(two));
            } else if n != 3 {
                report.result("lhs_exponent_two", Value::Null);
                report.notes(["with exponent 2 the limit at lambda = 1 - de diverges".to_string()]);
            }
            report.result("limit_branch", v.limit_branch);
            let mut verdict = None;
            if let Some(ln) = ln {
                let rhs = lemma33_rhs(&ln, r, n);
                report.input("Ln", rat_value(&ln));
                report.result("rhs", rat_value(&rhs));
                let holds = v.value < rhs;
                report.verdict("lhs_below_rhs", holds);
                verdict = Some(holds);
            }
            Ok(Outcome::new(report, verdict, true))
        }
        Lemma33Cmd::LambdaBound { d, e, n } => {
            report.input("d", d).input("e", rat_value(&e)).input("n", n);
            let b = lemma33_lambda_bound(d, &e, n, digits)?;
            report.result("lambda_bound", enclosure_value(&b, digits));
            Ok(Outcome::new(report, None, true))
        }
        Lemma33Cmd::Step22 { e, grid } => {
            report
                .input("e", rat_value(&e))
                .input("grid", rat_value(&grid));
            let rep = step22_feasibility(&e, &grid, digits)?;
            report.result("lambda_max", enclosure_value(&rep.lambda_max, digits));
            report.result("samples", rep.samples);
            report.result("max_lhs", enclosure_value(&rep.max_lhs, digits));
            report.result("argmax", rat_value(&rep.argmax));
            report.verdict("feasible", rep.feasible);
            report.notes(rep.warnings);
            Ok(Outcome::new(report, Some(rep.feasible), true))
        }
    }
}

fn wps(args: WpsArgs, mut report: Report) -> Run {
    let space = WpsSpace::new(args.weights)?;
    report
        .input("space", space.to_string())
        .input("degree", args.degree);
    let face: Vec<usize> = match args.face {
        Some(f) => f.into_iter().map(|i| i as usize).collect(),
        None => (0..space.weights().len()).collect(),
    };
    report.input("face", face.clone());
    let deg = wps_degree(&space, args.degree, &face)?;
    report.result("intersection", rat_value(&deg));
    if args.canonical {
        report.result("canonical_degree", canonical_degree(&space));
    }
    if let Some(v) = args.adjoint_vertex {
        report.input("adjoint_vertex", v);
        report.result(
            "adjoint_cartier",
            adjoint_cartier_degrees(&space, v, args.degree)?,
        );
    }
    report.notes(space.warning());
    Ok(Outcome::new(report, None, true))
}

fn example(args: ExampleArgs, mut report: Report) -> Run {
    let id: ExampleId = args.id.parse()?;
    let ex = paper_example(id, args.r, args.a)?;
    report.input("id", id.to_string()).input("r", args.r);
    if let Some(a) = args.a {
        report.input("a", a);
    }
    report
        .input("space", ex.space.to_string())
        .input("degree", ex.degree)
        .input("vertex", ex.vertex);
    report.result("top", rat_value(&ex.top));
    if let Some(l2s) = &ex.l2s {
        report.result("L2S", rat_value(l2s));
    }
    report.result("LC", rat_value(&ex.lc));
    report.result("LC_face", ex.lc_face.clone());
    report.result("adjoint_cartier", ex.adjoint_cartier);
    report.result(
        "conditions",
        ex.verdict
            .conditions
            .iter()
            .map(condition_value)
            .collect::<Vec<_>>(),
    );
    report.verdict("summary", ex.verdict.summary());
    report.verdict("pass", ex.verdict.pass);
    report.verdict("expected_failures", ex.expected_failures.clone());
    report.verdict("expected_passes", ex.expected_passes.clone());
    let matches = ex.matches_expectation();
    report.verdict("matches_expectation", matches);
    report.notes(
        ex.verdict
            .notes
            .iter()
            .cloned()
            .chain(ex.notes.iter().cloned()),
    );
    Ok(Outcome::new(report, Some(ex.verdict.pass), matches))
}

fn verify(args: VerifyArgs, mut report: Report) -> Run {
    let cfg = VerifyConfig {
        max_r: args.max_r,
        seed: args.seed,
        digits: precision()?,
    };
    report
        .input("max_r", cfg.max_r)
        .input("seed", cfg.seed)
        .input("digits", cfg.digits);
    let mut outcomes = run_all(&cfg);
    outcomes.sort_by_key(|o| o.id);
    let mut all = true;
    for o in &outcomes {
        all &= o.passed();
        report.result(
            &format!("{}", o.id),
            json!({ "name": o.name, "cases": o.cases, "failures": o.failures, "summary": o.summary() }),
        );
        report.verdict(&o.name, o.passed());
        report.notes(o.notes.iter().cloned());
    }
    report.verdict("all", all);
    Ok(Outcome::new(report, Some(all), all))
}

fn dispatch(cli: Cli, report: Report) -> Run {
    match cli.command {
        Command::Wmult(cmd) => wmult(cmd, report),
        Command::Word(args) => word(args, report),
        Command::Freeness { checker, args } => freeness(checker, args, report),
        Command::Lemma33(cmd) => lemma33(cmd, report),
        Command::Wps(args) => wps(args, report),
        Command::Example(args) => example(args, report),
        Command::Verify(args) => verify(args, report),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (format, expect) = (cli.format, cli.expect);
    let report = Report::new(argv[1..].join(" "));
    match dispatch(cli, report) {
        Ok(out) => {
            let expectation_met = match (expect, out.verdict) {
                (None, _) => true,
                (Some(x), Some(v)) => v == (x == Expect::Pass),
                (Some(_), None) => {
                    eprintln!("error: this command has no verdict to compare with --expect");
                    return ExitCode::from(2);
                }
            };
            print!("{}", out.report.render(format));
            if out.verified && expectation_met {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
