use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use ternary_univoque::critical::{
    self, appendix_sign_suite_on_domains, branch_of, p_bound, p_of_m, r_bound, r_of_m, residual,
    Branch, CriticalError, SuiteOptions,
};
use ternary_univoque::seq::{self, Alphabet, EPSeq, Parsed, Word};
use ternary_univoque::subshift::{
    self, build_safety_automaton, classify_growth, count_words, export_dot, GrowthKind,
};
use ternary_univoque::univoque::{self, Condition, FamilySpec, Verdict, VerdictKind};

const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "univoque", version, about = "Unique expansions over {0, 1, m}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate π_q of an eventually periodic sequence.
    Pi(PiArgs),
    /// Decide whether a sequence is a unique expansion.
    Check(CheckArgs),
    /// CSV of P, R, p and r over a grid of m.
    ScanCurve(ScanArgs),
    /// Automaton of sequences over {1, m} avoiding the given words.
    Automaton(AutomatonArgs),
    /// Run the sign-identity suite and invariant checks.
    Selftest(SelftestArgs),
    /// Print the interval constants.
    Constants,
    /// P, R, p and r at a single m.
    Critical(CriticalArgs),
    /// Minimal forbidden blocks up to a given length.
    Forbidden(ForbiddenArgs),
    /// Try to certify that a block family lies in the zero-free univoque set.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct DigitsArgs {
    /// Value of the digit m; the alphabet is {0, 1, m}.
    #[arg(long)]
    m: Option<f64>,
    /// Comma-separated digit values of a general alphabet.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    alphabet: Option<Vec<f64>>,
}

#[derive(Args)]
struct PiArgs {
    seq: String,
    #[command(flatten)]
    digits: DigitsArgs,
    #[arg(long)]
    q: f64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").args(["ternary", "general"])))]
struct CheckArgs {
    seq: String,
    #[command(flatten)]
    digits: DigitsArgs,
    #[arg(long)]
    q: f64,
    /// Zero-free membership test over {1, m}.
    #[arg(long)]
    ternary: bool,
    /// Conditions for an arbitrary alphabet (the default).
    #[arg(long)]
    general: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    m_lo: f64,
    #[arg(long)]
    m_hi: f64,
    #[arg(long)]
    step: f64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").args(["dot", "classify", "count", "rate"])))]
struct AutomatonArgs {
    /// Forbidden words over {1, m}.
    words: Vec<String>,
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    classify: bool,
    /// Number of admissible words of this length.
    #[arg(long, value_name = "N")]
    count: Option<usize>,
    #[arg(long)]
    rate: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    json: bool,
    /// Shift P_m by 1e-3 inside the suite; the run must then fail.
    #[arg(long)]
    perturb_p: bool,
    /// Points per identity domain.
    #[arg(long, default_value_t = 200)]
    grid: usize,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long)]
    m: f64,
}

#[derive(Args)]
struct ForbiddenArgs {
    #[arg(long)]
    m: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 7)]
    max_len: usize,
}

#[derive(Args)]
struct CertifyArgs {
    blocks: Vec<String>,
    #[arg(long)]
    m: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 64)]
    depth: usize,
}

enum Failure {
    Input(String),
    Unsupported(String),
    /// Self-test ran and found failures; the report is already printed.
    Failed,
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

impl From<CriticalError> for Failure {
    fn from(e: CriticalError) -> Self {
        match e {
            CriticalError::Unsupported(_) => Failure::Unsupported(e.to_string()),
            other => input(other),
        }
    }
}

type Outcome = Result<String, Failure>;

fn alphabet(d: &DigitsArgs) -> Result<Alphabet<f64>, Failure> {
    match (&d.alphabet, d.m) {
        (Some(list), _) => Alphabet::new(list.clone()).map_err(input),
        (None, Some(m)) => Alphabet::ternary(m).map_err(input),
        (None, None) => Err(Failure::Input("either --m or --alphabet is required".into())),
    }
}

fn infinite(text: &str, a: &Alphabet<f64>) -> Result<EPSeq, Failure> {
    match seq::parse_seq(text, a).map_err(input)? {
        Parsed::Seq(s) => Ok(s),
        Parsed::Word(_) => Err(Failure::Input(format!("{text:?} has no '^w' period"))),
    }
}

fn word(text: &str) -> Result<Word, Failure> {
    Word::parse_ternary(text).map_err(|e| Failure::Input(format!("{text:?}: {e}")))
}

fn cmd_pi(args: &PiArgs) -> Outcome {
    let a = alphabet(&args.digits)?;
    let s = infinite(&args.seq, &a)?;
    let v = seq::pi_eval(&s, &a, args.q).map_err(input)?;
    Ok(format!("{v:?}\n"))
}

#[derive(Serialize)]
struct WitnessJson {
    position: usize,
    condition: &'static str,
    slack: f64,
    boundary: bool,
}

#[derive(Serialize)]
struct VerdictJson {
    verdict: &'static str,
    witness: Option<WitnessJson>,
    slack: Option<f64>,
}

fn verdict_json(v: &Verdict<f64>) -> VerdictJson {
    VerdictJson {
        verdict: v.kind.name(),
        witness: v.witness.map(|w| WitnessJson {
            position: w.position,
            condition: match w.condition {
                Condition::Raise => "raise",
                Condition::Lower => "lower",
            },
            slack: w.slack,
            boundary: w.boundary,
        }),
        slack: v.min_slack(),
    }
}

fn cmd_check(args: &CheckArgs) -> Outcome {
    let verdict = if args.ternary {
        let m = args
            .digits
            .m
            .ok_or_else(|| Failure::Input("--ternary needs --m".into()))?;
        let a = Alphabet::ternary(m).map_err(input)?;
        let s = infinite(&args.seq, &a)?;
        univoque::check_v_membership(&s, m, args.q).map_err(input)?
    } else {
        let a = alphabet(&args.digits)?;
        let s = infinite(&args.seq, &a)?;
        univoque::check_univoque_general(&s, &a, args.q).map_err(input)?
    };
    let mut out = serde_json::to_string(&verdict_json(&verdict)).map_err(input)?;
    out.push('\n');
    Ok(out)
}

/// Fixed 17 significant digits in positional notation.
fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:?}");
    }
    let decimals = (16 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

fn or_na(v: Result<f64, CriticalError>) -> Result<String, Failure> {
    match v {
        Ok(x) => Ok(sig17(x)),
        Err(CriticalError::Unsupported(_)) => Ok("NA".into()),
        Err(e) => Err(e.into()),
    }
}

fn curve_row(m: f64) -> Result<String, Failure> {
    let branch = match r_of_m(m) {
        Ok(_) => branch_of(m).map_or("NA", |b| b.label()),
        Err(_) => "NA",
    };
    Ok(format!(
        "{},{},{},{},{},{}\n",
        sig17(m),
        sig17(p_bound(m)),
        sig17(r_bound(m)),
        or_na(p_of_m(m))?,
        or_na(r_of_m(m))?,
        branch
    ))
}

fn cmd_scan_curve(args: &ScanArgs) -> Outcome {
    let ScanArgs { m_lo, m_hi, step } = *args;
    if !(m_lo >= 2.0 && m_lo < m_hi && m_hi.is_finite() && step > 0.0) {
        return Err(Failure::Input(
            "need 2 <= m-lo < m-hi and step > 0".into(),
        ));
    }
    let n = ((m_hi - m_lo) / step * (1.0 + 1e-12)).floor() as usize + 1;
    let rows: Vec<Result<String, Failure>> = (0..n)
        .into_par_iter()
        .map(|i| curve_row(m_lo + step * i as f64))
        .collect();
    let mut out = String::from("m,P,R,p,r,branch\n");
    for row in rows {
        out.push_str(&row?);
    }
    Ok(out)
}

fn cmd_automaton(args: &AutomatonArgs) -> Outcome {
    let words = args.words.iter().map(|w| word(w)).collect::<Result<Vec<_>, _>>()?;
    let a = build_safety_automaton(&words).map_err(input)?;
    if args.dot {
        return Ok(export_dot(&a));
    }
    let class = classify_growth(&a).map_err(input)?;
    let kind = match class.kind {
        GrowthKind::FinitePaths(n) => format!("FinitePaths({n})"),
        k => k.name().to_string(),
    };
    if args.classify {
        return Ok(format!("{kind}\n"));
    }
    if let Some(n) = args.count {
        return Ok(format!("{}\n", count_words(&a, n).map_err(input)?));
    }
    let rate = subshift::growth_rate::<f64>(&a);
    if args.rate {
        return Ok(format!("{rate:?}\n"));
    }
    Ok(format!("states {}\nclass {kind}\nrate {rate:?}\n", a.len()))
}

#[derive(Serialize)]
struct IdentityJson {
    name: &'static str,
    pass: usize,
    fail: usize,
    skipped: usize,
}

#[derive(Serialize)]
struct CrossoverJson {
    name: &'static str,
    located: f64,
    expected: f64,
    ok: bool,
}

#[derive(Serialize)]
struct InvariantJson {
    name: &'static str,
    ok: bool,
}

#[derive(Serialize)]
struct SelftestJson {
    passed: bool,
    identities: Vec<IdentityJson>,
    crossovers: Vec<CrossoverJson>,
    invariants: Vec<InvariantJson>,
}

const SEVEN: [&str; 7] = ["111", "1mmm", "11m11", "11m1m1", "1mm1mm", "11m1mm1", "1mm1m1m"];

fn invariants() -> Vec<InvariantJson> {
    let per_branch = |check: &dyn Fn(Branch, f64) -> bool| {
        Branch::ALL.iter().all(|&b| {
            let (lo, hi) = b.interval::<f64>();
            (0..50).all(|i| check(b, lo + (hi - lo) * i as f64 / 49.0))
        })
    };
    let residuals = per_branch(&|b, m| {
        r_of_m(m)
            .ok()
            .and_then(|r| residual(&b.sequence(), b.form(), m, r).ok())
            .is_some_and(|v| v.abs() < 1e-9)
    });
    let ordering = per_branch(&|_, m| match (p_of_m(m), r_of_m(m)) {
        (Ok(p), Ok(r)) => 2.0 <= p && p <= p_bound(m) + 1e-9 && p_bound(m) - 1e-9 <= r && r < r_bound(m),
        _ => false,
    });
    let seven: Vec<Word> = SEVEN.iter().filter_map(|w| Word::parse_ternary(w).ok()).collect();
    let scan = r_of_m(3.0)
        .ok()
        .and_then(|q| univoque::scan_forbidden(3.0, q, 7).ok())
        .is_some_and(|s| s.words == seven);
    let mut eight = seven.clone();
    eight.extend(Word::parse_ternary("1mm1m11mm1").ok());
    let kind = |ws: &[Word]| {
        build_safety_automaton(ws)
            .ok()
            .and_then(|a| classify_growth(&a).ok())
            .map(|c| c.kind)
    };
    let automata = kind(&seven) == Some(GrowthKind::Uncountable)
        && kind(&eight) == Some(GrowthKind::CountablyInfinite);
    let binary = Alphabet::<f64>::binary();
    let flip = seq::parse_infinite("(10)^w", &binary).is_ok_and(|c| {
        let k = |q| univoque::check_univoque_general(&c, &binary, q).map(|v| v.kind).ok();
        k(1.617) == Some(VerdictKind::ProvenNotUnique) && k(1.619) == Some(VerdictKind::ProvenUnique)
    });
    vec![
        InvariantJson { name: "branch-residuals", ok: residuals },
        InvariantJson { name: "critical-ordering", ok: ordering },
        InvariantJson { name: "seven-word-scan", ok: scan },
        InvariantJson { name: "automaton-classes", ok: automata },
        InvariantJson { name: "golden-flip", ok: flip },
    ]
}

fn cmd_selftest(args: &SelftestArgs) -> Outcome {
    if args.grid < 2 {
        return Err(Failure::Input("--grid must be at least 2".into()));
    }
    let options = SuiteOptions {
        p_offset: if args.perturb_p { 1e-3 } else { 0.0 },
    };
    let report = appendix_sign_suite_on_domains::<f64>(args.grid, &options);
    let invariants = invariants();
    let passed = report.passed() && invariants.iter().all(|i| i.ok);
    let summary = SelftestJson {
        passed,
        identities: report
            .tally()
            .into_iter()
            .map(|(id, t)| IdentityJson {
                name: id.name(),
                pass: t.pass,
                fail: t.fail,
                skipped: t.skipped,
            })
            .collect(),
        crossovers: report
            .crossovers
            .iter()
            .map(|c| CrossoverJson {
                name: c.crossover.name(),
                located: c.located,
                expected: c.expected,
                ok: c.ok,
            })
            .collect(),
        invariants,
    };
    let out = if args.json {
        serde_json::to_string_pretty(&summary).map_err(input)? + "\n"
    } else {
        let mut s = String::new();
        for i in &summary.identities {
            let status = if i.fail == 0 { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{status} {:<32} pass {:>4}  fail {:>4}  skipped {:>2}", i.name, i.pass, i.fail, i.skipped);
        }
        for c in &summary.crossovers {
            let status = if c.ok { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{status} crossover {:<8} located {:.10}  expected {:.10}", c.name, c.located, c.expected);
        }
        for i in &summary.invariants {
            let _ = writeln!(s, "{} {}", if i.ok { "ok  " } else { "FAIL" }, i.name);
        }
        let _ = writeln!(s, "{}", if passed { "selftest passed" } else { "selftest FAILED" });
        s
    };
    print!("{out}");
    if passed {
        Ok(String::new())
    } else {
        Err(Failure::Failed)
    }
}

fn cmd_constants() -> Outcome {
    let c = critical::constants::<f64>();
    let mut out = String::new();
    for (name, value, provenance) in c.entries() {
        let _ = writeln!(out, "{name:<10} {}  {}", sig17(value), provenance.tag());
    }
    let _ = writeln!(out, "m_3 agrees with the printed value {}", c.m3_matches());
    Ok(out)
}

fn cmd_critical(args: &CriticalArgs) -> Outcome {
    let m = args.m;
    if !(m >= 2.0) || !m.is_finite() {
        return Err(Failure::Input(format!("m must be at least 2, got {m}")));
    }
    let p = p_of_m(m);
    let r = r_of_m(m);
    let mut out = String::new();
    let _ = writeln!(out, "m       {}", sig17(m));
    let _ = writeln!(out, "P       {}", sig17(p_bound(m)));
    let _ = writeln!(out, "R       {}", sig17(r_bound(m)));
    let _ = writeln!(out, "p       {}", or_na(p.clone())?);
    let _ = writeln!(out, "r       {}", or_na(r.clone())?);
    let branch = r.as_ref().ok().and(branch_of(m));
    let _ = writeln!(out, "branch  {}", branch.map_or("NA", |b| b.label()));
    if let Err(e) = r.and(p) {
        print!("{out}");
        return Err(e.into());
    }
    Ok(out)
}

fn cmd_forbidden(args: &ForbiddenArgs) -> Outcome {
    let scan = univoque::scan_forbidden(args.m, args.q, args.max_len).map_err(input)?;
    let mut out = String::new();
    for w in &scan.words {
        let tag = if scan.boundary.contains(w) { " boundary" } else { "" };
        let _ = writeln!(out, "{w}{tag}");
    }
    Ok(out)
}

#[derive(Serialize)]
struct CertificateJson {
    certified: bool,
    uncountable: bool,
    tail_bound: f64,
    complement_bound: f64,
}

fn cmd_certify(args: &CertifyArgs) -> Outcome {
    let blocks = args.blocks.iter().map(|b| word(b)).collect::<Result<Vec<_>, _>>()?;
    let family = FamilySpec::new(blocks).map_err(input)?;
    let c = univoque::certify_family(&family, args.m, args.q, args.depth).map_err(input)?;
    let json = CertificateJson {
        certified: c.certified,
        uncountable: c.uncountable,
        tail_bound: c.tail_bound,
        complement_bound: c.complement_bound,
    };
    Ok(serde_json::to_string(&json).map_err(input)? + "\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pi(a) => cmd_pi(a),
        Command::Check(a) => cmd_check(a),
        Command::ScanCurve(a) => cmd_scan_curve(a),
        Command::Automaton(a) => cmd_automaton(a),
        Command::Selftest(a) => cmd_selftest(a),
        Command::Constants => cmd_constants(),
        Command::Critical(a) => cmd_critical(a),
        Command::Forbidden(a) => cmd_forbidden(a),
        Command::Certify(a) => cmd_certify(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(EXIT_UNSUPPORTED)
        }
        Err(Failure::Failed) => ExitCode::FAILURE,
    }
}
