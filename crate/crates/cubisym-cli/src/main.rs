//! cubisym: splitting decisions for cubic symbol algebras over Q(w).
//!
//! Every subcommand prints one JSON report on standard output; `--pretty`
//! adds a human summary on standard error. Exit codes: 0 for a
//! determinate result, 1 for usage or mathematical errors, 2 when the
//! answer is indeterminate within the configured budgets. Equal inputs
//! and budgets always produce identical reports apart from the `timings`
//! block.

mod cache;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use cubisym_core::algebra::{
    self, FieldContext, Solvable, SplitDecision, SymbolAlgebra, Verdict,
};
use cubisym_core::budget::Budgets;
use cubisym_core::classgrp::{Certainty, ClassError};
use cubisym_core::cyclotomic;
use cubisym_core::eisenstein::EisensteinInt;
use cubisym_core::kummer::NumberFieldOrder;
use cubisym_core::residue;

use cache::{class_group_for, CacheStatus, VERSION};

#[derive(Parser)]
#[command(
    name = "cubisym",
    version,
    about = "Splitting of cubic symbol algebras over Q(w), w a primitive cube root of unity"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Human summary on standard error in addition to the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// TOML config file (budgets table and cache_dir).
    #[arg(long, global = true, env = "CUBISYM_CONFIG")]
    config: Option<PathBuf>,
    /// Directory for cached class-group data.
    #[arg(long, global = true, env = "CUBISYM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Skip the on-disk cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Rational prime bound for the class-group factor base (0 = automatic).
    #[arg(long, global = true)]
    fb_prime_bound: Option<u64>,
    /// Node cap for one lattice enumeration tree.
    #[arg(long, global = true)]
    enum_node_cap: Option<u64>,
    /// Short vectors harvested per ideal during relation search.
    #[arg(long, global = true)]
    harvest_cap: Option<u64>,
    /// Relation rounds before the class group reports failure.
    #[arg(long, global = true)]
    relation_rounds: Option<u32>,
    /// Largest factor the integer factorizer will chase.
    #[arg(long, global = true)]
    factor_bound: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether (m, p^e / Q(w)) splits.
    Analyze {
        /// Cube-free radicand of the Kummer field.
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// Rational prime in the second slot.
        #[arg(long)]
        p: u64,
        /// Explicit exponent on p; decided by the norm oracle directly.
        #[arg(long, conflicts_with = "rule")]
        exponent: Option<u64>,
        /// Allow a unit of Z[w] in the second slot.
        #[arg(long)]
        allow_unit: bool,
        /// Decision rule to apply (default: the residue criterion at h_p).
        #[arg(long, value_enum)]
        rule: Option<RuleChoice>,
    },
    /// Decide u * target = N(beta) over L = Q(w, cbrt m) and build beta.
    Normeq {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// Integer or "a+b*w" Eisenstein target.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Accept any unit u of Z[w]; otherwise u = 1 is required.
        #[arg(long)]
        allow_unit: bool,
    },
    /// Class number and group structure of Q(w, cbrt m).
    Classnum {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Order of the class of a prime ideal above p, with conjugates checked.
    Classorder {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        p: u64,
    },
    /// Cubic residue character of alpha at an Eisenstein prime.
    Character {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        pi: String,
    },
    /// Decomposition shape of p in Q(zeta_l), and over a radicand with --m.
    Shape {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// Dump the maximal order of Q(w, cbrt m).
    Field {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Run the worked-example golden table and report each line.
    PaperSuite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleChoice {
    /// Split iff the radicand is a cubic residue, at exponent h_p.
    Main,
    /// Split at exponent h_L (requires the residue hypothesis).
    ClassNumber,
    /// Split at exponent gcd(h_p, 3) (requires the residue hypothesis).
    Gcd,
    /// Split iff residue, at exponent 1 (requires h_L = 1).
    ClassNumberOne,
    /// Division at exponent 1 (requires p = 1 mod 3 and a non-residue).
    Division,
}

#[derive(Deserialize, Default)]
struct ConfigFile {
    cache_dir: Option<PathBuf>,
    budgets: Option<Budgets>,
}

struct CliError {
    code: &'static str,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: "usage", message: message.into() }
    }
    fn math(message: impl std::fmt::Display) -> Self {
        CliError { code: "math", message: message.to_string() }
    }
}

macro_rules! math_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::math(e)
            }
        }
    )*};
}
math_error!(
    algebra::AlgebraError,
    cubisym_core::kummer::FieldError,
    cubisym_core::residue::ResidueError,
    cubisym_core::cyclotomic::ShapeError,
    cubisym_core::eisenstein::EisensteinError
);

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        CliError::math(e)
    }
}

struct Outcome {
    report: Value,
    pretty: Vec<String>,
    indeterminate: bool,
    failed: bool,
}

impl Outcome {
    fn new(report: Value) -> Self {
        Outcome { report, pretty: Vec::new(), indeterminate: false, failed: false }
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{e}");
            println!(
                "{}",
                json!({"schema": 1, "error": {"code": "usage", "message": e.to_string()}})
            );
            return 1;
        }
    };
    let t0 = Instant::now();
    match run(&cli) {
        Ok(mut out) => {
            if let Value::Object(o) = &mut out.report {
                let t = o.entry("timings").or_insert_with(|| json!({}));
                t["total_ms"] = json!(t0.elapsed().as_millis() as u64);
            }
            println!("{}", out.report);
            if cli.pretty {
                for line in &out.pretty {
                    eprintln!("{line}");
                }
            }
            if out.failed {
                1
            } else if out.indeterminate {
                2
            } else {
                0
            }
        }
        Err(e) => {
            println!(
                "{}",
                json!({"schema": 1, "error": {"code": e.code, "message": e.message}})
            );
            eprintln!("error: {}", e.message);
            1
        }
    }
}

struct Session {
    budgets: Budgets,
    cache_dir: Option<PathBuf>,
    warnings: Vec<String>,
}

impl Session {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let cfg: ConfigFile = match &cli.config {
            Some(path) => {
                let raw = std::fs::read_to_string(path).map_err(|e| {
                    CliError::usage(format!("config {}: {e}", path.display()))
                })?;
                toml::from_str(&raw)
                    .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let mut budgets = cfg.budgets.unwrap_or_else(Budgets::quick);
        if let Some(x) = cli.fb_prime_bound {
            budgets.fb_prime_bound = x;
        }
        if let Some(x) = cli.enum_node_cap {
            budgets.enum_node_cap = x;
        }
        if let Some(x) = cli.harvest_cap {
            budgets.harvest_vectors_per_ideal = x;
        }
        if let Some(x) = cli.relation_rounds {
            budgets.relation_rounds = x;
        }
        if let Some(x) = cli.factor_bound {
            budgets.factor_bound = x;
        }
        let cache_dir = if cli.no_cache {
            None
        } else {
            cli.cache_dir.clone().or(cfg.cache_dir).or_else(default_cache_dir)
        };
        Ok(Session { budgets, cache_dir, warnings: Vec::new() })
    }

    fn context(&mut self, m: i64) -> Result<(FieldContext, CacheStatus), CliError> {
        let order = NumberFieldOrder::new(m)?;
        let (class_group, status) = class_group_for(
            &order,
            &self.budgets,
            self.cache_dir.as_deref(),
            &mut self.warnings,
        )?;
        Ok((FieldContext::from_parts(order, class_group), status))
    }

    fn flush_warnings(&mut self) {
        for w in self.warnings.drain(..) {
            eprintln!("warning: {w}");
        }
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(x).join("cubisym"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("cubisym"))
}

fn base_report(command: &str, inputs: Value, session: &Session) -> Value {
    json!({
        "schema": 1,
        "command": command,
        "version": VERSION,
        "inputs": inputs,
        "budgets": session.budgets,
    })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut session = Session::from_cli(cli)?;
    let out = match &cli.cmd {
        Cmd::Analyze { m, p, exponent, allow_unit, rule } => {
            cmd_analyze(&mut session, *m, *p, *exponent, *allow_unit, *rule)
        }
        Cmd::Normeq { m, target, allow_unit } => cmd_normeq(&mut session, *m, target, *allow_unit),
        Cmd::Classnum { m } => cmd_classnum(&mut session, *m),
        Cmd::Classorder { m, p } => cmd_classorder(&mut session, *m, *p),
        Cmd::Character { alpha, pi } => cmd_character(&session, alpha, pi),
        Cmd::Shape { l, p, m } => cmd_shape(&session, *l, *p, *m),
        Cmd::Field { m } => cmd_field(&session, *m),
        Cmd::PaperSuite => cmd_paper_suite(&mut session),
    };
    session.flush_warnings();
    out
}

fn cert_str(c: Certainty) -> &'static str {
    match c {
        Certainty::Proven => "proven",
        Certainty::Stabilized => "stabilized",
    }
}

fn parse_eisenstein(s: &str) -> Result<EisensteinInt, CliError> {
    EisensteinInt::from_str(s)
        .map_err(|e| CliError { code: "parse", message: format!("{s:?}: {e}") })
}

fn decision_fields(report: &mut Value, d: &SplitDecision) {
    report["verdict"] = json!(d.verdict.as_str());
    report["rule"] = json!(d.rule.as_str());
    report["exponent"] = json!(d.exponent);
    report["h_p"] = json!(d.h_p.map(|(k, _)| k));
    report["h_p_certainty"] = json!(d.h_p.map(|(_, c)| cert_str(c)));
    report["h_L"] = json!(d.h_l.as_ref().map(|(h, _)| h.to_string()));
    report["h_L_certainty"] = json!(d.h_l.as_ref().map(|&(_, c)| cert_str(c)));
    report["residue"] = json!(d.residue);
    report["unit"] = serde_json::to_value(&d.unit).expect("unit serialize");
    report["beta"] = serde_json::to_value(&d.certificate).expect("beta serialize");
}

fn decision_pretty(d: &SplitDecision, m: i64, base: &str) -> Vec<String> {
    let mut out = vec![format!(
        "({m}, {base}^{}) over Q(w): {} [rule: {}]",
        d.exponent,
        d.verdict.as_str(),
        d.rule.as_str()
    )];
    if let Some((hp, c)) = d.h_p {
        out.push(format!("h_p = {hp} ({})", cert_str(c)));
    }
    if let Some((hl, c)) = &d.h_l {
        out.push(format!("h_L = {hl} ({})", cert_str(*c)));
    }
    if let Some(r) = d.residue {
        out.push(format!("{m} is{} a cubic residue modulo the base", if r { "" } else { " not" }));
    }
    match (&d.unit, &d.certificate) {
        (Some(u), Some(_)) => {
            out.push(format!("certificate: N(beta) = {u} * {base}^{} verified exactly", d.exponent))
        }
        _ => {}
    }
    out
}

fn cmd_analyze(
    session: &mut Session,
    m: i64,
    p: u64,
    exponent: Option<u64>,
    allow_unit: bool,
    rule: Option<RuleChoice>,
) -> Result<Outcome, CliError> {
    let inputs = json!({
        "m": m, "p": p, "exponent": exponent, "allow_unit": allow_unit,
        "rule": rule.map(|r| r.label()),
    });
    let mut report = base_report("analyze", inputs, session);

    let decision = if rule == Some(RuleChoice::Division) {
        algebra::decide_division(m, p, session.budgets.factor_bound)?
    } else if let Some(e) = exponent {
        let (ctx, status) = session.context(m)?;
        report["timings"] = json!({"class_group_cache": status.as_str()});
        let desc = SymbolAlgebra::rational(m, p, e, allow_unit);
        algebra::analyze(&ctx, &desc, &session.budgets)?
    } else {
        let (ctx, status) = session.context(m)?;
        report["timings"] = json!({"class_group_cache": status.as_str()});
        match rule.unwrap_or(RuleChoice::Main) {
            RuleChoice::Main => algebra::decide_main(&ctx, p, &session.budgets)?,
            RuleChoice::ClassNumber => {
                algebra::decide_class_number_exponent(&ctx, p, &session.budgets)?
            }
            RuleChoice::Gcd => algebra::decide_gcd_variant(&ctx, p, &session.budgets)?,
            RuleChoice::ClassNumberOne => {
                algebra::decide_class_number_one(&ctx, p, &session.budgets)?
            }
            RuleChoice::Division => unreachable!(),
        }
    };
    decision_fields(&mut report, &decision);
    let mut out = Outcome::new(report);
    out.pretty = decision_pretty(&decision, m, &p.to_string());
    out.indeterminate = decision.verdict == Verdict::Indeterminate;
    Ok(out)
}

impl RuleChoice {
    fn label(self) -> &'static str {
        match self {
            RuleChoice::Main => "main",
            RuleChoice::ClassNumber => "class-number",
            RuleChoice::Gcd => "gcd",
            RuleChoice::ClassNumberOne => "class-number-one",
            RuleChoice::Division => "division",
        }
    }
}

fn cmd_normeq(
    session: &mut Session,
    m: i64,
    target: &str,
    allow_unit: bool,
) -> Result<Outcome, CliError> {
    let t = parse_eisenstein(target)?;
    if t.is_zero() {
        return Err(CliError::usage("norm equation target must be nonzero"));
    }
    let inputs = json!({"m": m, "target": t.to_string(), "allow_unit": allow_unit});
    let mut report = base_report("normeq", inputs, session);
    let (ctx, status) = session.context(m)?;
    report["timings"] = json!({"class_group_cache": status.as_str()});
    let res = algebra::solve_norm_equation(&ctx, &t, allow_unit, &session.budgets)?;
    report["solvable"] = json!(res.solvable.as_str());
    report["unit"] = serde_json::to_value(&res.unit).expect("unit serialize");
    report["beta"] = serde_json::to_value(&res.beta).expect("beta serialize");
    report["trace"] = json!(res.trace);
    let mut out = Outcome::new(report);
    out.indeterminate = res.solvable == Solvable::Indeterminate;
    out.pretty.push(match res.solvable {
        Solvable::Yes => format!("u * ({}) = N(beta) is solvable over Q(w, cbrt {m})", t),
        Solvable::No => format!("no unit multiple of {} is a relative norm from Q(w, cbrt {m})", t),
        Solvable::Indeterminate => "solvability undecided within budget".to_string(),
    });
    if let (Some(u), Some(_)) = (&res.unit, &res.beta) {
        out.pretty.push(format!("certificate verified: N(beta) = {u} * ({t})"));
    }
    Ok(out)
}

fn cmd_classnum(session: &mut Session, m: i64) -> Result<Outcome, CliError> {
    let mut report = base_report("classnum", json!({"m": m}), session);
    let order = NumberFieldOrder::new(m)?;
    match class_group_for(&order, &session.budgets, session.cache_dir.as_deref(), &mut session.warnings)
    {
        Ok((cg, status)) => {
            report["timings"] = json!({"class_group_cache": status.as_str()});
            report["h_L"] = json!(cg.h.to_string());
            report["elementary_divisors"] =
                json!(cg.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>());
            report["certainty"] = json!(cert_str(cg.certainty));
            report["fb_prime_bound"] = json!(cg.fb_prime_bound);
            report["relation_rounds_used"] = json!(cg.rounds_used);
            let mut out = Outcome::new(report);
            out.pretty.push(format!(
                "h_L(Q(w, cbrt {m})) = {} [{}], invariant factors {:?}",
                cg.h,
                cert_str(cg.certainty),
                cg.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>()
            ));
            Ok(out)
        }
        Err(e @ ClassError::RankDeficient { .. }) => {
            report["h_L"] = Value::Null;
            report["elementary_divisors"] = Value::Null;
            report["indeterminate_reason"] = json!(e.to_string());
            let mut out = Outcome::new(report);
            out.indeterminate = true;
            out.pretty.push(format!("class group undecided: {e}"));
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_classorder(session: &mut Session, m: i64, p: u64) -> Result<Outcome, CliError> {
    let mut report = base_report("classorder", json!({"m": m, "p": p}), session);
    let (ctx, status) = session.context(m)?;
    report["timings"] = json!({"class_group_cache": status.as_str()});
    let co = ctx.class_order_of_rational_prime(p, &session.budgets)?;
    let primes = ctx.order.factor_prime(p)?;
    report["h_p"] = json!(co.order);
    report["certainty"] = json!(cert_str(co.certainty));
    report["gcd_h_p_3"] = json!(cubisym_core::arith::gcd_u64(co.order, 3));
    report["primes_above"] = json!(primes.len());
    report["refuted_exponents"] = json!(co
        .refuted
        .iter()
        .map(|(d, c)| (d.to_string(), cert_str(*c)))
        .collect::<BTreeMap<_, _>>());
    let mut out = Outcome::new(report);
    out.pretty.push(format!(
        "h_p = {} ({}) for each of the {} primes above {p} in Q(w, cbrt {m}); gcd(h_p, 3) = {}",
        co.order,
        cert_str(co.certainty),
        primes.len(),
        cubisym_core::arith::gcd_u64(co.order, 3)
    ));
    Ok(out)
}

fn cmd_character(session: &Session, alpha: &str, pi: &str) -> Result<Outcome, CliError> {
    let a = parse_eisenstein(alpha)?;
    let p = parse_eisenstein(pi)?;
    let report = {
        let mut r = base_report(
            "character",
            json!({"alpha": a.to_string(), "pi": p.to_string()}),
            session,
        );
        let chi = residue::cubic_character(&a, &p)?;
        r["value"] = serde_json::to_value(chi).expect("character serialize");
        r
    };
    let mut out = Outcome::new(report.clone());
    out.pretty.push(format!("({} / {})_3 = {}", a, p, report["value"].as_str().unwrap()));
    Ok(out)
}

fn cmd_shape(session: &Session, l: u64, p: u64, m: Option<i64>) -> Result<Outcome, CliError> {
    let mut report = base_report("shape", json!({"l": l, "p": p, "m": m}), session);
    let base = cyclotomic::decomposition_shape(l, p)?;
    report["e"] = json!(base.e);
    report["f"] = json!(base.f);
    report["r"] = json!(base.r);
    let mut pretty = vec![format!(
        "in Q(zeta_{l}): p = {p} has e = {}, f = {}, {} prime(s)",
        base.e, base.f, base.r
    )];
    if let Some(m) = m {
        let ks = cyclotomic::kummer_shape(l, p, m)?;
        let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for &(e, f) in &ks.primes {
            *counts.entry((e, f)).or_default() += 1;
        }
        let kummer: Vec<Value> = counts
            .iter()
            .map(|(&(e, f), &count)| json!({"e": e, "f": f, "count": count}))
            .collect();
        report["kummer"] = json!(kummer);
        report["case"] = serde_json::to_value(ks.case).expect("case serialize");
        pretty.push(format!(
            "over the radicand {m}: {} prime(s), case {:?}",
            ks.primes.len(),
            ks.case
        ));
    }
    let mut out = Outcome::new(report);
    out.pretty = pretty;
    Ok(out)
}

fn cmd_field(session: &Session, m: i64) -> Result<Outcome, CliError> {
    let order = NumberFieldOrder::new(m)?;
    let mut report = base_report("field", json!({"m": m}), session);
    report["disc"] = json!(order.disc.to_string());
    report["index_theta"] = json!(order.index_theta.to_string());
    report["defining_poly"] =
        json!(order.defining_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    report["basis_den"] = json!(order.basis_den.to_string());
    report["basis_num"] = serde_json::to_value(&order.basis_num).expect("basis serialize");
    let sc: Vec<Vec<Vec<String>>> = order
        .structure_constants()
        .iter()
        .map(|r| r.iter().map(|c| c.iter().map(|x| x.to_string()).collect()).collect())
        .collect();
    report["structure_constants"] = json!(sc);
    let mut out = Outcome::new(report);
    out.pretty.push(format!(
        "Q(w, cbrt {m}): disc = {}, [O_L : Z[theta]] = {}",
        order.disc, order.index_theta
    ));
    Ok(out)
}

struct SuiteLine {
    name: &'static str,
    expected: String,
    got: String,
}

impl SuiteLine {
    fn pass(&self) -> bool {
        self.expected == self.got
    }
}

fn cmd_paper_suite(session: &mut Session) -> Result<Outcome, CliError> {
    let report = base_report("paper-suite", json!({}), session);
    let budgets = session.budgets.clone();
    let mut lines: Vec<SuiteLine> = Vec::new();
    let mut cache_notes: BTreeMap<String, &'static str> = BTreeMap::new();

    let push = |lines: &mut Vec<SuiteLine>, name, expected: String, got: String| {
        lines.push(SuiteLine { name, expected, got });
    };

    for (m, h, divisors) in
        [(5i64, "1", vec![]), (11, "4", vec!["2", "2"]), (43, "48", vec!["4", "12"])]
    {
        let (ctx, status) = session.context(m)?;
        cache_notes.insert(format!("class_group_cache_m{m}"), status.as_str());
        let (got_h, _) = ctx.h_l();
        push(
            &mut lines,
            match m {
                5 => "classnum m=5",
                11 => "classnum m=11",
                _ => "classnum m=43",
            },
            h.to_string(),
            got_h.to_string(),
        );
        if !divisors.is_empty() {
            push(
                &mut lines,
                if m == 11 { "divisors m=11" } else { "divisors m=43" },
                format!("{divisors:?}"),
                format!(
                    "{:?}",
                    ctx.class_group.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>()
                ),
            );
        }

        match m {
            5 => suite_m5(&ctx, &budgets, &mut lines),
            11 => suite_m11(&ctx, &budgets, &mut lines),
            _ => suite_m43(&ctx, &budgets, &mut lines),
        }
    }

    let passed = lines.iter().filter(|l| l.pass()).count();
    let failed = lines.len() - passed;
    let mut report = report;
    report["lines"] = json!(lines
        .iter()
        .map(|l| json!({
            "name": l.name,
            "expected": l.expected,
            "got": l.got,
            "pass": l.pass(),
        }))
        .collect::<Vec<_>>());
    report["passed"] = json!(passed);
    report["failed"] = json!(failed);
    report["timings"] = json!(cache_notes);
    let mut out = Outcome::new(report);
    for l in &lines {
        out.pretty.push(format!(
            "{} {:<28} expected {:<14} got {}",
            if l.pass() { "ok  " } else { "FAIL" },
            l.name,
            l.expected,
            l.got
        ));
    }
    out.pretty.push(format!("{passed} passed, {failed} failed"));
    out.failed = failed > 0;
    Ok(out)
}

fn normeq_line(ctx: &FieldContext, budgets: &Budgets, t: i64) -> String {
    match algebra::solve_norm_equation(ctx, &EisensteinInt::new(t, 0), false, budgets) {
        Ok(r) => match r.solvable {
            Solvable::Yes => {
                if r.beta.is_some() {
                    "solvable with certificate".to_string()
                } else {
                    "solvable without certificate".to_string()
                }
            }
            Solvable::No => "unsolvable".to_string(),
            Solvable::Indeterminate => "indeterminate".to_string(),
        },
        Err(e) => format!("error: {e}"),
    }
}

fn decide_line(ctx: &FieldContext, budgets: &Budgets, p: u64) -> String {
    match algebra::decide_main(ctx, p, budgets) {
        Ok(d) => {
            let cert = if d.verdict == Verdict::Split && d.certificate.is_none() {
                " without certificate"
            } else {
                ""
            };
            format!("{} at exponent {}{}", d.verdict.as_str(), d.exponent, cert)
        }
        Err(e) => format!("error: {e}"),
    }
}

fn classorder_line(ctx: &FieldContext, budgets: &Budgets, p: u64) -> String {
    match ctx.class_order_of_rational_prime(p, budgets) {
        Ok(co) => format!("h_p={}", co.order),
        Err(e) => format!("error: {e}"),
    }
}

fn shape_line(m: i64, p: u64) -> String {
    match cyclotomic::kummer_shape(3, p, m) {
        Ok(ks) => format!("{} primes", ks.primes.len()),
        Err(e) => format!("error: {e}"),
    }
}

fn suite_m5(ctx: &FieldContext, budgets: &Budgets, lines: &mut Vec<SuiteLine>) {
    lines.push(SuiteLine {
        name: "normeq m=5 t=17",
        expected: "solvable with certificate".into(),
        got: normeq_line(ctx, budgets, 17),
    });
    lines.push(SuiteLine {
        name: "normeq m=5 t=19",
        expected: "unsolvable".into(),
        got: normeq_line(ctx, budgets, 19),
    });
    lines.push(SuiteLine {
        name: "decide m=5 p=17",
        expected: "split at exponent 1".into(),
        got: decide_line(ctx, budgets, 17),
    });
    lines.push(SuiteLine {
        name: "decide m=5 p=19",
        expected: "division at exponent 1".into(),
        got: decide_line(ctx, budgets, 19),
    });
}

fn suite_m11(ctx: &FieldContext, budgets: &Budgets, lines: &mut Vec<SuiteLine>) {
    lines.push(SuiteLine {
        name: "classorder m=11 p=19",
        expected: "h_p=2".into(),
        got: classorder_line(ctx, budgets, 19),
    });
    lines.push(SuiteLine {
        name: "normeq m=11 t=19",
        expected: "solvable with certificate".into(),
        got: normeq_line(ctx, budgets, 19),
    });
    lines.push(SuiteLine {
        name: "normeq m=11 t=19^2",
        expected: "solvable with certificate".into(),
        got: normeq_line(ctx, budgets, 361),
    });
    lines.push(SuiteLine {
        name: "shape m=11 p=19",
        expected: "6 primes".into(),
        got: shape_line(11, 19),
    });
    lines.push(SuiteLine {
        name: "decide m=11 p=19",
        expected: "split at exponent 2".into(),
        got: decide_line(ctx, budgets, 19),
    });
}

fn suite_m43(ctx: &FieldContext, budgets: &Budgets, lines: &mut Vec<SuiteLine>) {
    lines.push(SuiteLine {
        name: "classorder m=43 p=23",
        expected: "h_p=12".into(),
        got: classorder_line(ctx, budgets, 23),
    });
    lines.push(SuiteLine {
        name: "classorder m=43 p=11",
        expected: "h_p=2".into(),
        got: classorder_line(ctx, budgets, 11),
    });
    for (name, t, expected) in [
        ("normeq m=43 t=23^12", 23i64.pow(12), "solvable with certificate"),
        ("normeq m=43 t=23^3", 23i64.pow(3), "solvable with certificate"),
        ("normeq m=43 t=23^2", 23 * 23, "unsolvable"),
        ("normeq m=43 t=23", 23, "unsolvable"),
        ("normeq m=43 t=11", 11, "solvable with certificate"),
        ("normeq m=43 t=11^2", 121, "solvable with certificate"),
    ] {
        lines.push(SuiteLine {
            name,
            expected: expected.into(),
            got: normeq_line(ctx, budgets, t),
        });
    }
    lines.push(SuiteLine {
        name: "shape m=43 p=23",
        expected: "3 primes".into(),
        got: shape_line(43, 23),
    });
    lines.push(SuiteLine {
        name: "decide m=43 p=23",
        expected: "split at exponent 12".into(),
        got: decide_line(ctx, budgets, 23),
    });
    lines.push(SuiteLine {
        name: "decide m=43 p=11",
        expected: "split at exponent 2".into(),
        got: decide_line(ctx, budgets, 11),
    });
}
