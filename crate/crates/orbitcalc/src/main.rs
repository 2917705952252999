use clanorbit::clans::{covering_successors, CaseError, ClanError};
use clanorbit::formulas::{
    all_classes, chern_formula, closed_class_at, predicted_closed_count, verify_localization,
    FormulaError,
};
use clanorbit::geometry::{in_closure, measure_rank_numbers, representative_flag};
use clanorbit::orbits::{check_conjecture, orbit_poset, to_dot, OrbitError, OrbitPoset};
use clanorbit::weyl::{closed_orbit_fixed_points, WeylError};
use clanorbit::{CaseId, CaseKind, Clan};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "orbitcalc",
    version,
    about = "K-orbits on flag varieties: posets, classes, checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the clans of a case.
    Enumerate(Common),
    /// Weak order and closure order of the orbits.
    Poset(Common),
    /// Equivariant class of every orbit closure.
    Classes {
        #[command(flatten)]
        common: Common,
        /// Print closed-orbit classes as products of their factors.
        #[arg(long)]
        factored: bool,
        /// Also run the localization checks; exit 1 if any fails.
        #[arg(long)]
        verify: bool,
    },
    /// Localization checks on the computed classes.
    Verify(Common),
    /// Brute-force checks: flags and move closure in type A, closed-orbit data elsewhere.
    Oracle(Common),
    /// Compare the computed closure order with the order induced from ambient clans.
    Conjecture {
        #[command(flatten)]
        common: Common,
        /// Exit 1 unless the orders coincide (or, with `weaker`, unless they differ).
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Degeneracy-locus formula of one orbit in Chern classes z.
    Chern {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        clan: String,
    },
}

#[derive(Args)]
struct Common {
    /// a, b-so, c-spxsp, c-sp-gl, d-oxo-even, d-so-gl, d-oxo-odd
    #[arg(long = "case")]
    selector: String,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Rank for the GL cases.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Warn when the orbit count estimate exceeds this.
    #[arg(long, default_value_t = 50_000)]
    max_nodes: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Coincide,
    Weaker,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error(transparent)]
    Clan(#[from] ClanError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Case(_) | CliError::Clan(_) => 2,
            _ => 1,
        }
    }
}

/// Rendered output plus whether every check it ran passed.
struct Report {
    body: String,
    ok: bool,
}

impl Report {
    fn pass(body: String) -> Report {
        Report { body, ok: true }
    }
}

impl Common {
    fn case(&self) -> Result<CaseId, CliError> {
        let kind = CaseKind::from_selector(&self.selector)?;
        if kind.is_gl() {
            let n = self
                .n
                .or(self.p)
                .ok_or_else(|| usage("this case needs --n"))?;
            Ok(CaseId::gl(kind, n)?)
        } else {
            match (self.p, self.q) {
                (Some(p), Some(q)) => Ok(CaseId::new(kind, p, q)?),
                _ => Err(usage("this case needs --p and --q")),
            }
        }
    }

    fn text_or_json(&self) -> Result<(), CliError> {
        if self.format == Format::Dot {
            return Err(usage("--format dot is only available for poset"));
        }
        Ok(())
    }
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.to_string())
}

fn json_string(v: &serde_json::Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Number of clans of the ambient type-A family: an upper bound on the family size.
fn ambient_estimate(case: &CaseId) -> f64 {
    let (a, b) = case.ambient_pq();
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    (0..=a.min(b))
        .map(|k| fact(a + b - k) / (fact(k) * fact(a - k) * fact(b - k)) / 2f64.powi(k as i32))
        .sum()
}

fn enumerate(c: &Common) -> Result<Report, CliError> {
    c.text_or_json()?;
    let clans = c.case()?.family();
    Ok(Report::pass(match c.format {
        Format::Json => json_string(&json!(clans
            .iter()
            .map(Clan::to_string)
            .collect::<Vec<_>>()))?,
        _ => clans.iter().map(|x| format!("{x}\n")).collect(),
    }))
}

fn poset_text(poset: &OrbitPoset) -> String {
    let mut s = format!(
        "# {}: {} orbits, {} weak edges\n",
        poset.case,
        poset.nodes.len(),
        poset.edges.len()
    );
    for z in poset.by_rank() {
        s += &format!("{}\t{}\n", poset.rank[z], poset.nodes[z]);
    }
    for e in &poset.edges {
        s += &format!(
            "{} -> {}\ts{}\tdegree {}\n",
            poset.nodes[e.source], poset.nodes[e.target], e.root, e.degree
        );
    }
    s
}

fn poset(c: &Common) -> Result<Report, CliError> {
    let poset = orbit_poset(&c.case()?)?;
    Ok(Report::pass(match c.format {
        Format::Text => poset_text(&poset),
        Format::Json => json_string(&serde_json::to_value(&poset)?)?,
        Format::Dot => to_dot(&poset),
    }))
}

fn verification_text(report: &clanorbit::formulas::LocalizationReport) -> String {
    let mut s = format!(
        "checks: {}\nfailures: {}\n",
        report.checks,
        report.failures.len()
    );
    for f in &report.failures {
        s += &format!("FAIL {:?} {} at {}\n", f.kind, f.clan, f.fixed_point);
    }
    s
}

fn classes(c: &Common, factored: bool, verify: bool) -> Result<Report, CliError> {
    c.text_or_json()?;
    let table = all_classes(&c.case()?)?;
    let rows = table.rows(factored)?;
    let report = if verify {
        Some(verify_localization(&table)?)
    } else {
        None
    };
    let ok = report.as_ref().is_none_or(|r| r.passed());
    let body = match c.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .zip(&table.classes)
                .zip(&table.provenance)
                .map(|(((clan, text), poly), prov)| {
                    json!({ "clan": clan, "formula": text, "terms": poly, "provenance": prov })
                })
                .collect();
            json_string(&json!({ "case": table.case, "rows": rows, "verification": report }))?
        }
        _ => {
            let mut s: String = rows
                .iter()
                .map(|(clan, f)| format!("{clan}\t{f}\n"))
                .collect();
            if let Some(r) = &report {
                s += &verification_text(r);
            }
            s
        }
    };
    Ok(Report { body, ok })
}

fn verify(c: &Common) -> Result<Report, CliError> {
    c.text_or_json()?;
    let case = c.case()?;
    let report = verify_localization(&all_classes(&case)?)?;
    let body = match c.format {
        Format::Json => {
            json_string(&json!({ "case": case, "passed": report.passed(), "report": report }))?
        }
        _ => format!(
            "# {case}\n{}{}\n",
            verification_text(&report),
            if report.passed() { "PASS" } else { "FAIL" }
        ),
    };
    Ok(Report {
        body,
        ok: report.passed(),
    })
}

/// Named boolean checks, each with a count of comparisons made.
fn oracle_checks(case: &CaseId) -> Result<Vec<(&'static str, usize, bool)>, CliError> {
    let poset = orbit_poset(case)?;
    let mut checks = Vec::new();
    if case.kind == CaseKind::AGlPq {
        let (p, q) = (case.p, case.q);
        let mut order = (0, true);
        let mut flags = (0, true);
        for (a, x) in poset.nodes.iter().enumerate() {
            let mut up = BTreeSet::from([x.clone()]);
            let mut stack = vec![x.clone()];
            while let Some(y) = stack.pop() {
                for z in covering_successors(&y) {
                    if up.insert(z.clone()) {
                        stack.push(z);
                    }
                }
            }
            let f = representative_flag(x);
            flags.0 += 1;
            flags.1 &= measure_rank_numbers(&f, p, q) == x.rank_table();
            for (b, y) in poset.nodes.iter().enumerate() {
                let leq = x.leq(y)?;
                order.0 += 1;
                order.1 &= poset.full_leq(a, b) == leq && up.contains(y) == leq;
                flags.0 += 1;
                flags.1 &= in_closure(&f, y).map_err(|e| usage(&e.to_string()))? == leq;
            }
        }
        checks.push(("closure order = leq = move closure", order.0, order.1));
        checks.push(("flag rank numbers and closure membership", flags.0, flags.1));
    } else if case.kind != CaseKind::DSoOoddxOodd {
        let mut n = 0;
        let mut ok = true;
        for z in poset.closed() {
            let points = closed_orbit_fixed_points(case, &poset.nodes[z])?;
            let first = closed_class_at(case, &points[0])?.expand();
            for w in &points[1..] {
                n += 1;
                ok &= closed_class_at(case, w)?.expand() == first;
            }
        }
        checks.push(("closed class independent of fixed point", n, ok));
    }
    if case.kind != CaseKind::DSoOoddxOodd {
        let predicted = predicted_closed_count(case);
        checks.push((
            "closed orbits = |W|/|W_K|",
            1,
            predicted == poset.closed().len(),
        ));
    }
    Ok(checks)
}

fn oracle(c: &Common) -> Result<Report, CliError> {
    c.text_or_json()?;
    let case = c.case()?;
    let checks = oracle_checks(&case)?;
    let ok = checks.iter().all(|c| c.2);
    let body = match c.format {
        Format::Json => {
            let list: Vec<_> = checks
                .iter()
                .map(|(name, n, pass)| json!({ "check": name, "comparisons": n, "passed": pass }))
                .collect();
            json_string(&json!({ "case": case, "checks": list, "passed": ok }))?
        }
        _ => {
            let mut s = format!("# {case}\n");
            for (name, n, pass) in &checks {
                s += &format!(
                    "{}\t{name} ({n} comparisons)\n",
                    if *pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
    };
    Ok(Report { body, ok })
}

fn conjecture(c: &Common, expect: Option<Expectation>) -> Result<Report, CliError> {
    c.text_or_json()?;
    let report = check_conjecture(&orbit_poset(&c.case()?)?)?;
    let ok = match expect {
        None => true,
        Some(Expectation::Coincide) => report.coincides,
        Some(Expectation::Weaker) => !report.coincides,
    };
    let body = match c.format {
        Format::Json => json_string(&serde_json::to_value(&report)?)?,
        _ => {
            let verdict = if report.coincides {
                "orders coincide"
            } else {
                "computed order is strictly weaker"
            };
            let mut s = format!("# {}\n{verdict}\n", report.case);
            for (a, b) in &report.witnesses {
                s += &format!("{a} <= {b}\n");
            }
            s
        }
    };
    Ok(Report { body, ok })
}

fn chern(c: &Common, clan: &str) -> Result<Report, CliError> {
    c.text_or_json()?;
    let case = c.case()?;
    let (a, b) = case.ambient_pq();
    let clan = Clan::parse(clan, a, b)?;
    if !case.contains(&clan) {
        return Err(CliError::Orbit(OrbitError::NotInFamily(
            clan.to_string(),
            case,
        )));
    }
    let f = chern_formula(&all_classes(&case)?, &clan)?;
    Ok(Report::pass(match c.format {
        Format::Json => json_string(
            &json!({ "clan": clan.to_string(), "formula": f.to_string(), "terms": f.expand() }),
        )?,
        _ => format!("{f}\n"),
    }))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let common = match &cli.command {
        Command::Enumerate(c) | Command::Poset(c) | Command::Verify(c) | Command::Oracle(c) => c,
        Command::Classes { common, .. }
        | Command::Conjecture { common, .. }
        | Command::Chern { common, .. } => common,
    };
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| usage(&e.to_string()))?;
    }
    let estimate = ambient_estimate(&common.case()?);
    if estimate > common.max_nodes as f64 {
        eprintln!(
            "warning: up to {estimate:.0} orbits; this may take a while (--max-nodes {})",
            common.max_nodes
        );
    }
    match &cli.command {
        Command::Enumerate(c) => enumerate(c),
        Command::Poset(c) => poset(c),
        Command::Classes {
            common,
            factored,
            verify,
        } => classes(common, *factored, *verify),
        Command::Verify(c) => verify(c),
        Command::Oracle(c) => oracle(c),
        Command::Conjecture { common, expect } => conjecture(common, *expect),
        Command::Chern { common, clan } => chern(common, clan),
    }
    .and_then(|report| {
        match &common.output {
            Some(path) => std::fs::write(path, &report.body)?,
            None => std::io::stdout().write_all(report.body.as_bytes())?,
        }
        Ok(report)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) if report.ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
