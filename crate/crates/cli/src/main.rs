mod mapspec;
mod report;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dxm_core::endocheck::witness_growth_experiment;
use dxm_core::numeric::round_significant;
use dxm_core::weightforge::{
    check_construction, construct_endomorphism_weights, construct_refuting_weights, expanding_point,
};
use dxm_core::{
    full_verdict, Complex64, DomainSpec, Error, RationalMap, VerdictOptions, VerdictResult, WeightSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use report::{envelope, print_json, WeightsFile, DIGITS};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dxm",
    version,
    about = "Endomorphism checks for algebras D(X, M) of infinitely differentiable functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight sequences.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Sampled geometry of the interval and the disc.
    #[command(subcommand)]
    Domain(DomainCmd),
    /// Fixed-point classification of a disc self-map.
    Classify(ClassifyArgs),
    /// Endomorphism verdicts and witness experiments.
    #[command(subcommand)]
    Endo(EndoCmd),
    /// Build a weight for which the map does (`thm3`) or does not (`thm5`)
    /// induce an endomorphism.
    Forge {
        #[arg(value_enum)]
        kind: ForgeKind,
        #[command(flatten)]
        args: ForgeArgs,
    },
    /// Run the reference maps and compare with their expected verdicts.
    Repro(ReproArgs),
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Algebra, nonanalyticity, quasi-analyticity and ratio checks.
    Check(WeightsCheckArgs),
}

#[derive(Subcommand)]
enum DomainCmd {
    /// Sampled sup norm of `phi^(k)` over the domain.
    Supnorm(SupnormArgs),
}

#[derive(Subcommand)]
enum EndoCmd {
    /// Run the verdict rules.
    Check(EndoCheckArgs),
    /// Norms of the witnesses `F_R` and `F_R ∘ phi` for several radii.
    Witness(WitnessArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Disc,
    Interval,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum WeightKindArg {
    /// `(n!)^alpha`.
    FactorialPower,
    /// `n! ln(n+1)^n`.
    FactorialLog,
    /// `n! n^(n^2)`.
    FactorialSuperexp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ForgeKind {
    /// Endomorphism construction.
    Thm3,
    /// Refutation construction.
    Thm5,
}

#[derive(Args)]
struct MapArgs {
    /// Map as an expression in `z`, e.g. "(1 - z^3)/2".
    #[arg(long, conflicts_with_all = ["num", "den"], required_unless_present = "num")]
    map: Option<String>,
    /// Numerator coefficients in ascending powers, e.g. "1/2,0,0,-1/2".
    #[arg(long)]
    num: Option<String>,
    /// Denominator coefficients in ascending powers (default 1).
    #[arg(long, requires = "num")]
    den: Option<String>,
    #[arg(long, value_enum, default_value = "disc")]
    domain: DomainArg,
    /// Boundary samples used by every sampled sup norm.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct WeightArgs {
    /// `n!^a`, `n!log^n` or `n!n^n2`.
    #[arg(long, conflicts_with_all = ["kind", "weight_file"])]
    weight: Option<String>,
    /// Weight family, an alternative to `--weight`.
    #[arg(long, value_enum, conflicts_with = "weight_file")]
    kind: Option<WeightKindArg>,
    /// Exponent for `--kind factorial-power`.
    #[arg(long, requires = "kind")]
    alpha: Option<f64>,
    /// Table of `ln M_n` as written by `forge`.
    #[arg(long)]
    weight_file: Option<PathBuf>,
}

#[derive(Args)]
struct WeightsCheckArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long, default_value_t = 40)]
    upto: usize,
    #[arg(long)]
    json: bool,
    /// Per-index table `n,log_m,nonanalytic_r,quasi_partial_sum`.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
}

#[derive(Args)]
struct SupnormArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 0)]
    derivative: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 16)]
    nmax: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EndoCheckArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    weight: WeightArgs,
    /// Highest derivative of `phi` examined.
    #[arg(long)]
    k_max: Option<usize>,
    /// Largest iterate examined.
    #[arg(long)]
    n_max: Option<usize>,
    /// Truncation order of norm series.
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    inner_degree_cap: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    weight: WeightArgs,
    /// Boundary point with `|phi'(b)| > 1` (default: the one the verdict rules pick).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Radii, comma separated.
    #[arg(long = "R", alias = "radii", value_delimiter = ',', default_value = "1,2,4,8")]
    radii: Vec<f64>,
    #[arg(long, default_value_t = 40)]
    truncation: usize,
    /// Full JSON report instead of the CSV table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ForgeArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 10)]
    nmax: usize,
    /// Expanding boundary point for `thm5` (default: the one the verdict rules pick).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Write the weight as `{name, log_m, provenance}`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReproArgs {
    /// Run a single fixture by name.
    #[arg(long)]
    only: Option<String>,
    /// Fixture file in place of the built-in corpus.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

/// `DXM_SEED`, when set, and the boundary sampling offset drawn from it.
fn seed() -> anyhow::Result<(Option<u64>, f64)> {
    match std::env::var("DXM_SEED") {
        Ok(s) => {
            let seed: u64 = s
                .trim()
                .parse()
                .with_context(|| format!("DXM_SEED must be an unsigned integer, got `{s}`"))?;
            let offset = ChaCha8Rng::seed_from_u64(seed).random::<f64>();
            Ok((Some(seed), offset))
        }
        Err(_) => Ok((None, 0.0)),
    }
}

impl MapArgs {
    fn domain(&self, offset: f64) -> anyhow::Result<DomainSpec> {
        let mut d = match self.domain {
            DomainArg::Disc => DomainSpec::disc(),
            DomainArg::Interval => DomainSpec::interval(),
        };
        if let Some(n) = self.samples {
            d = d.with_boundary_samples(n)?;
        }
        Ok(d.with_offset(offset))
    }

    fn load(&self, offset: f64) -> anyhow::Result<RationalMap> {
        let domain = self.domain(offset)?;
        match (&self.map, &self.num) {
            (Some(text), _) => mapspec::parse_map(text, domain),
            (None, Some(num)) => {
                let num = mapspec::parse_coefficients(num).context("--num")?;
                let den = match &self.den {
                    Some(d) => mapspec::parse_coefficients(d).context("--den")?,
                    None => mapspec::parse_coefficients("1")?,
                };
                Ok(RationalMap::from_exact(num, den, domain)?)
            }
            (None, None) => bail!("give the map with --map or --num/--den"),
        }
    }
}

impl WeightArgs {
    fn load(&self) -> anyhow::Result<WeightSequence> {
        if let Some(path) = &self.weight_file {
            return WeightsFile::read(path)?.to_weight();
        }
        if let Some(kind) = self.kind {
            return Ok(match kind {
                WeightKindArg::FactorialPower => WeightSequence::factorial_power(self.alpha.unwrap_or(2.0))?,
                WeightKindArg::FactorialLog => WeightSequence::factorial_log_power(),
                WeightKindArg::FactorialSuperexp => WeightSequence::factorial_superexp(),
            });
        }
        Ok(WeightSequence::from_name(self.weight.as_deref().unwrap_or("n!^2"))?)
    }
}

fn fmt(x: f64) -> String {
    round_significant(x, DIGITS).to_string()
}

fn fmt_c(z: Complex64) -> String {
    // Adding 0.0 turns -0 into +0.
    let (re, im) = (
        round_significant(z.re, DIGITS) + 0.0,
        round_significant(z.im, DIGITS) + 0.0,
    );
    if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn weights_check(a: &WeightsCheckArgs) -> anyhow::Result<u8> {
    let w = a.weight.load()?;
    let upto = match w.max_index() {
        Some(last) => a.upto.min(last),
        None => a.upto,
    };
    let rep = w.report(upto);
    if a.json {
        let mut v = serde_json::to_value(&rep)?;
        report::round_floats(&mut v);
        print_json(&v)?;
    } else if a.csv {
        let mut out = csv::Writer::from_writer(std::io::stdout());
        out.write_record(["n", "log_m", "nonanalytic_r", "quasi_partial_sum"])?;
        for n in 1..=upto {
            let r = rep
                .nonanalytic_trace
                .iter()
                .find(|t| t.0 == n)
                .map(|t| fmt(t.1))
                .unwrap_or_default();
            let q = rep.quasi_partial_sums.get(n - 1).map(|&x| fmt(x)).unwrap_or_default();
            out.write_record([n.to_string(), fmt(w.log_m(n)?), r, q])?;
        }
        out.flush()?;
    } else {
        println!("weight: {}", w.name);
        println!(
            "algebra condition: {} (checked to {})",
            if rep.algebra_ok { "holds" } else { "fails" },
            rep.max_checked
        );
        if let Some(&(n, r)) = rep.nonanalytic_trace.last() {
            println!("(n!/M_n)^(1/n) at n = {n}: {}", fmt(r));
        }
        if let Some(s) = rep.quasi_partial_sums.last() {
            println!("sum M_(n-1)/M_n to {upto}: {}", fmt(*s));
        }
        let rc = &rep.ratio_condition;
        println!(
            "ratio condition: {} (B = {}, attained at {:?})",
            if rc.holds { "holds" } else { "fails" },
            fmt(rc.constant),
            rc.pair
        );
    }
    Ok(if rep.algebra_ok { 0 } else { EXIT_NUMERIC })
}

fn supnorm(a: &SupnormArgs) -> anyhow::Result<u8> {
    let (seed, offset) = seed()?;
    let phi = a.map.load(offset)?;
    let s = if a.derivative == 0 {
        phi.sup_abs()?
    } else {
        phi.derivative_sup(a.derivative)?
    };
    if a.json {
        let payload = json!({ "map": mapspec::print_map(&phi), "derivative": a.derivative, "supnorm": s });
        print_json(&envelope("supnorm", Some(phi.domain()), seed, &payload)?)?;
    } else {
        println!("sup |phi^({})| = {} at {}", a.derivative, fmt(s.value), fmt_c(s.argmax));
        println!(
            "samples: {} boundary, {} interior, {} refinement steps",
            s.boundary_samples, s.interior_samples, s.refine_iters
        );
    }
    Ok(0)
}

fn classify(a: &ClassifyArgs) -> anyhow::Result<u8> {
    let (seed, offset) = seed()?;
    let phi = a.map.load(offset)?;
    let c = phi.classify(a.nmax)?;
    if a.json {
        print_json(&envelope("classification", Some(phi.domain()), seed, &c)?)?;
    } else {
        println!("case: {:?}", c.case);
        if let Some(dw) = c.denjoy_wolff {
            println!("Denjoy-Wolff point: {}", fmt_c(dw));
        }
        println!("N used: {}", c.n_used);
        for p in &c.evidence {
            println!(
                "  fixed point {} ({:?}, period {}), |multiplier| = {}",
                fmt_c(p.z),
                p.location,
                p.period,
                fmt(p.abs_multiplier)
            );
        }
    }
    Ok(0)
}

fn endo_check(a: &EndoCheckArgs) -> anyhow::Result<u8> {
    let (seed, offset) = seed()?;
    let phi = a.map.load(offset)?;
    let w = a.weight.load()?;
    let mut opts = VerdictOptions::default();
    opts.k_max = a.k_max.unwrap_or(opts.k_max);
    opts.n_max = a.n_max.unwrap_or(opts.n_max);
    opts.truncation = a.truncation.unwrap_or(opts.truncation);
    opts.inner_degree_cap = a.inner_degree_cap.unwrap_or(opts.inner_degree_cap);
    let v = full_verdict(&phi, &w, &opts)?;
    if a.json {
        let mut out = envelope("verdict", Some(phi.domain()), seed, &v)?;
        out["map"] = json!(mapspec::print_map(&phi));
        out["weight"] = json!(w.name);
        print_json(&out)?;
    } else {
        println!("map: {}", mapspec::print_map(&phi));
        println!("weight: {}", w.name);
        println!("result: {:?}", v.result);
        if let Some(rule) = v.rule {
            println!("rule: {}", serde_json::to_value(rule)?.as_str().unwrap_or_default());
        }
        if let Some(label) = &v.label {
            println!("label: {label}");
        }
        for e in &v.evidence {
            println!(
                "  {:<18} {:<16} {}",
                serde_json::to_value(e.rule)?.as_str().unwrap_or_default(),
                format!("{:?}", e.result),
                e.reason
            );
        }
    }
    Ok(match v.result {
        VerdictResult::Unknown => EXIT_UNKNOWN,
        _ => 0,
    })
}

fn boundary_point(phi: &RationalMap, b: &Option<String>) -> anyhow::Result<Complex64> {
    match b {
        Some(text) => Ok(mapspec::parse_point(text).context("--b")?),
        None => expanding_point(phi)?.ok_or_else(|| {
            Error::Hypothesis("no boundary point with |phi'| > 1 and an external tangent at its image; pass --b".into())
                .into()
        }),
    }
}

fn witness(a: &WitnessArgs) -> anyhow::Result<u8> {
    let (seed, offset) = seed()?;
    let phi = a.map.load(offset)?;
    let w = a.weight.load()?;
    let b = boundary_point(&phi, &a.b)?;
    let exp = witness_growth_experiment(&phi, &w, b, &a.radii, a.truncation)?;
    if a.json {
        print_json(&envelope("witness_growth", Some(phi.domain()), seed, &exp)?)?;
    } else {
        let mut out = csv::Writer::from_writer(std::io::stdout());
        out.write_record(["R", "normF", "normFphi", "ratio"])?;
        for row in &exp.rows {
            out.write_record([fmt(row.r), fmt(row.norm_f), fmt(row.norm_f_phi), fmt(row.ratio)])?;
        }
        out.flush()?;
    }
    Ok(0)
}

fn forge(kind: ForgeKind, a: &ForgeArgs) -> anyhow::Result<u8> {
    let (seed, offset) = seed()?;
    let phi = a.map.load(offset)?;
    let cw = match kind {
        ForgeKind::Thm3 => construct_endomorphism_weights(&phi, a.nmax)?,
        ForgeKind::Thm5 => {
            let b = boundary_point(&phi, &a.b)?;
            construct_refuting_weights(&phi, b, a.nmax)?
        }
    };
    let check = check_construction(&cw, &phi)?;
    if let Some(path) = &a.out {
        WeightsFile::from_construction(&cw)?.write(path)?;
    }
    if a.json {
        let payload = json!({ "map": mapspec::print_map(&phi), "construction": &cw, "verification": &check });
        print_json(&envelope("construction", Some(phi.domain()), seed, &payload)?)?;
    } else {
        println!("map: {}", mapspec::print_map(&phi));
        println!("{:>3}  {:>22}  binding", "n", "ln M_n");
        for (n, p) in cw.provenance.iter().enumerate() {
            println!("{n:>3}  {:>22}  {}", fmt(cw.log_m[n]), p.binding);
        }
        for g in &cw.growth {
            println!("growth n = {}: ratio {} >= {}", g.n, fmt(g.ratio), fmt(g.required));
        }
        println!("verification: {} checks, {} failed", check.rows.len(), check.failures);
        for r in check.rows.iter().filter(|r| !r.ok).take(10) {
            println!("  FAIL n = {} {}: {} > {}", r.n, r.check, fmt(r.lhs), fmt(r.rhs));
        }
    }
    Ok(if check.ok { 0 } else { EXIT_NUMERIC })
}

fn run_repro(a: &ReproArgs) -> anyhow::Result<u8> {
    let file = repro::load(a.fixtures.as_deref())?;
    let (seed, offset) = seed()?;
    let domain = DomainSpec::disc().with_offset(offset);
    let selected: Vec<_> = file
        .fixtures
        .iter()
        .filter(|f| a.only.as_ref().is_none_or(|o| &f.name == o))
        .collect();
    if selected.is_empty() {
        bail!("no fixture named `{}`", a.only.as_deref().unwrap_or_default());
    }
    let mut rows = Vec::new();
    for f in selected {
        rows.push(repro::run_fixture(f, domain)?);
    }
    let passed = rows.iter().filter(|r| r.ok).count();
    if a.json {
        let payload = json!({ "passed": passed, "total": rows.len(), "fixtures": rows });
        print_json(&envelope("repro", Some(&domain), seed, &payload)?)?;
    } else {
        for r in &rows {
            println!(
                "{:<14} {:<5} expected {:<16} got {:<16} {}{}",
                r.name,
                if r.ok { "ok" } else { "FAIL" },
                r.expected,
                r.got,
                r.rule.as_deref().unwrap_or("-"),
                if r.detail.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", r.detail)
                }
            );
            for m in &r.mismatches {
                println!("    {m}");
            }
        }
        println!("{passed}/{} expected verdicts", rows.len());
    }
    Ok(if passed == rows.len() { 0 } else { EXIT_NUMERIC })
}

/// Input and precondition problems are usage errors; the rest are numeric.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<mapspec::SyntaxError>() || cause.is::<serde_json::Error>() || cause.is::<std::io::Error>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::InvalidWeight(_)
                | Error::WeightIndexOutOfRange { .. }
                | Error::PoleInDomain(_)
                | Error::PointOutsideDomain(_)
                | Error::ZeroDenominator
                | Error::NotSelfMap { .. }
                | Error::Hypothesis(_)
                | Error::Unsupported(_)
                | Error::Sampling(_) => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            };
        }
    }
    EXIT_USAGE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    let out = match &cli.command {
        Command::Weights(WeightsCmd::Check(a)) => weights_check(a),
        Command::Domain(DomainCmd::Supnorm(a)) => supnorm(a),
        Command::Classify(a) => classify(a),
        Command::Endo(EndoCmd::Check(a)) => endo_check(a),
        Command::Endo(EndoCmd::Witness(a)) => witness(a),
        Command::Forge { kind, args } => forge(*kind, args),
        Command::Repro(a) => run_repro(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
