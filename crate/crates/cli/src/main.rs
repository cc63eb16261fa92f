//! Command-line front end: certify parameter sets, sweep theta ranges,
//! explore orbits/itineraries/cylinders, extract periodic points, and run
//! Gibbs compatibility checks. Emits JSON (or CSV for row-shaped output);
//! output is deterministic given the configuration and seed.
//!
//! Exit codes: 0 for certified verdicts and passing checks, 2 for
//! inconclusive/failing outcomes, 1 for errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use padic_dynamics::gibbs::{
    check_compatibility, config_count, level_measure, ti_and_periodic_fields, CayleyTree,
    CompatibilityReport, Configuration,
};
use padic_dynamics::padic::{exp_p, in_ep, PadicNumber};
use padic_dynamics::potts::{ContractionReport, MapParams, Region};
use padic_dynamics::repeller::{
    build_covering, certify_with, itinerary, julia_approx, point_from_itinerary,
    RepellerCertificate, Verdict,
};
use padic_dynamics::subshift::SymbolWord;

#[derive(Parser)]
#[command(
    name = "padic-dynamics",
    version,
    about = "Exact p-adic analysis of the Potts-Bethe map f(x) = ((theta x + q - 1)/(x + theta + q - 2))^k"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the dynamics on the Julia set (full-shift chaos, unique
    /// attractor, or inconclusive)
    Analyze(AnalyzeArgs),
    /// Certify every theta = 1 + c p^t over a range of t and unit residues c
    Sweep(SweepArgs),
    /// Iterate the map from a starting point and report each step
    Orbit(OrbitArgs),
    /// Code a point of the covering X into its itinerary word
    Itinerary(ItineraryArgs),
    /// Enumerate the cylinders of the depth-n Julia set approximation
    Julia(JuliaArgs),
    /// Realize a word as the periodic point with that itinerary
    Periodic(PeriodicArgs),
    /// Check the Cayley-tree Gibbs compatibility identity for generated fields
    GibbsCheck(GibbsCheckArgs),
}

#[derive(Args, Clone)]
struct MapArgs {
    /// Prime p >= 3
    #[arg(long)]
    p: u64,
    /// Number of Potts states, q >= 2 with p not dividing q
    #[arg(long)]
    q: u64,
    /// Tree order / exponent k >= 1
    #[arg(long)]
    k: u32,
    /// Theta literal: integer "6", rational "a/b", digit form "5^0*(1,1)",
    /// or one-plus form "1+5^1*2"; must lie in E_p and differ from 1
    #[arg(long)]
    theta: String,
    /// Working precision: count of known unit digits
    #[arg(long, default_value_t = 64)]
    precision: u32,
}

impl MapArgs {
    fn build(&self) -> Result<MapParams> {
        let theta = parse_theta(&self.theta, self.p, self.precision)?;
        Ok(MapParams::new(self.p, self.q, self.k, theta)?)
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the document here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Sampled pairs per ball for the scaling/containment checks
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: u32,
    /// Smallest |theta - 1| exponent t to sweep
    #[arg(long, default_value_t = 1)]
    t_min: i64,
    /// Largest t to sweep (theta = 1 + c p^t, c in 1..p-1)
    #[arg(long, default_value_t = 3)]
    t_max: i64,
    #[arg(long, default_value_t = 64)]
    precision: u32,
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Starting point literal
    #[arg(long)]
    start: String,
    /// Number of iterations
    #[arg(long, default_value_t = 16)]
    steps: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ItineraryArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Point of the covering X
    #[arg(long)]
    point: String,
    /// Number of symbols to code
    #[arg(long, default_value_t = 8)]
    length: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct JuliaArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Cylinder depth n (words of length n+1)
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PeriodicArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Comma-separated word, e.g. "1,2"
    #[arg(long)]
    word: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GibbsCheckArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// Tree order k
    #[arg(long)]
    k: u32,
    /// Coupling constant J with |J|_p <= 1/p (p-adic literal)
    #[arg(long)]
    coupling: String,
    /// Tree depth; compatibility is checked at n = 1..=levels
    #[arg(long, default_value_t = 2)]
    levels: u32,
    #[arg(long, default_value_t = 32)]
    precision: u32,
    /// Also derive level-periodic fields from orbits of this period
    #[arg(long, default_value_t = 2)]
    period: usize,
    #[command(flatten)]
    output: OutputArgs,
}

/// Accepts the core literal forms plus the sweep-style "1+p^t*u" form.
fn parse_theta(input: &str, p: u64, precision: u32) -> Result<PadicNumber> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = s.strip_prefix("1+") {
        let (base, tail) = rest
            .split_once('^')
            .ok_or_else(|| anyhow!("one-plus form must look like 1+{p}^t*u"))?;
        let lit_p: u64 = base.parse().context("bad prime in one-plus form")?;
        if lit_p != p {
            return Err(anyhow!("one-plus form names prime {lit_p}, expected {p}"));
        }
        let (t_str, u_str) = tail
            .split_once('*')
            .ok_or_else(|| anyhow!("one-plus form must look like 1+{p}^t*u"))?;
        let t: u32 = t_str.parse().context("bad exponent in one-plus form")?;
        let u: i64 = u_str.parse().context("bad unit in one-plus form")?;
        let value = BigInt::from(1) + BigInt::from(u) * BigInt::from(p).pow(t);
        return Ok(PadicNumber::from_bigint(&value, p, precision)?);
    }
    Ok(PadicNumber::parse(&s, p, precision)?)
}

fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            writeln!(f, "{text}")?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(output: &OutputArgs, doc: &T) -> Result<()> {
    emit(output, &serde_json::to_string_pretty(doc)?)
}

#[derive(Serialize)]
struct AnalyzeDocument {
    #[serde(flatten)]
    certificate: RepellerCertificate,
    contraction: ContractionReport,
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode> {
    let params = args.map.build()?;
    let certificate = certify_with(&params, args.samples, args.seed)?;
    let contraction = params.check_contraction_on_ep(args.samples.max(8), args.seed)?;
    let verdict = certificate.verdict;
    match args.output.format {
        Format::Json => {
            let doc = AnalyzeDocument {
                certificate,
                contraction,
            };
            emit_json(&args.output, &doc)?;
        }
        Format::Csv => {
            let mut rows = String::from("p,q,k,theta,s,t,kappa,tau,condition_holds,verdict\n");
            rows.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                certificate.p,
                certificate.q,
                certificate.k,
                args.map.theta,
                certificate.s,
                certificate.t,
                certificate.kappa,
                certificate.tau.map_or(String::new(), |t| t.to_string()),
                certificate.condition_holds,
                certificate.verdict
            ));
            emit(&args.output, rows.trim_end())?;
        }
    }
    Ok(match verdict {
        Verdict::FullShiftChaos | Verdict::UniqueAttractor => ExitCode::SUCCESS,
        Verdict::Inconclusive => ExitCode::from(2),
    })
}

#[derive(Serialize)]
struct SweepRow {
    p: u64,
    q: u64,
    k: u32,
    t: i64,
    c: u64,
    theta: String,
    s: i64,
    kappa: Option<usize>,
    tau: Option<i64>,
    condition_holds: Option<bool>,
    verdict: String,
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    if args.t_min < 1 || args.t_max < args.t_min {
        return Err(anyhow!("need 1 <= t-min <= t-max"));
    }
    let grid: Vec<(i64, u64)> = (args.t_min..=args.t_max)
        .flat_map(|t| (1..args.p).map(move |c| (t, c)))
        .collect();
    let mut rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(t, c)| {
            let theta_lit = format!("1+{}^{}*{}", args.p, t, c);
            let base = SweepRow {
                p: args.p,
                q: args.q,
                k: args.k,
                t,
                c,
                theta: theta_lit.clone(),
                s: 0,
                kappa: None,
                tau: None,
                condition_holds: None,
                verdict: String::new(),
            };
            match parse_theta(&theta_lit, args.p, args.precision)
                .and_then(|theta| Ok(MapParams::new(args.p, args.q, args.k, theta)?))
                .and_then(|params| Ok(certify_with(&params, args.samples, args.seed)?))
            {
                Ok(cert) => SweepRow {
                    s: cert.s,
                    kappa: Some(cert.kappa),
                    tau: cert.tau,
                    condition_holds: Some(cert.condition_holds),
                    verdict: cert.verdict.to_string(),
                    ..base
                },
                Err(e) => SweepRow {
                    verdict: format!("error: {e}"),
                    ..base
                },
            }
        })
        .collect();
    // canonical order regardless of the parallel schedule
    rows.sort_by_key(|r| (r.t, r.c));
    match args.output.format {
        Format::Json => emit_json(&args.output, &rows)?,
        Format::Csv => {
            let mut text =
                String::from("p,q,k,t,c,theta,s,kappa,tau,condition_holds,verdict\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.p,
                    r.q,
                    r.k,
                    r.t,
                    r.c,
                    r.theta,
                    r.s,
                    r.kappa.map_or(String::new(), |v| v.to_string()),
                    r.tau.map_or(String::new(), |v| v.to_string()),
                    r.condition_holds.map_or(String::new(), |v| v.to_string()),
                    r.verdict
                ));
            }
            emit(&args.output, text.trim_end())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct OrbitStep {
    step: usize,
    value: PadicNumber,
    region: Region,
    in_ep: bool,
    dist_to_one_exponent: Option<i64>,
}

fn cmd_orbit(args: &OrbitArgs) -> Result<ExitCode> {
    let params = args.map.build()?;
    let one = PadicNumber::one(args.map.p, args.map.precision);
    let start = PadicNumber::parse(&args.start, args.map.p, args.map.precision)?;
    let mut rows = Vec::with_capacity(args.steps + 1);
    let mut z = start;
    for step in 0..=args.steps {
        let d = z.sub(&one)?;
        rows.push(OrbitStep {
            step,
            value: z.clone(),
            region: params.region(&z)?,
            in_ep: in_ep(&z)?,
            dist_to_one_exponent: d.norm_upper_exponent().map(|e| -e),
        });
        if step < args.steps {
            z = params.eval(&z)?;
        }
    }
    match args.output.format {
        Format::Json => emit_json(&args.output, &rows)?,
        Format::Csv => {
            let mut text = String::from("step,value,region,in_ep,dist_to_one_exponent\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{:?},{},{}\n",
                    r.step,
                    r.value,
                    r.region,
                    r.in_ep,
                    r.dist_to_one_exponent
                        .map_or(String::new(), |v| v.to_string()),
                ));
            }
            emit(&args.output, text.trim_end())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ItineraryDocument {
    point: PadicNumber,
    length: usize,
    word: Option<SymbolWord>,
    escaped_at: Option<usize>,
}

fn cmd_itinerary(args: &ItineraryArgs) -> Result<ExitCode> {
    let params = args.map.build()?;
    let covering = build_covering(&params)?;
    let point = PadicNumber::parse(&args.point, args.map.p, args.map.precision)?;
    let doc = match itinerary(&params, &covering, &point, args.length) {
        Ok(word) => ItineraryDocument {
            point,
            length: args.length,
            word: Some(word),
            escaped_at: None,
        },
        Err(padic_dynamics::repeller::RepellerError::EscapedAtStep(m)) => ItineraryDocument {
            point,
            length: args.length,
            word: None,
            escaped_at: Some(m),
        },
        Err(e) => return Err(e.into()),
    };
    emit_json(&args.output, &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_julia(args: &JuliaArgs) -> Result<ExitCode> {
    let params = args.map.build()?;
    let cert = certify_with(&params, args.samples, args.seed)?;
    if cert.verdict != Verdict::FullShiftChaos {
        emit_json(&args.output, &cert)?;
        return Ok(ExitCode::from(2));
    }
    let covering = build_covering(&params)?;
    let approx = julia_approx(&params, &covering, &cert, args.depth)?;
    emit_json(&args.output, &approx)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PeriodicDocument {
    word: SymbolWord,
    point: PadicNumber,
    residual_bounded_by_exponent: i64,
    multiplier_norm_exponent: i64,
}

fn cmd_periodic(args: &PeriodicArgs) -> Result<ExitCode> {
    let params = args.map.build()?;
    let covering = build_covering(&params)?;
    let symbols: Vec<usize> = args
        .word
        .split(',')
        .map(|t| t.trim().parse::<usize>().context("bad word symbol"))
        .collect::<Result<_>>()?;
    let word = SymbolWord::new(symbols);
    let n = word.len();
    let point = point_from_itinerary(&params, &covering, &word, true)?;
    let residual = params.iterate(&point, n)?.sub(&point)?;
    let threshold = args.map.precision as i64 / 2;
    if !residual.norm_le(threshold).unwrap_or(false) {
        return Err(anyhow!("periodic residual above p^-{threshold}"));
    }
    // multiplier of f^n along the cycle
    let mut multiplier = PadicNumber::one(args.map.p, args.map.precision);
    let mut z = point.clone();
    for _ in 0..n {
        multiplier = multiplier.mul(&params.derivative(&z)?)?;
        z = params.eval(&z)?;
    }
    let doc = PeriodicDocument {
        word,
        residual_bounded_by_exponent: residual
            .norm_upper_exponent()
            .unwrap_or(threshold),
        multiplier_norm_exponent: -multiplier.valuation()?,
        point,
    };
    emit_json(&args.output, &doc)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GibbsFieldDocument {
    origin: String,
    per_level_hat_first_component: Vec<PadicNumber>,
    compatibility: Vec<CompatibilityReport>,
    all_hold: bool,
    /// sup |mu^(n)| over configurations, per level: boundedness metadata only,
    /// no infinite-volume claim
    sup_norm_exponents: Vec<i64>,
    sup_norm_growing: bool,
}

#[derive(Serialize)]
struct GibbsDocument {
    p: u64,
    q: u64,
    k: u32,
    levels: u32,
    coupling: PadicNumber,
    theta: PadicNumber,
    fields: Vec<GibbsFieldDocument>,
    mu_table_level_1: Option<Vec<(Configuration, PadicNumber)>>,
    all_hold: bool,
}

fn cmd_gibbs(args: &GibbsCheckArgs) -> Result<ExitCode> {
    let coupling = PadicNumber::parse(&args.coupling, args.p, args.precision)?;
    let theta = exp_p(&coupling)?;
    let params = MapParams::new(args.p, args.q, args.k, theta.clone())?;
    let tree = CayleyTree::new(args.k, args.levels);
    let generated = ti_and_periodic_fields(&params, &tree, args.period)?;
    let q8 = u8::try_from(args.q).map_err(|_| anyhow!("q too large"))?;
    let mut fields_docs = Vec::new();
    let mut all_hold = true;
    for gf in &generated {
        let mut reports = Vec::new();
        let mut sup = Vec::new();
        for n in 1..=args.levels {
            let report = check_compatibility(&tree, &gf.assignment, &coupling, n)?;
            all_hold &= report.holds;
            reports.push(report);
            let m = level_measure(&tree, &gf.assignment, &theta, n)?;
            sup.push(m.sup_norm_exponent().map_err(|e| anyhow!("{e}"))?);
        }
        let hats: Vec<PadicNumber> = (0..=args.levels)
            .map(|lvl| {
                let v = tree.level_vertices(lvl).next().unwrap();
                gf.assignment.hat(v).map(|h| h[0].clone())
            })
            .collect::<Result<_, _>>()?;
        let holds = reports.iter().all(|r| r.holds);
        let growing = sup.windows(2).any(|w| w[1] > w[0]);
        fields_docs.push(GibbsFieldDocument {
            origin: gf.origin.clone(),
            per_level_hat_first_component: hats,
            compatibility: reports,
            all_hold: holds,
            sup_norm_exponents: sup,
            sup_norm_growing: growing,
        });
    }
    // mu table for the coarsest level when it stays desk-sized
    let mu_table_level_1 = if config_count(tree.vertex_count_at(1), q8) <= 64 {
        let m = level_measure(&tree, &generated[0].assignment, &theta, 1)?;
        let mut table = Vec::new();
        for rank in 0..config_count(tree.vertex_count_at(1), q8) {
            let sigma = Configuration::from_rank(rank, tree.vertex_count_at(1), q8);
            let mu = m.mu(&sigma)?;
            table.push((sigma, mu));
        }
        Some(table)
    } else {
        None
    };
    let doc = GibbsDocument {
        p: args.p,
        q: args.q,
        k: args.k,
        levels: args.levels,
        coupling,
        theta,
        fields: fields_docs,
        mu_table_level_1,
        all_hold,
    };
    emit_json(&args.output, &doc)?;
    Ok(if all_hold {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<ExitCode> {
        match &cli.command {
            Command::Analyze(args) => cmd_analyze(args),
            Command::Sweep(args) => cmd_sweep(args),
            Command::Orbit(args) => cmd_orbit(args),
            Command::Itinerary(args) => cmd_itinerary(args),
            Command::Julia(args) => cmd_julia(args),
            Command::Periodic(args) => cmd_periodic(args),
            Command::GibbsCheck(args) => cmd_gibbs(args),
        }
    };
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
