//! The `polyrank` command line. [`run`] parses arguments and produces the
//! report text and exit code without touching the process, so it can be
//! driven from tests.

use std::ffi::OsString;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polyrank_core::expansion::{self, SetKind, SetSpec};
use polyrank_core::incidence;
use polyrank_core::moment;
use polyrank_core::rank::{self, RankMethod};
use polyrank_core::reduction;
use polyrank_core::special::{self, IdentityMode, SpecialOptions, DEFAULT_IDENTITY_TRIALS};
use polyrank_core::{Error, Polynomial, Rational, VarSet, REPORT_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "polyrank", version, about = "Exact polynomial rank and expansion experiments")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank of a polynomial in every variable.
    Rank(RankArgs),
    /// Special-form detection for rank-one polynomials.
    Special(SpecialArgs),
    /// Restrict to fewer variables while keeping the rank in a pivot.
    Reduce(ReduceArgs),
    /// Exact image sizes over generated sets.
    Expand(ExpandArgs),
    /// Point–curve incidence instance with pivot x1.
    Incidence(IncidenceArgs),
    /// Simplex volumes on the moment curve.
    Moment(MomentArgs),
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    /// Polynomial expression, e.g. "x1*x3 + x2*x3^2".
    #[arg(long)]
    pub poly: String,
    /// Ordered, comma-separated variable names; fixes the ambient k.
    #[arg(long)]
    pub vars: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Randomized,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    /// Cap on enumerated grid points or subsets.
    #[arg(long, env = "POLYRANK_BUDGET", default_value_t = expansion::DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long, value_enum, default_value_t = Method::Randomized)]
    pub method: Method,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SpecialArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// How the rank is computed.
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// How the derivative identities are tested.
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub identity_mode: Method,
    /// Trials for randomized rank or identities.
    #[arg(long)]
    pub trials: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Pivot variable name (default: the first variable).
    #[arg(long)]
    pub pivot: Option<String>,
    #[arg(long, default_value_t = reduction::DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,
    /// Take fixed values from these sets instead of random integers.
    #[arg(long)]
    pub sets: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Required unless --degenerate is given.
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub vars: Option<String>,
    /// Set kind (interval, random_int, geometric) or explicit sets "1,2;1,3;0,1".
    #[arg(long, default_value = "random_int")]
    pub sets: String,
    /// Set sizes, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    /// Run the xy + z1 + … + zk demonstration with this k.
    #[arg(long)]
    pub degenerate: Option<usize>,
    /// Fill the elapsed_ms CSV column (otherwise left empty so output is reproducible).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct IncidenceArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Set kind with --n, or explicit sets.
    #[arg(long, default_value = "interval")]
    pub sets: String,
    #[arg(long)]
    pub n: Option<usize>,
    /// Jacobian rows of the minor defining S0.
    #[arg(long, value_delimiter = ',')]
    pub witness: Option<Vec<usize>>,
    /// Multiplicity cap (default deg(f)^k).
    #[arg(long)]
    pub cap: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct MomentArgs {
    #[arg(long)]
    pub d: usize,
    /// Explicit parameters t1,…,tn.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<String>>,
    /// Parameter kind for a report over --n.
    #[arg(long, default_value = "random_int")]
    pub sets: String,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Count signed volumes (vertices in parameter order).
    #[arg(long)]
    pub signed: bool,
    /// Also check det M and the rank of the volume polynomial.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub common: Common,
}

/// Exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::UnknownVariable(_) | Error::InvalidVarSet(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

#[derive(Serialize)]
struct Doc<'a, T: Serialize> {
    spec_version: &'static str,
    command: &'a str,
    #[serde(flatten)]
    report: T,
}

fn json<T: Serialize>(command: &str, report: T) -> String {
    let doc = Doc { spec_version: REPORT_VERSION, command, report };
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
    s.push('\n');
    s
}

fn only_json(common: &Common, command: &str) -> Res<()> {
    if common.output == Output::Csv {
        return Err(Failure::Usage(format!("{command}: csv output is only available for expand and moment")));
    }
    Ok(())
}

fn parse_poly(p: &PolyArgs) -> Res<Polynomial> {
    let vars = VarSet::parse_list(&p.vars)?;
    Ok(Polynomial::parse(&p.poly, &vars)?)
}

fn rank_method(m: Method, trials: usize, seed: u64) -> RankMethod {
    match m {
        Method::Exact => RankMethod::Exact,
        Method::Randomized => RankMethod::Randomized { trials, seed },
    }
}

fn parse_rational(s: &str) -> Res<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Failure::Usage(format!("not a rational number: {s:?}")))
}

enum Sets {
    Kind(SetKind),
    Explicit(Vec<Vec<Rational>>),
}

fn parse_sets(text: &str) -> Res<Sets> {
    if let Some(kind) = SetKind::from_name(text) {
        return Ok(Sets::Kind(kind));
    }
    if text.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return Err(Failure::Usage(format!("unknown set kind {text:?} (interval, random_int, geometric)")));
    }
    let groups = text
        .split(';')
        .map(|g| g.split(',').map(parse_rational).collect::<Res<Vec<_>>>())
        .collect::<Res<Vec<_>>>()?;
    Ok(Sets::Explicit(groups))
}

/// Sets for `k` variables: explicit groups (one group is shared by all), or
/// generated sets of size `n`.
fn resolve_sets(text: &str, n: Option<usize>, k: usize, seed: u64) -> Res<Vec<Vec<Rational>>> {
    match parse_sets(text)? {
        Sets::Kind(kind) => {
            let n = n.ok_or_else(|| Failure::Usage("a set kind needs --n".into()))?;
            Ok(expansion::grid_sets(&kind, k, n, seed)?)
        }
        Sets::Explicit(groups) => {
            let groups = if groups.len() == 1 { vec![groups[0].clone(); k] } else { groups };
            if groups.len() != k {
                return Err(Failure::Usage(format!("expected {k} sets, got {}", groups.len())));
            }
            groups
                .into_iter()
                .map(|g| Ok(expansion::generate_set(&SetSpec { n: g.len(), kind: SetKind::Explicit(g), seed })?))
                .collect()
        }
    }
}

fn cmd_rank(a: &RankArgs) -> Res<String> {
    only_json(&a.common, "rank")?;
    let f = parse_poly(&a.poly)?;
    let report = rank::rank(&f, rank_method(a.method, a.trials, a.common.seed))?;
    Ok(json("rank", report))
}

fn cmd_special(a: &SpecialArgs) -> Res<String> {
    only_json(&a.common, "special")?;
    let f = parse_poly(&a.poly)?;
    let seed = a.common.seed;
    let identity = match a.identity_mode {
        Method::Exact => IdentityMode::Exact,
        Method::Randomized => IdentityMode::Randomized { trials: a.trials.unwrap_or(DEFAULT_IDENTITY_TRIALS), seed },
    };
    let opts = SpecialOptions { identity, rank: rank_method(a.method, a.trials.unwrap_or(5), seed) };
    #[derive(Serialize)]
    struct R {
        poly: String,
        #[serde(flatten)]
        verdict: special::SpecialFormVerdict,
    }
    Ok(json("special", R { poly: f.to_string(), verdict: special::is_special(&f, opts)? }))
}

fn cmd_reduce(a: &ReduceArgs) -> Res<String> {
    only_json(&a.common, "reduce")?;
    let f = parse_poly(&a.poly)?;
    let pivot = match &a.pivot {
        Some(name) => f.vars().index_of(name)?,
        None => 0,
    };
    let result = match &a.sets {
        Some(text) => {
            let sets = resolve_sets(text, a.n, f.nvars(), a.common.seed)?;
            reduction::grid_reduce(&f, pivot, &sets, a.max_attempts)?
        }
        None => reduction::reduce(&f, pivot, a.common.seed, a.max_attempts)?,
    };
    Ok(json("reduce", result))
}

#[derive(Serialize)]
struct SizeRow {
    n: usize,
    image_size: usize,
}

fn cmd_expand(a: &ExpandArgs) -> Res<String> {
    let seed = a.common.seed;
    let budget = a.common.budget;
    if let Some(k) = a.degenerate {
        only_json(&a.common, "expand --degenerate")?;
        let n = match a.n.as_slice() {
            [n] => *n,
            _ => return Err(Failure::Usage("--degenerate takes a single --n".into())),
        };
        return Ok(json("expand", expansion::degenerate_demo(k, n, seed, budget)?));
    }
    let (poly, vars) = match (&a.poly, &a.vars) {
        (Some(p), Some(v)) => (p.clone(), v.clone()),
        _ => return Err(Failure::Usage("expand needs --poly and --vars".into())),
    };
    let f = parse_poly(&PolyArgs { poly, vars })?;
    let method = rank_method(a.method, a.trials, seed);
    match parse_sets(&a.sets)? {
        Sets::Explicit(_) => {
            let sets = resolve_sets(&a.sets, None, f.nvars(), seed)?;
            let size = expansion::image_size(&f, &sets, budget)?;
            match a.common.output {
                Output::Csv => Ok(format!("n,image_size,elapsed_ms\n{},{},\n", sets[0].len(), size)),
                Output::Json => {
                    #[derive(Serialize)]
                    struct R {
                        poly: String,
                        set_sizes: Vec<usize>,
                        image_size: usize,
                    }
                    Ok(json("expand", R { poly: f.to_string(), set_sizes: sets.iter().map(Vec::len).collect(), image_size: size }))
                }
            }
        }
        Sets::Kind(kind) => {
            if a.n.is_empty() {
                return Err(Failure::Usage("expand needs --n".into()));
            }
            let r = expansion::expansion_report(&f, &kind, &a.n, seed, budget, method)?;
            match a.common.output {
                Output::Csv => {
                    let mut s = String::from("n,image_size,elapsed_ms\n");
                    for row in &r.rows {
                        let t = if a.timing { format!("{:.3}", row.elapsed_ms) } else { String::new() };
                        s += &format!("{},{},{}\n", row.n, row.image_size, t);
                    }
                    Ok(s)
                }
                Output::Json => {
                    #[derive(Serialize)]
                    struct R {
                        poly: String,
                        vars: Vec<String>,
                        rank: usize,
                        theoretical_exponent: Option<f64>,
                        theoretical_exponent_exact: Option<String>,
                        fitted_exponent: Option<f64>,
                        lower_bound_respected: Option<bool>,
                        generator: String,
                        seed: u64,
                        rows: Vec<SizeRow>,
                    }
                    Ok(json(
                        "expand",
                        R {
                            poly: r.poly,
                            vars: f.vars().names().to_vec(),
                            rank: r.rank,
                            theoretical_exponent: r.theoretical_exponent,
                            theoretical_exponent_exact: r.theoretical_exponent_exact,
                            fitted_exponent: r.fitted_exponent,
                            lower_bound_respected: r.lower_bound_respected,
                            generator: r.generator,
                            seed,
                            rows: r.rows.iter().map(|x| SizeRow { n: x.n, image_size: x.image_size }).collect(),
                        },
                    ))
                }
            }
        }
    }
}

fn cmd_incidence(a: &IncidenceArgs) -> Res<String> {
    only_json(&a.common, "incidence")?;
    let f = parse_poly(&a.poly)?;
    let sets = resolve_sets(&a.sets, a.n, f.nvars(), a.common.seed)?;
    let inst = incidence::build_instance(&f, &sets, a.witness.as_deref(), a.common.budget)?;
    let claim = incidence::verify_claim(&inst, a.cap);
    #[derive(Serialize)]
    struct R {
        poly: String,
        #[serde(flatten)]
        summary: incidence::IncidenceSummary,
        witness_rows: Vec<usize>,
        multiplicity_cap: u64,
        claim_holds: bool,
    }
    Ok(json(
        "incidence",
        R {
            poly: f.to_string(),
            summary: incidence::summary(&inst),
            witness_rows: inst.witness_rows.clone(),
            multiplicity_cap: claim.multiplicity_cap,
            claim_holds: claim.holds(),
        },
    ))
}

fn cmd_moment(a: &MomentArgs) -> Res<String> {
    let d = a.d;
    let budget = a.common.budget;
    #[derive(Serialize)]
    struct Checks {
        det_m_sign: Option<i8>,
        rank_verified: bool,
    }
    let checks = if a.verify {
        Some(Checks { det_m_sign: moment::det_m_sign(d)?, rank_verified: moment::verify_rank(d, RankMethod::Exact)? })
    } else {
        None
    };
    let exact = moment::theoretical_exponent_exact(d);
    let theo = rank::theoretical_exponent(d).map(|(p, q)| p as f64 / q as f64);
    if let Some(points) = &a.points {
        only_json(&a.common, "moment --points")?;
        let params = points.iter().map(|p| parse_rational(p)).collect::<Res<Vec<_>>>()?;
        let v = moment::distinct_volumes(&params, d, a.signed, budget)?;
        #[derive(Serialize)]
        struct R {
            d: usize,
            n: usize,
            count: usize,
            volumes: Vec<String>,
            theoretical_exponent: Option<f64>,
            theoretical_exponent_exact: Option<String>,
            signed_mode: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            checks: Option<Checks>,
        }
        return Ok(json(
            "moment",
            R {
                d,
                n: params.len(),
                count: v.count(),
                volumes: v.volumes.iter().map(ToString::to_string).collect(),
                theoretical_exponent: theo,
                theoretical_exponent_exact: exact,
                signed_mode: a.signed,
                checks,
            },
        ));
    }
    let kind = match parse_sets(&a.sets)? {
        Sets::Kind(k) => k,
        Sets::Explicit(_) => return Err(Failure::Usage("use --points for explicit parameters".into())),
    };
    if a.n.is_empty() {
        return Err(Failure::Usage("moment needs --points or --n".into()));
    }
    let r = moment::volume_expansion_report(&kind, &a.n, d, a.common.seed, a.signed, budget)?;
    match a.common.output {
        Output::Csv => {
            let mut s = String::from("n,count,elapsed_ms\n");
            for row in &r.rows {
                let t = if a.timing { format!("{:.3}", row.elapsed_ms) } else { String::new() };
                s += &format!("{},{},{}\n", row.n, row.count, t);
            }
            Ok(s)
        }
        Output::Json => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                count: usize,
            }
            #[derive(Serialize)]
            struct R {
                d: usize,
                rows: Vec<Row>,
                theoretical_exponent: f64,
                theoretical_exponent_exact: String,
                fitted_exponent: Option<f64>,
                generator: String,
                seed: u64,
                signed_mode: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                checks: Option<Checks>,
            }
            Ok(json(
                "moment",
                R {
                    d,
                    rows: r.rows.iter().map(|x| Row { n: x.n, count: x.count }).collect(),
                    theoretical_exponent: r.theoretical_exponent,
                    theoretical_exponent_exact: r.theoretical_exponent_exact,
                    fitted_exponent: r.fitted_exponent,
                    generator: r.generator,
                    seed: r.seed,
                    signed_mode: r.signed_mode,
                    checks,
                },
            ))
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    if let Some(t) = cli.threads {
        // only the first configuration in a process takes effect
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = match &cli.command {
        Command::Rank(a) => cmd_rank(a),
        Command::Special(a) => cmd_special(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Incidence(a) => cmd_incidence(a),
        Command::Moment(a) => cmd_moment(a),
    };
    match result {
        Ok(stdout) => Outcome { code: EXIT_OK, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Compute(msg)) => Outcome { code: EXIT_COMPUTATION, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}
