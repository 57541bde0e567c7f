//! Command-line front end. Exit codes: 0 ok, 2 invalid input, 3 prediction
//! mismatch, 4 budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{self, Budget};
use crate::constructions::{
    build_with_report, CodeFile, CodeKind, CodeRecipe, LinearCode, RepresentativeRule,
};
use crate::error::Error;
use crate::field::{divisors, Elem, Field};
use crate::sss::{self, MasseyScheme, Recovery};
use crate::zoo::{
    self, build_family, instances, ConditionAOptions, MethodChoice, Term, VectorialFnSpec,
    DEFAULT_SPECTRAL_WORK,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const BUDGET_ENV: &str = "DUALBENT_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "dualbent",
    version,
    about = "Few-weight codes from vectorial dual-bent functions"
)]
pub struct Cli {
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Lift the enumeration and spectral budgets.
    #[arg(long, global = true)]
    pub extended: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a code and write its JSON description.
    Build(BuildArgs),
    /// Enumerate a code and compare with its predicted weights.
    Verify(VerifyArgs),
    /// Check a vectorial function against Condition A.
    Function(FunctionArgs),
    /// Access structure of the scheme on the dual code.
    Sss(SssArgs),
    /// Describe GF(p^n).
    FieldInfo(FieldInfoArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct FnArgs {
    /// Bundled instance name.
    #[arg(long)]
    pub instance: Option<String>,
    /// F1..F6.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub e: Option<u64>,
    #[arg(long)]
    pub r_prime: Option<u32>,
    #[arg(long)]
    pub r_second: Option<u32>,
    /// Diagonal coefficients for F4.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Vec<u32>,
    /// Linearized polynomial coefficients.
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<u32>,
    #[arg(long)]
    pub beta: Option<u32>,
    #[arg(long)]
    pub gamma: Option<u32>,
    /// Terms "coeff:exp,..." of the permutation for F5.
    #[arg(long)]
    pub perm: Option<String>,
    /// Terms "coeff:exp,..." inside the trace for F5.
    #[arg(long)]
    pub g: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Auto,
    Spectral,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Representatives {
    Min,
    Random,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub function: FnArgs,
    #[arg(long)]
    pub kind: CodeKind,
    /// Subfield degree for theorem1.
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub s1: Option<u32>,
    #[arg(long)]
    pub s2: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub lambda: u32,
    #[arg(long, value_enum, default_value_t = Representatives::Min)]
    pub representatives: Representatives,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Code JSON destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Generator matrix destination.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Code JSON written by `build`.
    pub code: PathBuf,
    /// Check this generator matrix instead of regenerating it.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Weight distribution as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Check this many random codewords instead of enumerating all.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct FunctionArgs {
    #[command(flatten)]
    pub function: FnArgs,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SssArgs {
    /// Code JSON written by `build`.
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Generator matrix file ("q n k" header, then k rows).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub predicted_only: bool,
    /// Deal this secret and recover it from all shares.
    #[arg(long)]
    pub secret: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FieldInfoArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Element encoding to describe.
    #[arg(long)]
    pub element: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Invalid(String),
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            _ => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(s) | CliError::Invalid(s) | CliError::Mismatch(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let result = match &cli.command {
        Command::Build(a) => cmd_build(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Function(a) => cmd_function(&cli, a),
        Command::Sss(a) => cmd_sss(&cli, a),
        Command::FieldInfo(a) => cmd_field_info(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn budget(cli: &Cli) -> CliResult<Budget> {
    if cli.extended {
        return Ok(Budget::unlimited());
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => {
            let codewords = v
                .trim()
                .parse::<u64>()
                .map_err(|_| CliError::Invalid(format!("{BUDGET_ENV} must be an integer")))?;
            Ok(Budget {
                codewords,
                work: u64::MAX,
            })
        }
        Err(_) => Ok(Budget::default()),
    }
}

fn condition_a_options(cli: &Cli, method: Method) -> ConditionAOptions {
    ConditionAOptions {
        method: match method {
            Method::Auto => MethodChoice::Auto,
            Method::Spectral => MethodChoice::Spectral,
            Method::ClosedForm => MethodChoice::ClosedForm,
        },
        spectral_work_budget: if cli.extended {
            u64::MAX
        } else {
            DEFAULT_SPECTRAL_WORK
        },
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn progress_printer() -> impl Fn(u64, u64) + Sync {
    let printed = AtomicU64::new(0);
    move |done, total| {
        let millions = done / 1_000_000;
        if millions > printed.fetch_max(millions, Ordering::Relaxed) {
            eprintln!("{}", json!({ "progress": done, "total": total }));
        }
    }
}

fn parse_terms(s: &str) -> CliResult<Vec<Term>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (c, e) = t
                .split_once(':')
                .ok_or_else(|| CliError::Invalid(format!("term '{t}' must be coeff:exp")))?;
            let coeff = c
                .trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("bad coefficient in '{t}'")))?;
            let exp = e
                .trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("bad exponent in '{t}'")))?;
            Ok(Term { coeff, exp })
        })
        .collect()
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Invalid(format!("--{flag} is required")))
}

/// Resolves the function flags into a family spec.
pub fn function_spec(a: &FnArgs) -> CliResult<VectorialFnSpec> {
    if let Some(name) = &a.instance {
        return Ok(instances::instance(name)?);
    }
    let family = a
        .family
        .as_deref()
        .ok_or_else(|| CliError::Invalid("--family or --instance is required".into()))?;
    let p = need(a.p, "p")?;
    let m = need(a.m, "m")?;
    let r_prime = || {
        a.r_prime
            .or(a.r.map(|r| r / 2))
            .ok_or_else(|| CliError::Invalid("--r-prime is required".into()))
    };
    Ok(match family.to_ascii_uppercase().as_str() {
        "F1" => VectorialFnSpec::XyPower {
            p,
            r_prime: r_prime()?,
            m,
            a: a.a.unwrap_or(1),
            e: need(a.e, "e")?,
        },
        "F2" => VectorialFnSpec::XyLinearized {
            p,
            r_prime: r_prime()?,
            m,
            a: a.a.unwrap_or(1),
            l: a.l.clone(),
        },
        "F3" => VectorialFnSpec::QuadraticTrace {
            p,
            r: need(a.r, "r")?,
            m,
            a: a.a.unwrap_or(1),
        },
        "F4" => {
            if a.coeffs.is_empty() {
                return Err(CliError::Invalid("--coeffs is required".into()));
            }
            VectorialFnSpec::DiagonalQuadratic {
                p,
                m,
                a: a.coeffs.clone(),
            }
        }
        "F5" => VectorialFnSpec::PartialSpread {
            p,
            r_prime: r_prime()?,
            m,
            alpha: a.alpha.first().copied().unwrap_or(1),
            perm: a.perm.as_deref().map(parse_terms).transpose()?,
            g: a.g.as_deref().map(parse_terms).transpose()?,
        },
        "F6" => {
            let alpha: [u32; 3] = a
                .alpha
                .clone()
                .try_into()
                .map_err(|_| CliError::Invalid("--alpha takes three values for F6".into()))?;
            VectorialFnSpec::Mixed {
                p,
                r_prime: need(a.r_prime, "r-prime")?,
                r_second: need(a.r_second, "r-second")?,
                m,
                alpha,
                beta: need(a.beta, "beta")?,
                gamma: need(a.gamma, "gamma")?,
                l: a.l.clone(),
            }
        }
        other => return Err(CliError::Invalid(format!("unknown family '{other}'"))),
    })
}

/// The recipe named by the build flags.
pub fn recipe(a: &BuildArgs) -> CliResult<CodeRecipe> {
    if a.kind == CodeKind::Theorem1 {
        let s =
            a.s.or(a.s1)
                .ok_or_else(|| CliError::Invalid("--s is required".into()))?;
        return Ok(CodeRecipe::theorem1(s));
    }
    Ok(CodeRecipe::new(
        a.kind,
        need(a.s1, "s1")?,
        need(a.s2, "s2")?,
        a.lambda,
    ))
}

fn cmd_build(cli: &Cli, a: &BuildArgs) -> CliResult<()> {
    let spec = function_spec(&a.function)?;
    let recipe = recipe(a)?;
    // clauses that do not depend on the sign or the degree, before any heavy work
    recipe.validate(&spec.degrees(), spec.m(), 1, Some(2))?;
    let f = build_family(&spec)?;
    let report = zoo::verify_condition_a_with(&f, condition_a_options(cli, a.method))?;
    let rule = match a.representatives {
        Representatives::Min => RepresentativeRule::MinEncoding,
        Representatives::Random => RepresentativeRule::Randomized(a.seed),
    };
    let c = build_with_report(&f, &report, &recipe, rule)?;
    if let Some(path) = &a.matrix {
        write_file(path, &c.code.to_matrix_string())?;
    }
    emit(&c.to_code_file(), a.out.as_deref())
}

fn load_code_file(path: &Path) -> CliResult<CodeFile> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> CliResult<LinearCode> {
    Ok(LinearCode::from_matrix_str(&read_file(path)?)?)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CliResult<()> {
    let file = load_code_file(&a.code)?;
    let budget = budget(cli)?;
    let code = match &a.matrix {
        Some(p) => load_matrix(p)?,
        None => {
            // fail on budget before regenerating the matrix
            if a.sample.is_none() {
                budget.check_size(file.q, file.k, file.n)?;
            }
            file.materialize()?
        }
    };
    let predicted = file.predicted_distribution();
    if let Some(samples) = a.sample {
        let sample = analysis::sample_weights(&code, samples, a.seed, Some(&predicted))?;
        let matches = sample.unexpected.is_empty();
        emit(
            &json!({ "kind": file.kind, "mode": "sampled", "matches": matches, "sample": sample }),
            a.out.as_deref(),
        )?;
        return if matches {
            Ok(())
        } else {
            Err(CliError::Mismatch(
                "sampled weight outside the prediction".into(),
            ))
        };
    }
    let progress = progress_printer();
    let dist = analysis::weight_distribution_with(&code, budget, Some(&progress))?;
    let report = analysis::report_from(&code, &dist, Some(&predicted));
    if let Some(path) = &a.csv {
        write_file(path, &dist.to_csv())?;
    }
    let matches = report.prediction.as_ref().is_some_and(|p| p.matches);
    emit(
        &json!({ "kind": file.kind, "matches": matches, "analysis": report }),
        a.out.as_deref(),
    )?;
    if matches {
        Ok(())
    } else {
        Err(CliError::Mismatch(
            "weight distribution differs from the prediction".into(),
        ))
    }
}

fn cmd_function(cli: &Cli, a: &FunctionArgs) -> CliResult<()> {
    let spec = function_spec(&a.function)?;
    let f = build_family(&spec)?;
    let opts = condition_a_options(cli, a.method);
    let cond = zoo::verify_condition_a_with(&f, opts)?;
    let vdb = zoo::verify_vectorial_dual_bent_with_budget(&f, opts.spectral_work_budget)?;
    let levels = cond.epsilon.map(|eps| zoo::level_set_counts(&f, eps));
    let dual_levels = match (cond.epsilon, f.dual()) {
        (Some(eps), Some(d)) => Some(zoo::level_set_counts(d, eps)),
        _ => None,
    };
    let out = json!({
        "function": spec,
        "p": spec.p(),
        "degrees": spec.degrees(),
        "m": spec.m(),
        "condition_a": cond,
        "vectorial_dual_bent": vdb,
        "homogeneity_degree": zoo::homogeneity_degree(&f),
        "level_sets": levels,
        "dual_level_sets": dual_levels,
    });
    emit(&out, a.out.as_deref())
}

fn cmd_sss(cli: &Cli, a: &SssArgs) -> CliResult<()> {
    let (code, source, precondition) = match (&a.matrix, &a.code) {
        (Some(m), _) => (load_matrix(m)?, Some(m.display().to_string()), None),
        (None, Some(c)) => {
            let file = load_code_file(c)?;
            let pr = &file.params;
            let recipe = CodeRecipe::new(file.kind, pr.s1, pr.s2, pr.lambda);
            (
                file.materialize()?,
                None,
                Some(recipe.minimality_precondition(pr.p, pr.r, pr.epsilon)),
            )
        }
        (None, None) => return Err(CliError::Invalid("--matrix or --code is required".into())),
    };
    let limit = if cli.extended || std::env::var_os(BUDGET_ENV).is_some() {
        budget(cli)?.codewords
    } else {
        analysis::EXHAUSTIVE_MINIMALITY_LIMIT
    };
    let report = sss::access_report_within(&code, a.predicted_only, limit)?;
    let (deal, recovered) = match a.secret {
        Some(s) => {
            let scheme = MasseyScheme::new(code.clone())?;
            let d = scheme.deal(Elem(s), a.seed)?;
            let shares: Vec<(usize, Elem)> = d
                .shares
                .iter()
                .enumerate()
                .map(|(i, &v)| (i + 1, Elem(v)))
                .collect();
            let rec = match scheme.reconstruct(&shares)? {
                Recovery::Secret(x) => Some(x.0),
                Recovery::Unqualified => None,
            };
            (Some(d), rec)
        }
        None => (None, None),
    };
    let out = json!({
        "scheme": { "q": code.q(), "n": code.n(), "k": code.k(), "G": source, "minimality_precondition": precondition },
        "report": report,
        "deal": deal,
        "recovered": recovered,
    });
    emit(&out, a.out.as_deref())
}

fn cmd_field_info(a: &FieldInfoArgs) -> CliResult<()> {
    let f = Field::conway(a.p, a.n)?;
    let element = match a.element {
        Some(enc) => {
            let x = f.elem(enc)?;
            let subfields: Vec<u32> = divisors(f.n())
                .into_iter()
                .filter(|&m| f.in_subfield(m, x).unwrap_or(false))
                .collect();
            Some(json!({
                "encoding": x.0,
                "digits": f.digits(x),
                "log": f.log(x),
                "absolute_trace": f.tr_prime(x),
                "quadratic_character": if x.is_zero() { None } else { Some(f.quad_character(x)?) },
                "subfields": subfields,
            }))
        }
        None => None,
    };
    let out = json!({
        "field": f.descriptor(),
        "order": f.order(),
        "conway": f.is_conway(),
        "table_backed": f.is_table_backed(),
        "subfield_degrees": divisors(f.n()),
        "element": element,
    });
    emit(&out, None)
}
