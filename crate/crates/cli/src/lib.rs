//! Command-line front end: every command reads JSON, calls the library and
//! prints a [`RunReport`].
//!
//! Exit codes: 0 ok, 1 mathematical violation, 2 malformed input or usage.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use commvar::classify::{
    commuting_matrices_status, decide_connected, decide_irreducible, decide_simply_connected, torus_component_count,
    Decision, ReductiveGroupDescriptor,
};
use commvar::cohomology::{brute_force_invariant_dims, poincare_polynomial_with_limit, DEFAULT_MAX_RN};
use commvar::fixtures;
use commvar::retraction::{delta_tuple, RetractionTime};
use commvar::suites::{run_suite, SUITE_NAMES};
use commvar::varieties::{
    cochar_limit, git_equivalent, is_polystable, simultaneous_diagonalize, validate_representation,
    weyl_canonical_form, FinAbGroup, Family, GroupFamily, Representation, TorusPoint,
};
use commvar::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SEED_ENV: &str = "COMMVAR_SEED";

#[derive(Debug, Parser)]
#[command(name = "commvar", version, about = "Character varieties of abelian groups")]
pub struct Cli {
    /// Equality tolerance (overrides the default 1e-9).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Eigenvalue clustering tolerance (overrides the default 1e-8).
    #[arg(long, global = true)]
    pub cluster_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the retraction at time t to every generator.
    Retract {
        #[arg(long)]
        t: f64,
        /// Representation JSON file; stdin when absent or `-`.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Also write the retracted representation to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check commutation, torsion and group membership.
    Validate {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Decide whether the representation has closed orbit.
    Polystable {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Weyl canonical form of a representation, or of torus coordinates
    /// given as {"family", "n", "rows"}.
    Canonical {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Decide whether two polystable representations are GIT equivalent.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Limit of the representation under a cocharacter.
    Limit {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<i64>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Connectedness, irreducibility and simple connectivity.
    Classify {
        /// e.g. '{"d":0,"factors":[{"family":"SL","n":3}]}'
        #[arg(long)]
        group: String,
        /// e.g. '{"rank":3,"torsion":[]}'
        #[arg(long)]
        gamma: String,
    },
    /// Number of components of Hom(Γ, T) for a torus of the given dimension.
    Components {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        torus_dim: u32,
    },
    /// Irreducibility status of the variety of commuting r-tuples of n×n matrices.
    Crn {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
    },
    /// Poincaré polynomial of the GL(n) character variety of Z^r.
    Poincare {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Also run the brute-force oracle and report agreement.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_RN)]
        max_rn: usize,
    },
    /// Run a built-in fixture.
    Fixtures {
        /// Available: limit-to-commuting-pair
        name: String,
    },
    /// Run a seeded randomized invariant suite.
    Suite {
        name: String,
        /// Defaults to $COMMVAR_SEED, then 1.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub status: Status,
    pub payload: Value,
    pub citations: Vec<String>,
}

impl RunReport {
    fn ok(payload: Value) -> Self {
        RunReport {
            status: Status::Ok,
            payload,
            citations: Vec::new(),
        }
    }

    fn violation(payload: Value) -> Self {
        RunReport {
            status: Status::Violation,
            payload,
            citations: Vec::new(),
        }
    }

    fn cite(mut self, c: impl IntoIterator<Item = String>) -> Self {
        self.citations.extend(c);
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error{}: {message}", field.as_ref().map(|f| format!(" in field `{f}`")).unwrap_or_default())]
    Schema { field: Option<String>, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] commvar::Error),
}

impl CliError {
    /// Mathematical failures are violations; everything else is bad input.
    fn status(&self) -> Status {
        use commvar::Error as E;
        match self {
            CliError::Lib(
                E::NotSemisimple { .. }
                | E::ZeroEigenvalue
                | E::NotSimultaneouslyDiagonalizable(_)
                | E::NotPolystable(_)
                | E::NoLimit { .. }
                | E::InvalidRepresentation(_)
                | E::SingularInput,
            ) => Status::Violation,
            _ => Status::Error,
        }
    }

    fn to_json(&self) -> Value {
        let mut v = match self {
            CliError::Parse { line, column, .. } => json!({"kind": "parse_error", "line": line, "column": column}),
            CliError::Schema { field, .. } => json!({"kind": "schema_error", "field": field}),
            CliError::Io { path, .. } => json!({"kind": "io_error", "path": path}),
            CliError::Usage(_) => json!({"kind": "usage_error"}),
            CliError::Lib(e) => json!({"kind": lib_error_kind(e)}),
        };
        v["message"] = Value::String(self.to_string());
        v
    }
}

fn lib_error_kind(e: &commvar::Error) -> &'static str {
    use commvar::Error as E;
    match e {
        E::NumericalFailure(_) => "numerical_failure",
        E::SingularInput => "singular_input",
        E::DimensionMismatch { .. } => "dimension_mismatch",
        E::NonFinite { .. } => "non_finite",
        E::NotSemisimple { .. } => "not_semisimple",
        E::ZeroEigenvalue => "zero_eigenvalue",
        E::ZeroCoordinate { .. } => "zero_coordinate",
        E::InvalidTime(_) => "invalid_time",
        E::InvalidTolerance(_) => "invalid_tolerance",
        E::InvalidRepresentation(_) => "invalid_representation",
        E::NotSimultaneouslyDiagonalizable(_) => "not_simultaneously_diagonalizable",
        E::UnsupportedFamily(_) => "unsupported_family",
        E::NotPolystable(_) => "not_polystable",
        E::NoLimit { .. } => "no_limit",
        E::InvalidGroup(_) => "invalid_group",
        E::EmptyGroup => "empty_group",
        E::SizeLimit { .. } => "size_limit",
        E::IntegralityFailure { .. } => "integrality_failure",
        E::UnknownSuite(_) => "unknown_suite",
    }
}

/// Turns a serde_json error into a parse or schema error.
fn json_error(e: serde_json::Error) -> CliError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Syntax | Category::Eof => CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
        _ => {
            let msg = e.to_string();
            let field = ["missing field `", "unknown field `", "duplicate field `"]
                .iter()
                .find_map(|p| msg.split_once(p))
                .and_then(|(_, rest)| rest.split_once('`'))
                .map(|(f, _)| f.to_string());
            CliError::Schema { field, message: msg }
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(json_error)
}

fn read_source(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io {
                path: "<stdin>".into(),
                message: e.to_string(),
            })?;
            Ok(s)
        }
    }
}

/// Parsed inputs, echoed in violation reports so they can be reproduced.
#[derive(Default)]
struct Inputs(Vec<Value>);

impl Inputs {
    fn rep(&mut self, path: Option<&Path>) -> Result<(Representation, Value), CliError> {
        let text = read_source(path)?;
        let rep: Representation = parse(&text)?;
        let echo = serde_json::to_value(&rep).expect("representation serialises");
        self.0.push(echo.clone());
        Ok((rep, echo))
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, CliError> {
    let mut t = Tolerances::default();
    if let Some(x) = cli.tol {
        t = t.with_eq_tol(x);
    }
    if let Some(x) = cli.cluster_tol {
        t = t.with_cluster_tol(x);
    }
    t.validate()?;
    Ok(t)
}

fn decision_citations<'a>(ds: impl IntoIterator<Item = &'a Decision>) -> Vec<String> {
    ds.into_iter().map(|d| d.branch.id().to_string()).collect()
}

/// Big integers go out as JSON numbers when they fit in `u64`.
fn big_json(n: &num_bigint::BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

/// Torus coordinates with their group, for `canonical`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusInput {
    family: Family,
    n: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

fn resolve_seed(seed: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(1),
    }
}

fn execute(cli: &Cli, inputs: &mut Inputs) -> Result<RunReport, CliError> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Retract { t, input, out } => {
            let t = RetractionTime::new(*t)?;
            let (rep, _) = inputs.rep(input.as_deref())?;
            let moved = delta_tuple(&rep, t, &tol)?;
            let text = moved.to_json();
            if let Some(path) = out {
                fs::write(path, &text).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
            }
            Ok(RunReport::ok(serde_json::to_value(&moved).expect("serialises")))
        }
        Command::Validate { input } => {
            let (rep, echo) = inputs.rep(input.as_deref())?;
            let report = validate_representation(&rep, &tol)?;
            let payload = json!({"valid": report.is_valid(), "violations": report.violations, "input": echo});
            Ok(if report.is_valid() {
                RunReport::ok(payload)
            } else {
                RunReport::violation(payload)
            })
        }
        Command::Polystable { input } => {
            let (rep, _) = inputs.rep(input.as_deref())?;
            Ok(RunReport::ok(json!({"polystable": is_polystable(&rep, &tol)?})))
        }
        Command::Canonical { input } => {
            let text = read_source(input.as_deref())?;
            let value: Value = parse(&text)?;
            inputs.0.push(value.clone());
            if value.get("rows").is_some() {
                let t: TorusInput = parse(&text)?;
                let group = GroupFamily::new(t.family, t.n)?;
                let rows = t
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|&[re, im]| num_complex::Complex64::new(re, im)).collect())
                    .collect();
                let point = TorusPoint::new(rows)?;
                point.check_family(group, &tol)?;
                let form = weyl_canonical_form(&point, group)?;
                return Ok(RunReport::ok(json!({"canonical": form})));
            }
            let rep: Representation = parse(&text)?;
            if !is_polystable(&rep, &tol)? {
                return Err(commvar::Error::NotPolystable("input").into());
            }
            let red = simultaneous_diagonalize(&rep, &tol)?;
            let form = weyl_canonical_form(&red.point, rep.group())?;
            Ok(RunReport::ok(json!({"canonical": form, "torus_point": red.point})))
        }
        Command::Equiv { a, b } => {
            let (ra, _) = inputs.rep(Some(a))?;
            let (rb, _) = inputs.rep(Some(b))?;
            Ok(RunReport::ok(json!({"equivalent": git_equivalent(&ra, &rb, &tol)?})))
        }
        Command::Limit { weights, input } => {
            let (rep, echo) = inputs.rep(input.as_deref())?;
            match cochar_limit(&rep, weights, &tol) {
                Ok(lim) => Ok(RunReport::ok(serde_json::to_value(&lim).expect("serialises"))),
                Err(e @ commvar::Error::NoLimit { .. }) => {
                    let err = CliError::from(e);
                    Ok(RunReport::violation(
                        json!({"error": err.to_json(), "input": echo, "weights": weights}),
                    ))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Classify { group, gamma } => {
            let g: ReductiveGroupDescriptor = parse(group)?;
            let gamma: FinAbGroup = parse(gamma)?;
            let connected = decide_connected(&g, &gamma)?;
            let irreducible = decide_irreducible(&g, &gamma)?;
            let simply = if gamma.is_free() {
                Some(decide_simply_connected(&g, gamma.rank())?)
            } else {
                None
            };
            let cites = decision_citations([&connected, &irreducible].into_iter().chain(simply.as_ref()));
            Ok(RunReport::ok(json!({
                "connected": connected,
                "irreducible": irreducible,
                "simply_connected": simply,
            }))
            .cite(cites))
        }
        Command::Components { gamma, torus_dim } => {
            let gamma: FinAbGroup = parse(gamma)?;
            let count = torus_component_count(&gamma, *torus_dim);
            Ok(RunReport::ok(big_json(&count)).cite(["torus_component_count".to_string()]))
        }
        Command::Crn { r, n } => {
            let d = commuting_matrices_status(*r, *n)?;
            let cites = decision_citations([&d]);
            Ok(RunReport::ok(json!({"r": r, "n": n, "status": d})).cite(cites))
        }
        Command::Poincare { n, r, oracle, max_rn } => {
            let p = poincare_polynomial_with_limit(*n, *r, *max_rn)?;
            let mut payload = serde_json::to_value(&p).expect("serialises");
            if *oracle {
                let q = brute_force_invariant_dims(*n, *r)?;
                let agree = p == q;
                payload["oracle"] = serde_json::to_value(&q).expect("serialises")["coeffs"].clone();
                payload["agree"] = json!(agree);
                if !agree {
                    return Ok(RunReport::violation(payload));
                }
            }
            Ok(RunReport::ok(payload))
        }
        Command::Fixtures { name } => match name.as_str() {
            "limit-to-commuting-pair" => {
                let pair = fixtures::limit_to_commuting_pair();
                let before = validate_representation(&pair, &tol)?;
                let limit = cochar_limit(&pair, &fixtures::LIMIT_WEIGHTS, &tol)?;
                let after = validate_representation(&limit, &tol)?;
                let expected = limit == fixtures::commuting_limit();
                let payload = json!({
                    "pair": pair,
                    "pair_commutes": before.is_valid(),
                    "pair_violations": before.violations,
                    "weights": fixtures::LIMIT_WEIGHTS,
                    "limit": limit,
                    "limit_commutes": after.is_valid(),
                    "limit_is_expected": expected,
                });
                let ok = !before.is_valid() && after.is_valid() && expected;
                let report = if ok {
                    RunReport::ok(payload)
                } else {
                    RunReport::violation(payload)
                };
                Ok(report.cite(["non_commuting_pair_limits_to_commuting_pair".to_string()]))
            }
            other => Err(CliError::Usage(format!(
                "unknown fixture {other:?}; available: limit-to-commuting-pair"
            ))),
        },
        Command::Suite { name, seed, count } => {
            if !SUITE_NAMES.contains(&name.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown suite {name:?}; available: {}",
                    SUITE_NAMES.join(", ")
                )));
            }
            let seed = resolve_seed(*seed)?;
            let report = run_suite(name, seed, *count, &tol)?;
            let passed = report.passed();
            let payload = serde_json::to_value(&report).expect("serialises");
            Ok(if passed {
                RunReport::ok(payload)
            } else {
                RunReport::violation(payload)
            })
        }
    }
}

/// Report for a command line that failed to parse.
pub fn usage_report(message: String) -> RunReport {
    RunReport {
        status: Status::Error,
        payload: json!({"error": CliError::Usage(message).to_json()}),
        citations: Vec::new(),
    }
}

/// Runs a parsed command; errors become `error`/`violation` reports.
pub fn run(cli: &Cli) -> RunReport {
    let mut inputs = Inputs::default();
    match execute(cli, &mut inputs) {
        Ok(r) => r,
        Err(e) => {
            let status = e.status();
            let mut payload = json!({"error": e.to_json()});
            if status == Status::Violation {
                payload["inputs"] = Value::Array(inputs.0);
            }
            RunReport {
                status,
                payload,
                citations: Vec::new(),
            }
        }
    }
}
