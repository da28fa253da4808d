use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use ramsey_core::boolmat::{self, BooleanMatrix};
use ramsey_core::colorsearch::{self, exists_bad_coloring_with, verify_witness, Family, SearchError, Status};
use ramsey_core::ffmat::{self, MatrixError};
use ramsey_core::orders::{FieldOrder, LinearOrder, RigidSurjection};

use crate::report::Outcome;
use crate::{input, CliError, Global, EXIT_BAD_COLORING, EXIT_BUDGET};

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Budget(m) => CliError::Budget(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    /// Field size (prime); optional when the matrix is given as JSON.
    #[arg(long)]
    p: Option<u32>,
    /// Digit rows (`11,01,10`), matrix JSON, `@file`, or `-` for stdin.
    #[arg(long)]
    matrix: Option<String>,
}

pub fn decompose(a: &MatrixArgs) -> Result<Outcome, CliError> {
    let m = input::ff_matrix(a.p, &input::source(a.matrix.as_deref(), "matrix")?)?;
    let d = ffmat::rcef_decompose(&m)?;
    let check = m.mul(d.tau.matrix())? == d.red && d.red.is_rcef();
    Ok(Outcome::ok(
        json!({ "matrix": to_value(&m) }),
        json!({ "red": to_value(&d.red), "tau": to_value(&d.tau), "tau_inverse": to_value(d.tau.inverse()), "checked": check }),
    ))
}

pub fn tau2(a: &MatrixArgs) -> Result<Outcome, CliError> {
    let m = input::ff_matrix(a.p, &input::source(a.matrix.as_deref(), "matrix")?)?;
    let t = ffmat::tau2(&m)?;
    let check = t.a0.mul(t.gamma.matrix())?.mul(&t.a1.transpose())? == m;
    Ok(Outcome::ok(
        json!({ "matrix": to_value(&m) }),
        json!({ "rank": t.gamma.size(), "gamma": to_value(&t.gamma), "a0": to_value(&t.a0), "a1": to_value(&t.a1), "checked": check }),
    ))
}

#[derive(Args, Debug)]
pub struct PiArgs {
    /// Number of rows; used with `--columns`.
    #[arg(long)]
    n: Option<usize>,
    /// Column supports, `;`-separated: `0,2;1;3`.
    #[arg(long, requires = "n")]
    columns: Option<String>,
    /// Boolean matrix JSON `{n, k, columns}`, `@file` or `-`; read from stdin when no other input is given.
    #[arg(long, conflicts_with = "columns")]
    matrix: Option<String>,
}

pub fn pi(a: &PiArgs) -> Result<Outcome, CliError> {
    let b = match (&a.columns, a.n) {
        (Some(c), Some(n)) => BooleanMatrix::new(n, &input::columns(c)?).map_err(|e| CliError::Usage(format!("columns: {e}")))?,
        _ => input::bool_matrix(&input::source(a.matrix.as_deref(), "matrix")?)?,
    };
    let perm = boolmat::pi(&b);
    let product = b.permute(&perm).map_err(|e| CliError::Usage(e.to_string()))?;
    let epi = boolmat::boolean_to_epi(&product).ok();
    Ok(Outcome::ok(
        json!({ "matrix": to_value(&b) }),
        json!({ "pi": to_value(&perm), "product": to_value(&product), "is_oba": product.is_oba(), "rigid_surjection": epi.map(|f| to_value(&f)) }),
    ))
}

#[derive(Args, Debug)]
pub struct PhiArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    k: usize,
    /// Values `f(0),...,f(n-1)` as ranks in the antilex order of F_p^k.
    #[arg(long)]
    map: String,
    /// Custom order on F_p, as a permutation of 0..p (default natural).
    #[arg(long)]
    field_order: Option<String>,
}

const MAX_PHI_CODOMAIN: usize = 1 << 16;

pub fn phi(a: &PhiArgs) -> Result<Outcome, CliError> {
    if !ffmat::is_prime(a.p) {
        return Err(CliError::Usage(format!("p = {} is not prime", a.p)));
    }
    let size = (a.p as usize).checked_pow(a.k as u32).filter(|&s| s <= MAX_PHI_CODOMAIN);
    let size = size.ok_or_else(|| CliError::Budget(format!("F_{}^{} has more than {MAX_PHI_CODOMAIN} points", a.p, a.k)))?;
    let order = match &a.field_order {
        Some(s) => {
            let seq: Vec<u32> = input::usize_list(s, "field-order")?.into_iter().map(|v| v as u32).collect();
            FieldOrder::from_sequence(&seq).map_err(|e| CliError::Usage(format!("field-order: {e}")))?
        }
        None => FieldOrder::natural(a.p),
    };
    if order.modulus() != a.p {
        return Err(CliError::Usage("field-order must list every element of F_p".into()));
    }
    let values: Vec<u32> = input::usize_list(&a.map, "map")?.into_iter().map(|v| v as u32).collect();
    let f = RigidSurjection::new(values, size).map_err(|e| CliError::Usage(format!("map: {e}")))?;
    let codomain = LinearOrder::antilex(&order, a.k);
    let m = ffmat::phi(&f, &codomain, a.p, a.k)?;
    let rcef = m.is_rcef();
    Ok(Outcome::ok(
        json!({ "p": a.p, "k": a.k, "map": to_value(&f), "field_order": (0..a.p).map(|r| order.element_at(r)).collect::<Vec<_>>() }),
        json!({ "phi": to_value(&m), "full_column_rank": m.has_full_column_rank(), "rcef": rcef }),
    ))
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FamilyName {
    Drt,
    Glr,
    FfFactor,
    BoolFactor,
    Gowers,
    Square,
}

impl FamilyName {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyName::Drt => "drt",
            FamilyName::Glr => "glr",
            FamilyName::FfFactor => "ff-factor",
            FamilyName::BoolFactor => "bool-factor",
            FamilyName::Gowers => "gowers",
            FamilyName::Square => "square",
        }
    }
}

/// Family parameters; `drt` reads `--k`/`--m` as the sizes of the coloured and target partitions.
#[derive(Args, Debug)]
pub struct FamilyParams {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Number of colours.
    #[arg(long, default_value_t = 2)]
    r: usize,
}

fn family(name: FamilyName, f: &FamilyParams) -> Result<Family, CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("{} needs --{flag}", name.name())));
    let p = || f.p.ok_or_else(|| CliError::Usage(format!("{} needs --p", name.name())));
    let r = f.r;
    Ok(match name {
        FamilyName::Drt => Family::Drt { kr: need(f.k, "k")?, ks: need(f.m, "m")?, r },
        FamilyName::Glr => Family::Glr { p: p()?, k: need(f.k, "k")?, m: need(f.m, "m")?, r },
        FamilyName::FfFactor => Family::FfFactor { p: p()?, k: need(f.k, "k")?, m: need(f.m, "m")?, r },
        FamilyName::BoolFactor => Family::BoolFactor { k: need(f.k, "k")?, m: need(f.m, "m")?, r },
        FamilyName::Gowers => {
            let k = need(f.k, "k")?;
            let k = u32::try_from(k).map_err(|_| CliError::Usage("k is too large".into()))?;
            Family::Gowers { k, m: need(f.m, "m")?, r }
        }
        FamilyName::Square => Family::Square { p: p()?, k: need(f.k, "k")?, m: need(f.m, "m")?, r },
    })
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    #[command(flatten)]
    params: FamilyParams,
    #[arg(long)]
    n: Option<usize>,
    /// Scan n upward from the smallest admissible size to this bound instead.
    #[arg(long)]
    min_n: Option<usize>,
}

fn status_exit(s: Status) -> u8 {
    match s {
        Status::NoBadColoring => 0,
        Status::BadColoringFound => EXIT_BAD_COLORING,
        Status::BudgetExhausted => EXIT_BUDGET,
    }
}

pub fn verify(a: &VerifyArgs, g: &Global) -> Result<Outcome, CliError> {
    let fam = family(a.family, &a.params)?;
    if let Some(max) = a.min_n {
        return scan(&fam, max, g);
    }
    let n = a.n.ok_or_else(|| CliError::Usage("verify needs --n or --min-n".into()))?;
    let problem = colorsearch::instance(&fam, n)?;
    let out = exists_bad_coloring_with(&problem, &g.search_config());
    let checked = out.witness.as_ref().map(|w| verify_witness(&problem, w));
    let mut params = to_value(&fam);
    params["n"] = json!(n);
    Ok(Outcome {
        params,
        outcome: json!({
            "status": to_value(&out.status),
            "witness": out.witness,
            "witness_checked": checked,
            "ground": problem.ground_size(),
            "copies": problem.copies.len(),
            "search": to_value(&out.stats),
        }),
        nodes: Some(out.stats.nodes),
        exit: status_exit(out.status),
    })
}

#[derive(Args, Debug)]
pub struct MinNArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    #[command(flatten)]
    params: FamilyParams,
    /// Largest n to try.
    #[arg(long, default_value_t = 8)]
    max: usize,
}

pub fn min_n(a: &MinNArgs, g: &Global) -> Result<Outcome, CliError> {
    scan(&family(a.family, &a.params)?, a.max, g)
}

fn scan(fam: &Family, max: usize, g: &Global) -> Result<Outcome, CliError> {
    let report = colorsearch::min_n(fam, max, &g.search_config())?;
    let nodes = report.steps.iter().map(|s| s.outcome.stats.nodes).sum();
    let mut params = to_value(fam);
    params["max"] = json!(max);
    let exit = match report.status {
        Status::NoBadColoring => 0,
        s => status_exit(s),
    };
    Ok(Outcome { params, outcome: to_value(&report), nodes: Some(nodes), exit })
}
