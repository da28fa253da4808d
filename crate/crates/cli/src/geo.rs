use clap::{Args, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use ramsey_core::linalg::QMatrix;
use ramsey_core::metricfree::{self, FiniteMetricSpace, FreeVector, MetricError};
use ramsey_core::normgeo::{
    self, alpha, amalgam, bm_upper, eps_net, factor_through_envelope, gap_metric, injective_envelope, inv_norm, omega,
    op_norm, polyhedral_approx, sandwich, ApproxInput, BmEffort, FloatNorm, GeoError, NetMode, VERTEX_DIM_CAP,
};
use ramsey_core::rational::{self, Rational};

use crate::report::Outcome;
use crate::{input, CliError, Global};

impl From<GeoError> for CliError {
    fn from(e: GeoError) -> Self {
        match e {
            GeoError::Budget(m) => CliError::Budget(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::Budget(m) | MetricError::Geo(GeoError::Budget(m)) => CliError::Budget(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn q(x: &Rational) -> Value {
    json!(rational::format(x))
}

fn qm(m: &QMatrix) -> Value {
    json!(rational::mat_to_strings(m))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

#[derive(Subcommand, Debug)]
pub enum GeoCommand {
    /// Norm of a vector.
    Norm {
        /// `linf:K`, `l1:K`, space JSON, functional rows, or `@file`.
        #[arg(long)]
        space: String,
        #[arg(long)]
        x: String,
    },
    /// ‖T‖ and ‖T⁻¹‖ for T: X → Y (`dim Y` rows).
    Opnorm {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        t: String,
    },
    /// ω(N, P) = log max(‖Id‖_{N→P}, ‖Id‖_{P→N}).
    Omega {
        #[arg(long)]
        n: String,
        #[arg(long)]
        p: String,
    },
    /// α_N(P, Q) and its comparison with ω(P, Q).
    Alpha {
        #[arg(long)]
        n: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Gap Λ_Z between two subspaces given by basis rows.
    Gap {
        #[arg(long)]
        z: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
    },
    /// ε-net of the unit ball (or shells of the sphere).
    Net {
        #[arg(long)]
        space: String,
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value_t = NetKind::Ball)]
        mode: NetKind,
        /// Ball radius for `--mode ball`.
        #[arg(long, default_value = "1")]
        radius: String,
        /// Points the greedy net must extend, `;`-separated rows.
        #[arg(long)]
        start: Option<String>,
    },
    /// Amalgamation of X and Y along T.
    Amalgam {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        t: String,
        /// Functional set D on Y (rows); defaults to least-norm preimages.
        #[arg(long)]
        d: Option<String>,
    },
    /// Injective envelope Ψ_F, optionally factoring T: F → ℓ∞^m through it.
    Envelope {
        #[arg(long)]
        space: String,
        #[arg(long)]
        t: Option<String>,
    },
    /// Polyhedral ε-approximation of a polyhedral or Euclidean-type norm.
    Approx {
        #[arg(long, conflicts_with_all = ["euclidean", "matrix"])]
        space: Option<String>,
        /// Approximate ℓ2^K.
        #[arg(long, conflicts_with = "matrix")]
        euclidean: Option<usize>,
        /// Approximate x ↦ ‖Ax‖₂.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        eps: String,
    },
    /// Upper bound on log d_BM(X, Y) from an explicit map.
    Bound {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum NetKind {
    Ball,
    Shell,
}

impl GeoCommand {
    pub fn name(&self) -> &'static str {
        match self {
            GeoCommand::Norm { .. } => "norm",
            GeoCommand::Opnorm { .. } => "opnorm",
            GeoCommand::Omega { .. } => "omega",
            GeoCommand::Alpha { .. } => "alpha",
            GeoCommand::Gap { .. } => "gap",
            GeoCommand::Net { .. } => "net",
            GeoCommand::Amalgam { .. } => "amalgam",
            GeoCommand::Envelope { .. } => "envelope",
            GeoCommand::Approx { .. } => "approx",
            GeoCommand::Bound { .. } => "bound",
        }
    }
}

fn log_value(v: &normgeo::LogValue) -> Value {
    to_value(v)
}

pub fn geo(cmd: &GeoCommand, g: &Global) -> Result<Outcome, CliError> {
    match cmd {
        GeoCommand::Norm { space, x } => {
            let s = input::space(space, "space")?;
            let v = input::qvector(x, "x")?;
            if v.len() != s.dim() {
                return Err(CliError::Usage(format!("x: expected {} entries, got {}", s.dim(), v.len())));
            }
            Ok(Outcome::ok(json!({ "space": to_value(&s), "x": rational::vec_to_strings(&v) }), json!({ "norm": q(&s.norm(&v)) })))
        }
        GeoCommand::Opnorm { x, y, t } => {
            let (xs, ys) = (input::space(x, "x")?, input::space(y, "y")?);
            let tm = input::qmatrix(&input::source(Some(t), "t")?, "t")?;
            let norm = op_norm(&tm, &xs, &ys)?;
            let inv = inv_norm(&tm, &xs, &ys)?;
            let distortion = inv.as_ref().map(|i| q(&(&norm * i)));
            Ok(Outcome::ok(
                json!({ "x": to_value(&xs), "y": to_value(&ys), "t": qm(&tm) }),
                json!({ "norm": q(&norm), "inverse_norm": inv.as_ref().map(q), "distortion": distortion }),
            ))
        }
        GeoCommand::Omega { n, p } => {
            let (ns, ps) = (input::space(n, "n")?, input::space(p, "p")?);
            let w = omega(&ns, &ps)?;
            Ok(Outcome::ok(json!({ "n": to_value(&ns), "p": to_value(&ps) }), json!({ "omega": log_value(&w) })))
        }
        GeoCommand::Alpha { n, p, q: qq } => {
            let (ns, ps, qs) = (input::space(n, "n")?, input::space(p, "p")?, input::space(qq, "q")?);
            let a = alpha(&ns, &ps, &qs)?;
            let s = sandwich(&ns, &ps, &qs)?;
            Ok(Outcome::ok(
                json!({ "n": to_value(&ns), "p": to_value(&ps), "q": to_value(&qs) }),
                json!({ "alpha": q(&a), "sandwich": to_value(&s), "sandwich_holds": s.holds() }),
            ))
        }
        GeoCommand::Gap { z, v, w } => {
            let zs = input::space(z, "z")?;
            let vb = input::qmatrix(&input::source(Some(v), "v")?, "v")?;
            let wb = input::qmatrix(&input::source(Some(w), "w")?, "w")?;
            let gap = gap_metric(&vb, &wb, &zs)?;
            Ok(Outcome::ok(json!({ "z": to_value(&zs), "v": qm(&vb), "w": qm(&wb) }), json!({ "gap": q(&gap) })))
        }
        GeoCommand::Net { space, eps, mode, radius, start } => {
            let s = input::space(space, "space")?;
            let e = input::rational(eps, "eps")?;
            let net_mode = match mode {
                NetKind::Shell => NetMode::Shell,
                NetKind::Ball => NetMode::BallGreedy {
                    radius: input::rational(radius, "radius")?,
                    seed: match start {
                        Some(st) => input::qmatrix(&input::source(Some(st), "start")?, "start")?,
                        None => Vec::new(),
                    },
                },
            };
            let net = eps_net(&s, &e, &net_mode)?;
            let mut out = to_value(&net);
            out["size"] = json!(net.points.len());
            Ok(Outcome::ok(json!({ "space": to_value(&s), "eps": q(&e), "mode": net.mode }), out))
        }
        GeoCommand::Amalgam { x, y, t, d } => {
            let (xs, ys) = (input::space(x, "x")?, input::space(y, "y")?);
            let tm = input::qmatrix(&input::source(Some(t), "t")?, "t")?;
            let dm = match d {
                Some(d) => Some(input::qmatrix(&input::source(Some(d), "d")?, "d")?),
                None => None,
            };
            let am = amalgam(&xs, &ys, &tm, dm.as_ref())?;
            let check = am.check()?;
            Ok(Outcome::ok(
                json!({ "x": to_value(&xs), "y": to_value(&ys), "t": qm(&tm) }),
                json!({
                    "z": to_value(&am.z),
                    "i": to_value(&am.i),
                    "j": to_value(&am.j),
                    "d": qm(&am.d),
                    "t_norm": q(&am.t_norm),
                    "t_inverse_norm": q(&am.t_inv_norm),
                    "defect": q(&am.defect),
                    "bound": q(&am.bound),
                    "check": to_value(&check),
                    "passed": check.passed(),
                }),
            ))
        }
        GeoCommand::Envelope { space, t } => {
            let s = input::space(space, "space")?;
            let env = injective_envelope(&s)?;
            let factor = match t {
                Some(t) => {
                    let tm = input::qmatrix(&input::source(Some(t), "t")?, "t")?;
                    Some(to_value(&factor_through_envelope(&env, &tm)?))
                }
                None => None,
            };
            let isometric = if s.dim() <= VERTEX_DIM_CAP { Some(env.psi.is_isometry()?) } else { None };
            Ok(Outcome::ok(
                json!({ "space": to_value(&s) }),
                json!({ "d": env.d, "psi": to_value(&env.psi), "isometric": isometric, "factor": factor }),
            ))
        }
        GeoCommand::Approx { space, euclidean, matrix, eps } => {
            let e = input::rational(eps, "eps")?;
            let (inp, desc) = match (space, euclidean, matrix) {
                (Some(s), _, _) => {
                    let s = input::space(s, "space")?;
                    let v = to_value(&s);
                    (ApproxInput::Polyhedral(s), json!({ "space": v }))
                }
                (None, Some(k), _) => (ApproxInput::Euclidean(FloatNorm::euclidean(*k)), json!({ "euclidean": k })),
                (None, None, Some(m)) => {
                    let a = input::qmatrix(&input::source(Some(m), "matrix")?, "matrix")?;
                    let v = qm(&a);
                    (ApproxInput::Euclidean(FloatNorm::new(a)?), json!({ "matrix": v }))
                }
                _ => return Err(CliError::Usage("approx needs --space, --euclidean or --matrix".into())),
            };
            let ap = polyhedral_approx(&inp, &e)?;
            let mut params = desc;
            params["eps"] = q(&e);
            Ok(Outcome::ok(params, to_value(&ap)))
        }
        GeoCommand::Bound { x, y, restarts, steps } => {
            let (xs, ys) = (input::space(x, "x")?, input::space(y, "y")?);
            let effort = BmEffort { restarts: *restarts, steps: *steps, seed: g.seed };
            let r = bm_upper(&xs, &ys, &effort)?;
            Ok(Outcome::ok(json!({ "x": to_value(&xs), "y": to_value(&ys), "effort": to_value(&effort) }), to_value(&r)))
        }
    }
}

#[derive(Args, Debug)]
pub struct FreeArgs {
    /// Metric JSON or CSV distance matrix, `@file`, or `-`/absent for stdin.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    basepoint: Option<usize>,
    /// Coefficients of Σ a_x(δ_x − δ_p) over the non-basepoint points; omitted: every molecule.
    #[arg(long)]
    vector: Option<String>,
}

pub fn free(a: &FreeArgs) -> Result<Outcome, CliError> {
    let m = input::metric(&input::source(a.metric.as_deref(), "metric")?, a.basepoint, "metric")?;
    let params = json!({ "metric": to_value(&m) });
    if let Some(v) = &a.vector {
        let fv = FreeVector::new(&m, input::qvector(v, "vector")?)?;
        let n = metricfree::free_norm(&m, &fv)?;
        return Ok(Outcome::ok(
            params,
            json!({
                "norm": q(&n.value),
                "primal": q(&n.primal),
                "dual": q(&n.dual),
                "witness": rational::vec_to_strings(&n.witness),
                "lipschitz": q(&metricfree::lipschitz_norm(&m, &n.witness)?),
            }),
        ));
    }
    let mut pairs = Vec::new();
    let mut all_exact = true;
    for x in 0..m.len() {
        for y in x + 1..m.len() {
            let mol = FreeVector::new(&m, m.molecule(x, y))?;
            let n = metricfree::free_norm(&m, &mol)?;
            let exact = &n.value == m.dist(x, y);
            all_exact &= exact;
            pairs.push(json!({ "x": x, "y": y, "norm": q(&n.value), "distance": q(m.dist(x, y)), "exact": exact }));
        }
    }
    let space = if m.len() - 1 <= VERTEX_DIM_CAP {
        let fs = metricfree::free_space(&m)?;
        Some(json!({ "space": to_value(&fs.space), "extreme_pairs": fs.extreme_pairs }))
    } else {
        None
    };
    Ok(Outcome::ok(params, json!({ "dim": m.len() - 1, "pairs": pairs, "all_exact": all_exact, "free_space": space })))
}

#[derive(Subcommand, Debug)]
pub enum BoundCommand {
    /// n_∞(d, m, r, ε) as a Graham-Rothschild number.
    NInfty(GrArgs),
    /// n_pol(d, m, r, ε), equal to n_∞.
    NPol(GrArgs),
    /// Bound on dim H for given dim F, dim G.
    DimH {
        #[arg(long)]
        dim_f: u64,
        #[arg(long)]
        dim_g: u64,
        #[arg(long, default_value_t = 2)]
        r: u64,
        #[arg(long)]
        eps: String,
        /// Value to use for n; the n_pol parameters are reported either way.
        #[arg(long)]
        n: Option<String>,
    },
}

impl BoundCommand {
    pub fn name(&self) -> &'static str {
        match self {
            BoundCommand::NInfty(_) => "n-infty",
            BoundCommand::NPol(_) => "n-pol",
            BoundCommand::DimH { .. } => "dim-h",
        }
    }
}

#[derive(Args, Debug)]
pub struct GrArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    m: String,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    eps: String,
}

fn big(s: &str, what: &str) -> Result<BigUint, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("{what}: bad nonnegative integer {s:?}")))
}

pub fn bound(cmd: &BoundCommand) -> Result<Outcome, CliError> {
    match cmd {
        BoundCommand::NInfty(a) | BoundCommand::NPol(a) => {
            let m = big(&a.m, "m")?;
            let e = input::rational(&a.eps, "eps")?;
            let b = match cmd {
                BoundCommand::NPol(_) => normgeo::bound_n_pol(a.d, &m, a.r, &e)?,
                _ => normgeo::bound_n_infty(a.d, &m, a.r, &e)?,
            };
            let mut out = to_value(&b);
            out["expression"] = json!(b.to_string());
            Ok(Outcome::ok(json!({ "d": a.d, "m": m.to_string(), "r": a.r, "eps": q(&e) }), out))
        }
        BoundCommand::DimH { dim_f, dim_g, r, eps, n } => {
            let e = input::rational(eps, "eps")?;
            let params = normgeo::dim_h_parameters(*dim_f, *dim_g, *r, &e)?;
            let mut out = json!({ "parameters": to_value(&params), "n_bound": params.n.to_string() });
            if let Some(n) = n {
                out["bound"] = to_value(&normgeo::bound_dim_h(*dim_f, *dim_g, &e, &big(n, "n")?)?);
            }
            Ok(Outcome::ok(json!({ "dim_f": dim_f, "dim_g": dim_g, "r": r, "eps": q(&e), "n": n }), out))
        }
    }
}

#[derive(Args, Debug)]
pub struct EmbArgs {
    /// Source metric M (JSON, CSV or `@file`).
    #[arg(long)]
    m: String,
    /// Target metric N.
    #[arg(long)]
    n: String,
    /// Embedding to extend; defaults to the first one found.
    #[arg(long)]
    sigma: Option<String>,
}

pub fn emb(a: &EmbArgs) -> Result<Outcome, CliError> {
    let m: FiniteMetricSpace = input::metric(&input::source(Some(&a.m), "m")?, None, "m")?;
    let n: FiniteMetricSpace = input::metric(&input::source(Some(&a.n), "n")?, None, "n")?;
    let all = metricfree::enumerate_emb(&m, &n)?;
    let sigma = match &a.sigma {
        Some(s) => Some(input::usize_list(s, "sigma")?),
        None => all.first().cloned(),
    };
    let extension = match &sigma {
        Some(s) => {
            let ext = metricfree::extend_embedding(&m, &n, s)?;
            let isometric = if m.len() <= VERTEX_DIM_CAP { Some(ext.map.is_isometry()?) } else { None };
            Some(json!({
                "sigma": s,
                "c": q(&ext.c),
                "m_inf": to_value(&ext.m_inf),
                "n_inf": to_value(&ext.n_inf),
                "map": to_value(&ext.map),
                "isometric": isometric,
            }))
        }
        None => None,
    };
    Ok(Outcome::ok(
        json!({ "m": to_value(&m), "n": to_value(&n) }),
        json!({ "count": all.len(), "embeddings": all, "extension": extension }),
    ))
}
