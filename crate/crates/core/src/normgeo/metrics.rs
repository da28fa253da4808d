use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::space::{inv_norm, op_norm, PolyhedralSpace};
use super::GeoError;
use crate::linalg::{self, QMatrix};
use crate::lp::{LinearProgram, LpOutcome};
use crate::polytope;
use crate::rational::{self, cmp_exp, int, ratio, Rational};

/// `log(arg)`; the rational argument is the exact datum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogValue {
    #[serde(serialize_with = "ser_rational")]
    pub arg: Rational,
    pub value: f64,
}

impl LogValue {
    pub fn of(arg: Rational) -> Self {
        let value = rational::ln_f64(&arg);
        LogValue { arg, value }
    }

    pub fn is_zero(&self) -> bool {
        self.arg.is_one()
    }
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(q))
}

fn same_dim(a: &PolyhedralSpace, b: &PolyhedralSpace) -> Result<(), GeoError> {
    if a.dim() != b.dim() {
        return Err(GeoError::Dimension(format!("dims {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// `‖Id‖_{N,P} = max_{v ∈ vert Ball(N)} P(v)`.
fn id_norm(n: &PolyhedralSpace, p: &PolyhedralSpace) -> Result<Rational, GeoError> {
    Ok(n.vertices()?.iter().map(|v| p.norm(v)).max().unwrap_or_else(Rational::zero))
}

/// `ω(N,P) = log max{‖Id‖_{N,P}, ‖Id‖_{P,N}}`.
pub fn omega(n: &PolyhedralSpace, p: &PolyhedralSpace) -> Result<LogValue, GeoError> {
    same_dim(n, p)?;
    let a = id_norm(n, p)?;
    let b = id_norm(p, n)?;
    Ok(LogValue::of(a.max(b)))
}

/// `min_{b ∈ conv(pts)} max_f |f(a − b)|` by LP.
fn dist_to_hull(a: &[Rational], pts: &[Vec<Rational>], norm: &QMatrix) -> Rational {
    let m = pts.len();
    let mut obj = vec![Rational::zero(); m + 1];
    obj[m] = Rational::one();
    let mut lp = LinearProgram::minimize(obj);
    for f in norm {
        let fa = linalg::dot(f, a);
        let mut row: Vec<Rational> = pts.iter().map(|q| -linalg::dot(f, q)).collect();
        row.push(-Rational::one());
        // f·a − Σ λ f·q − t <= 0
        lp.le(row.clone(), -fa.clone());
        let mut neg: Vec<Rational> = row[..m].iter().map(|x| -x).collect();
        neg.push(-Rational::one());
        lp.le(neg, fa);
    }
    let mut sum = vec![Rational::one(); m];
    sum.push(Rational::zero());
    lp.eq(sum, Rational::one());
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("distance LP is feasible and bounded: {other:?}"),
    }
}

/// Hausdorff distance between `conv(a)` and `conv(b)` in the norm `max_f |f(·)|`.
///
/// `x ↦ d(x, conv b)` is convex, so the supremum is attained on `a`'s points.
pub(crate) fn hausdorff(a: &[Vec<Rational>], b: &[Vec<Rational>], norm: &QMatrix) -> Rational {
    let one = a.iter().map(|x| dist_to_hull(x, b, norm)).max().unwrap_or_else(Rational::zero);
    let two = b.iter().map(|x| dist_to_hull(x, a, norm)).max().unwrap_or_else(Rational::zero);
    one.max(two)
}

/// `α_N(P,Q)`: Hausdorff distance between `Ball(P*)` and `Ball(Q*)` measured in `N*`.
pub fn alpha(n: &PolyhedralSpace, p: &PolyhedralSpace, q: &PolyhedralSpace) -> Result<Rational, GeoError> {
    same_dim(n, p)?;
    same_dim(n, q)?;
    let bp = p.dual_vertices()?;
    let bq = q.dual_vertices()?;
    Ok(hausdorff(&bp, &bq, n.vertices()?))
}

/// Vertices of `Ball(Z) ∩ span(basis)` as points of `Z`.
fn section_vertices(basis: &QMatrix, z: &PolyhedralSpace) -> Result<QMatrix, GeoError> {
    if basis.is_empty() {
        return Err(GeoError::Domain("empty subspace basis".into()));
    }
    if basis.iter().any(|b| b.len() != z.dim()) {
        return Err(GeoError::Dimension("basis vectors must live in Z".into()));
    }
    if linalg::rank(basis) < basis.len() {
        return Err(GeoError::Domain("basis vectors are linearly dependent".into()));
    }
    // coordinates c, point Σ c_i b_i
    let pulled: QMatrix = z.functionals().iter().map(|f| basis.iter().map(|b| linalg::dot(f, b)).collect()).collect();
    let coords = polytope::polar_vertices(&pulled)?;
    Ok(coords
        .iter()
        .map(|c| {
            let mut x = vec![Rational::zero(); z.dim()];
            for (ci, b) in c.iter().zip(basis) {
                x = linalg::vadd(&x, &linalg::vscale(b, ci));
            }
            x
        })
        .collect())
}

/// `Λ_Z(V,W)`: Hausdorff distance in `Z` between the unit balls of `V` and `W`.
pub fn gap_metric(v_basis: &QMatrix, w_basis: &QMatrix, z: &PolyhedralSpace) -> Result<Rational, GeoError> {
    let a = section_vertices(v_basis, z)?;
    let b = section_vertices(w_basis, z)?;
    Ok(hausdorff(&a, &b, z.functionals()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    /// `λ = exp(max(ω(N,P), ω(N,Q)))`.
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
    pub omega: LogValue,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// Exact check of `λ⁻¹ ω(P,Q) <= α_N(P,Q) <= λ ω(P,Q)` with the tightest `λ`.
pub fn sandwich(n: &PolyhedralSpace, p: &PolyhedralSpace, q: &PolyhedralSpace) -> Result<SandwichReport, GeoError> {
    let lambda = omega(n, p)?.arg.max(omega(n, q)?.arg);
    let w = omega(p, q)?;
    let a = alpha(n, p, q)?;
    // ω <= λα  ⟺  w <= e^{λα};   α/λ <= ω  ⟺  e^{α/λ} <= w
    let lower_holds = cmp_exp(&w.arg, &(&lambda * &a)) != Ordering::Greater;
    let upper_holds = cmp_exp(&w.arg, &(&a / &lambda)) != Ordering::Less;
    Ok(SandwichReport { lambda, omega: w, alpha: a, lower_holds, upper_holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct BmEffort {
    pub restarts: usize,
    pub steps: usize,
    pub seed: u64,
}

impl Default for BmEffort {
    fn default() -> Self {
        BmEffort { restarts: 4, steps: 200, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BmReport {
    pub value: LogValue,
    #[serde(serialize_with = "ser_matrix")]
    pub map: QMatrix,
    pub source: String,
    pub candidates: usize,
}

fn ser_matrix<S: serde::Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
    rational::mat_to_strings(m).serialize(s)
}

const MAX_MATCH_CANDIDATES: usize = 20_000;

/// `‖Δ‖‖Δ⁻¹‖`, or `None` for a singular `Δ`.
fn distortion(d: &QMatrix, x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<Option<Rational>, GeoError> {
    match inv_norm(d, x, y)? {
        None => Ok(None),
        Some(inv) => Ok(Some(op_norm(d, x, y)? * inv)),
    }
}

/// First `k` linearly independent rows of `pts`.
fn independent_prefix(pts: &QMatrix, k: usize) -> QMatrix {
    let mut out: QMatrix = Vec::new();
    for p in pts {
        let mut trial = out.clone();
        trial.push(p.clone());
        if linalg::rank(&trial) == trial.len() {
            out = trial;
            if out.len() == k {
                break;
            }
        }
    }
    out
}

/// Upper bound on `d_BM(X,Y)` from canonical candidates and a seeded local search.
///
/// Candidates: the identity, then every `V_Y V_X⁻¹` sending a fixed basis of
/// vertices of `Ball(X)` to an ordered tuple of vertices of `Ball(Y)`. The best
/// of these seeds a hill-climb over dyadic entry perturbations.
pub fn bm_upper(x: &PolyhedralSpace, y: &PolyhedralSpace, effort: &BmEffort) -> Result<BmReport, GeoError> {
    same_dim(x, y)?;
    let k = x.dim();
    let mut best_map = linalg::identity(k);
    let mut best = distortion(&best_map, x, y)?.expect("identity is invertible");
    let mut source = "identity".to_string();
    let mut evaluated = 1usize;

    let xb = independent_prefix(x.vertices()?, k);
    let vx_inv = linalg::inverse(&linalg::transpose(&xb)).expect("independent vertices");
    let yv = y.vertices()?;
    let mut idx = vec![0usize; k];
    'outer: loop {
        if evaluated >= MAX_MATCH_CANDIDATES {
            break;
        }
        let cols: QMatrix = idx.iter().map(|&i| yv[i].clone()).collect();
        if linalg::rank(&cols) == k {
            let d = linalg::mul(&linalg::transpose(&cols), &vx_inv);
            evaluated += 1;
            if let Some(v) = distortion(&d, x, y)? {
                if v < best {
                    best = v;
                    best_map = d;
                    source = "vertex-match".into();
                }
            }
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < yv.len() {
                break;
            }
            idx[pos] = 0;
        }
    }

    if !best.is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(effort.seed);
        let start = best_map.clone();
        for restart in 0..effort.restarts {
            let mut cur = start.clone();
            let mut cur_v = best.clone();
            let mut step = ratio(1, 4 << restart.min(8));
            for _ in 0..effort.steps {
                let i = rng.random_range(0..k);
                let j = rng.random_range(0..k);
                let sign = if rng.random_bool(0.5) { int(1) } else { int(-1) };
                let mut cand = cur.clone();
                cand[i][j] = &cand[i][j] + &step * sign;
                evaluated += 1;
                match distortion(&cand, x, y)? {
                    Some(v) if v < cur_v => {
                        cur = cand;
                        cur_v = v;
                    }
                    _ => {
                        if rng.random_range(0..8) == 0 {
                            step /= int(2);
                        }
                    }
                }
                if cur_v.is_one() {
                    break;
                }
            }
            if cur_v < best {
                best = cur_v;
                best_map = cur;
                source = "local-search".into();
            }
            if best.is_one() {
                break;
            }
        }
    }
    debug_assert!(!best.is_negative());
    Ok(BmReport { value: LogValue::of(best), map: best_map, source, candidates: evaluated })
}
