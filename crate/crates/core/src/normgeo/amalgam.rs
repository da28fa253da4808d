use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::metrics::{gap_metric, ser_rational};
use super::nets::{greedy_in_ball, NET_DIM_CAP};
use super::space::{inv_norm, op_norm, NormedMap, PolyhedralSpace, SpaceKind, VERTEX_DIM_CAP};
use super::GeoError;
use crate::linalg::{self, QMatrix};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{self, Rational};

/// `Z` with isometric embeddings `I: X → Z`, `J: Y → Z`.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub z: PolyhedralSpace,
    pub i: NormedMap,
    pub j: NormedMap,
    pub t: QMatrix,
    pub t_norm: Rational,
    pub t_inv_norm: Rational,
    /// The functional set `D` on `Y` actually used.
    pub d: QMatrix,
    /// `‖I − J∘T‖`.
    pub defect: Rational,
    /// `‖T‖·‖T⁻¹‖ − 1`.
    pub bound: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmalgamCheck {
    pub dim_x: usize,
    pub dim_y: usize,
    pub dim_z: usize,
    pub dim_ok: bool,
    pub i_isometric: Option<bool>,
    pub j_isometric: Option<bool>,
    #[serde(serialize_with = "ser_rational")]
    pub defect: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub defect_ok: bool,
    /// `Λ_Z(I(X), J(Y))` against `‖T⁻¹‖ − 1`, when `dim X = dim Y` and `‖T‖ = 1`.
    pub gap: Option<(String, String, bool)>,
}

impl AmalgamCheck {
    pub fn passed(&self) -> bool {
        self.dim_ok
            && self.i_isometric != Some(false)
            && self.j_isometric != Some(false)
            && self.defect_ok
            && self.gap.as_ref().is_none_or(|g| g.2)
    }
}

/// One representative of each `±` pair: the one whose first nonzero entry is positive.
pub(crate) fn half(rows: &QMatrix) -> QMatrix {
    rows.iter().filter(|r| r.iter().find(|a| !a.is_zero()).is_some_and(|a| a.is_positive())).cloned().collect()
}

/// `g ∈ Y*` of least dual norm with `g∘T = target`.
///
/// The dual ball of `Y` is the hull of its functional list, so this is
/// `min Σμ` over `μ >= 0` with `(Σ μ_i h_i)∘T = target`.
fn min_norm_preimage(y: &PolyhedralSpace, t: &QMatrix, target: &[Rational]) -> Result<Vec<Rational>, GeoError> {
    let h = y.functionals();
    let pulled: QMatrix = h.iter().map(|hi| linalg::mul_vec(&linalg::transpose(t), hi)).collect();
    let mut lp = LinearProgram::minimize(vec![Rational::one(); h.len()]);
    for (c, tc) in target.iter().enumerate() {
        lp.eq(pulled.iter().map(|p| p[c].clone()).collect(), tc.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let mut g = vec![Rational::zero(); y.dim()];
            for (mu, hi) in x.iter().zip(h) {
                if !mu.is_zero() {
                    g = linalg::vadd(&g, &linalg::vscale(hi, mu));
                }
            }
            Ok(g)
        }
        _ => Err(GeoError::Rank("functional has no preimage under T*".into())),
    }
}

/// Default `D`: for each extreme `f` of `Ball(X*)` (one per sign), the
/// least-norm `g` with `T*g = f / ‖T⁻¹‖`.
fn default_d(x: &PolyhedralSpace, y: &PolyhedralSpace, t: &QMatrix, t_inv: &Rational) -> Result<QMatrix, GeoError> {
    half(&x.dual_vertices()?)
        .iter()
        .map(|f| min_norm_preimage(y, t, &linalg::vscale(f, &t_inv.recip())))
        .collect()
}

/// Rows of the seminorm `Q` on `X ⊕ Y`.
fn q_rows(x: &PolyhedralSpace, y: &PolyhedralSpace, t: &QMatrix, t_norm: &Rational, d: &QMatrix) -> Result<QMatrix, GeoError> {
    let tt = linalg::transpose(t);
    let mut rows = Vec::new();
    for h in y.functionals() {
        // (h·T/‖T‖, h)
        let left = linalg::vscale(&linalg::mul_vec(&tt, h), &t_norm.recip());
        rows.push([left, h.clone()].concat());
    }
    for g in d {
        let gt = linalg::mul_vec(&tt, g);
        let n = x.dual_norm(&gt)?;
        if n.is_zero() {
            return Err(GeoError::Domain("a functional in D vanishes on T(X)".into()));
        }
        rows.push([linalg::vscale(&gt, &n.recip()), linalg::vscale(g, &t_norm.recip())].concat());
    }
    Ok(rows)
}

/// Amalgamation of `X` and `Y` along an injective `T` (`dim Y × dim X`).
///
/// `Z` is `X ⊕ Y` modulo the kernel of
/// `Q(x,y) = max{‖Tx/‖T‖ + y‖_Y, max_{g∈D} |g(y)/‖T‖ + (T*g)(x)/‖T*g‖|}`,
/// coordinatised by a maximal independent set of its functionals.
pub fn amalgam(x: &PolyhedralSpace, y: &PolyhedralSpace, t: &QMatrix, d: Option<&QMatrix>) -> Result<Amalgam, GeoError> {
    let (a, b) = (x.dim(), y.dim());
    if t.len() != b || t.iter().any(|r| r.len() != a) {
        return Err(GeoError::Dimension(format!("T must be {b}x{a}")));
    }
    let t_inv = inv_norm(t, x, y)?.ok_or_else(|| GeoError::Rank("T is not injective".into()))?;
    let t_norm = op_norm(t, x, y)?;
    if t_norm < Rational::one() || t_inv < Rational::one() {
        return Err(GeoError::Domain(format!(
            "need 1 <= ‖T‖, ‖T⁻¹‖; got {} and {} (scale T by c in [{}, {}])",
            rational::format(&t_norm),
            rational::format(&t_inv),
            rational::format(&t_norm.recip()),
            rational::format(&t_inv)
        )));
    }
    let user_supplied = d.is_some();
    let d = match d {
        Some(d) => {
            if d.is_empty() {
                return Err(GeoError::Domain("D is empty".into()));
            }
            if d.iter().any(|g| g.len() != b) {
                return Err(GeoError::Dimension("functionals in D must act on Y".into()));
            }
            d.clone()
        }
        None => default_d(x, y, t, &t_inv)?,
    };
    let rows = q_rows(x, y, t, &t_norm, &d)?;
    let (red, pivots) = linalg::rref(&linalg::transpose(&rows));
    let coords: QMatrix = (0..rows.len()).map(|r| (0..pivots.len()).map(|p| red[p][r].clone()).collect()).collect();
    let phi: QMatrix = pivots.iter().map(|&p| rows[p].clone()).collect();
    let kind = SpaceKind::Amalgam;
    let z = PolyhedralSpace::from_functionals(coords, kind)?;
    let i_mat: QMatrix = phi.iter().map(|r| r[..a].to_vec()).collect();
    let j_mat: QMatrix = phi.iter().map(|r| r[a..].to_vec()).collect();
    let jt = linalg::mul(&j_mat, t);
    let defect = op_norm(&linalg::sub(&i_mat, &jt), x, &z)?;
    let bound = &t_norm * &t_inv - Rational::one();
    let i = NormedMap::new(i_mat, x.clone(), z.clone())?;
    let j = NormedMap::new(j_mat, y.clone(), z.clone())?;
    if user_supplied && vertex_check(&i, &j).is_some_and(|ok| !ok) {
        return Err(GeoError::Domain("D does not make both embeddings isometric".into()));
    }
    Ok(Amalgam { z, i, j, t: t.clone(), t_norm, t_inv_norm: t_inv, d, defect, bound })
}

/// Norm one on every ball vertex of both summands.
fn vertex_check(i: &NormedMap, j: &NormedMap) -> Option<bool> {
    let i_ok = i.domain().vertices().ok()?.iter().all(|v| i.codomain().norm(&i.apply(v)).is_one());
    let j_ok = j.domain().vertices().ok()?.iter().all(|v| j.codomain().norm(&j.apply(v)).is_one());
    Some(i_ok && j_ok)
}

impl Amalgam {
    pub fn check(&self) -> Result<AmalgamCheck, GeoError> {
        let (dx, dy, dz) = (self.i.domain().dim(), self.j.domain().dim(), self.z.dim());
        let i_isometric = if dx <= VERTEX_DIM_CAP { Some(self.i.is_isometry()?) } else { None };
        let j_isometric = if dy <= VERTEX_DIM_CAP { Some(self.j.is_isometry()?) } else { None };
        let gap = if dx == dy && self.t_norm.is_one() && dz <= VERTEX_DIM_CAP {
            let v = linalg::transpose(self.i.matrix());
            let w = linalg::transpose(self.j.matrix());
            let g = gap_metric(&v, &w, &self.z)?;
            let limit = &self.t_inv_norm - Rational::one();
            let ok = g <= limit;
            Some((rational::format(&g), rational::format(&limit), ok))
        } else {
            None
        };
        Ok(AmalgamCheck {
            dim_x: dx,
            dim_y: dy,
            dim_z: dz,
            dim_ok: dz <= dx * dy,
            i_isometric,
            j_isometric,
            defect: self.defect.clone(),
            bound: self.bound.clone(),
            defect_ok: self.defect <= self.bound,
            gap,
        })
    }
}

/// One corrected net element: `‖J∘γ − I_γ‖` with `I_γ` isometric.
#[derive(Clone, Debug, Serialize)]
pub struct CorrectingStep {
    pub source: usize,
    #[serde(serialize_with = "ser_matrix")]
    pub gamma: QMatrix,
    #[serde(serialize_with = "ser_matrix")]
    pub i_gamma: QMatrix,
    #[serde(serialize_with = "ser_rational")]
    pub defect: Rational,
    pub ok: bool,
}

fn ser_matrix<S: serde::Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational::mat_to_strings(m), s)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrectingPair {
    pub y: PolyhedralSpace,
    #[serde(serialize_with = "ser_matrix")]
    pub j: QMatrix,
    pub steps: Vec<CorrectingStep>,
    pub net_sizes: Vec<usize>,
    /// `(∏ dim X_i^{|N_i|}) · dim X_n` for the nets actually used.
    pub dim_bound: String,
    pub dim_ok: bool,
}

/// `Hom(X, Y)` normed by the operator norm, entries flattened row-major.
fn operator_space(x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<PolyhedralSpace, GeoError> {
    let mut f = Vec::new();
    for h in y.functionals() {
        for v in x.vertices()? {
            f.push(h.iter().flat_map(|hr| v.iter().map(move |vc| hr * vc)).collect::<Vec<_>>());
        }
    }
    PolyhedralSpace::from_functionals(f, SpaceKind::Custom)
}

fn unflatten(p: &[Rational], cols: usize) -> QMatrix {
    p.chunks(cols).map(|c| c.to_vec()).collect()
}

/// Greedy `(τ−θ)`-net of the grid points of `Eemb_θ(X, Y)`.
fn eemb_net(x: &PolyhedralSpace, y: &PolyhedralSpace, theta: &Rational, tau: &Rational) -> Result<Vec<QMatrix>, GeoError> {
    let l = operator_space(x, y)?;
    if l.dim() > NET_DIM_CAP {
        return Err(GeoError::Budget(format!("operator space of dimension {} exceeds {NET_DIM_CAP}", l.dim())));
    }
    let in_eemb = |p: &Vec<Rational>| -> bool {
        let t = unflatten(p, x.dim());
        let Ok(Some(inv)) = inv_norm(&t, x, y) else { return false };
        let Ok(n) = op_norm(&t, x, y) else { return false };
        n >= Rational::one() && inv >= Rational::one() && &(n * inv) <= theta
    };
    let pts = greedy_in_ball(&l, &(tau - theta), theta, &in_eemb)?;
    Ok(pts.iter().map(|p| unflatten(p, x.dim())).collect())
}

/// Iterated amalgams along `net` (maps `X → Y`); returns `Θ: Y → Y'` and `I_T` per element.
fn absorb(x: &PolyhedralSpace, y: &PolyhedralSpace, net: &[QMatrix], max_dim: usize) -> Result<(PolyhedralSpace, QMatrix, Vec<QMatrix>), GeoError> {
    let mut cur = y.clone();
    let mut theta = linalg::identity(y.dim());
    let mut corrections: Vec<QMatrix> = Vec::new();
    for (n, t) in net.iter().enumerate() {
        let mapped = linalg::mul(&theta, t);
        let am = amalgam(x, &cur, &mapped, None)?;
        if am.z.dim() > max_dim {
            return Err(GeoError::Budget(format!(
                "amalgam {} of {} reached dimension {} > {max_dim}",
                n + 1,
                net.len(),
                am.z.dim()
            )));
        }
        let jm = am.j.matrix().clone();
        corrections = corrections.iter().map(|c| linalg::mul(&jm, c)).collect();
        corrections.push(am.i.matrix().clone());
        theta = linalg::mul(&jm, &theta);
        cur = if am.z.dim() <= VERTEX_DIM_CAP { am.z.reduced()? } else { am.z.clone() };
    }
    Ok((cur, theta, corrections))
}

/// A `(θ,τ)`-correcting pair for `spaces = (X_0, …, X_n)`, `n >= 1`.
pub fn correcting_pair(spaces: &[PolyhedralSpace], theta: &Rational, tau: &Rational, max_dim: usize) -> Result<CorrectingPair, GeoError> {
    if spaces.len() < 2 {
        return Err(GeoError::Domain("need at least two spaces".into()));
    }
    if !(theta > &Rational::one() && tau > theta) {
        return Err(GeoError::Domain("need 1 < theta < tau".into()));
    }
    let last = spaces.last().expect("nonempty");
    let mut y = last.clone();
    let mut j = linalg::identity(last.dim());
    // (source, γ, I_γ) with I_γ landing in the current y
    let mut log: Vec<(usize, QMatrix, QMatrix)> = Vec::new();
    let mut net_sizes = vec![0; spaces.len() - 1];
    let mut bound = BigUint::from(last.dim());
    for i in (0..spaces.len() - 1).rev() {
        let net = eemb_net(&spaces[i], last, theta, tau)?;
        net_sizes[i] = net.len();
        bound *= BigUint::from(spaces[i].dim()).pow(net.len() as u32);
        let mapped: Vec<QMatrix> = net.iter().map(|g| linalg::mul(&j, g)).collect();
        let (y2, theta_map, corr) = absorb(&spaces[i], &y, &mapped, max_dim)?;
        for entry in log.iter_mut() {
            entry.2 = linalg::mul(&theta_map, &entry.2);
        }
        log.extend(net.into_iter().zip(corr).map(|(g, c)| (i, g, c)));
        j = linalg::mul(&theta_map, &j);
        y = y2;
    }
    let limit = tau - Rational::one();
    let steps = log
        .into_iter()
        .map(|(source, gamma, i_gamma)| {
            let diff = linalg::sub(&linalg::mul(&j, &gamma), &i_gamma);
            let defect = op_norm(&diff, &spaces[source], &y)?;
            let ok = defect < limit;
            Ok(CorrectingStep { source, gamma, i_gamma, defect, ok })
        })
        .collect::<Result<Vec<_>, GeoError>>()?;
    let dim_ok = BigUint::from(y.dim()) <= bound;
    Ok(CorrectingPair { y, j, steps, net_sizes, dim_bound: bound.to_string(), dim_ok })
}
