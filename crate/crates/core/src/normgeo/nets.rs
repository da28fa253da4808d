use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::metrics::ser_rational;
use super::space::PolyhedralSpace;
use super::GeoError;
use crate::linalg::{self, QMatrix};
use crate::rational::{self, int, ratio, Rational};

/// Largest dimension handled by the exact net builders.
pub const NET_DIM_CAP: usize = 4;
const MAX_CANDIDATES: usize = 200_000;

#[derive(Clone, Debug)]
pub enum NetMode {
    /// Maximal `eps`-separated subset of `radius·Ball(X)` extending `seed`.
    BallGreedy { radius: Rational, seed: QMatrix },
    /// Nets on the spheres `(i/L)·Sph(X)` plus the origin.
    Shell,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsNet {
    pub mode: &'static str,
    #[serde(serialize_with = "ser_rational")]
    pub eps: Rational,
    #[serde(serialize_with = "ser_matrix")]
    pub points: QMatrix,
    /// Volumetric cardinality bound for the mode.
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub within_bound: bool,
    /// Every point of the ball is strictly closer than this to the net.
    #[serde(serialize_with = "ser_rational")]
    pub certified_radius: Rational,
}

fn ser_matrix<S: serde::Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational::mat_to_strings(m), s)
}

fn pow(base: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * base)
}

pub fn eps_net(x: &PolyhedralSpace, eps: &Rational, mode: &NetMode) -> Result<EpsNet, GeoError> {
    if !eps.is_positive() {
        return Err(GeoError::Domain("eps must be positive".into()));
    }
    if x.dim() > NET_DIM_CAP {
        return Err(GeoError::Budget(format!("nets are built up to dimension {NET_DIM_CAP}")));
    }
    match mode {
        NetMode::BallGreedy { radius, seed } => ball_greedy(x, eps, radius, seed),
        NetMode::Shell => {
            if eps > &Rational::one() {
                return Err(GeoError::Domain("shell nets need eps <= 1".into()));
            }
            shell(x, eps)
        }
    }
}

/// Greedy pass: keep `c` when it is at distance `>= sep` from everything kept.
fn greedy(x: &PolyhedralSpace, kept: &mut QMatrix, candidates: impl Iterator<Item = Vec<Rational>>, sep: &Rational) {
    for c in candidates {
        if kept.iter().all(|p| &x.norm(&linalg::vsub(p, &c)) >= sep) {
            kept.push(c);
        }
    }
}

fn max_l1(functionals: &QMatrix) -> Rational {
    functionals.iter().map(|f| f.iter().map(|a| a.abs()).sum::<Rational>()).max().unwrap_or_else(Rational::zero)
}

/// Integer multiples `m·h` with `|m·h| <= bound`, increasing.
fn axis(bound: &Rational, h: &Rational) -> Vec<Rational> {
    let m = (bound / h).floor().to_integer().to_i64().unwrap_or(0);
    (-m..=m).map(|i| int(i) * h).collect()
}

fn product(axes: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for a in axes {
        out = out.into_iter().flat_map(|p| a.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect();
    }
    out
}

/// Grid points of `r·Ball(X)` in lex order, with the grid's covering radius `μ`.
fn ball_grid(x: &PolyhedralSpace, eps: &Rational, r: &Rational) -> Result<(QMatrix, Rational), GeoError> {
    let k = x.dim();
    let reach: Vec<Rational> = (0..k)
        .map(|i| x.vertices().map(|vs| vs.iter().map(|v| v[i].abs()).max().unwrap_or_else(Rational::zero)))
        .collect::<Result<_, _>>()?;
    let l1 = max_l1(x.functionals());
    // covering radius μ = h·l1/2
    let mut h = eps / (int(4) * &l1);
    let count = |h: &Rational| {
        reach.iter().map(|c| 2 * (r * c / h).floor().to_integer().to_usize().unwrap_or(usize::MAX / 4) + 1).product::<usize>()
    };
    while count(&h) > MAX_CANDIDATES {
        h *= int(2);
    }
    let mu = &h * &l1 / int(2);
    let axes: Vec<Vec<Rational>> = reach.iter().map(|c| axis(&(r * c), &h)).collect();
    Ok((product(&axes).into_iter().filter(|p| &x.norm(p) <= r).collect(), mu))
}

/// Greedy `eps`-separated subset of the grid points of `r·Ball(X)` accepted by `keep`.
pub(crate) fn greedy_in_ball(
    x: &PolyhedralSpace,
    eps: &Rational,
    r: &Rational,
    keep: &dyn Fn(&Vec<Rational>) -> bool,
) -> Result<QMatrix, GeoError> {
    let (cands, _) = ball_grid(x, eps, r)?;
    let mut kept = Vec::new();
    greedy(x, &mut kept, cands.into_iter().filter(|p| keep(p)), eps);
    Ok(kept)
}

fn ball_greedy(x: &PolyhedralSpace, eps: &Rational, r: &Rational, seed: &QMatrix) -> Result<EpsNet, GeoError> {
    if !r.is_positive() {
        return Err(GeoError::Domain("radius must be positive".into()));
    }
    for (i, s) in seed.iter().enumerate() {
        if s.len() != x.dim() {
            return Err(GeoError::Dimension("seed point of wrong width".into()));
        }
        if &x.norm(s) > r {
            return Err(GeoError::Domain(format!("seed point {i} lies outside the ball")));
        }
        if seed[..i].iter().any(|t| &x.norm(&linalg::vsub(s, t)) < eps) {
            return Err(GeoError::Domain("seed is not eps-separated".into()));
        }
    }
    let (cands, mu) = ball_grid(x, eps, r)?;
    let mut kept = seed.clone();
    greedy(x, &mut kept, cands.into_iter(), eps);
    let k = x.dim();
    let bound = pow(&(Rational::one() + int(2) * r / eps), k);
    let within_bound = Rational::from_integer(kept.len().into()) <= bound;
    let certified_radius = if &mu <= r { eps + int(2) * &mu } else { eps + int(2) * r };
    Ok(EpsNet { mode: "ball-greedy", eps: eps.clone(), points: kept, bound, within_bound, certified_radius })
}

/// `floor(t / eps) + 1` pieces, each strictly shorter than `eps`.
fn pieces(t: &Rational, eps: &Rational) -> usize {
    (t / eps).floor().to_integer().to_usize().unwrap_or(0) + 1
}

/// Boundary of the unit ball sorted by angle (dimension 2).
fn polygon(x: &PolyhedralSpace) -> Result<QMatrix, GeoError> {
    let mut v = x.vertices()?.clone();
    v.sort_by(|a, b| {
        let ta = rational::to_f64(&a[1]).atan2(rational::to_f64(&a[0]));
        let tb = rational::to_f64(&b[1]).atan2(rational::to_f64(&b[0]));
        ta.total_cmp(&tb)
    });
    Ok(v)
}

fn shell(x: &PolyhedralSpace, eps: &Rational) -> Result<EpsNet, GeoError> {
    let k = x.dim();
    let two = int(2);
    // radial step 1/L <= eps/2; each sphere net is eps/2-dense on its sphere
    let levels = (two.clone() / eps).ceil().to_integer().to_usize().expect("eps <= 1 keeps L small");
    let mut points: QMatrix = vec![vec![Rational::zero(); k]];
    let vertices = x.vertices()?.clone();
    let unit_candidates: Option<QMatrix> = if k >= 3 { Some(projected_grid(x, eps)?) } else { None };
    for i in 1..=levels {
        let rho = ratio(i as i64, levels as i64);
        match k {
            1 => {
                for v in &vertices {
                    points.push(linalg::vscale(v, &rho));
                }
            }
            2 => {
                let poly = polygon(x)?;
                for (j, a) in poly.iter().enumerate() {
                    let b = &poly[(j + 1) % poly.len()];
                    let len = &rho * x.norm(&linalg::vsub(b, a));
                    let s = pieces(&len, eps);
                    for t in 0..s {
                        let lam = ratio(t as i64, s as i64);
                        let p = linalg::vadd(a, &linalg::vscale(&linalg::vsub(b, a), &lam));
                        points.push(linalg::vscale(&p, &rho));
                    }
                }
            }
            _ => {
                let cands = unit_candidates.as_ref().expect("built for k >= 3");
                let (grid_mu, _) = grid_error(x, eps)?;
                // candidates are rho·grid_mu-dense; thin to keep density < eps/2
                let sep = eps / &two - &rho * &grid_mu;
                let mut level: QMatrix = Vec::new();
                greedy(x, &mut level, cands.iter().map(|u| linalg::vscale(u, &rho)), &sep);
                points.extend(level);
            }
        }
    }
    let bound = pow(&(Rational::one() + int(4) / eps), k);
    let within_bound = Rational::from_integer(points.len().into()) <= bound;
    Ok(EpsNet { mode: "shell", eps: eps.clone(), points, bound, within_bound, certified_radius: eps.clone() })
}

/// Constant `C·c'` bounding the sphere error of the projected cube grid per unit step,
/// and the grid resolution `M` making it below `eps/4`.
fn grid_error(x: &PolyhedralSpace, eps: &Rational) -> Result<(Rational, usize), GeoError> {
    let k = x.dim();
    let verts = x.vertices()?;
    // C = ‖Id‖_{∞→X}, c' = ‖Id‖_{X→∞}
    let c_inf = super::space::sign_vectors(k).iter().map(|s| x.norm(s)).max().unwrap_or_else(Rational::one);
    let c_x = verts.iter().map(|v| v.iter().map(|a| a.abs()).max().unwrap_or_else(Rational::zero)).max().unwrap_or_else(Rational::one);
    let cc = c_inf * c_x;
    // error <= cc/M < eps/4
    let m = (int(4) * &cc / eps).floor().to_integer().to_usize().unwrap_or(usize::MAX / 4) + 1;
    Ok((cc / int(m as i64), m))
}

/// Radial projections onto `Sph(X)` of the grid `(1/M)Z^k` on the cube boundary.
fn projected_grid(x: &PolyhedralSpace, eps: &Rational) -> Result<QMatrix, GeoError> {
    let k = x.dim();
    let (_, m) = grid_error(x, eps)?;
    let side = 2 * m + 1;
    if side.checked_pow(k as u32).is_none_or(|c| c > MAX_CANDIDATES) {
        return Err(GeoError::Budget(format!("projected grid with {side}^{k} cells")));
    }
    let step = ratio(1, m as i64);
    let axis: Vec<Rational> = (0..side).map(|i| int(i as i64 - m as i64) * &step).collect();
    let axes = vec![axis; k];
    let mut out: QMatrix = Vec::new();
    for p in product(&axes) {
        if p.iter().any(|a| a.abs().is_one()) {
            let n = x.norm(&p);
            let u = linalg::vscale(&p, &n.recip());
            if !out.contains(&u) {
                out.push(u);
            }
        }
    }
    Ok(out)
}

/// Lex-first `y` in `net` with `‖x − y‖ < eps` and `‖y‖ < ‖x‖`.
pub fn shell_witness<'a>(x: &PolyhedralSpace, net: &'a EpsNet, point: &[Rational]) -> Option<&'a Vec<Rational>> {
    let nx = x.norm(point);
    net.points.iter().filter(|y| x.norm(y) < nx && x.norm(&linalg::vsub(point, y)) < net.eps).min()
}
