//! Finite pointed metric spaces and their Lipschitz-free spaces.
//!
//! `F(M)` is coordinatised by the molecules `δ_x − δ_p` for `x ≠ p`; its
//! unit ball is the convex hull of `±(δ_x − δ_y)/d(x,y)`, so it is a
//! [`PolyhedralSpace`]. Norms are computed by two exact linear programs
//! (molecule decompositions and 1-Lipschitz test functions) that must agree.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, QMatrix};
use crate::lp::{LinearProgram, LpOutcome};
use crate::normgeo::{GeoError, NormedMap, PolyhedralSpace, SpaceKind, VERTEX_DIM_CAP};
use crate::polytope;
use crate::rational::{self, int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("invalid metric: {0}")]
    Invalid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Geo(#[from] GeoError),
}

/// Largest space handled by [`enumerate_emb`].
pub const MAX_EMB_POINTS: usize = 10;
const MAX_EMBEDDINGS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    d: QMatrix,
    basepoint: usize,
}

impl FiniteMetricSpace {
    pub fn new(d: QMatrix, basepoint: Option<usize>) -> Result<Self, MetricError> {
        let n = d.len();
        if n == 0 {
            return Err(MetricError::Invalid("empty space".into()));
        }
        if d.iter().any(|r| r.len() != n) {
            return Err(MetricError::Invalid("distance matrix is not square".into()));
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(MetricError::Invalid(format!("d({i},{i}) is not zero")));
            }
            for j in 0..n {
                if d[i][j] != d[j][i] {
                    return Err(MetricError::Invalid(format!("d({i},{j}) != d({j},{i})")));
                }
                if i != j && !d[i][j].is_positive() {
                    return Err(MetricError::Invalid(format!("d({i},{j}) is not positive")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > &d[i][j] + &d[j][k] {
                        return Err(MetricError::Invalid(format!("triangle inequality fails at ({i},{j},{k})")));
                    }
                }
            }
        }
        let basepoint = basepoint.unwrap_or(0);
        if basepoint >= n {
            return Err(MetricError::Invalid(format!("basepoint {basepoint} out of range")));
        }
        Ok(FiniteMetricSpace { d, basepoint })
    }

    /// Comma-separated rows, one per line; blank lines and `#` comments skipped.
    pub fn from_csv(text: &str, basepoint: Option<usize>) -> Result<Self, MetricError> {
        let mut d: QMatrix = Vec::new();
        let mut width = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .enumerate()
                .map(|(c, s)| {
                    rational::parse(s.trim())
                        .map_err(|e| MetricError::Invalid(format!("line {}, field {}: {}", ln + 1, c + 1, e.0)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            match width {
                Some(w) if w != row.len() => {
                    return Err(MetricError::Invalid(format!("line {}: {} fields, expected {w}", ln + 1, row.len())));
                }
                _ => width = Some(row.len()),
            }
            d.push(row);
        }
        Self::new(d, basepoint)
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn dist(&self, x: usize, y: usize) -> &Rational {
        &self.d[x][y]
    }

    pub fn distances(&self) -> &QMatrix {
        &self.d
    }

    pub fn with_basepoint(&self, p: usize) -> Result<Self, MetricError> {
        Self::new(self.d.clone(), Some(p))
    }

    pub fn min_distance(&self) -> Option<Rational> {
        self.pairs().map(|(x, y)| self.d[x][y].clone()).min()
    }

    pub fn diameter(&self) -> Rational {
        self.pairs().map(|(x, y)| self.d[x][y].clone()).max().unwrap_or_else(Rational::zero)
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
    }

    /// Points other than the basepoint, in index order; these index free-space coordinates.
    pub fn free_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| x != self.basepoint).collect()
    }

    /// Coordinates of `δ_x − δ_y` in `F(M)`.
    pub fn molecule(&self, x: usize, y: usize) -> Vec<Rational> {
        let pts = self.free_points();
        let mut v = vec![Rational::zero(); pts.len()];
        if let Some(i) = pts.iter().position(|&p| p == x) {
            v[i] += Rational::one();
        }
        if let Some(i) = pts.iter().position(|&p| p == y) {
            v[i] -= Rational::one();
        }
        v
    }
}

#[derive(Serialize, Deserialize)]
struct MetricRepr {
    n: usize,
    d: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basepoint: Option<usize>,
}

impl Serialize for FiniteMetricSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MetricRepr { n: self.len(), d: rational::mat_to_strings(&self.d), basepoint: Some(self.basepoint) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMetricSpace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = MetricRepr::deserialize(de)?;
        let d = rational::mat_from_strings(&r.d).map_err(D::Error::custom)?;
        if d.len() != r.n {
            return Err(D::Error::custom(format!("n = {} but d has {} rows", r.n, d.len())));
        }
        FiniteMetricSpace::new(d, r.basepoint).map_err(D::Error::custom)
    }
}

/// Coefficients of `Σ a_x (δ_x − δ_p)` over the non-basepoint points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeVector(pub Vec<Rational>);

impl FreeVector {
    pub fn new(space: &FiniteMetricSpace, coeffs: Vec<Rational>) -> Result<Self, MetricError> {
        if coeffs.len() + 1 != space.len() {
            return Err(MetricError::Domain(format!("need {} coefficients, got {}", space.len() - 1, coeffs.len())));
        }
        Ok(FreeVector(coeffs))
    }
}

/// `M_∞`: `M` plus one point at distance `max(min d, diam/2)` from every point.
///
/// The minimum alone can break the triangle inequality once the diameter
/// exceeds twice the minimum; half the diameter is the least admissible value
/// in that case.
pub fn one_point_extension(m: &FiniteMetricSpace) -> Result<FiniteMetricSpace, MetricError> {
    let min = m.min_distance().ok_or_else(|| MetricError::Domain("need at least two points".into()))?;
    let c = min.max(m.diameter() / int(2));
    one_point_extension_at(m, &c)
}

/// `M` plus one point at distance `c` from every point; `c >= diam/2` is required.
pub fn one_point_extension_at(m: &FiniteMetricSpace, c: &Rational) -> Result<FiniteMetricSpace, MetricError> {
    if m.len() < 2 {
        return Err(MetricError::Domain("need at least two points".into()));
    }
    if !c.is_positive() || &(c * int(2)) < &m.diameter() {
        return Err(MetricError::Domain(format!("distance {} is below half the diameter", rational::format(c))));
    }
    let n = m.len();
    let mut d = m.d.clone();
    for row in d.iter_mut() {
        row.push(c.clone());
    }
    let mut last = vec![c.clone(); n];
    last.push(Rational::zero());
    d.push(last);
    FiniteMetricSpace::new(d, Some(m.basepoint))
}

/// `max |f(x) − f(y)| / d(x,y)` for `f` with `f(p) = 0`.
pub fn lipschitz_norm(m: &FiniteMetricSpace, f: &[Rational]) -> Result<Rational, MetricError> {
    if f.len() != m.len() {
        return Err(MetricError::Domain("f must have one value per point".into()));
    }
    if !f[m.basepoint].is_zero() {
        return Err(MetricError::Domain("f must vanish at the basepoint".into()));
    }
    Ok(m.pairs().map(|(x, y)| (&f[x] - &f[y]).abs() / &m.d[x][y]).max().unwrap_or_else(Rational::zero))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeNorm {
    pub value: Rational,
    /// `min Σ a_{xy}` over representations `v = Σ a_{xy} μ_{xy}`.
    pub primal: Rational,
    /// `max Σ v_x f(x)` over 1-Lipschitz `f` with `f(p) = 0`.
    pub dual: Rational,
    /// An optimal `f`, one value per point of `M`.
    pub witness: Vec<Rational>,
}

/// Free-space norm by two exact LPs.
pub fn free_norm(m: &FiniteMetricSpace, v: &FreeVector) -> Result<FreeNorm, MetricError> {
    if v.0.len() + 1 != m.len() {
        return Err(MetricError::Domain("vector length must be n - 1".into()));
    }
    let pts = m.free_points();
    let n = m.len();
    let ordered: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();

    let molecules: QMatrix = ordered.iter().map(|&(x, y)| linalg::vscale(&m.molecule(x, y), &m.d[x][y].recip())).collect();
    let mut lp = LinearProgram::minimize(vec![Rational::one(); ordered.len()]);
    for c in 0..pts.len() {
        lp.eq(molecules.iter().map(|mu| mu[c].clone()).collect(), v.0[c].clone());
    }
    let primal = match lp.solve() {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("molecules span F(M): {other:?}"),
    };

    let mut lp = LinearProgram::maximize(v.0.clone());
    lp.all_free();
    for &(x, y) in &ordered {
        // f(x) − f(y) <= d(x,y); f(p) = 0 is implicit
        lp.le(m.molecule(x, y), m.d[x][y].clone());
    }
    let (dual, f) = match lp.solve() {
        LpOutcome::Optimal { value, x } => (value, x),
        other => unreachable!("Lipschitz LP is bounded: {other:?}"),
    };
    assert_eq!(primal, dual, "strong duality failed on exact data");
    let mut witness = vec![Rational::zero(); n];
    for (i, &p) in pts.iter().enumerate() {
        witness[p] = f[i].clone();
    }
    Ok(FreeNorm { value: primal.clone(), primal, dual, witness })
}

#[derive(Clone, Debug)]
pub struct FreeSpace {
    pub space: PolyhedralSpace,
    /// Pairs `(x, y)`, `x < y`, whose molecule is extreme.
    pub extreme_pairs: Vec<(usize, usize)>,
}

/// `F(M)` as a polyhedral space spanned by its extreme molecules.
pub fn free_space(m: &FiniteMetricSpace) -> Result<FreeSpace, MetricError> {
    let dim = m.len().saturating_sub(1);
    if dim == 0 {
        return Err(MetricError::Domain("a one-point space has a zero free space".into()));
    }
    if dim > VERTEX_DIM_CAP {
        return Err(MetricError::Budget(format!("free space of dimension {dim} exceeds {VERTEX_DIM_CAP}")));
    }
    let pairs: Vec<(usize, usize)> = m.pairs().collect();
    let mut points = Vec::new();
    for &(x, y) in &pairs {
        let mu = linalg::vscale(&m.molecule(x, y), &m.d[x][y].recip());
        points.push(linalg::vneg(&mu));
        points.push(mu);
    }
    let extreme = polytope::extreme_points(&points);
    let extreme_pairs = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| extreme.contains(&points[2 * i + 1]))
        .map(|(_, &p)| p)
        .collect();
    let space = PolyhedralSpace::from_vertices(extreme, SpaceKind::FreeSpace)?;
    Ok(FreeSpace { space, extreme_pairs })
}

fn is_isometric_map(m: &FiniteMetricSpace, n: &FiniteMetricSpace, sigma: &[usize]) -> bool {
    sigma.len() == m.len()
        && sigma.iter().all(|&s| s < n.len())
        && (0..m.len()).all(|x| (0..m.len()).all(|y| m.d[x][y] == n.d[sigma[x]][sigma[y]]))
}

#[derive(Clone, Debug)]
pub struct EmbeddingExtension {
    pub m_inf: FiniteMetricSpace,
    pub n_inf: FiniteMetricSpace,
    /// Distance of the added points.
    pub c: Rational,
    pub map: NormedMap,
}

/// `T_σ: F(M_∞) → F(N_∞)`, `δ_x − δ_{p∞} ↦ δ_{σ(x)} − δ_{q∞}`.
///
/// Both extensions use the distance chosen for `N`, which keeps
/// `σ ∪ {p∞ ↦ q∞}` distance-preserving.
pub fn extend_embedding(m: &FiniteMetricSpace, n: &FiniteMetricSpace, sigma: &[usize]) -> Result<EmbeddingExtension, MetricError> {
    if !is_isometric_map(m, n, sigma) {
        return Err(MetricError::Domain("sigma is not distance-preserving".into()));
    }
    let n_min = n.min_distance().ok_or_else(|| MetricError::Domain("N needs at least two points".into()))?;
    let c = n_min.max(n.diameter() / int(2));
    let m_inf = one_point_extension_at(m, &c)?.with_basepoint(m.len())?;
    let n_inf = one_point_extension_at(n, &c)?.with_basepoint(n.len())?;
    let mut t = linalg::zeros(n.len(), m.len());
    for (x, &s) in sigma.iter().enumerate() {
        t[s][x] = Rational::one();
    }
    let fm = free_space(&m_inf)?.space;
    let fn_ = free_space(&n_inf)?.space;
    let map = NormedMap::new(t, fm, fn_)?;
    Ok(EmbeddingExtension { m_inf, n_inf, c, map })
}

/// All distance-preserving injections `M → N`, lexicographic.
pub fn enumerate_emb(m: &FiniteMetricSpace, n: &FiniteMetricSpace) -> Result<Vec<Vec<usize>>, MetricError> {
    if m.len() > n.len() || n.len() > MAX_EMB_POINTS {
        return Err(MetricError::Domain(format!("need |M| <= |N| <= {MAX_EMB_POINTS}")));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m.len());
    let mut used = vec![false; n.len()];
    fn go(
        m: &FiniteMetricSpace,
        n: &FiniteMetricSpace,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), MetricError> {
        let x = cur.len();
        if x == m.len() {
            if out.len() >= MAX_EMBEDDINGS {
                return Err(MetricError::Budget(format!("more than {MAX_EMBEDDINGS} embeddings")));
            }
            out.push(cur.clone());
            return Ok(());
        }
        for s in 0..n.len() {
            if used[s] || (0..x).any(|y| m.d[x][y] != n.d[s][cur[y]]) {
                continue;
            }
            used[s] = true;
            cur.push(s);
            go(m, n, cur, used, out)?;
            cur.pop();
            used[s] = false;
        }
        Ok(())
    }
    go(m, n, &mut cur, &mut used, &mut out)?;
    Ok(out)
}
