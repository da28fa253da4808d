use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::GeoError;
use crate::linalg::{self, QMatrix};
use crate::polytope;
use crate::rational::{self, Rational};

/// Largest dimension for which ball vertices are enumerated.
pub const VERTEX_DIM_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    EllInf,
    EllOne,
    FreeSpace,
    Amalgam,
    Operators,
    Approximation,
    Pushforward,
    Custom,
}

/// `R^k` normed by `max |f(x)|` over a centrally symmetric functional list.
#[derive(Clone, Debug)]
pub struct PolyhedralSpace {
    dim: usize,
    functionals: QMatrix,
    vertices: OnceLock<QMatrix>,
    kind: SpaceKind,
}

impl PartialEq for PolyhedralSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.functionals == other.functionals
    }
}

/// Appends `-v` for every `v`, dropping repeats; keeps first-seen order.
fn symmetric_closure(rows: &[Vec<Rational>]) -> QMatrix {
    let mut out: QMatrix = Vec::new();
    for r in rows {
        if linalg::is_zero_vec(r) {
            continue;
        }
        for v in [r.clone(), linalg::vneg(r)] {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

impl PolyhedralSpace {
    /// Space normed by the given functionals (closed under negation here).
    pub fn from_functionals(functionals: QMatrix, kind: SpaceKind) -> Result<Self, GeoError> {
        let dim = linalg::cols(&functionals);
        if functionals.iter().any(|f| f.len() != dim) {
            return Err(GeoError::Dimension("ragged functional list".into()));
        }
        if dim == 0 {
            return Err(GeoError::Dimension("zero-dimensional space".into()));
        }
        if linalg::rank(&functionals) < dim {
            return Err(GeoError::Degenerate("functionals do not span the dual; the norm has a kernel".into()));
        }
        Ok(PolyhedralSpace { dim, functionals: symmetric_closure(&functionals), vertices: OnceLock::new(), kind })
    }

    /// Space whose unit ball is the symmetric convex hull of `points`.
    pub fn from_vertices(points: QMatrix, kind: SpaceKind) -> Result<Self, GeoError> {
        let dim = linalg::cols(&points);
        if points.iter().any(|f| f.len() != dim) {
            return Err(GeoError::Dimension("ragged vertex list".into()));
        }
        if dim == 0 || linalg::rank(&points) < dim {
            return Err(GeoError::Degenerate("points do not span the space; the ball is flat".into()));
        }
        if dim > VERTEX_DIM_CAP {
            return Err(GeoError::Budget(format!("dimension {dim} exceeds {VERTEX_DIM_CAP}")));
        }
        let closed = symmetric_closure(&points);
        let functionals = polytope::polar_vertices(&closed)?;
        let vertices = polytope::polar_vertices(&functionals)?;
        let cell = OnceLock::new();
        let _ = cell.set(vertices);
        Ok(PolyhedralSpace { dim, functionals, vertices: cell, kind })
    }

    /// Both descriptions, checked to define the same ball.
    pub fn from_both(functionals: QMatrix, vertices: QMatrix, kind: SpaceKind) -> Result<Self, GeoError> {
        let s = Self::from_functionals(functionals, kind)?;
        let closed = symmetric_closure(&vertices);
        if closed.iter().any(|v| v.len() != s.dim) {
            return Err(GeoError::Dimension("vertex width differs from functional width".into()));
        }
        if closed.iter().any(|v| s.norm(v) != Rational::one()) {
            return Err(GeoError::Domain("a listed vertex is not on the unit sphere".into()));
        }
        let own = s.vertices()?;
        if own.iter().any(|v| !polytope::in_hull(v, &closed)) {
            return Err(GeoError::Domain("vertex list does not span the unit ball".into()));
        }
        Ok(s)
    }

    pub fn ell_inf(k: usize) -> Self {
        let f: QMatrix = (0..k).map(|i| unit(k, i)).collect();
        let s = Self::from_functionals(f, SpaceKind::EllInf).expect("coordinate functionals span");
        let _ = s.vertices.set(sign_vectors(k));
        s
    }

    pub fn ell_one(k: usize) -> Self {
        let s = Self::from_functionals(sign_vectors(k), SpaceKind::EllOne).expect("sign vectors span");
        let mut v: QMatrix = (0..k).flat_map(|i| [unit(k, i), linalg::vneg(&unit(k, i))]).collect();
        v.sort();
        let _ = s.vertices.set(v);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: SpaceKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn functionals(&self) -> &QMatrix {
        &self.functionals
    }

    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.functionals.iter().map(|f| linalg::dot(f, x).abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Extreme points of the unit ball, sorted.
    pub fn vertices(&self) -> Result<&QMatrix, GeoError> {
        if let Some(v) = self.vertices.get() {
            return Ok(v);
        }
        if self.dim > VERTEX_DIM_CAP {
            return Err(GeoError::Budget(format!("vertex enumeration in dimension {} exceeds {VERTEX_DIM_CAP}", self.dim)));
        }
        let v = polytope::polar_vertices(&self.functionals)?;
        Ok(self.vertices.get_or_init(|| v))
    }

    /// Extreme points of the dual unit ball (the irredundant functionals), sorted.
    pub fn dual_vertices(&self) -> Result<QMatrix, GeoError> {
        Ok(polytope::polar_vertices(self.vertices()?)?)
    }

    /// Dual norm `max_{v ∈ vert} |f(v)|`.
    pub fn dual_norm(&self, f: &[Rational]) -> Result<Rational, GeoError> {
        Ok(self.vertices()?.iter().map(|v| linalg::dot(f, v).abs()).max().unwrap_or_else(Rational::zero))
    }

    /// Same ball, functionals pruned to the extreme ones.
    pub fn reduced(&self) -> Result<Self, GeoError> {
        let f = self.dual_vertices()?;
        let s = PolyhedralSpace { dim: self.dim, functionals: f, vertices: OnceLock::new(), kind: self.kind };
        if let Some(v) = self.vertices.get() {
            let _ = s.vertices.set(v.clone());
        }
        Ok(s)
    }
}

pub(crate) fn unit(k: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); k];
    v[i] = Rational::one();
    v
}

/// All `±1` vectors of length `k`, sorted.
pub(crate) fn sign_vectors(k: usize) -> QMatrix {
    let mut out: QMatrix = (0..1u32 << k)
        .map(|m| (0..k).map(|i| if m >> i & 1 == 1 { -Rational::one() } else { Rational::one() }).collect())
        .collect();
    out.sort();
    out
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    functionals: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<SpaceKind>,
}

impl Serialize for PolyhedralSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpaceRepr {
            dim: self.dim,
            functionals: Some(rational::mat_to_strings(&self.functionals)),
            vertices: self.vertices.get().map(|v| rational::mat_to_strings(v)),
            kind: Some(self.kind),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyhedralSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = SpaceRepr::deserialize(d)?;
        let kind = r.kind.unwrap_or(SpaceKind::Custom);
        let f = r.functionals.map(|m| rational::mat_from_strings(&m)).transpose().map_err(D::Error::custom)?;
        let v = r.vertices.map(|m| rational::mat_from_strings(&m)).transpose().map_err(D::Error::custom)?;
        let space = match (f, v) {
            (Some(f), Some(v)) => PolyhedralSpace::from_both(f, v, kind),
            (Some(f), None) => PolyhedralSpace::from_functionals(f, kind),
            (None, Some(v)) => PolyhedralSpace::from_vertices(v, kind),
            (None, None) => return Err(D::Error::custom("need functionals or vertices")),
        }
        .map_err(D::Error::custom)?;
        if space.dim != r.dim {
            return Err(D::Error::custom(format!("dim {} does not match data of width {}", r.dim, space.dim)));
        }
        Ok(space)
    }
}

/// `‖T‖ = max_{v ∈ vert Ball(X)} ‖Tv‖_Y`; `t` has `dim Y` rows and `dim X` columns.
pub fn op_norm(t: &QMatrix, x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<Rational, GeoError> {
    check_shape(t, x, y)?;
    Ok(x.vertices()?.iter().map(|v| y.norm(&linalg::mul_vec(t, v))).max().unwrap_or_else(Rational::zero))
}

/// `‖T⁻¹‖ = sup{‖x‖_X : ‖Tx‖_Y <= 1}`; `None` when `T` is not injective.
pub fn inv_norm(t: &QMatrix, x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<Option<Rational>, GeoError> {
    check_shape(t, x, y)?;
    if linalg::rank(t) < x.dim() {
        return Ok(None);
    }
    if x.dim() > VERTEX_DIM_CAP {
        return Err(GeoError::Budget(format!("dimension {} exceeds {VERTEX_DIM_CAP}", x.dim())));
    }
    let pulled: QMatrix = y.functionals().iter().map(|g| linalg::mul_vec(&linalg::transpose(t), g)).collect();
    let verts = polytope::polar_vertices(&pulled)?;
    Ok(Some(verts.iter().map(|u| x.norm(u)).max().unwrap_or_else(Rational::zero)))
}

fn check_shape(t: &QMatrix, x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<(), GeoError> {
    if t.len() != y.dim() || t.iter().any(|r| r.len() != x.dim()) {
        return Err(GeoError::Dimension(format!(
            "map of shape {}x{} between spaces of dims {} -> {}",
            t.len(),
            linalg::cols(t),
            x.dim(),
            y.dim()
        )));
    }
    Ok(())
}

/// A linear map between two polyhedral spaces with cached norms.
#[derive(Clone, Debug)]
pub struct NormedMap {
    matrix: QMatrix,
    domain: PolyhedralSpace,
    codomain: PolyhedralSpace,
    norm: OnceLock<Rational>,
    inv: OnceLock<Option<Rational>>,
}

impl NormedMap {
    pub fn new(matrix: QMatrix, domain: PolyhedralSpace, codomain: PolyhedralSpace) -> Result<Self, GeoError> {
        check_shape(&matrix, &domain, &codomain)?;
        Ok(NormedMap { matrix, domain, codomain, norm: OnceLock::new(), inv: OnceLock::new() })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn domain(&self) -> &PolyhedralSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &PolyhedralSpace {
        &self.codomain
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        linalg::mul_vec(&self.matrix, x)
    }

    pub fn norm(&self) -> Result<Rational, GeoError> {
        if let Some(n) = self.norm.get() {
            return Ok(n.clone());
        }
        let n = op_norm(&self.matrix, &self.domain, &self.codomain)?;
        Ok(self.norm.get_or_init(|| n).clone())
    }

    pub fn inv_norm(&self) -> Result<Option<Rational>, GeoError> {
        if let Some(n) = self.inv.get() {
            return Ok(n.clone());
        }
        let n = inv_norm(&self.matrix, &self.domain, &self.codomain)?;
        Ok(self.inv.get_or_init(|| n).clone())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &NormedMap) -> Result<NormedMap, GeoError> {
        if first.codomain.dim() != self.domain.dim() {
            return Err(GeoError::Dimension("composition of incompatible maps".into()));
        }
        NormedMap::new(linalg::mul(&self.matrix, &first.matrix), first.domain.clone(), self.codomain.clone())
    }

    /// Exact check that `‖Tv‖ = ‖v‖` on every vertex of the domain ball.
    ///
    /// Norm one on the vertices gives `‖T‖ = 1`; the reverse inequality is
    /// checked through `‖T⁻¹‖ = 1`.
    pub fn is_isometry(&self) -> Result<bool, GeoError> {
        let on_vertices = self.domain.vertices()?.iter().all(|v| self.codomain.norm(&self.apply(v)) == Rational::one());
        if !on_vertices {
            return Ok(false);
        }
        Ok(self.inv_norm()? == Some(Rational::one()))
    }

    /// Isometry check that only evaluates norms on the domain's vertices and
    /// the codomain's norm; valid because the domain ball is the hull of its vertices
    /// and the map is checked to be norm-nonincreasing and norm-preserving on a
    /// norming set of the domain.
    pub fn is_isometry_on(&self, norming: &QMatrix) -> Result<bool, GeoError> {
        let nonexpansive = self.norm()? <= Rational::one();
        Ok(nonexpansive && norming.iter().all(|x| self.codomain.norm(&self.apply(x)) == self.domain.norm(x)))
    }
}

impl Serialize for NormedMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational::mat_to_strings(&self.matrix).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(rows: &[&[i64]]) -> QMatrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn standard_balls() {
        let inf = PolyhedralSpace::ell_inf(2);
        assert_eq!(inf.vertices().unwrap().len(), 4);
        let one = PolyhedralSpace::ell_one(2);
        assert_eq!(one.vertices().unwrap(), &q(&[&[-1, 0], &[0, -1], &[0, 1], &[1, 0]]));
        assert_eq!(one.norm(&[int(3), int(4)]), int(7));
        let fresh = PolyhedralSpace::from_functionals(inf.functionals().clone(), SpaceKind::Custom).unwrap();
        assert_eq!(fresh.vertices().unwrap(), inf.vertices().unwrap());
    }

    #[test]
    fn seminorm_rejected() {
        let err = PolyhedralSpace::from_functionals(q(&[&[1, 0]]), SpaceKind::Custom).unwrap_err();
        assert!(matches!(err, GeoError::Degenerate(_)));
    }

    #[test]
    fn operator_norms() {
        let inf = PolyhedralSpace::ell_inf(2);
        let one = PolyhedralSpace::ell_one(2);
        let id = linalg::identity(2);
        assert_eq!(op_norm(&id, &inf, &inf).unwrap(), int(1));
        assert_eq!(inv_norm(&id, &inf, &inf).unwrap(), Some(int(1)));
        let t = q(&[&[1, 1], &[1, -1]]);
        assert_eq!(op_norm(&t, &one, &inf).unwrap(), int(1));
        assert_eq!(inv_norm(&t, &one, &inf).unwrap(), Some(int(1)));
        let d = vec![vec![int(1), int(0)], vec![int(0), ratio(1, 2)]];
        assert_eq!(op_norm(&d, &inf, &inf).unwrap(), int(1));
        assert_eq!(inv_norm(&d, &inf, &inf).unwrap(), Some(int(2)));
        let zero = linalg::zeros(2, 2);
        assert_eq!(inv_norm(&zero, &inf, &inf).unwrap(), None);
        assert!(NormedMap::new(t, one, inf).unwrap().is_isometry().unwrap());
    }

    #[test]
    fn descriptions_agree_and_serialize() {
        let hex = PolyhedralSpace::from_vertices(q(&[&[1, 0], &[0, 1], &[1, 1]]), SpaceKind::Custom).unwrap();
        assert_eq!(hex.vertices().unwrap().len(), 6);
        assert_eq!(hex.functionals().len(), 6);
        let json = serde_json::to_string(&hex).unwrap();
        let back: PolyhedralSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back.vertices().unwrap(), hex.vertices().unwrap());
        let bad = r#"{"dim":2,"functionals":[["1","0"],["0","1"]],"vertices":[["1","0"],["0","1"]]}"#;
        assert!(serde_json::from_str::<PolyhedralSpace>(bad).is_err());
    }
}
