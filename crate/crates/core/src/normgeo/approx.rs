use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::metrics::ser_rational;
use super::space::{sign_vectors, PolyhedralSpace, SpaceKind};
use super::GeoError;
use crate::linalg::{self, QMatrix};
use crate::rational::{self, int, ratio, Rational};

/// `x ↦ ‖A x‖_2`, evaluated in floating point.
#[derive(Clone, Debug)]
pub struct FloatNorm {
    a: QMatrix,
}

impl FloatNorm {
    pub fn new(a: QMatrix) -> Result<Self, GeoError> {
        if a.is_empty() || linalg::rank(&a) < linalg::cols(&a) {
            return Err(GeoError::Degenerate("A must have full column rank".into()));
        }
        Ok(FloatNorm { a })
    }

    pub fn euclidean(k: usize) -> Self {
        FloatNorm { a: linalg::identity(k) }
    }

    pub fn dim(&self) -> usize {
        linalg::cols(&self.a)
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.a
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.a
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| rational::to_f64(a) * b).sum::<f64>())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Clone, Debug)]
pub enum Pushforward {
    Polyhedral(PolyhedralSpace),
    Float(FloatNorm),
}

/// Largest `n` for which `ν_1` lists all `2^n` sign functionals.
const MAX_SIGN_ROWS: usize = 16;

/// `ν_p(A)(x) = ‖A x‖_p` for `p ∈ {1, 2, ∞}`; `p = 0` is not accepted.
pub fn pushforward_norm(a: &QMatrix, p: u32) -> Result<Pushforward, GeoError> {
    let k = linalg::cols(a);
    if a.iter().any(|r| r.len() != k) {
        return Err(GeoError::Dimension("ragged matrix".into()));
    }
    if a.is_empty() || linalg::rank(a) < k {
        return Err(GeoError::Degenerate("A must have full column rank".into()));
    }
    match p {
        u32::MAX => Ok(Pushforward::Polyhedral(PolyhedralSpace::from_functionals(a.clone(), SpaceKind::Pushforward)?)),
        1 => {
            if a.len() > MAX_SIGN_ROWS {
                return Err(GeoError::Budget(format!("2^{} sign functionals", a.len())));
            }
            let at = linalg::transpose(a);
            let f: QMatrix = sign_vectors(a.len()).iter().map(|s| linalg::mul_vec(&at, s)).collect();
            Ok(Pushforward::Polyhedral(PolyhedralSpace::from_functionals(f, SpaceKind::Pushforward)?))
        }
        2 => Ok(Pushforward::Float(FloatNorm::new(a.clone())?)),
        _ => Err(GeoError::Domain(format!("p must be 1, 2 or infinity, got {p}"))),
    }
}

#[derive(Clone, Debug)]
pub enum ApproxInput {
    Polyhedral(PolyhedralSpace),
    Euclidean(FloatNorm),
}

#[derive(Clone, Debug, Serialize)]
pub struct Approximation {
    pub space: PolyhedralSpace,
    /// `|D|`, the symmetric functional list.
    pub functionals: usize,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub within_bound: bool,
}

impl Approximation {
    /// Sandwich `(1+ε)⁻¹ N(x) <= N₀(x) <= N(x)` on the given points, float tolerance `tol`.
    pub fn sandwich_holds(&self, norm: &FloatNorm, eps: f64, points: &[Vec<f64>], tol: f64) -> bool {
        let fs: Vec<Vec<f64>> = self.space.functionals().iter().map(|f| f.iter().map(rational::to_f64).collect()).collect();
        points.iter().all(|x| {
            let n = norm.eval(x);
            let n0 = fs.iter().map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs()).fold(0.0, f64::max);
            n0 <= n + tol && n / (1.0 + eps) <= n0 + tol
        })
    }
}

/// Rational points of `S^{k-1}` within Euclidean distance `delta` of every
/// point of the closed lower half (`x_{k-1} <= 0` or the first chart); the
/// symmetric closure covers the rest.
fn sphere_points(k: usize, delta: &Rational) -> Result<QMatrix, GeoError> {
    match k {
        1 => Ok(vec![vec![Rational::one()]]),
        2 => {
            // t ↦ ((1−t²), 2t)/(1+t²); angle 2·atan t moves at speed <= 2,
            // so a t-step s leaves every point within s of the list
            let steps = (Rational::one() / delta).ceil().to_integer().to_i64().unwrap_or(1).max(1);
            Ok((-steps..=steps)
                .map(|i| {
                    let t = ratio(i, steps);
                    let den = Rational::one() + &t * &t;
                    vec![(Rational::one() - &t * &t) / &den, int(2) * &t / den]
                })
                .collect())
        }
        3 => {
            // (u,v) ↦ (2u, 2v, u²+v²−1)/(1+u²+v²) stretches by <= 2; grid step
            // g <= δ/√2 keeps planar gaps below g/√2
            let g = delta * ratio(7, 10);
            let steps = (Rational::one() / &g).ceil().to_integer().to_i64().unwrap_or(1).max(1) + 1;
            let reach = Rational::one() + &g;
            let mut out = Vec::new();
            for i in -steps..=steps {
                for j in -steps..=steps {
                    let u = int(i) * &g;
                    let v = int(j) * &g;
                    let r2 = &u * &u + &v * &v;
                    if r2 > &reach * &reach {
                        continue;
                    }
                    let den = Rational::one() + &r2;
                    out.push(vec![int(2) * &u / &den, int(2) * &v / &den, (r2 - Rational::one()) / &den]);
                }
            }
            Ok(out)
        }
        _ => Err(GeoError::Budget(format!("Euclidean approximation is built up to dimension 3, got {k}"))),
    }
}

/// Polyhedral `X₀` with `d_BM(X, X₀) <= ε` from a `δ`-dense subset of `Sph(X*)`, `δ = ε/(1+ε)`.
pub fn polyhedral_approx(x: &ApproxInput, eps: &Rational) -> Result<Approximation, GeoError> {
    if !eps.is_positive() || eps >= &Rational::one() {
        return Err(GeoError::Domain("eps must lie in (0, 1)".into()));
    }
    let delta = eps / (Rational::one() + eps);
    let (space, k) = match x {
        ApproxInput::Polyhedral(s) => {
            let f = s.dual_vertices()?;
            (PolyhedralSpace::from_functionals(f, SpaceKind::Approximation)?, s.dim())
        }
        ApproxInput::Euclidean(norm) => {
            let n = norm.matrix().len();
            let at = linalg::transpose(norm.matrix());
            let f: QMatrix = sphere_points(n, &delta)?.iter().map(|u| linalg::mul_vec(&at, u)).filter(|f| !linalg::is_zero_vec(f)).collect();
            (PolyhedralSpace::from_functionals(f, SpaceKind::Approximation)?, norm.dim())
        }
    };
    let base = (int(2) + int(3) * eps) / eps;
    let bound = (0..k).fold(Rational::one(), |acc, _| acc * &base);
    let functionals = space.functionals().len();
    let within_bound = Rational::from_integer(functionals.into()) <= bound;
    Ok(Approximation { space, functionals, delta, bound, within_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pushforward_basics() {
        let id = linalg::identity(2);
        match pushforward_norm(&id, u32::MAX).unwrap() {
            Pushforward::Polyhedral(s) => assert_eq!(s.functionals(), PolyhedralSpace::ell_inf(2).functionals()),
            _ => panic!(),
        }
        let col = vec![vec![int(1)], vec![int(1)]];
        match pushforward_norm(&col, 1).unwrap() {
            Pushforward::Polyhedral(s) => assert_eq!(s.norm(&[int(3)]), int(6)),
            _ => panic!(),
        }
        assert!(pushforward_norm(&vec![vec![int(1), int(1)]], 1).is_err());
    }

    #[test]
    fn polyhedral_passes_through() {
        let x = PolyhedralSpace::ell_one(2);
        let ap = polyhedral_approx(&ApproxInput::Polyhedral(x.clone()), &ratio(9, 10)).unwrap();
        assert_eq!(ap.space.vertices().unwrap(), x.vertices().unwrap());
    }

    #[test]
    fn circle_and_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in [2usize, 3] {
            let norm = FloatNorm::euclidean(k);
            let ap = polyhedral_approx(&ApproxInput::Euclidean(norm.clone()), &ratio(1, 2)).unwrap();
            assert!(ap.within_bound, "{} > {}", ap.functionals, ap.bound);
            let pts: Vec<Vec<f64>> = (0..1000).map(|_| (0..k).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            assert!(ap.sandwich_holds(&norm, 0.5, &pts, 1e-9));
        }
    }
}
