//! Exact vertex enumeration by the double-description method.
//!
//! A bounded polytope `{x : A x <= b}` in `R^d` is homogenised to the pointed
//! cone `{(x, t) : A x - b t <= 0, t >= 0}`; its extreme rays with `t > 0` are
//! the vertices. Constraints are added one at a time and new rays are formed
//! from adjacent pairs, adjacency decided by the combinatorial test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, QMatrix};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

/// Largest ambient dimension accepted by [`vertices`].
pub const MAX_DIM: usize = 8;
/// Ray-count cap during double description.
pub const MAX_RAYS: usize = 200_000;

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    y: Vec<Rational>,
    zero: Bits,
}

/// Scales to a primitive integer vector with the same direction.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Extreme rays of the pointed cone `{y : h·y <= 0 for h in rows}`.
fn extreme_rays(rows: &QMatrix, dim: usize) -> Result<Vec<Vec<Rational>>, PolytopeError> {
    let m = rows.len();
    // Initial simplicial cone from `dim` independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: QMatrix = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if linalg::rank(&trial) > basis.len() {
            basis = trial;
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() < dim {
        return Err(PolytopeError::Unbounded);
    }
    let inv = linalg::inverse(&basis).expect("independent rows");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let y = primitive(inv.iter().map(|row| -row[k].clone()).collect());
            let mut zero = Bits::new(m);
            for (j, &c) in chosen.iter().enumerate() {
                if j != k {
                    zero.set(c);
                }
            }
            Ray { y, zero }
        })
        .collect();

    let mut done = vec![false; m];
    for &c in &chosen {
        done[c] = true;
    }
    for (i, h) in rows.iter().enumerate() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let vals: Vec<Rational> = rays.iter().map(|r| linalg::dot(h, &r.y)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        if pos.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zero.set(i);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zero.and(&rays[n].zero);
                if common.count() + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(j, r)| j != p && j != n && r.zero.contains(&common));
                if blocked {
                    continue;
                }
                let y = linalg::vsub(&linalg::vscale(&rays[n].y, &vals[p]), &linalg::vscale(&rays[p].y, &vals[n]));
                let mut zero = common;
                zero.set(i);
                fresh.push(Ray { y: primitive(y), zero });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (j, mut r) in rays.into_iter().enumerate() {
            if vals[j].is_negative() {
                next.push(r);
            } else if vals[j].is_zero() {
                r.zero.set(i);
                next.push(r);
            }
        }
        next.extend(fresh);
        if next.len() > MAX_RAYS {
            return Err(PolytopeError::Budget(format!("more than {MAX_RAYS} rays")));
        }
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.y).collect())
}

/// Vertices of `{x : a_i·x <= b_i}`, sorted lexicographically. Empty when the
/// polytope is empty; an error when it is unbounded.
pub fn vertices(a: &QMatrix, b: &[Rational]) -> Result<Vec<Vec<Rational>>, PolytopeError> {
    if a.len() != b.len() {
        return Err(PolytopeError::Dimension("row count differs from rhs length".into()));
    }
    let d = linalg::cols(a);
    if a.iter().any(|r| r.len() != d) {
        return Err(PolytopeError::Dimension("ragged constraint matrix".into()));
    }
    if d == 0 {
        return Err(PolytopeError::Dimension("zero-dimensional ambient space".into()));
    }
    if d > MAX_DIM {
        return Err(PolytopeError::Budget(format!("dimension {d} exceeds {MAX_DIM}")));
    }
    let mut rows: QMatrix = a
        .iter()
        .zip(b)
        .map(|(r, bi)| r.iter().cloned().chain([-bi.clone()]).collect())
        .collect();
    let mut t_row = vec![Rational::zero(); d + 1];
    t_row[d] = -Rational::one();
    rows.push(t_row);
    let rays = extreme_rays(&rows, d + 1)?;
    let mut out = Vec::new();
    for y in rays {
        let t = &y[d];
        if t.is_zero() {
            return Err(PolytopeError::Unbounded);
        }
        out.push(y[..d].iter().map(|x| x / t).collect::<Vec<_>>());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Vertices of `{x : f·x <= 1 for f in functionals}`.
pub fn polar_vertices(functionals: &QMatrix) -> Result<Vec<Vec<Rational>>, PolytopeError> {
    let ones = vec![Rational::one(); functionals.len()];
    vertices(functionals, &ones)
}

/// Whether `p` lies in the convex hull of `points`.
pub fn in_hull(p: &[Rational], points: &[Vec<Rational>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let mut lp = LinearProgram::maximize(vec![Rational::zero(); points.len()]);
    for (i, pi) in p.iter().enumerate() {
        lp.eq(points.iter().map(|q| q[i].clone()).collect(), pi.clone());
    }
    lp.eq(vec![Rational::one(); points.len()], Rational::one());
    matches!(lp.solve(), LpOutcome::Optimal { .. })
}

/// The points of `points` that are extreme in their convex hull, first
/// occurrence order, duplicates removed.
pub fn extreme_points(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut uniq: Vec<Vec<Rational>> = Vec::new();
    for p in points {
        if !uniq.contains(p) {
            uniq.push(p.clone());
        }
    }
    (0..uniq.len())
        .filter(|&i| {
            let others: Vec<Vec<Rational>> =
                uniq.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
            !in_hull(&uniq[i], &others)
        })
        .map(|i| uniq[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(rows: &[&[i64]]) -> QMatrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn square_and_diamond() {
        let sq = q(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(polar_vertices(&sq).unwrap(), q(&[&[-1, -1], &[-1, 1], &[1, -1], &[1, 1]]));
        let diamond = q(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        assert_eq!(polar_vertices(&diamond).unwrap(), q(&[&[-1, 0], &[0, -1], &[0, 1], &[1, 0]]));
    }

    #[test]
    fn cube_and_octahedron_counts() {
        let mut cube = Vec::new();
        for i in 0..3 {
            for s in [1, -1] {
                let mut r = vec![int(0); 3];
                r[i] = int(s);
                cube.push(r);
            }
        }
        assert_eq!(polar_vertices(&cube).unwrap().len(), 8);
        let mut octa = Vec::new();
        for m in 0..8 {
            octa.push((0..3).map(|i| int(if m >> i & 1 == 1 { -1 } else { 1 })).collect());
        }
        assert_eq!(polar_vertices(&octa).unwrap().len(), 6);
    }

    #[test]
    fn off_origin_triangle_and_errors() {
        // x >= 1, y >= 1, x + y <= 4
        let a = q(&[&[-1, 0], &[0, -1], &[1, 1]]);
        let b = vec![int(-1), int(-1), int(4)];
        assert_eq!(vertices(&a, &b).unwrap(), q(&[&[1, 1], &[1, 3], &[3, 1]]));
        let half = q(&[&[1, 0]]);
        assert_eq!(vertices(&half, &[int(1)]), Err(PolytopeError::Unbounded));
        let empty = q(&[&[1], &[-1]]);
        assert!(vertices(&empty, &[int(-1), int(-1)]).unwrap().is_empty());
    }

    #[test]
    fn redundant_constraints_and_hulls() {
        let a = q(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, 1], &[2, 0]]);
        let b = vec![int(1), int(1), int(1), int(1), int(5), int(2)];
        assert_eq!(vertices(&a, &b).unwrap().len(), 4);
        let pts = q(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[2, 0]]);
        assert_eq!(extreme_points(&pts), q(&[&[0, 0], &[2, 0], &[0, 2]]));
        assert!(in_hull(&[ratio(1, 2), ratio(1, 2)], &pts));
        assert!(!in_hull(&[int(2), int(2)], &pts));
    }
}
