//! Dense rational matrices as `Vec<Vec<Rational>>` (row-major).

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type QMatrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> QMatrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> QMatrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn cols(m: &QMatrix) -> usize {
    m.first().map_or(0, Vec::len)
}

pub fn transpose(m: &QMatrix) -> QMatrix {
    let c = cols(m);
    (0..c).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn mul_vec(m: &QMatrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|r| dot(r, v)).collect()
}

/// `a · b`; `inner` is needed when `a` has no rows.
pub fn mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let bt = transpose(b);
    let bc = cols(b);
    a.iter()
        .map(|r| if bt.is_empty() { vec![Rational::zero(); bc] } else { bt.iter().map(|c| dot(r, c)).collect() })
        .collect()
}

pub fn sub(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn scale(a: &QMatrix, s: &Rational) -> QMatrix {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn vsub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vadd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vscale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * s).collect()
}

pub fn vneg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let c = cols(&a);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..c {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..c {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

pub fn inverse(m: &QMatrix) -> Option<QMatrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let aug: QMatrix = m.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Some solution of `m · x = b`, if one exists.
pub fn solve(m: &QMatrix, b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let aug: QMatrix = m.iter().zip(b).map(|(r, bi)| r.iter().cloned().chain([bi.clone()]).collect()).collect();
    let (red, piv) = rref(&aug);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &p) in piv.iter().enumerate() {
        x[p] = red[i][ncols].clone();
    }
    Some(x)
}

/// Basis of `{x : m·x = 0}`.
pub fn nullspace(m: &QMatrix, ncols: usize) -> Vec<Vec<Rational>> {
    let (red, piv) = rref(m);
    let free: Vec<usize> = (0..ncols).filter(|j| !piv.contains(j)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -red[i][f].clone();
            }
            v
        })
        .collect()
}
