//! Independent oracles and random instance generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ramsey_core::colorsearch::ColoringProblem;
use ramsey_core::linalg::{self, QMatrix};
use ramsey_core::metricfree::FiniteMetricSpace;
use ramsey_core::normgeo::{PolyhedralSpace, SpaceKind};
use ramsey_core::rational::{int, ratio, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stirling numbers of the second kind by `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
        }
    }
    t[n][k]
}

/// Bell numbers from the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// `[n choose k]_q` by the q-Pascal rule `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn gaussian_oracle(q: u32, k: usize, n: usize) -> BigUint {
    let mut t = vec![vec![BigUint::from(0u32); n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = BigUint::from(1u32);
        for j in 1..=i {
            let carry = if j <= i - 1 { &t[i - 1][j] * BigUint::from(q).pow(j as u32) } else { BigUint::from(0u32) };
            t[i][j] = &t[i - 1][j - 1] + carry;
        }
    }
    if k > n {
        BigUint::from(0u32)
    } else {
        t[n][k].clone()
    }
}

/// Exhaustive two-colouring oracle: the first bad colouring in the order of
/// binary counting with element 0 fixed to colour 0 (colour swaps are symmetric).
pub fn naive_bad_coloring(problem: &ColoringProblem) -> Option<Vec<u32>> {
    assert_eq!(problem.r, 2);
    let g = problem.ground.len();
    assert!((1..=32).contains(&g));
    let copies: Vec<Vec<u32>> = problem
        .copies
        .iter()
        .map(|c| c.fibers().iter().map(|f| f.iter().fold(0u32, |m, &e| m | 1 << e)).collect())
        .collect();
    let top: u64 = 1 << (g - 1);
    for half in 0..top {
        let c = (half as u32) << 1;
        let bad = copies.iter().all(|fibers| fibers.iter().any(|&f| c & f != 0 && c & f != f));
        if bad {
            return Some((0..g).map(|i| c >> i & 1).collect());
        }
    }
    None
}

fn small_int(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    int(r.random_range(lo..=hi))
}

/// A random symmetric polyhedral norm on `Q^k` from `k` to `k+2` integer functional pairs.
pub fn random_space(r: &mut ChaCha8Rng, k: usize) -> PolyhedralSpace {
    loop {
        let m = r.random_range(k..=k + 2);
        let f: QMatrix = (0..m)
            .map(|_| (0..k).map(|_| small_int(r, -3, 3)).collect())
            .filter(|v: &Vec<Rational>| !linalg::is_zero_vec(v))
            .collect();
        if let Ok(s) = PolyhedralSpace::from_functionals(f, SpaceKind::Custom) {
            return s;
        }
    }
}

/// A random `rows × cols` integer matrix of full column rank.
pub fn random_injective(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> QMatrix {
    loop {
        let t: QMatrix = (0..rows).map(|_| (0..cols).map(|_| small_int(r, -2, 2)).collect()).collect();
        if linalg::rank(&t) == cols {
            return t;
        }
    }
}

/// A random rational point of `radius·Ball(x)` with denominators dividing `den`.
pub fn random_ball_point(r: &mut ChaCha8Rng, x: &PolyhedralSpace, radius: &Rational, den: i64) -> Vec<Rational> {
    loop {
        let p: Vec<Rational> = (0..x.dim()).map(|_| ratio(r.random_range(-2 * den..=2 * den), den)).collect();
        if &x.norm(&p) <= radius {
            return p;
        }
    }
}

/// Random metric on `n` points: either distances in `[1, 2]` (always a
/// metric) or a line metric at random rational positions.
pub fn random_metric(r: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    let mut d = vec![vec![int(0); n]; n];
    if r.random_bool(0.5) {
        for i in 0..n {
            for j in i + 1..n {
                let v = ratio(4 + r.random_range(0..=4), 4);
                d[i][j] = v.clone();
                d[j][i] = v;
            }
        }
    } else {
        let mut pos: Vec<Rational> = Vec::new();
        while pos.len() < n {
            let p = ratio(r.random_range(0..40), 3);
            if !pos.contains(&p) {
                pos.push(p);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let diff = &pos[i] - &pos[j];
                d[i][j] = if diff < int(0) { -diff } else { diff };
            }
        }
    }
    FiniteMetricSpace::new(d, Some(r.random_range(0..n))).expect("generated metric is valid")
}
