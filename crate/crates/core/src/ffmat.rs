//! Exact matrices over prime fields `F_p`.
//!
//! Everything echelon-related derives from the single [`PrimeFieldMatrix::rref`]
//! routine. RCEF means "transpose is in RREF", so the pivot rows of `Aᵗ` are the
//! pivot columns of `A`.
//!
//! The factor map `τ` sends a full-column-rank `n×k` matrix `A` to the unique
//! invertible `k×k` matrix with `A·τ(A)` in RCEF. It is computed by
//! column-reducing `A` and accumulating the elementary column operations.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orders::{LinearOrder, RigidSurjection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("modulus mismatch: {0} vs {1}")]
    Modulus(u32, u32),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Largest modulus accepted; keeps products of residues inside `u64`.
pub const MAX_MODULUS: u32 = 1 << 16;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u32) -> Result<(), MatrixError> {
    if p > MAX_MODULUS || !is_prime(p) {
        return Err(MatrixError::NotPrime(p));
    }
    Ok(())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and a != 0
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Dense row-major matrix over `F_p` with entries in `[0, p)`.
pub struct PrimeFieldMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
    rank: OnceLock<usize>,
}

impl Clone for PrimeFieldMatrix {
    fn clone(&self) -> Self {
        let rank = OnceLock::new();
        if let Some(&r) = self.rank.get() {
            let _ = rank.set(r);
        }
        PrimeFieldMatrix { p: self.p, rows: self.rows, cols: self.cols, entries: self.entries.clone(), rank }
    }
}

impl PartialEq for PrimeFieldMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for PrimeFieldMatrix {}

impl Hash for PrimeFieldMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        self.entries.hash(state);
    }
}

impl PartialOrd for PrimeFieldMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeFieldMatrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p, self.rows, self.cols, &self.entries).cmp(&(other.p, other.rows, other.cols, &other.entries))
    }
}

impl fmt::Debug for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.p, self.to_rows())
    }
}

impl fmt::Display for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl PrimeFieldMatrix {
    /// Builds a matrix, reducing every entry mod `p`.
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self, MatrixError> {
        check_prime(p)?;
        if entries.len() != rows * cols {
            return Err(MatrixError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(Self::raw(p, rows, cols, entries))
    }

    fn raw(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Self {
        PrimeFieldMatrix { p, rows, cols, entries, rank: OnceLock::new() }
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Dimension("ragged rows".into()));
        }
        Self::new(p, r, c, rows.concat())
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<Self, MatrixError> {
        check_prime(p)?;
        Ok(Self::raw(p, rows, cols, vec![0; rows * cols]))
    }

    pub fn identity(p: u32, n: usize) -> Result<Self, MatrixError> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut e = vec![0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                e[j * self.rows + i] = self.get(i, j);
            }
        }
        let t = Self::raw(self.p, self.cols, self.rows, e);
        if let Some(&r) = self.rank.get() {
            let _ = t.rank.set(r);
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.p != other.p {
            return Err(MatrixError::Modulus(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p as u64;
        let mut e = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for l in 0..self.cols {
                    acc += self.get(i, l) as u64 * other.get(l, j) as u64;
                }
                e[i * other.cols + j] = (acc % p) as u32;
            }
        }
        Ok(Self::raw(self.p, self.rows, other.cols, e))
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_rows(None);
        m.rank = OnceLock::new();
        let _ = m.rank.set(pivots.len());
        let _ = self.rank.set(pivots.len());
        (m, pivots)
    }

    pub fn rref(&self) -> Self {
        self.rref_with_pivots().0
    }

    /// Gauss-Jordan elimination in place. When `track` is given, every row
    /// operation is applied to it as well (it must have `self.rows` rows).
    fn reduce_rows(&mut self, mut track: Option<&mut PrimeFieldMatrix>) -> Vec<usize> {
        let p = self.p as u64;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                self.swap_rows(pr, r);
                if let Some(t) = track.as_deref_mut() {
                    t.swap_rows(pr, r);
                }
            }
            let inv = inv_mod(self.get(r, c), self.p) as u64;
            self.scale_row(r, inv);
            if let Some(t) = track.as_deref_mut() {
                t.scale_row(r, inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c) as u64;
                if f != 0 {
                    let factor = (p - f) % p;
                    self.add_row_multiple(i, r, factor);
                    if let Some(t) = track.as_deref_mut() {
                        t.add_row_multiple(i, r, factor);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: u64) {
        let p = self.p as u64;
        for j in 0..self.cols {
            let e = &mut self.entries[r * self.cols + j];
            *e = (*e as u64 * s % p) as u32;
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: u64) {
        let p = self.p as u64;
        for j in 0..self.cols {
            let s = self.entries[source * self.cols + j] as u64;
            let e = &mut self.entries[target * self.cols + j];
            *e = ((*e as u64 + factor * s) % p) as u32;
        }
    }

    pub fn rank(&self) -> usize {
        *self.rank.get_or_init(|| {
            let mut m = self.clone();
            m.reduce_rows(None).len()
        })
    }

    pub fn is_rref(&self) -> bool {
        self.rref() == *self
    }

    pub fn is_rcef(&self) -> bool {
        self.transpose().is_rref()
    }

    pub fn has_full_column_rank(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::Dimension("inverse of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut inv = Self::identity(self.p, self.rows)?;
        let pivots = m.reduce_rows(Some(&mut inv));
        if pivots.len() != self.rows {
            return Err(MatrixError::Rank("matrix is singular".into()));
        }
        Ok(inv)
    }

    /// Dense text form: one row per line (or comma-separated), entries either
    /// whitespace-separated or packed as single digits.
    pub fn parse_rows(p: u32, text: &str) -> Result<Self, MatrixError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.split(['\n', ',', ';']).enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse = |tok: &str| {
                tok.parse::<u32>()
                    .map_err(|_| MatrixError::Parse(format!("row {}: bad entry {tok:?}", lineno + 1)))
            };
            let row: Vec<u32> = if line.contains(char::is_whitespace) {
                line.split_whitespace().map(parse).collect::<Result<_, _>>()?
            } else {
                line.chars().map(|c| parse(&c.to_string())).collect::<Result<_, _>>()?
            };
            if let Some(&bad) = row.iter().find(|&&e| e >= p) {
                return Err(MatrixError::Parse(format!("row {}: entry {bad} not reduced mod {p}", lineno + 1)));
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(MatrixError::Parse("empty matrix".into()));
        }
        Self::from_rows(p, &rows)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
}

impl Serialize for PrimeFieldMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr { p: self.p, rows: self.rows, cols: self.cols, entries: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrimeFieldMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.rows || r.entries.iter().any(|row| row.len() != r.cols) {
            return Err(D::Error::custom("entries do not match rows/cols"));
        }
        if r.entries.iter().flatten().any(|&e| e >= r.p) {
            return Err(D::Error::custom("entries must be reduced mod p"));
        }
        PrimeFieldMatrix::from_rows(r.p, &r.entries)
            .or_else(|e| if r.rows == 0 { PrimeFieldMatrix::zeros(r.p, 0, r.cols) } else { Err(e) })
            .map_err(D::Error::custom)
    }
}

/// An invertible square matrix with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GLElement {
    matrix: PrimeFieldMatrix,
    inverse: PrimeFieldMatrix,
}

impl GLElement {
    pub fn new(matrix: PrimeFieldMatrix) -> Result<Self, MatrixError> {
        let inverse = matrix.inverse()?;
        Ok(GLElement { matrix, inverse })
    }

    pub fn identity(p: u32, k: usize) -> Result<Self, MatrixError> {
        let id = PrimeFieldMatrix::identity(p, k)?;
        Ok(GLElement { matrix: id.clone(), inverse: id })
    }

    pub fn matrix(&self) -> &PrimeFieldMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &PrimeFieldMatrix {
        &self.inverse
    }

    pub fn inverted(&self) -> GLElement {
        GLElement { matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    pub fn size(&self) -> usize {
        self.matrix.rows
    }
}

impl Serialize for GLElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

/// `A = red · τ⁻¹` with `red = A·τ` in RCEF.
#[derive(Clone, Debug, Serialize)]
pub struct RcefDecomposition {
    pub red: PrimeFieldMatrix,
    pub tau: GLElement,
}

/// Splits a full-column-rank matrix into its RCEF and the factor `τ(A)`.
pub fn rcef_decompose(a: &PrimeFieldMatrix) -> Result<RcefDecomposition, MatrixError> {
    let k = a.cols;
    if a.rank() != k {
        return Err(MatrixError::Rank(format!("rank {} < {k} columns", a.rank())));
    }
    // Row-reduce Aᵗ while tracking E with E·Aᵗ = rref(Aᵗ); then A·Eᵗ = red.
    let mut at = a.transpose();
    let mut e = PrimeFieldMatrix::identity(a.p, k)?;
    at.reduce_rows(Some(&mut e));
    at.rank = OnceLock::new();
    let _ = at.rank.set(k);
    let red = at.transpose();
    let tau_m = e.transpose();
    let tau = GLElement::new(tau_m)?;
    Ok(RcefDecomposition { red, tau })
}

/// `τ(A)` alone.
pub fn tau(a: &PrimeFieldMatrix) -> Result<GLElement, MatrixError> {
    rcef_decompose(a).map(|d| d.tau)
}

/// Two-sided factorisation `A = A0 · Γ · A1ᵗ` of a square rank-`k` matrix.
#[derive(Clone, Debug, Serialize)]
pub struct Tau2 {
    pub gamma: GLElement,
    pub a0: PrimeFieldMatrix,
    pub a1: PrimeFieldMatrix,
}

/// RCEF basis (n×k) of the column space of `a`, plus its pivot rows.
fn column_space_rcef(a: &PrimeFieldMatrix) -> (PrimeFieldMatrix, Vec<usize>) {
    let (r, pivots) = a.transpose().rref_with_pivots();
    let k = pivots.len();
    let basis = PrimeFieldMatrix::raw(a.p, k, r.cols, r.entries[..k * r.cols].to_vec());
    (basis.transpose(), pivots)
}

/// Rows of `m` at the given indices.
fn select_rows(m: &PrimeFieldMatrix, idx: &[usize]) -> PrimeFieldMatrix {
    let e = idx.iter().flat_map(|&i| m.row(i).to_vec()).collect();
    PrimeFieldMatrix::raw(m.p, idx.len(), m.cols, e)
}

pub fn tau2(a: &PrimeFieldMatrix) -> Result<Tau2, MatrixError> {
    if a.rows != a.cols {
        return Err(MatrixError::Dimension("tau2 needs a square matrix".into()));
    }
    let k = a.rank();
    if k == 0 {
        return Err(MatrixError::Rank("degenerate rank 0".into()));
    }
    let (a0, piv0) = column_space_rcef(a);
    let (a1, piv1) = column_space_rcef(&a.transpose());
    // A0 restricted to its pivot rows is Id_k, likewise A1; hence Γ is the
    // pivot-row/pivot-column minor of A.
    let minor = select_rows(a, &piv0).transpose();
    let gamma_m = select_rows(&minor, &piv1).transpose();
    let gamma = GLElement::new(gamma_m)?;
    let check = a0.mul(gamma.matrix())?.mul(&a1.transpose())?;
    debug_assert_eq!(&check, a);
    if &check != a {
        return Err(MatrixError::Rank("two-sided factorisation failed".into()));
    }
    Ok(Tau2 { gamma, a0, a1 })
}

/// Matrix whose rows are the labels `f(j)` of a rigid surjection onto `F_p^k`.
pub fn phi(f: &RigidSurjection, codomain: &LinearOrder, p: u32, k: usize) -> Result<PrimeFieldMatrix, MatrixError> {
    let labels = codomain
        .labels()
        .ok_or_else(|| MatrixError::Domain("codomain carries no vector labels".into()))?;
    if labels.len() != (p as usize).pow(k as u32) || labels.iter().any(|l| l.len() != k) {
        return Err(MatrixError::Domain(format!("codomain is not all of F_{p}^{k}")));
    }
    if f.codomain_size() != labels.len() {
        return Err(MatrixError::Domain("surjection codomain size differs from |F^k|".into()));
    }
    let rows: Vec<Vec<u32>> = f.map().iter().map(|&v| labels[v as usize].clone()).collect();
    let m = PrimeFieldMatrix::from_rows(p, &rows)?;
    if m.rows == 0 {
        return PrimeFieldMatrix::zeros(p, 0, k);
    }
    Ok(m)
}

/// Largest `p^n` that [`rref_characterization`] will enumerate.
pub const CHARACTERIZATION_BUDGET: usize = 1 << 12;

/// Both sides of the RREF characterisation for a full-rank `k×n` matrix:
/// `(is RREF, (x ↦ A·x) is a rigid surjection F^n → F^k in antilex order and every u_i is a column)`.
pub fn rref_characterization(a: &PrimeFieldMatrix) -> Result<(bool, bool), MatrixError> {
    let (k, n, p) = (a.rows, a.cols, a.p as usize);
    if a.rank() != k {
        return Err(MatrixError::Rank(format!("need full row rank {k}, got {}", a.rank())));
    }
    let total = p
        .checked_pow(n as u32)
        .filter(|&t| t <= CHARACTERIZATION_BUDGET)
        .ok_or_else(|| MatrixError::Budget(format!("{p}^{n} vectors exceed {CHARACTERIZATION_BUDGET}")))?;
    let lhs = a.is_rref();

    // With the natural element order the antilex index of v is Σ v_i p^i.
    let map: Vec<u32> = (0..total)
        .map(|mut idx| {
            let mut v = vec![0u64; n];
            for slot in v.iter_mut() {
                *slot = (idx % p) as u64;
                idx /= p;
            }
            let mut out = 0usize;
            for i in (0..k).rev() {
                let s: u64 = (0..n).map(|j| a.get(i, j) as u64 * v[j]).sum::<u64>() % p as u64;
                out = out * p + s as usize;
            }
            out as u32
        })
        .collect();
    let rigid = crate::orders::is_rigid_surjection(&map, p.pow(k as u32));
    let units = (0..k).all(|i| {
        (0..n).any(|j| (0..k).all(|l| a.get(l, j) == u32::from(l == i)))
    });
    Ok((lhs, rigid && units))
}

/// All `rows×cols` matrices of full column rank, lexicographic on entries.
pub fn enumerate_full_rank(p: u32, rows: usize, cols: usize, budget: usize) -> Result<Vec<PrimeFieldMatrix>, MatrixError> {
    check_prime(p)?;
    let cells = rows * cols;
    let total = (p as usize)
        .checked_pow(cells as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| MatrixError::Budget(format!("{p}^{cells} matrices exceed {budget}")))?;
    let mut out = Vec::new();
    let mut e = vec![0u32; cells];
    for _ in 0..total {
        let m = PrimeFieldMatrix::raw(p, rows, cols, e.clone());
        if m.rank() == cols {
            out.push(m);
        }
        // odometer, last entry fastest
        for slot in e.iter_mut().rev() {
            *slot += 1;
            if *slot < p {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

/// Default cap on enumerations of matrices and subspaces.
pub const DEFAULT_BUDGET: usize = 1 << 22;

/// Number of `k`-dimensional subspaces of `F_p^n`.
pub fn gaussian_binomial(p: u32, k: usize, n: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// One RCEF representative (`n×k`, full rank) per `k`-dimensional subspace of `F_p^n`.
///
/// Ordered by pivot set (lexicographic), then by free entries.
pub fn enumerate_grassmannian(p: u32, k: usize, n: usize, budget: usize) -> Result<Vec<PrimeFieldMatrix>, MatrixError> {
    check_prime(p)?;
    if k == 0 || k > n {
        return Err(MatrixError::Domain(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let count = gaussian_binomial(p, k, n);
    if count > BigUint::from(budget) {
        return Err(MatrixError::Budget(format!("|Gr({k}, F_{p}^{n})| = {count} exceeds {budget}")));
    }
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // Free cells of the k×n RREF: row i, column j > pivot_i, j not a pivot.
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = pivots.clone();
                (pivots[i] + 1..n).filter(move |j| !pv.contains(j)).map(move |j| (i, j))
            })
            .collect();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut e = vec![0u32; k * n];
            for (i, &c) in pivots.iter().enumerate() {
                e[i * n + c] = 1;
            }
            for (&(i, j), &v) in free.iter().zip(&vals) {
                e[i * n + j] = v;
            }
            let rref = PrimeFieldMatrix::raw(p, k, n, e);
            let _ = rref.rank.set(k);
            out.push(rref.transpose());
            let mut carry = true;
            for slot in vals.iter_mut().rev() {
                *slot += 1;
                if *slot < p {
                    carry = false;
                    break;
                }
                *slot = 0;
            }
            if carry {
                break;
            }
        }
    }
    Ok(out)
}

/// k-subsets of 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `|GL_k(F_p)| = Π_{i<k} (p^k - p^i)`.
pub fn gl_order(p: u32, k: usize) -> BigUint {
    let q = BigUint::from(p);
    let pk = q.pow(k as u32);
    (0..k).map(|i| &pk - q.pow(i as u32)).product()
}
