//! Boolean partition matrices: `n×k` 0/1 matrices whose columns partition `n`.
//!
//! Columns are stored as `u64` bitsets, so `n <= 64`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orders::{enumerate_epi, RigidSurjection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolMatError {
    #[error("columns do not partition {n}: {reason}")]
    NotPartition { n: usize, reason: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not order-preserving (column minima must increase)")]
    NotOba,
    #[error("invalid permutation")]
    Permutation,
}

pub const MAX_ROWS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanMatrix {
    n: usize,
    columns: Vec<u64>,
}

impl BooleanMatrix {
    pub fn from_bits(n: usize, columns: Vec<u64>) -> Result<Self, BoolMatError> {
        let bad = |reason: &str| BoolMatError::NotPartition { n, reason: reason.into() };
        if n > MAX_ROWS {
            return Err(BoolMatError::Dimension(format!("{n} rows exceed {MAX_ROWS}")));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut seen = 0u64;
        for &c in &columns {
            if c == 0 {
                return Err(bad("empty column"));
            }
            if c & !full != 0 {
                return Err(bad("row index out of range"));
            }
            if c & seen != 0 {
                return Err(bad("columns overlap"));
            }
            seen |= c;
        }
        if seen != full {
            return Err(bad("columns do not cover every row"));
        }
        Ok(BooleanMatrix { n, columns })
    }

    pub fn new(n: usize, columns: &[Vec<usize>]) -> Result<Self, BoolMatError> {
        let mut bits = Vec::with_capacity(columns.len());
        for col in columns {
            let mut b = 0u64;
            for &i in col {
                if i >= n.min(MAX_ROWS) {
                    return Err(BoolMatError::NotPartition { n, reason: format!("row {i} out of range") });
                }
                b |= 1 << i;
            }
            bits.push(b);
        }
        Self::from_bits(n, bits)
    }

    pub fn identity(k: usize) -> Self {
        BooleanMatrix { n: k, columns: (0..k).map(|i| 1u64 << i).collect() }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column_bits(&self) -> &[u64] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| self.columns[j] >> i & 1 == 1).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.columns[j] >> i & 1 == 1
    }

    fn minima(&self) -> Vec<u32> {
        self.columns.iter().map(|c| c.trailing_zeros()).collect()
    }

    pub fn is_oba(&self) -> bool {
        self.minima().windows(2).all(|w| w[0] < w[1])
    }

    /// `self · P_σ`: column `j` of the result is column `σ(j)` of `self`.
    pub fn permute(&self, sigma: &PermutationMatrix) -> Result<Self, BoolMatError> {
        if sigma.len() != self.cols() {
            return Err(BoolMatError::Dimension(format!("{} columns, permutation of {}", self.cols(), sigma.len())));
        }
        Ok(BooleanMatrix { n: self.n, columns: sigma.perm.iter().map(|&s| self.columns[s]).collect() })
    }

    /// Boolean product `self · other` (`n×m` times `m×k`).
    pub fn mul(&self, other: &BooleanMatrix) -> Result<Self, BoolMatError> {
        if self.cols() != other.n {
            return Err(BoolMatError::Dimension(format!("{}x{} times {}x{}", self.n, self.cols(), other.n, other.cols())));
        }
        let columns = other
            .columns
            .iter()
            .map(|&b| (0..other.n).filter(|&i| b >> i & 1 == 1).fold(0u64, |acc, i| acc | self.columns[i]))
            .collect();
        Ok(BooleanMatrix { n: self.n, columns })
    }

    /// The Boolean-algebra embedding `P(k) -> P(n)`, indexed by bitmask of `k`.
    pub fn algebra_embedding(&self) -> Vec<u64> {
        let k = self.cols();
        (0..1u64 << k)
            .map(|s| (0..k).filter(|&j| s >> j & 1 == 1).fold(0u64, |acc, j| acc | self.columns[j]))
            .collect()
    }
}

/// Canonical order on subsets given as bitmasks: `s > t` iff `min(s △ t) ∈ s`.
pub fn canonical_cmp(s: u64, t: u64) -> Ordering {
    let d = s ^ t;
    if d == 0 {
        Ordering::Equal
    } else if s >> d.trailing_zeros() & 1 == 1 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

#[derive(Serialize, Deserialize)]
struct BoolRepr {
    n: usize,
    k: usize,
    columns: Vec<Vec<usize>>,
}

impl Serialize for BooleanMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let columns = (0..self.cols()).map(|j| self.column(j)).collect();
        BoolRepr { n: self.n, k: self.cols(), columns }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BooleanMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = BoolRepr::deserialize(d)?;
        if r.columns.len() != r.k {
            return Err(D::Error::custom("k differs from the number of columns"));
        }
        BooleanMatrix::new(r.n, &r.columns).map_err(D::Error::custom)
    }
}

/// A permutation `σ` of `0..k`, identified with the matrix having a 1 at `(σ(j), j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PermutationMatrix {
    perm: Vec<usize>,
}

impl TryFrom<Vec<usize>> for PermutationMatrix {
    type Error = BoolMatError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        PermutationMatrix::new(v)
    }
}

impl From<PermutationMatrix> for Vec<usize> {
    fn from(p: PermutationMatrix) -> Self {
        p.perm
    }
}

impl PermutationMatrix {
    pub fn new(perm: Vec<usize>) -> Result<Self, BoolMatError> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(BoolMatError::Permutation);
            }
            seen[p] = true;
        }
        Ok(PermutationMatrix { perm })
    }

    pub fn identity(k: usize) -> Self {
        PermutationMatrix { perm: (0..k).collect() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, j: usize) -> usize {
        self.perm[j]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        PermutationMatrix { perm: inv }
    }

    /// `self ∘ other`, i.e. `j ↦ self(other(j))`; as matrices `P_other · P_self`.
    pub fn compose(&self, other: &Self) -> Self {
        PermutationMatrix { perm: other.perm.iter().map(|&j| self.perm[j]).collect() }
    }

    /// All permutations of `0..k` in lexicographic order.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(PermutationMatrix { perm: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

/// The permutation sorting the columns of `b` by their minima, so that `b · π(b)` is order-preserving.
pub fn pi(b: &BooleanMatrix) -> PermutationMatrix {
    let mins = b.minima();
    let mut perm: Vec<usize> = (0..b.cols()).collect();
    perm.sort_by_key(|&j| mins[j]);
    PermutationMatrix { perm }
}

/// Column `i` is `f⁻¹(i)`.
pub fn epi_to_boolean(f: &RigidSurjection) -> BooleanMatrix {
    let mut cols = vec![0u64; f.codomain_size()];
    for (i, &v) in f.map().iter().enumerate() {
        cols[v as usize] |= 1 << i;
    }
    BooleanMatrix { n: f.domain_size(), columns: cols }
}

pub fn boolean_to_epi(b: &BooleanMatrix) -> Result<RigidSurjection, BoolMatError> {
    if !b.is_oba() {
        return Err(BoolMatError::NotOba);
    }
    let map = (0..b.n)
        .map(|i| b.columns.iter().position(|&c| c >> i & 1 == 1).unwrap() as u32)
        .collect();
    RigidSurjection::new(map, b.cols()).map_err(|_| BoolMatError::NotOba)
}

/// Every `n×k` partition matrix, ordered lexicographically by the row-to-column map.
pub fn enumerate_ba(n: usize, k: usize) -> Vec<BooleanMatrix> {
    if k == 0 || k > n || n > MAX_ROWS {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    loop {
        let mut cols = vec![0u64; k];
        for (i, &c) in map.iter().enumerate() {
            cols[c] |= 1 << i;
        }
        if cols.iter().all(|&c| c != 0) {
            out.push(BooleanMatrix { n, columns: cols });
        }
        let mut carry = true;
        for slot in map.iter_mut().rev() {
            *slot += 1;
            if *slot < k {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if carry {
            break;
        }
    }
    out
}

/// The order-preserving partition matrices, in the order of [`enumerate_epi`].
pub fn enumerate_oba(n: usize, k: usize) -> Vec<BooleanMatrix> {
    enumerate_epi(n, k).iter().map(epi_to_boolean).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oba_examples() {
        assert!(BooleanMatrix::identity(3).is_oba());
        let swap = BooleanMatrix::new(2, &[vec![1], vec![0]]).unwrap();
        assert!(!swap.is_oba());
        assert_eq!(pi(&swap).as_slice(), &[1, 0]);
        let b = BooleanMatrix::new(3, &[vec![0, 2], vec![1]]).unwrap();
        assert!(b.is_oba());
        assert_eq!(pi(&b), PermutationMatrix::identity(2));
    }

    #[test]
    fn rejects_non_partitions() {
        assert!(BooleanMatrix::new(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(BooleanMatrix::new(3, &[vec![0], vec![1]]).is_err());
        assert!(BooleanMatrix::new(2, &[vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn epi_round_trip_example() {
        let f = RigidSurjection::new(vec![0, 1, 0], 2).unwrap();
        let b = epi_to_boolean(&f);
        assert_eq!(b, BooleanMatrix::new(3, &[vec![0, 2], vec![1]]).unwrap());
        assert_eq!(boolean_to_epi(&b).unwrap(), f);
        let swap = BooleanMatrix::new(2, &[vec![1], vec![0]]).unwrap();
        assert_eq!(boolean_to_epi(&swap), Err(BoolMatError::NotOba));
    }

    #[test]
    fn counts_and_products() {
        assert_eq!(enumerate_ba(3, 2).len(), 6);
        assert_eq!(enumerate_oba(4, 2).len(), 7);
        assert_eq!(PermutationMatrix::all(3).len(), 6);
        let r = BooleanMatrix::new(3, &[vec![0], vec![1, 2]]).unwrap();
        let b = BooleanMatrix::new(2, &[vec![1], vec![0]]).unwrap();
        assert_eq!(r.mul(&b).unwrap().column_bits(), &[0b110, 0b001]);
    }

    #[test]
    fn equivariance_sample() {
        for b in enumerate_ba(3, 2) {
            for s in PermutationMatrix::all(2) {
                let lhs = pi(&b.permute(&s).unwrap());
                assert_eq!(lhs, s.inverse().compose(&pi(&b)));
            }
        }
    }

    #[test]
    fn json_form() {
        let b = BooleanMatrix::new(3, &[vec![0, 2], vec![1]]).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"n":3,"k":2,"columns":[[0,2],[1]]}"#);
        assert_eq!(serde_json::from_str::<BooleanMatrix>(&s).unwrap(), b);
        let emb = BooleanMatrix::identity(2).algebra_embedding();
        assert_eq!(emb, vec![0, 1, 2, 3]);
        assert_eq!(canonical_cmp(0b01, 0b10), Ordering::Greater);
    }
}
