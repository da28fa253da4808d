//! Finite linear orders, rigid surjections and the `FIN_k` tetris calculus.
//!
//! A rigid surjection `f: n -> k` between naturally ordered finite sets is a
//! surjection whose preimage minima appear in codomain order. Written as an
//! array these are exactly the restricted growth strings with maximum `k - 1`,
//! which is how [`enumerate_epi`] generates them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid height: {0}")]
    InvalidHeight(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Order on the elements `0..p` of a prime field, given as a rank table.
///
/// The natural order `0 < 1 < ... < p-1` is the default; any order used for
/// antilexicographic comparisons must start with `0 < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldOrder {
    rank: Vec<u32>,
}

impl FieldOrder {
    pub fn natural(p: u32) -> Self {
        FieldOrder { rank: (0..p).collect() }
    }

    /// Builds an order from the sequence of elements listed smallest first.
    pub fn from_sequence(seq: &[u32]) -> Result<Self, OrderError> {
        let p = seq.len();
        let mut rank = vec![u32::MAX; p];
        for (r, &e) in seq.iter().enumerate() {
            let e = e as usize;
            if e >= p || rank[e] != u32::MAX {
                return Err(OrderError::Domain("field order is not a permutation".into()));
            }
            rank[e] = r as u32;
        }
        if p >= 2 && (seq[0] != 0 || seq[1] != 1) {
            return Err(OrderError::Domain("field order must start with 0 < 1".into()));
        }
        Ok(FieldOrder { rank })
    }

    pub fn modulus(&self) -> u32 {
        self.rank.len() as u32
    }

    pub fn rank_of(&self, e: u32) -> u32 {
        self.rank[e as usize]
    }

    /// Element with the given rank.
    pub fn element_at(&self, r: u32) -> u32 {
        self.rank.iter().position(|&x| x == r).expect("rank in range") as u32
    }
}

/// Compares two vectors antilexicographically: the highest index decides first.
pub fn compare_antilex(x: &[u32], y: &[u32], order: &FieldOrder) -> Result<Ordering, OrderError> {
    if x.len() != y.len() {
        return Err(OrderError::Dimension(format!(
            "vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    let p = order.modulus();
    if let Some(&bad) = x.iter().chain(y).find(|&&e| e >= p) {
        return Err(OrderError::Domain(format!("{bad} is not an element of F_{p}")));
    }
    for i in (0..x.len()).rev() {
        match order.rank_of(x[i]).cmp(&order.rank_of(y[i])) {
            Ordering::Equal => continue,
            other => return Ok(other),
        }
    }
    Ok(Ordering::Equal)
}

/// A finite linear order `0 < 1 < ... < size-1`, optionally carrying labels.
///
/// With labels, element `i` stands for `labels[i]` and the labels are strictly
/// increasing for whatever comparator built them (for `F_p^k` that is the
/// antilexicographic order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOrder {
    size: usize,
    labels: Option<Vec<Vec<u32>>>,
}

impl LinearOrder {
    pub fn natural(size: usize) -> Self {
        LinearOrder { size, labels: None }
    }

    /// `F_p^k` listed in antilexicographic order under `order`.
    pub fn antilex(order: &FieldOrder, k: usize) -> Self {
        let p = order.modulus() as usize;
        let total = p.pow(k as u32);
        // The i-th vector in antilex order has digit j (base p, least significant
        // first) equal to the rank of coordinate j.
        let labels = (0..total)
            .map(|mut idx| {
                (0..k)
                    .map(|_| {
                        let r = (idx % p) as u32;
                        idx /= p;
                        order.element_at(r)
                    })
                    .collect()
            })
            .collect();
        LinearOrder { size: total, labels: Some(labels) }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[Vec<u32>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&[u32]> {
        self.labels.as_ref().map(|l| l[i].as_slice())
    }

    /// Position of a label, if this order is labelled and contains it.
    pub fn position(&self, label: &[u32]) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }
}

/// True iff `f` is onto `0..k` and `min f^{-1}(s)` increases with `s`.
pub fn is_rigid_surjection(f: &[u32], k: usize) -> bool {
    // Scanning left to right, the first occurrences must be 0, 1, 2, ... in order.
    let mut next = 0usize;
    for &v in f {
        let v = v as usize;
        if v >= k || v > next {
            return false;
        }
        if v == next {
            next += 1;
        }
    }
    next == k
}

/// Rigid surjection from the naturally ordered `n` onto a `k`-element order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RigidSurjection {
    codomain: usize,
    map: Vec<u32>,
}

impl RigidSurjection {
    pub fn new(map: Vec<u32>, codomain: usize) -> Result<Self, OrderError> {
        if !is_rigid_surjection(&map, codomain) {
            return Err(OrderError::Domain(format!("{map:?} is not a rigid surjection onto {codomain}")));
        }
        Ok(RigidSurjection { codomain, map })
    }

    pub fn identity(n: usize) -> Self {
        RigidSurjection { codomain: n, map: (0..n as u32).collect() }
    }

    pub fn domain_size(&self) -> usize {
        self.map.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }
}

impl Serialize for RigidSurjection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RigidSurjection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = Vec::<u32>::deserialize(d)?;
        let k = map.iter().max().map_or(0, |&m| m as usize + 1);
        RigidSurjection::new(map, k).map_err(serde::de::Error::custom)
    }
}

/// All rigid surjections `n -> k`, lexicographic on the map array.
pub fn enumerate_epi(n: usize, k: usize) -> Vec<RigidSurjection> {
    let mut out = Vec::new();
    if k == 0 || n < k {
        return out;
    }
    let mut buf = vec![0u32; n];
    fn rec(pos: usize, used: usize, k: usize, buf: &mut Vec<u32>, out: &mut Vec<RigidSurjection>) {
        let n = buf.len();
        if pos == n {
            if used == k {
                out.push(RigidSurjection { codomain: k, map: buf.clone() });
            }
            return;
        }
        // not enough positions left to introduce the remaining values
        if k - used > n - pos {
            return;
        }
        let top = used.min(k - 1);
        for v in 0..=top {
            buf[pos] = v as u32;
            rec(pos + 1, used.max(v + 1), k, buf, out);
        }
    }
    rec(0, 0, k, &mut buf, &mut out);
    out
}

/// Pointwise composition `f ∘ g` of `g: n -> m` and `f: m -> k`.
pub fn compose_epi(g: &RigidSurjection, f: &RigidSurjection) -> Result<RigidSurjection, OrderError> {
    if g.codomain != f.domain_size() {
        return Err(OrderError::Dimension(format!(
            "cannot compose: codomain {} vs domain {}",
            g.codomain,
            f.domain_size()
        )));
    }
    let map = g.map.iter().map(|&i| f.map[i as usize]).collect();
    Ok(RigidSurjection { codomain: f.codomain, map })
}

/// An element of `FIN_k(n)`: a map `n -> {0..k}` attaining `k`.
///
/// Height 0 is the zero map, produced by tetris on height-1 maps; it is
/// representable but flagged by [`FinMap::is_degenerate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FinMapRepr", into = "FinMapRepr")]
pub struct FinMap {
    k: u32,
    values: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FinMapRepr {
    k: u32,
    values: Vec<u32>,
}

impl TryFrom<FinMapRepr> for FinMap {
    type Error = OrderError;
    fn try_from(r: FinMapRepr) -> Result<Self, Self::Error> {
        FinMap::new(r.k, r.values)
    }
}

impl From<FinMap> for FinMapRepr {
    fn from(f: FinMap) -> Self {
        FinMapRepr { k: f.k, values: f.values }
    }
}

impl FinMap {
    pub fn new(k: u32, values: Vec<u32>) -> Result<Self, OrderError> {
        let max = values.iter().copied().max().unwrap_or(0);
        if max != k {
            return Err(OrderError::InvalidHeight(format!("max entry {max} differs from height {k}")));
        }
        Ok(FinMap { k, values })
    }

    pub fn height(&self) -> u32 {
        self.k
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, &v)| v > 0).map(|(i, _)| i)
    }
}

pub fn tetris(f: &FinMap) -> Result<FinMap, OrderError> {
    if f.k == 0 {
        return Err(OrderError::InvalidHeight("tetris of a height-0 map".into()));
    }
    let values = f.values.iter().map(|&v| v.saturating_sub(1)).collect();
    Ok(FinMap { k: f.k - 1, values })
}

/// Pointwise `max(f(i) - t, 0)` without the height check, for `t <= k`.
fn lower(values: &[u32], t: u32) -> impl Iterator<Item = u32> + '_ {
    values.iter().map(move |&v| v.saturating_sub(t))
}

/// All tuples in `{0..k}^l` attaining `k`, lexicographically.
pub fn enumerate_fin(k: u32, l: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if l == 0 {
        return out;
    }
    let base = k as u64 + 1;
    let total = base.pow(l as u32);
    for mut idx in 0..total {
        let mut t = vec![0u32; l];
        for slot in t.iter_mut().rev() {
            *slot = (idx % base) as u32;
            idx /= base;
        }
        if t.contains(&k) {
            out.push(t);
        }
    }
    out
}

/// The combinatorial space spanned by disjointly supported blocks of height `k`:
/// every `Σ_i T^{k-j_i}(f_i)` with `(j_i) ∈ FIN_k(l)`, in lexicographic order of `(j_i)`.
pub fn combinatorial_space(blocks: &[FinMap], k: u32) -> Result<Vec<FinMap>, OrderError> {
    let Some(first) = blocks.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    let mut seen = vec![false; n];
    for b in blocks {
        if b.len() != n {
            return Err(OrderError::Dimension("blocks of different lengths".into()));
        }
        if b.k != k {
            return Err(OrderError::InvalidHeight(format!("block of height {} in a height-{k} space", b.k)));
        }
        for i in b.support() {
            if seen[i] {
                return Err(OrderError::Domain(format!("blocks overlap at coordinate {i}")));
            }
            seen[i] = true;
        }
    }
    let mut out = Vec::new();
    for js in enumerate_fin(k, blocks.len()) {
        let mut values = vec![0u32; n];
        for (b, &j) in blocks.iter().zip(&js) {
            for (slot, v) in values.iter_mut().zip(lower(&b.values, k - j)) {
                *slot += v;
            }
        }
        out.push(FinMap { k, values });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_epi_count(n: usize, k: usize) -> usize {
        (0..k.pow(n as u32))
            .filter(|&mut_idx| {
                let mut idx = mut_idx;
                let f: Vec<u32> = (0..n)
                    .map(|_| {
                        let v = (idx % k) as u32;
                        idx /= k;
                        v
                    })
                    .collect();
                let surj = (0..k as u32).all(|s| f.contains(&s));
                let mins: Vec<usize> =
                    (0..k as u32).filter_map(|s| f.iter().position(|&v| v == s)).collect();
                surj && mins.windows(2).all(|w| w[0] < w[1])
            })
            .count()
    }

    #[test]
    fn antilex_examples() {
        let f2 = FieldOrder::natural(2);
        assert_eq!(compare_antilex(&[0, 0], &[1, 0], &f2).unwrap(), Ordering::Less);
        assert_eq!(compare_antilex(&[1, 0], &[0, 1], &f2).unwrap(), Ordering::Less);
        assert!(compare_antilex(&[0], &[0, 1], &f2).is_err());
        // u_0 is right after 0 in F_2^n
        let order = LinearOrder::antilex(&f2, 4);
        assert_eq!(order.label(0).unwrap(), &[0, 0, 0, 0]);
        assert_eq!(order.label(1).unwrap(), &[1, 0, 0, 0]);
    }

    #[test]
    fn antilex_labels_sorted_for_custom_order() {
        let ord = FieldOrder::from_sequence(&[0, 1, 4, 2, 3]).unwrap();
        let lo = LinearOrder::antilex(&ord, 2);
        let labels = lo.labels().unwrap();
        assert_eq!(labels.len(), 25);
        for w in labels.windows(2) {
            assert_eq!(compare_antilex(&w[0], &w[1], &ord).unwrap(), Ordering::Less);
        }
        assert!(FieldOrder::from_sequence(&[1, 0, 2]).is_err());
    }

    #[test]
    fn rigid_examples() {
        assert!(is_rigid_surjection(&[0, 1, 2, 3], 4));
        assert!(is_rigid_surjection(&[0, 1, 0], 2));
        assert!(!is_rigid_surjection(&[1, 0], 2));
        assert!(!is_rigid_surjection(&[0, 0], 2));
    }

    #[test]
    fn epi_counts_match_brute_force() {
        assert_eq!(enumerate_epi(5, 5).len(), 1);
        assert_eq!(enumerate_epi(3, 2).len(), 3);
        assert_eq!(enumerate_epi(4, 2).len(), 7);
        assert!(enumerate_epi(2, 3).is_empty());
        for n in 1..=6 {
            for k in 1..=n {
                assert_eq!(enumerate_epi(n, k).len(), brute_epi_count(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn epi_is_lex_sorted_and_distinct() {
        let all = enumerate_epi(6, 3);
        for w in all.windows(2) {
            assert!(w[0].map() < w[1].map());
        }
    }

    #[test]
    fn compose_examples() {
        let g = RigidSurjection::new(vec![0, 1, 1], 2).unwrap();
        let id2 = RigidSurjection::identity(2);
        assert_eq!(compose_epi(&g, &id2).unwrap(), g);
        let g = RigidSurjection::new(vec![0, 1, 2, 1], 3).unwrap();
        let f = RigidSurjection::new(vec![0, 1, 1], 2).unwrap();
        assert_eq!(compose_epi(&g, &f).unwrap().map(), &[0, 1, 1, 1]);
        assert!(compose_epi(&f, &g).is_err());
    }

    #[test]
    fn tetris_examples() {
        let f = FinMap::new(2, vec![2, 0, 1]).unwrap();
        assert_eq!(tetris(&f).unwrap().values(), &[1, 0, 0]);
        let c = FinMap::new(3, vec![3; 4]).unwrap();
        assert_eq!(tetris(&c).unwrap().values(), &[2; 4]);
        let g = FinMap::new(1, vec![1, 1, 0]).unwrap();
        let z = tetris(&g).unwrap();
        assert_eq!(z.values(), &[0, 0, 0]);
        assert!(z.is_degenerate());
        assert!(tetris(&z).is_err());
        assert!(FinMap::new(2, vec![1, 0]).is_err());
    }

    #[test]
    fn combinatorial_space_examples() {
        let f0 = FinMap::new(1, vec![1, 0, 0]).unwrap();
        assert_eq!(combinatorial_space(std::slice::from_ref(&f0), 1).unwrap(), vec![f0.clone()]);
        let f1 = FinMap::new(1, vec![0, 1, 1]).unwrap();
        let sp = combinatorial_space(&[f0.clone(), f1.clone()], 1).unwrap();
        let vals: Vec<&[u32]> = sp.iter().map(|f| f.values()).collect();
        assert_eq!(vals, vec![&[0, 1, 1][..], &[1, 0, 0], &[1, 1, 1]]);
        let f = FinMap::new(2, vec![2, 2]).unwrap();
        assert_eq!(combinatorial_space(std::slice::from_ref(&f), 2).unwrap(), vec![f]);
        let overlap = FinMap::new(1, vec![1, 1, 0]).unwrap();
        assert!(matches!(combinatorial_space(&[f0, overlap], 1), Err(OrderError::Domain(_))));
    }

    #[test]
    fn serde_shapes() {
        let f = RigidSurjection::new(vec![0, 1, 0], 2).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), "[0,1,0]");
        let back: RigidSurjection = serde_json::from_str("[0,1,0]").unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<RigidSurjection>("[1,0]").is_err());
        let g = FinMap::new(2, vec![2, 0, 1]).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"k":2,"values":[2,0,1]}"#);
        assert!(serde_json::from_str::<FinMap>(r#"{"k":3,"values":[2,0,1]}"#).is_err());
    }
}
