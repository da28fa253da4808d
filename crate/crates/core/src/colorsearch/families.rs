//! Instance builders for the structure families.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{exists_bad_coloring_with, ColoringProblem, CopyDescriptor, SearchConfig, SearchError, SearchOutcome, Status};
use super::{MAX_GROUND, MAX_MEMBERSHIPS};
use crate::boolmat::{enumerate_ba, enumerate_oba, pi};
use crate::ffmat::{enumerate_full_rank, enumerate_grassmannian, rcef_decompose, tau, tau2, PrimeFieldMatrix};
use crate::orders::{compose_epi, enumerate_epi, enumerate_fin, FinMap};

fn params(msg: impl Into<String>) -> SearchError {
    SearchError::Params(msg.into())
}

fn budget_err<E: std::fmt::Display>(e: E) -> SearchError {
    SearchError::Budget(e.to_string())
}

fn check_sizes(ground: usize, copies: &[CopyDescriptor]) -> Result<(), SearchError> {
    if ground > MAX_GROUND {
        return Err(SearchError::Budget(format!("ground set of {ground} exceeds {MAX_GROUND}")));
    }
    let members: usize = copies.iter().map(|c| c.elements().len()).sum();
    if members > MAX_MEMBERSHIPS {
        return Err(SearchError::Budget(format!("{members} copy memberships exceed {MAX_MEMBERSHIPS}")));
    }
    Ok(())
}

/// Matrix or map enumeration cap, shared by all builders.
const ENUM_BUDGET: usize = 1 << 20;

struct Indexer {
    ground: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Indexer {
    fn new(ground: Vec<Vec<u32>>) -> Self {
        let index = ground.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        Indexer { ground, index }
    }

    fn get(&self, key: &[u32]) -> usize {
        *self.index.get(key).expect("product lands in the ground set")
    }
}

/// Dual Ramsey instance: colour `Epi(n, kR)`; copies `Epi(kS, kR) ∘ γ` for `γ ∈ Epi(n, kS)`.
pub fn drt_instance(kr: usize, ks: usize, n: usize, r: usize) -> Result<ColoringProblem, SearchError> {
    if !(1 <= kr && kr < ks && ks <= n) {
        return Err(params(format!("need 1 <= kR < kS <= n, got kR={kr}, kS={ks}, n={n}")));
    }
    if n > 16 {
        return Err(SearchError::Budget(format!("n = {n} too large to enumerate")));
    }
    let ground: Vec<Vec<u32>> = enumerate_epi(n, kr).into_iter().map(|f| f.map().to_vec()).collect();
    if ground.len() > MAX_GROUND {
        return Err(SearchError::Budget(format!("|Epi({n},{kr})| exceeds {MAX_GROUND}")));
    }
    let idx = Indexer::new(ground);
    let sigmas = enumerate_epi(ks, kr);
    let copies: Vec<CopyDescriptor> = enumerate_epi(n, ks)
        .iter()
        .map(|g| {
            CopyDescriptor::Plain(sigmas.iter().map(|s| idx.get(compose_epi(g, s).unwrap().map())).collect())
        })
        .collect();
    check_sizes(idx.ground.len(), &copies)?;
    ColoringProblem::new(format!("drt(kR={kr},kS={ks},n={n})"), idx.ground, copies, r)
}

fn grassmannian(p: u32, k: usize, n: usize) -> Result<Vec<PrimeFieldMatrix>, SearchError> {
    enumerate_grassmannian(p, k, n, ENUM_BUDGET).map_err(budget_err)
}

/// Graham–Leeb–Rothschild instance: colour `Gr(k, F_p^n)`; copies `Gr(k, R)` for `R ∈ Gr(m, F_p^n)`.
pub fn glr_instance(p: u32, k: usize, m: usize, n: usize, r: usize) -> Result<ColoringProblem, SearchError> {
    if !(1 <= k && k < m && m <= n) {
        return Err(params(format!("need 1 <= k < m <= n, got k={k}, m={m}, n={n}")));
    }
    let ground: Vec<Vec<u32>> = grassmannian(p, k, n)?.iter().map(|a| a.entries().to_vec()).collect();
    let idx = Indexer::new(ground);
    let small = grassmannian(p, k, m)?;
    let copies = grassmannian(p, m, n)?
        .iter()
        .map(|rm| {
            CopyDescriptor::Plain(
                small
                    .iter()
                    .map(|a| {
                        let red = rcef_decompose(&rm.mul(a).unwrap()).unwrap().red;
                        idx.get(red.entries())
                    })
                    .collect(),
            )
        })
        .collect::<Vec<_>>();
    check_sizes(idx.ground.len(), &copies)?;
    ColoringProblem::new(format!("glr(p={p},k={k},m={m},n={n})"), idx.ground, copies, r)
}

/// Finite-field factor instance: colour full-rank `n×k` matrices; for each RCEF
/// `R` (`n×m`) the copy `R · M^k_{m,k}` is fibered by `τ`.
pub fn ff_factor_instance(p: u32, k: usize, m: usize, n: usize, r: usize) -> Result<ColoringProblem, SearchError> {
    if !(1 <= k && k <= m && m <= n) {
        return Err(params(format!("need 1 <= k <= m <= n, got k={k}, m={m}, n={n}")));
    }
    let ground: Vec<Vec<u32>> = enumerate_full_rank(p, n, k, ENUM_BUDGET)
        .map_err(budget_err)?
        .iter()
        .map(|a| a.entries().to_vec())
        .collect();
    let idx = Indexer::new(ground);
    let small = enumerate_full_rank(p, m, k, ENUM_BUDGET).map_err(budget_err)?;
    let taus: Vec<Vec<u32>> = small.iter().map(|a| tau(a).unwrap().matrix().entries().to_vec()).collect();
    let copies = grassmannian(p, m, n)?
        .iter()
        .map(|rm| {
            let mut fibers: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
            for (a, t) in small.iter().zip(&taus) {
                fibers.entry(t.as_slice()).or_default().push(idx.get(rm.mul(a).unwrap().entries()));
            }
            CopyDescriptor::Fibered(fibers.into_values().collect())
        })
        .collect::<Vec<_>>();
    check_sizes(idx.ground.len(), &copies)?;
    ColoringProblem::new(format!("ff-factor(p={p},k={k},m={m},n={n})"), idx.ground, copies, r)
}

/// Boolean factor instance: colour `M^ba_{n,k}`; for each `R ∈ M^oba_{n,m}` the
/// copy `R · M^ba_{m,k}` is fibered by `π`.
pub fn bool_factor_instance(k: usize, m: usize, n: usize, r: usize) -> Result<ColoringProblem, SearchError> {
    if !(1 <= k && k <= m && m <= n) {
        return Err(params(format!("need 1 <= k <= m <= n, got k={k}, m={m}, n={n}")));
    }
    if (k as f64).powi(n as i32) > ENUM_BUDGET as f64 {
        return Err(SearchError::Budget(format!("{k}^{n} maps exceed {ENUM_BUDGET}")));
    }
    let encode = |b: &crate::boolmat::BooleanMatrix| -> Vec<u32> {
        (0..b.rows()).map(|i| (0..b.cols()).find(|&j| b.get(i, j)).unwrap() as u32).collect()
    };
    let all = enumerate_ba(n, k);
    let idx = Indexer::new(all.iter().map(encode).collect());
    let small = enumerate_ba(m, k);
    let copies = enumerate_oba(n, m)
        .iter()
        .map(|rm| {
            let mut fibers: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for b in &small {
                fibers.entry(pi(b).as_slice().to_vec()).or_default().push(idx.get(&encode(&rm.mul(b).unwrap())));
            }
            CopyDescriptor::Fibered(fibers.into_values().collect())
        })
        .collect::<Vec<_>>();
    check_sizes(idx.ground.len(), &copies)?;
    ColoringProblem::new(format!("bool-factor(k={k},m={m},n={n})"), idx.ground, copies, r)
}

/// Gowers instance: colour `FIN_k(n)`; copies are the combinatorial spaces of
/// `m` disjointly supported blocks, deduplicated as element sets.
pub fn gowers_instance(k: u32, m: usize, n: usize, r: usize) -> Result<ColoringProblem, SearchError> {
    if k == 0 || m == 0 || m > n {
        return Err(params(format!("need k >= 1 and 1 <= m <= n, got k={k}, m={m}, n={n}")));
    }
    if (k as f64 + 1.0).powi(n as i32) > ENUM_BUDGET as f64 {
        return Err(SearchError::Budget(format!("({k}+1)^{n} maps exceed {ENUM_BUDGET}")));
    }
    let ground = enumerate_fin(k, n);
    let idx = Indexer::new(ground);
    let supports: Vec<u32> = idx
        .ground
        .iter()
        .map(|g| g.iter().enumerate().filter(|(_, &v)| v > 0).fold(0u32, |acc, (i, _)| acc | 1 << i))
        .collect();
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        used: u32,
        m: usize,
        k: u32,
        supports: &[u32],
        idx: &Indexer,
        chosen: &mut Vec<usize>,
        sets: &mut BTreeSet<Vec<usize>>,
        limit: usize,
    ) -> Result<(), SearchError> {
        if chosen.len() == m {
            let blocks: Vec<FinMap> =
                chosen.iter().map(|&i| FinMap::new(k, idx.ground[i].clone()).unwrap()).collect();
            let space = crate::orders::combinatorial_space(&blocks, k).unwrap();
            let mut set: Vec<usize> = space.iter().map(|f| idx.get(f.values())).collect();
            set.sort_unstable();
            set.dedup();
            sets.insert(set);
            if sets.len() > limit {
                return Err(SearchError::Budget(format!("more than {limit} copies")));
            }
            return Ok(());
        }
        for (i, &s) in supports.iter().enumerate() {
            if s & used == 0 {
                chosen.push(i);
                rec(used | s, m, k, supports, idx, chosen, sets, limit)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    rec(0, m, k, &supports, &idx, &mut chosen, &mut sets, MAX_GROUND)?;
    let copies: Vec<CopyDescriptor> = sets.into_iter().map(CopyDescriptor::Plain).collect();
    check_sizes(idx.ground.len(), &copies)?;
    ColoringProblem::new(format!("gowers(k={k},m={m},n={n})"), idx.ground, copies, r)
}

/// Square-matrix instance: colour rank-`k` `n×n` matrices; for each pair of RCEF
/// `R0, R1` (`n×m`) the copy `R0 · M^k_{m,m} · R1ᵗ` is fibered by `τ²`.
/// Only tiny sizes are feasible.
pub fn square_instance(p: u32, k: usize, m: usize, n: usize, r: usize) -> Result<ColoringProblem, SearchError> {
    if !(1 <= k && k <= m && m <= n) {
        return Err(params(format!("need 1 <= k <= m <= n, got k={k}, m={m}, n={n}")));
    }
    if k != 1 || n > 4 {
        return Err(SearchError::Budget("square instances are limited to k = 1, n <= 4".into()));
    }
    let cells = (n * n) as u32;
    let total = (p as usize).checked_pow(cells).filter(|&t| t <= ENUM_BUDGET).ok_or_else(|| {
        SearchError::Budget(format!("{p}^{cells} matrices exceed {ENUM_BUDGET}"))
    })?;
    let rank_k = |rows: usize, count: usize| -> Vec<PrimeFieldMatrix> {
        let mut out = Vec::new();
        for mut code in 0..count {
            let mut e = vec![0u32; rows * rows];
            for slot in e.iter_mut().rev() {
                *slot = (code % p as usize) as u32;
                code /= p as usize;
            }
            let a = PrimeFieldMatrix::new(p, rows, rows, e).unwrap();
            if a.rank() == k {
                out.push(a);
            }
        }
        out
    };
    let ground = rank_k(n, total);
    let idx = Indexer::new(ground.iter().map(|a| a.entries().to_vec()).collect());
    let small = rank_k(m, (p as usize).pow((m * m) as u32));
    let gammas: Vec<Vec<u32>> = small.iter().map(|a| tau2(a).unwrap().gamma.matrix().entries().to_vec()).collect();
    let reps = grassmannian(p, m, n)?;
    let mut copies = Vec::new();
    for r0 in &reps {
        for r1 in &reps {
            let r1t = r1.transpose();
            let mut fibers: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
            for (a, g) in small.iter().zip(&gammas) {
                let prod = r0.mul(a).unwrap().mul(&r1t).unwrap();
                fibers.entry(g.as_slice()).or_default().push(idx.get(prod.entries()));
            }
            copies.push(CopyDescriptor::Fibered(fibers.into_values().collect()));
        }
    }
    check_sizes(idx.ground.len(), &copies)?;
    ColoringProblem::new(format!("square(p={p},k={k},m={m},n={n})"), idx.ground, copies, r)
}

/// A family with every parameter except `n` fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Drt { kr: usize, ks: usize, r: usize },
    Glr { p: u32, k: usize, m: usize, r: usize },
    FfFactor { p: u32, k: usize, m: usize, r: usize },
    BoolFactor { k: usize, m: usize, r: usize },
    Gowers { k: u32, m: usize, r: usize },
    Square { p: u32, k: usize, m: usize, r: usize },
}

impl Family {
    /// Smallest `n` for which the instance is defined.
    pub fn min_size(&self) -> usize {
        match *self {
            Family::Drt { ks, .. } => ks,
            Family::Glr { m, .. } | Family::FfFactor { m, .. } | Family::BoolFactor { m, .. } => m,
            Family::Gowers { m, .. } | Family::Square { m, .. } => m,
        }
    }
}

pub fn instance(family: &Family, n: usize) -> Result<ColoringProblem, SearchError> {
    match *family {
        Family::Drt { kr, ks, r } => drt_instance(kr, ks, n, r),
        Family::Glr { p, k, m, r } => glr_instance(p, k, m, n, r),
        Family::FfFactor { p, k, m, r } => ff_factor_instance(p, k, m, n, r),
        Family::BoolFactor { k, m, r } => bool_factor_instance(k, m, n, r),
        Family::Gowers { k, m, r } => gowers_instance(k, m, n, r),
        Family::Square { p, k, m, r } => square_instance(p, k, m, n, r),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinNStep {
    pub n: usize,
    pub ground: usize,
    pub copies: usize,
    pub outcome: SearchOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinNReport {
    /// Least `n <= n_max` with no bad colouring, when the scan settled it.
    pub min_n: Option<usize>,
    /// `no-bad-coloring` when `min_n` was found, `bad-coloring-found` when every
    /// scanned `n` admits one, `budget-exhausted` when the scan stopped early.
    pub status: Status,
    pub steps: Vec<MinNStep>,
}

/// Scans `n = min_size..=n_max`, deciding each `n` independently.
pub fn min_n(family: &Family, n_max: usize, cfg: &SearchConfig) -> Result<MinNReport, SearchError> {
    let mut steps = Vec::new();
    for n in family.min_size()..=n_max {
        let problem = instance(family, n)?;
        let outcome = exists_bad_coloring_with(&problem, cfg);
        let status = outcome.status;
        steps.push(MinNStep { n, ground: problem.ground_size(), copies: problem.copies.len(), outcome });
        match status {
            Status::NoBadColoring => return Ok(MinNReport { min_n: Some(n), status, steps }),
            Status::BudgetExhausted => return Ok(MinNReport { min_n: None, status, steps }),
            Status::BadColoringFound => {}
        }
    }
    Ok(MinNReport { min_n: None, status: Status::BadColoringFound, steps })
}
