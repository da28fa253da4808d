//! Bad-colouring search for the finite factorisation theorems.
//!
//! A [`ColoringProblem`] lists ground elements and copies. Each copy is a list
//! of fibers; a plain copy has a single fiber. A colouring is *bad* when every
//! copy has some fiber carrying two colours, i.e. no copy is monochromatic
//! (plain) and the colouring factors through the fiber map on no copy
//! (fibered). Instances whose search reports [`Status::NoBadColoring`] certify
//! the theorem at that size.

mod families;
mod search;

pub use families::{
    bool_factor_instance, drt_instance, ff_factor_instance, glr_instance, gowers_instance, instance, min_n,
    square_instance, Family, MinNReport, MinNStep,
};
pub use search::{exists_bad_coloring, exists_bad_coloring_with, verify_witness};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("parameter error: {0}")]
    Params(String),
    #[error("budget exceeded while building the instance: {0}")]
    Budget(String),
}

/// One copy: the fibers whose monochromaticity is the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "fibers")]
pub enum CopyDescriptor {
    Plain(Vec<usize>),
    Fibered(Vec<Vec<usize>>),
}

impl CopyDescriptor {
    pub fn fibers(&self) -> Vec<&[usize]> {
        match self {
            CopyDescriptor::Plain(s) => vec![s.as_slice()],
            CopyDescriptor::Fibered(f) => f.iter().map(Vec::as_slice).collect(),
        }
    }

    pub fn elements(&self) -> Vec<usize> {
        self.fibers().into_iter().flatten().copied().collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColoringProblem {
    pub family: String,
    /// Canonical encodings (matrix entries, map arrays) in index order.
    pub ground: Vec<Vec<u32>>,
    pub copies: Vec<CopyDescriptor>,
    pub r: usize,
}

impl ColoringProblem {
    pub fn new(family: impl Into<String>, ground: Vec<Vec<u32>>, copies: Vec<CopyDescriptor>, r: usize) -> Result<Self, SearchError> {
        let p = ColoringProblem { family: family.into(), ground, copies, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.r == 0 {
            return Err(SearchError::Invalid("r must be at least 1".into()));
        }
        let n = self.ground.len();
        for (ci, c) in self.copies.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for e in c.elements() {
                if e >= n {
                    return Err(SearchError::Invalid(format!("copy {ci} refers to element {e} of {n}")));
                }
                if !seen.insert(e) {
                    return Err(SearchError::Invalid(format!("copy {ci}: fibers overlap at {e}")));
                }
            }
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.ground.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    BadColoringFound,
    NoBadColoring,
    BudgetExhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_seconds: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 10_000_000, max_seconds: 60.0 }
    }
}

/// Search configuration: limits plus worker count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub budget: Budget,
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: Budget::default(), jobs: 1 }
    }
}

/// Caps on instance construction.
pub const MAX_GROUND: usize = 1 << 20;
pub const MAX_MEMBERSHIPS: usize = 1 << 24;
