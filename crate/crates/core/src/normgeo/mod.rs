//! Polyhedral normed spaces over the rationals.
//!
//! A [`PolyhedralSpace`] is `R^k` with `‖x‖ = max_f |f(x)|` over a finite
//! functional list; its unit ball is a centrally symmetric polytope. Every
//! quantity computed on such data (norms, operator norms, the metrics `ω`,
//! `α`, `Λ`, amalgams) is an exact rational; logarithms are reported together
//! with their rational arguments.

mod amalgam;
mod approx;
mod bounds;
mod envelope;
mod metrics;
mod nets;
mod space;

pub use amalgam::{amalgam, correcting_pair, Amalgam, AmalgamCheck, CorrectingPair, CorrectingStep};
pub use approx::{polyhedral_approx, pushforward_norm, ApproxInput, Approximation, FloatNorm, Pushforward};
pub use bounds::{bound_dim_h, bound_n_infty, bound_n_pol, dim_h_parameters, DimHBound, DimHParameters, ExponentTerm, GRBound, DIM_H_BIT_CAP};
pub use envelope::{factor_through_envelope, injective_envelope, EnvelopeFactor, InjectiveEnvelope};
pub use metrics::{alpha, bm_upper, gap_metric, omega, sandwich, BmEffort, BmReport, LogValue, SandwichReport};
pub use nets::{eps_net, shell_witness, EpsNet, NetMode, NET_DIM_CAP};
pub use space::{inv_norm, op_norm, NormedMap, PolyhedralSpace, SpaceKind, VERTEX_DIM_CAP};

use thiserror::Error;

use crate::polytope::PolytopeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeoError {
    #[error("degenerate norm: {0}")]
    Degenerate(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl From<PolytopeError> for GeoError {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::Unbounded => GeoError::Degenerate("unit ball is unbounded".into()),
            PolytopeError::Dimension(s) => GeoError::Dimension(s),
            PolytopeError::Budget(s) => GeoError::Budget(s),
        }
    }
}
