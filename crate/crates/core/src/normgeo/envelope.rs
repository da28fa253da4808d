use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::amalgam::half;
use super::space::{NormedMap, PolyhedralSpace};
use super::GeoError;
use crate::linalg::{self, QMatrix};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{self, Rational};

/// `Ψ_F: F → ℓ∞^{d_F}`, one coordinate per `±` pair of extreme dual functionals.
#[derive(Clone, Debug)]
pub struct InjectiveEnvelope {
    pub d: usize,
    pub psi: NormedMap,
}

pub fn injective_envelope(f: &PolyhedralSpace) -> Result<InjectiveEnvelope, GeoError> {
    let extreme = f.dual_vertices()?;
    if extreme.len() % 2 != 0 {
        return Err(GeoError::Degenerate("dual ball is not centrally symmetric".into()));
    }
    // descending order makes the envelope of ℓ∞ᵏ the identity
    let mut rows = half(&extreme);
    rows.reverse();
    let d = rows.len();
    let psi = NormedMap::new(rows, f.clone(), PolyhedralSpace::ell_inf(d))?;
    Ok(InjectiveEnvelope { d, psi })
}

/// `U` with `T = U∘Ψ_F` and `‖U‖_{∞→∞} <= 1`.
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeFactor {
    #[serde(serialize_with = "ser_matrix")]
    pub u: QMatrix,
    /// Rows solved by a signed coordinate (`±e_j`) rather than the LP.
    pub signed_rows: usize,
    pub exact: bool,
}

fn ser_matrix<S: serde::Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational::mat_to_strings(m), s)
}

/// Factors a norm-one `T: F → ℓ∞^m` through the envelope.
///
/// Each row `t_i ∈ Ball(F*)` is matched to some `±ψ_j` when possible, and
/// otherwise written as `Σ u_ij ψ_j` with least `Σ |u_ij|` by LP.
pub fn factor_through_envelope(env: &InjectiveEnvelope, t: &QMatrix) -> Result<EnvelopeFactor, GeoError> {
    let f = env.psi.domain();
    if t.iter().any(|r| r.len() != f.dim()) {
        return Err(GeoError::Dimension("T must act on F".into()));
    }
    let psi = env.psi.matrix();
    let d = env.d;
    let mut u = Vec::with_capacity(t.len());
    let mut signed_rows = 0;
    for row in t {
        if let Some(j) = psi.iter().position(|p| p == row) {
            let mut e = vec![Rational::zero(); d];
            e[j] = Rational::one();
            u.push(e);
            signed_rows += 1;
            continue;
        }
        if let Some(j) = psi.iter().position(|p| &linalg::vneg(p) == row) {
            let mut e = vec![Rational::zero(); d];
            e[j] = -Rational::one();
            u.push(e);
            signed_rows += 1;
            continue;
        }
        // u = u⁺ − u⁻
        let mut lp = LinearProgram::minimize(vec![Rational::one(); 2 * d]);
        for c in 0..f.dim() {
            let coeffs = psi.iter().map(|p| p[c].clone()).chain(psi.iter().map(|p| -p[c].clone())).collect();
            lp.eq(coeffs, row[c].clone());
        }
        match lp.solve() {
            LpOutcome::Optimal { value, x } if value <= Rational::one() => {
                u.push((0..d).map(|j| &x[j] - &x[d + j]).collect());
            }
            _ => return Err(GeoError::Domain("a row of T has dual norm above one".into())),
        }
    }
    let exact = linalg::mul(&u, psi) == *t && u.iter().all(|r| r.iter().map(|a| a.abs()).sum::<Rational>() <= Rational::one());
    Ok(EnvelopeFactor { u, signed_rows, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn cube_is_its_own_envelope() {
        let env = injective_envelope(&PolyhedralSpace::ell_inf(3)).unwrap();
        assert_eq!(env.d, 3);
        assert_eq!(env.psi.matrix(), &linalg::identity(3));
    }

    #[test]
    fn diamond() {
        let env = injective_envelope(&PolyhedralSpace::ell_one(2)).unwrap();
        assert_eq!(env.d, 2);
        assert!(env.psi.is_isometry().unwrap());
        let t = vec![vec![int(1), int(-1)], vec![int(1), int(1)], vec![int(0), int(1)]];
        let fac = factor_through_envelope(&env, &t).unwrap();
        assert!(fac.exact);
        assert_eq!(fac.signed_rows, 2);
    }
}
