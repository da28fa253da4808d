use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::GeoError;
use crate::rational::{int, Rational};

/// Symbolic `GR(d, m, r)`; its value is never computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GRBound {
    #[serde(serialize_with = "ser_big")]
    pub d: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub m: BigUint,
    pub r: u64,
    pub context: String,
}

fn ser_big<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

impl fmt::Display for GRBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR({}, {}, {})", self.d, self.m, self.r)
    }
}

fn floor_big(q: &Rational) -> BigUint {
    q.floor().to_integer().to_biguint().expect("nonnegative")
}

fn ceil_big(q: &Rational) -> BigUint {
    q.ceil().to_integer().to_biguint().expect("nonnegative")
}

fn rpow(q: &Rational, e: u64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// `m!/(m−d)!`.
fn falling(m: &BigUint, d: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut cur = m.clone();
    for _ in 0..d {
        acc *= &cur;
        cur -= 1u32;
    }
    acc
}

fn check_eps(eps: &Rational) -> Result<(), GeoError> {
    if !eps.is_positive() {
        return Err(GeoError::Domain("eps must be positive".into()));
    }
    Ok(())
}

/// `n_∞(d,m,r,ε) <= GR(⌊(1+4/ε)^d⌋, ⌊(1+4/ε)^d⌋·2^d·m!/(m−d)!, r)`.
pub fn bound_n_infty(d: u64, m: &BigUint, r: u64, eps: &Rational) -> Result<GRBound, GeoError> {
    check_eps(eps)?;
    if d == 0 || r == 0 {
        return Err(GeoError::Domain("d and r must be positive".into()));
    }
    if m < &BigUint::from(d) {
        return Err(GeoError::Domain(format!("need d <= m, got d = {d}, m = {m}")));
    }
    let net = floor_big(&rpow(&(Rational::one() + int(4) / eps), d));
    let second = &net * (BigUint::one() << d) * falling(m, d);
    Ok(GRBound { d: net, m: second, r, context: "n_inf".into() })
}

/// `n_pol(d,m,r,ε) = n_∞(d,m,r,ε)`.
pub fn bound_n_pol(d: u64, m: &BigUint, r: u64, eps: &Rational) -> Result<GRBound, GeoError> {
    let mut b = bound_n_infty(d, m, r, eps)?;
    b.context = "n_pol".into();
    Ok(b)
}

/// Parameters `d`, `m` fed to `n_pol` in the `dim H` bound, and the resulting symbolic `n`.
#[derive(Clone, Debug, Serialize)]
pub struct DimHParameters {
    #[serde(serialize_with = "ser_big")]
    pub d: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub m: BigUint,
    pub n: GRBound,
}

/// `d = ⌊((10+3ε)/ε)^{dim F}⌋`,
/// `m = ⌊((10+3ε)/ε)^{dim G} + ((10+3ε)/ε)^{dim F}·(1+8(5+ε)/ε)^{dim F·dim G}⌋`,
/// `n = n_pol(d, m, r, ε/4)`.
pub fn dim_h_parameters(dim_f: u64, dim_g: u64, r: u64, eps: &Rational) -> Result<DimHParameters, GeoError> {
    check_eps(eps)?;
    let a = (int(10) + int(3) * eps) / eps;
    let b = Rational::one() + int(8) * (int(5) + eps) / eps;
    let d = floor_big(&rpow(&a, dim_f));
    let m = floor_big(&(rpow(&a, dim_g) + rpow(&a, dim_f) * rpow(&b, dim_f * dim_g)));
    let d_small = d.to_u64().ok_or_else(|| GeoError::Budget("d does not fit in 64 bits".into()))?;
    let n = bound_n_pol(d_small, &m, r, &(eps / int(4)))?;
    Ok(DimHParameters { d, m, n })
}

/// `base^exponent`, kept symbolic when too large to expand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentTerm {
    #[serde(serialize_with = "ser_big")]
    pub base: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub exponent: BigUint,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimHBound {
    /// Exact value when it fits the size cap.
    #[serde(serialize_with = "ser_opt_big")]
    pub value: Option<BigUint>,
    /// `value = ∏ terms · n`.
    pub terms: Vec<ExponentTerm>,
    #[serde(serialize_with = "ser_big")]
    pub n: BigUint,
    pub expression: String,
}

fn ser_opt_big<S: serde::Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Expanded results are capped at this many bits.
pub const DIM_H_BIT_CAP: u64 = 1 << 22;

/// `(dim F)^{E_F}·(dim G)^{E_G}·n` with `E_X = ⌈(1+8(5+ε)/ε)^{n·dim X}⌉`.
///
/// A base of 1 contributes 1 whatever the exponent, so the exponent is not formed.
pub fn bound_dim_h(dim_f: u64, dim_g: u64, eps: &Rational, n: &BigUint) -> Result<DimHBound, GeoError> {
    check_eps(eps)?;
    if dim_f == 0 || dim_g == 0 || n.is_zero() {
        return Err(GeoError::Domain("dimensions and n must be positive".into()));
    }
    let b = Rational::one() + int(8) * (int(5) + eps) / eps;
    let mut terms = Vec::new();
    let mut total_bits = n.bits();
    for dim in [dim_f, dim_g] {
        if dim == 1 {
            continue;
        }
        let power = n * BigUint::from(dim);
        let power = power.to_u64().filter(|p| *p <= DIM_H_BIT_CAP).ok_or_else(|| {
            GeoError::Budget(format!("exponent (1+8(5+ε)/ε)^{{{}}} is itself too large to write", n * BigUint::from(dim)))
        })?;
        let exponent = ceil_big(&rpow(&b, power));
        let base = BigUint::from(dim);
        total_bits = total_bits.saturating_add(exponent.to_u64().unwrap_or(u64::MAX).saturating_mul(base.bits()));
        terms.push(ExponentTerm { base, exponent });
    }
    let value = if total_bits <= DIM_H_BIT_CAP {
        let mut v = n.clone();
        for t in &terms {
            v *= t.base.pow(t.exponent.to_u32().expect("capped"));
        }
        Some(v)
    } else {
        None
    };
    let mut expression: Vec<String> = terms.iter().map(|t| format!("{}^{}", t.base, t.exponent)).collect();
    expression.push(n.to_string());
    Ok(DimHBound { value, terms, n: n.clone(), expression: expression.join(" * ") })
}
