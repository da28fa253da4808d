//! Rational numbers and the few transcendental comparisons the geometry needs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {0:?} as a rational")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Accepts `"a"`, `"a/b"` and finite decimals such as `"-0.25"`.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    t.parse::<BigInt>().map(Rational::from_integer).map_err(|_| err())
}

/// `"n"` for integers, otherwise `"n/d"` in lowest terms.
pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn vec_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format).collect()
}

pub fn mat_to_strings(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| vec_to_strings(r)).collect()
}

pub fn mat_from_strings(m: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, ParseRationalError> {
    m.iter().map(|r| r.iter().map(|s| parse(s)).collect()).collect()
}

/// Partial sum of the exponential series and an upper bound on the tail,
/// valid for `0 <= x` and `n + 2 > x`.
fn exp_bracket(x: &Rational, n: u32) -> (Rational, Rational) {
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for i in 1..=n {
        term = term * x / int(i as i64);
        sum += &term;
    }
    let next = term * x / int(n as i64 + 1);
    let shrink = Rational::one() - x / int(n as i64 + 2);
    (sum.clone(), sum + next / shrink)
}

/// Orders `q` against `e^x`. Exact: refines the series until the bracket
/// excludes `q`. Equality happens only at `x = 0, q = 1`.
pub fn cmp_exp(q: &Rational, x: &Rational) -> Ordering {
    if x.is_zero() {
        return q.cmp(&Rational::one());
    }
    if !q.is_positive() {
        return Ordering::Less;
    }
    let ax = x.abs();
    let mut n = (ax.ceil().to_integer().to_u32().unwrap_or(u32::MAX - 4)).saturating_add(2);
    loop {
        let (lo, hi) = exp_bracket(&ax, n);
        // bracket on e^x itself
        let (lo, hi) = if x.is_negative() { (hi.recip(), lo.recip()) } else { (lo, hi) };
        if q < &lo {
            return Ordering::Less;
        }
        if q > &hi {
            return Ordering::Greater;
        }
        n = n.saturating_mul(2);
    }
}

/// `ln q` as a float, for display next to the exact argument.
pub fn ln_f64(q: &Rational) -> f64 {
    // numer and denom may overflow f64 individually
    let n = q.numer().to_f64().map(f64::ln);
    let d = q.denom().to_f64().map(f64::ln);
    match (n, d) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a - b,
        _ => to_f64(q).ln(),
    }
}
