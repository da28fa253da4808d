//! Argument payload parsing: literals, `@file`, or `-`/absent for stdin.

use std::io::Read;

use ramsey_core::boolmat::BooleanMatrix;
use ramsey_core::ffmat::PrimeFieldMatrix;
use ramsey_core::linalg::QMatrix;
use ramsey_core::metricfree::FiniteMetricSpace;
use ramsey_core::normgeo::PolyhedralSpace;
use ramsey_core::rational::{self, Rational};

use crate::CliError;

/// Reads a payload: `@path` from a file, `-` or `None` from stdin, anything else verbatim.
pub fn source(arg: Option<&str>, what: &str) -> Result<String, CliError> {
    match arg {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("{what}: cannot read stdin: {e}")))?;
            if s.trim().is_empty() {
                return Err(CliError::Usage(format!("{what}: no input given (pass it inline, as @file, or on stdin)")));
            }
            Ok(s)
        }
        Some(a) => match a.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{what}: cannot read {path}: {e}"))),
            None => Ok(a.to_string()),
        },
    }
}

fn is_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{') | Some('['))
}

fn json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

/// Matrix JSON, or digit rows separated by newlines, commas or semicolons.
pub fn ff_matrix(p: Option<u32>, text: &str) -> Result<PrimeFieldMatrix, CliError> {
    if is_json(text) {
        let m: PrimeFieldMatrix = json(text, "matrix")?;
        if let Some(p) = p.filter(|&p| p != m.modulus()) {
            return Err(CliError::Usage(format!("matrix: --p {p} disagrees with p = {} in the payload", m.modulus())));
        }
        return Ok(m);
    }
    let p = p.ok_or_else(|| CliError::Usage("matrix: --p is required for the text form".into()))?;
    PrimeFieldMatrix::parse_rows(p, text).map_err(|e| CliError::Usage(format!("matrix: {e}")))
}

/// Boolean matrix JSON `{n, k, columns}`.
pub fn bool_matrix(text: &str) -> Result<BooleanMatrix, CliError> {
    json(text, "boolean matrix")
}

/// Column supports separated by `;`, entries by `,`: `"0,2;1;3"`.
pub fn columns(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split(';')
        .enumerate()
        .map(|(j, col)| {
            col.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| CliError::Usage(format!("columns: column {}: bad index {t:?}", j + 1))))
                .collect()
        })
        .collect()
}

pub fn usize_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split([',', ' '])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| t.parse().map_err(|_| CliError::Usage(format!("{what}: entry {}: bad integer {t:?}", i + 1))))
        .collect()
}

pub fn rational(text: &str, what: &str) -> Result<Rational, CliError> {
    rational::parse(text).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

/// Comma-separated rationals.
pub fn qvector(text: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    if is_json(text) {
        let v: Vec<serde_json::Value> = json(text, what)?;
        return v.iter().enumerate().map(|(i, x)| json_rational(x, &format!("{what}: entry {}", i + 1))).collect();
    }
    text.split(',')
        .enumerate()
        .map(|(i, t)| rational::parse(t).map_err(|e| CliError::Usage(format!("{what}: entry {}: {e}", i + 1))))
        .collect()
}

fn json_rational(x: &serde_json::Value, at: &str) -> Result<Rational, CliError> {
    let s = match x {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        _ => return Err(CliError::Usage(format!("{at}: expected a rational"))),
    };
    rational::parse(&s).map_err(|e| CliError::Usage(format!("{at}: {e}")))
}

/// Rows separated by `;` or newlines, entries by `,`; or a JSON array of rows.
pub fn qmatrix(text: &str, what: &str) -> Result<QMatrix, CliError> {
    let m: QMatrix = if is_json(text) {
        let rows: Vec<Vec<serde_json::Value>> = json(text, what)?;
        rows.iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, x)| json_rational(x, &format!("{what}: row {}, entry {}", i + 1, j + 1))).collect())
            .collect::<Result<_, _>>()?
    } else {
        text.split([';', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .enumerate()
            .map(|(i, r)| {
                r.split(',')
                    .enumerate()
                    .map(|(j, t)| rational::parse(t).map_err(|e| CliError::Usage(format!("{what}: row {}, entry {}: {e}", i + 1, j + 1))))
                    .collect()
            })
            .collect::<Result<_, _>>()?
    };
    if m.is_empty() {
        return Err(CliError::Usage(format!("{what}: empty matrix")));
    }
    if let Some(i) = m.iter().position(|r| r.len() != m[0].len()) {
        return Err(CliError::Usage(format!("{what}: row {} has {} entries, row 1 has {}", i + 1, m[i].len(), m[0].len())));
    }
    Ok(m)
}

/// `linf:K`, `l1:K`, a space JSON object, or a functional matrix.
pub fn space(arg: &str, what: &str) -> Result<PolyhedralSpace, CliError> {
    let text = source(Some(arg), what)?;
    let t = text.trim();
    let named = |prefix: &[&str]| prefix.iter().find_map(|p| t.strip_prefix(p)).map(str::trim);
    if let Some(k) = named(&["linf:", "ell-inf:", "l-inf:"]) {
        return Ok(PolyhedralSpace::ell_inf(dimension(k, what)?));
    }
    if let Some(k) = named(&["l1:", "ell-one:", "ell1:"]) {
        return Ok(PolyhedralSpace::ell_one(dimension(k, what)?));
    }
    if t.starts_with('{') {
        return json(t, what);
    }
    let f = qmatrix(t, what)?;
    PolyhedralSpace::from_functionals(f, ramsey_core::normgeo::SpaceKind::Custom).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn dimension(k: &str, what: &str) -> Result<usize, CliError> {
    match k.parse::<usize>() {
        Ok(k) if k > 0 => Ok(k),
        _ => Err(CliError::Usage(format!("{what}: bad dimension {k:?}"))),
    }
}

/// Metric JSON `{n, d, basepoint?}` or a CSV distance matrix.
pub fn metric(text: &str, basepoint: Option<usize>, what: &str) -> Result<FiniteMetricSpace, CliError> {
    if is_json(text) {
        let m: FiniteMetricSpace = json(text, what)?;
        return match basepoint {
            Some(b) => m.with_basepoint(b).map_err(|e| CliError::Usage(format!("{what}: {e}"))),
            None => Ok(m),
        };
    }
    FiniteMetricSpace::from_csv(text, basepoint).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_forms() {
        let a = ff_matrix(Some(2), "11,01,10").unwrap();
        assert_eq!(a.to_rows(), vec![vec![1, 1], vec![0, 1], vec![1, 0]]);
        let b = ff_matrix(None, r#"{"p":2,"rows":1,"cols":2,"entries":[[1,0]]}"#).unwrap();
        assert_eq!(b.cols(), 2);
        assert!(ff_matrix(Some(3), r#"{"p":2,"rows":1,"cols":2,"entries":[[1,0]]}"#).is_err());
        assert!(ff_matrix(None, "10").is_err());
    }

    #[test]
    fn rational_forms() {
        let m = qmatrix("1,1/2;0,-3", "t").unwrap();
        assert_eq!(m[0][1], rational::ratio(1, 2));
        assert_eq!(qmatrix(r#"[["1", 2], ["0", "1/3"]]"#, "t").unwrap()[1][1], rational::ratio(1, 3));
        let err = qmatrix("1,2;3", "t").unwrap_err();
        assert!(err.to_string().contains("row 2"));
        let err = qmatrix("1,x", "t").unwrap_err();
        assert!(err.to_string().contains("row 1, entry 2"));
    }

    #[test]
    fn named_spaces() {
        assert_eq!(space("linf:3", "x").unwrap().dim(), 3);
        assert_eq!(space("l1:2", "x").unwrap().functionals().len(), 4);
        assert!(space("l1:0", "x").is_err());
        assert_eq!(columns("0,2;1").unwrap(), vec![vec![0, 2], vec![1]]);
    }
}
