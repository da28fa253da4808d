//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Problems here are tiny (tens of variables), so a dense tableau is fine and
//! Bland's rule rules out cycling without any tolerance.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    maximize: bool,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    /// Variables are nonnegative unless marked free.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram { objective, maximize: true, free: vec![false; n], constraints: Vec::new() }
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        LinearProgram { maximize: false, ..Self::maximize(objective) }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, j: usize) -> &mut Self {
        self.free[j] = true;
        self
    }

    pub fn all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.objective.len(), "constraint width");
        self.constraints.push(Constraint { coeffs, rel, rhs });
        self
    }

    pub fn le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.add(coeffs, Relation::Le, rhs)
    }

    pub fn ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.add(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.add(coeffs, Relation::Eq, rhs)
    }

    pub fn solve(&self) -> LpOutcome {
        // Column layout: structural (free vars split in two), slack/surplus, artificial.
        let n = self.objective.len();
        let mut col_of = Vec::with_capacity(n);
        let mut ncol = 0;
        for &f in &self.free {
            col_of.push(ncol);
            ncol += if f { 2 } else { 1 };
        }
        let structural = ncol;
        let rows: Vec<(Vec<Rational>, Relation, Rational)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut row = vec![Rational::zero(); structural];
                for j in 0..n {
                    row[col_of[j]] = c.coeffs[j].clone();
                    if self.free[j] {
                        row[col_of[j] + 1] = -c.coeffs[j].clone();
                    }
                }
                if c.rhs.is_negative() {
                    let rel = match c.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (row.into_iter().map(|x| -x).collect(), rel, -c.rhs.clone())
                } else {
                    (row, c.rel, c.rhs.clone())
                }
            })
            .collect();
        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let total = structural + n_slack + n_art;
        let first_art = structural + n_slack;

        let mut t = Tableau { a: Vec::with_capacity(m), basis: Vec::with_capacity(m), width: total, banned: vec![false; total] };
        let (mut s, mut art) = (structural, first_art);
        for (coeffs, rel, rhs) in rows {
            let mut row = coeffs;
            row.resize(total + 1, Rational::zero());
            row[total] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Rational::from_integer(1.into());
                    t.basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = Rational::from_integer((-1).into());
                    s += 1;
                    row[art] = Rational::from_integer(1.into());
                    t.basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::from_integer(1.into());
                    t.basis.push(art);
                    art += 1;
                }
            }
            t.a.push(row);
        }

        if n_art > 0 {
            let mut c1 = vec![Rational::zero(); total];
            for c in c1.iter_mut().skip(first_art) {
                *c = Rational::from_integer((-1).into());
            }
            if t.optimize(&c1).is_err() {
                unreachable!("phase one is bounded");
            }
            if t.objective_value(&c1).is_negative() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis, dropping redundant rows.
            let mut i = 0;
            while i < t.a.len() {
                if t.basis[i] >= first_art {
                    match (0..first_art).find(|&j| !t.a[i][j].is_zero()) {
                        Some(j) => {
                            t.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            t.a.remove(i);
                            t.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
            for b in t.banned.iter_mut().skip(first_art) {
                *b = true;
            }
        }

        let mut c2 = vec![Rational::zero(); total];
        for j in 0..n {
            let c = if self.maximize { self.objective[j].clone() } else { -self.objective[j].clone() };
            if self.free[j] {
                c2[col_of[j] + 1] = -c.clone();
            }
            c2[col_of[j]] = c;
        }
        if t.optimize(&c2).is_err() {
            return LpOutcome::Unbounded;
        }
        let mut colval = vec![Rational::zero(); total];
        for (i, &b) in t.basis.iter().enumerate() {
            colval[b] = t.a[i][total].clone();
        }
        let x: Vec<Rational> = (0..n)
            .map(|j| if self.free[j] { &colval[col_of[j]] - &colval[col_of[j] + 1] } else { colval[col_of[j]].clone() })
            .collect();
        let value = x.iter().zip(&self.objective).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        LpOutcome::Optimal { value, x }
    }
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
    banned: Vec<bool>,
}

struct Unbounded;

impl Tableau {
    fn objective_value(&self, c: &[Rational]) -> Rational {
        self.basis.iter().enumerate().fold(Rational::zero(), |acc, (i, &b)| acc + &c[b] * &self.a[i][self.width])
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.a[r][col].recip();
        for x in self.a[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Maximises `c·x` from the current basic feasible solution.
    fn optimize(&mut self, c: &[Rational]) -> Result<(), Unbounded> {
        loop {
            let entering = (0..self.width).find(|&j| {
                if self.banned[j] || self.basis.contains(&j) {
                    return false;
                }
                let reduced = self
                    .basis
                    .iter()
                    .enumerate()
                    .fold(c[j].clone(), |acc, (i, &b)| acc - &c[b] * &self.a[i][j]);
                reduced.is_positive()
            });
            let Some(j) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.a[i][self.width] / &self.a[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(Unbounded);
            };
            self.pivot(r, j);
        }
    }
}
