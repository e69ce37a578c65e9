//! Dense two-phase primal simplex over exact rationals with Bland's rule.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub sign: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn holds(&self, values: &[Rational]) -> bool {
        let lhs = evaluate(&self.terms, values);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Maximize `objective . x` subject to `constraints`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearProgram {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, Rational)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: Status,
    /// Meaningful only when `status` is `Optimal`.
    pub objective_value: Rational,
    /// One value per variable; empty unless optimal.
    pub assignment: Vec<Rational>,
    pub pivots: usize,
}

pub fn evaluate(terms: &[(usize, Rational)], values: &[Rational]) -> Rational {
    terms.iter().fold(Rational::zero(), |acc, (j, c)| acc + c * &values[*j])
}

impl LinearProgram {
    pub fn add_variable(&mut self, name: impl Into<String>, sign: Sign) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            sign,
        });
        self.variables.len() - 1
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { terms, relation, rhs });
    }

    /// Exact feasibility of `values`, sign restrictions included.
    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.variables.len()
            && self
                .variables
                .iter()
                .zip(values)
                .all(|(v, x)| v.sign == Sign::Free || !x.is_negative())
            && self.constraints.iter().all(|c| c.holds(values))
    }

    pub fn objective_at(&self, values: &[Rational]) -> Rational {
        evaluate(&self.objective, values)
    }

    fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        let bad = self
            .constraints
            .iter()
            .flat_map(|c| &c.terms)
            .chain(&self.objective)
            .any(|(j, _)| *j >= n);
        if bad {
            Err(Error::Parameter("LP term references an undeclared variable".into()))
        } else {
            Ok(())
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs `c_j - c_B B^-1 A_j`; an entering column has a positive one.
    reduced: Vec<Rational>,
    value: Rational,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if p != int(1) {
            for v in self.rows[row].iter_mut().filter(|v| !v.is_zero()) {
                *v /= &p;
            }
            self.rhs[row] /= &p;
        }
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.rows[r][j] -= delta;
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[r] -= delta;
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.reduced[j] -= delta;
            }
            self.value += &factor * &self.rhs[row];
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns `false` if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.reduced[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn set_objective(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = costs[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() {
                    self.reduced[j] -= &cb * a;
                }
            }
            self.value += &cb * &self.rhs[r];
        }
    }
}

/// Solves `lp` exactly. Deterministic: identical input gives an identical
/// pivot sequence.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;

    // Structural columns: one per non-negative variable, two (x+ and x-)
    // per free variable.
    let mut columns: Vec<(usize, bool)> = Vec::new();
    let mut first_column = Vec::with_capacity(lp.variables.len());
    for (j, v) in lp.variables.iter().enumerate() {
        first_column.push(columns.len());
        columns.push((j, false));
        if v.sign == Sign::Free {
            columns.push((j, true));
        }
    }
    let structural = columns.len();
    let rows_n = lp.constraints.len();

    // Normalize every row to a non-negative right-hand side.
    let mut dense: Vec<Vec<Rational>> = Vec::with_capacity(rows_n);
    let mut rhs = Vec::with_capacity(rows_n);
    let mut relations = Vec::with_capacity(rows_n);
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); structural];
        for (j, coef) in &c.terms {
            let col = first_column[*j];
            row[col] += coef;
            if lp.variables[*j].sign == Sign::Free {
                row[col + 1] -= coef;
            }
        }
        let (row, b, rel) = if c.rhs.is_negative() {
            let flipped = match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (row.into_iter().map(|v| -v).collect(), -c.rhs.clone(), flipped)
        } else {
            (row, c.rhs.clone(), c.relation)
        };
        dense.push(row);
        rhs.push(b);
        relations.push(rel);
    }

    let slack_n = relations.iter().filter(|r| **r != Relation::Eq).count();
    let artificial_n = relations.iter().filter(|r| **r != Relation::Le).count();
    let width = structural + slack_n + artificial_n;
    let artificial_start = structural + slack_n;

    let mut rows = Vec::with_capacity(rows_n);
    let mut basis = Vec::with_capacity(rows_n);
    let (mut next_slack, mut next_art) = (structural, artificial_start);
    for (mut row, rel) in dense.into_iter().zip(&relations) {
        row.resize(width, Rational::zero());
        match rel {
            Relation::Le => {
                row[next_slack] = int(1);
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = int(-1);
                next_slack += 1;
                row[next_art] = int(1);
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = int(1);
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        reduced: Vec::new(),
        value: Rational::zero(),
        pivots: 0,
    };

    if artificial_n > 0 {
        let mut phase_one = vec![Rational::zero(); width];
        for c in phase_one.iter_mut().skip(artificial_start) {
            *c = int(-1);
        }
        tab.set_objective(&phase_one);
        tab.optimize(width);
        if tab.value.is_negative() {
            return Ok(LpSolution {
                status: Status::Infeasible,
                objective_value: Rational::zero(),
                assignment: Vec::new(),
                pivots: tab.pivots,
            });
        }
        // Drive zero-valued artificials out of the basis; drop rows that
        // turn out to be redundant.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= artificial_start {
                match (0..artificial_start).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(col) => tab.pivot(r, col),
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut costs = vec![Rational::zero(); width];
    for (j, c) in &lp.objective {
        let col = first_column[*j];
        costs[col] += c;
        if lp.variables[*j].sign == Sign::Free {
            costs[col + 1] -= c;
        }
    }
    tab.set_objective(&costs);
    if !tab.optimize(artificial_start) {
        return Ok(LpSolution {
            status: Status::Unbounded,
            objective_value: Rational::zero(),
            assignment: Vec::new(),
            pivots: tab.pivots,
        });
    }

    let mut column_values = vec![Rational::zero(); width];
    for (r, &b) in tab.basis.iter().enumerate() {
        column_values[b] = tab.rhs[r].clone();
    }
    let mut assignment = vec![Rational::zero(); lp.variables.len()];
    for (col, &(j, negative)) in columns.iter().enumerate() {
        if negative {
            assignment[j] -= &column_values[col];
        } else {
            assignment[j] += &column_values[col];
        }
    }

    if !lp.is_feasible(&assignment) || lp.objective_at(&assignment) != tab.value {
        return Err(Error::Internal(
            "simplex returned a point that fails exact re-verification".into(),
        ));
    }
    Ok(LpSolution {
        status: Status::Optimal,
        objective_value: tab.value,
        assignment,
        pivots: tab.pivots,
    })
}
