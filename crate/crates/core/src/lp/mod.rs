//! Optimization oracle: the best bound any certificate of the restricted
//! shape can reach, found by exact linear programming.
//!
//! Unknowns are one delay per forward edge (reverse edges carry the
//! complement `u - d`) and a free shift value per (execution, process).
//! For every execution and forward edge `p -> q` the shifted delay
//! `d + x_q - x_p` must stay in `[0, u]`; the reverse edge then stays in
//! range automatically. The objective is the certified bound
//! `(1/N) sum_i (x^i_{b_i} - x^i_{a_i})`.

pub mod simplex;

pub use simplex::{solve, Constraint, LinearProgram, LpSolution, Relation, Sign, Status, Variable};

use num_traits::Zero;

use crate::certificate::{check_certificate, require_cancelling, BoundReport, Certificate, PairCycle};
use crate::error::{Error, Result};
use crate::execution::{DelayAssignment, ShiftMatrix, Uncertainty};
use crate::parallel::{map_slice, Strategy};
use crate::rational::{int, ratio, Rational};
use crate::topology::Toroid;

/// A bound LP together with its variable layout.
#[derive(Debug, Clone)]
pub struct BoundLp {
    pub toroid: Toroid,
    pub u: Uncertainty,
    pub cycle: PairCycle,
    pub program: LinearProgram,
}

impl BoundLp {
    pub fn executions(&self) -> usize {
        self.cycle.len()
    }

    pub fn forward_edges(&self) -> usize {
        self.toroid.edge_count() / 2
    }

    /// Variable holding the delay of forward edge number `link`
    /// (canonical edge index `2 * link`).
    pub fn delay_var(&self, link: usize) -> usize {
        link
    }

    pub fn shift_var(&self, execution: usize, process: usize) -> usize {
        self.forward_edges() + execution * self.toroid.process_count() + process
    }

    /// Evaluates a certificate of the restricted shape as an LP point.
    pub fn point_of(&self, cert: &Certificate) -> Result<Vec<Rational>> {
        if cert.toroid != self.toroid || cert.shifts.len() != self.executions() {
            return Err(Error::TopologyMismatch);
        }
        let mut values = vec![Rational::zero(); self.program.variables.len()];
        for link in 0..self.forward_edges() {
            values[self.delay_var(link)] = cert.base.by_index(2 * link).clone();
        }
        for (i, x) in cert.shifts.iter().enumerate() {
            for p in 0..self.toroid.process_count() {
                values[self.shift_var(i, p)] = x.by_index(p).clone();
            }
        }
        Ok(values)
    }

    /// Rebuilds the certificate encoded by an LP point.
    pub fn certificate_of(&self, values: &[Rational]) -> Result<Certificate> {
        let t = self.toroid;
        let u = self.u.value();
        let mut delays = Vec::with_capacity(t.edge_count());
        for link in 0..self.forward_edges() {
            let d = values[self.delay_var(link)].clone();
            delays.push(d.clone());
            delays.push(u - d);
        }
        let base = DelayAssignment::new(t, self.u.clone(), delays)?;
        let shifts = (0..self.executions())
            .map(|i| {
                let entries = (0..t.process_count())
                    .map(|p| values[self.shift_var(i, p)].clone())
                    .collect();
                ShiftMatrix::new(t, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate {
            toroid: t,
            u: self.u.clone(),
            base,
            shifts,
            cycle: self.cycle.clone(),
        })
    }
}

pub fn build_bound_lp(toroid: Toroid, u: &Uncertainty, cycle: &PairCycle) -> Result<BoundLp> {
    require_cancelling(cycle)?;
    if cycle.is_empty() {
        return Err(Error::Parameter("pair cycle is empty".into()));
    }
    for (a, b) in cycle.pairs() {
        toroid.check(a)?;
        toroid.check(b)?;
    }
    let n_exec = cycle.len();
    let links = toroid.edge_count() / 2;
    let uv = u.value().clone();

    let mut program = LinearProgram::default();
    for link in 0..links {
        let e = toroid.edge(2 * link);
        program.add_variable(format!("d[{}]", e), Sign::Free);
    }
    for i in 0..n_exec {
        for p in toroid.processes() {
            program.add_variable(format!("x{i}[{p}]"), Sign::Free);
        }
    }
    let layout = BoundLp {
        toroid,
        u: u.clone(),
        cycle: cycle.clone(),
        program,
    };
    let mut program = layout.program.clone();

    let one = int(1);
    let minus = int(-1);
    for i in 0..n_exec {
        for link in 0..links {
            let e = toroid.edge(2 * link);
            let d = layout.delay_var(link);
            let xp = layout.shift_var(i, toroid.index(&e.from));
            let xq = layout.shift_var(i, toroid.index(&e.to));
            let shifted = vec![(d, one.clone()), (xq, one.clone()), (xp, minus.clone())];
            program.add_constraint(shifted.clone(), Relation::Le, uv.clone());
            let negated = shifted.into_iter().map(|(j, c)| (j, -c)).collect();
            program.add_constraint(negated, Relation::Le, Rational::zero());
        }
    }
    for link in 0..links {
        let d = layout.delay_var(link);
        program.add_constraint(vec![(d, one.clone())], Relation::Le, uv.clone());
        program.add_constraint(vec![(d, minus.clone())], Relation::Le, Rational::zero());
    }

    let weight = ratio(1, n_exec as i64);
    let mut objective: Vec<(usize, Rational)> = Vec::new();
    for (i, (a, b)) in cycle.pairs().iter().enumerate() {
        if a == b {
            continue;
        }
        objective.push((layout.shift_var(i, toroid.index(b)), weight.clone()));
        objective.push((layout.shift_var(i, toroid.index(a)), -weight.clone()));
    }
    program.objective = objective;

    Ok(BoundLp { program, ..layout })
}

pub fn solve_bound_lp(lp: &BoundLp) -> Result<LpSolution> {
    solve(&lp.program)
}

#[derive(Debug, Clone)]
pub struct BestCertificate {
    pub solution: LpSolution,
    pub certificate: Certificate,
    pub report: BoundReport,
}

/// Solves the bound LP and re-verifies its optimum with the independent
/// certificate checker.
pub fn best_certificate(toroid: Toroid, u: &Uncertainty, cycle: &PairCycle) -> Result<BestCertificate> {
    let lp = build_bound_lp(toroid, u, cycle)?;
    let solution = solve_bound_lp(&lp)?;
    match solution.status {
        Status::Optimal => {}
        Status::Unbounded => return Err(Error::Solver("unbounded")),
        Status::Infeasible => return Err(Error::Solver("infeasible")),
    }
    let certificate = lp.certificate_of(&solution.assignment)?;
    let report = check_certificate(&certificate);
    if !report.passed() || report.bound != solution.objective_value {
        return Err(Error::Internal(
            "LP optimum failed independent certificate check".into(),
        ));
    }
    Ok(BestCertificate {
        solution,
        certificate,
        report,
    })
}

/// Largest toroid (by process count) for which [`enumerate_cycles`] runs.
pub const MAX_ENUMERATION_PROCESSES: usize = 5;

/// Every cycle pairing process `j` (lexicographic order) with `sigma(j)`
/// for a permutation `sigma`. Such cycles always cancel.
pub fn enumerate_cycles(toroid: Toroid) -> Result<Vec<PairCycle>> {
    let n = toroid.process_count();
    if n > MAX_ENUMERATION_PROCESSES {
        return Err(Error::Parameter(format!(
            "cycle enumeration limited to {MAX_ENUMERATION_PROCESSES} processes, toroid has {n}"
        )));
    }
    let procs: Vec<_> = toroid.processes().collect();
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permutations(&mut current, 0, &mut perms);
    perms.sort();
    Ok(perms
        .into_iter()
        .map(|sigma| PairCycle::new((0..n).map(|j| (procs[j].clone(), procs[sigma[j]].clone())).collect()))
        .collect())
}

fn permutations(items: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == items.len() {
        out.push(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, out);
        items.swap(start, i);
    }
}

#[derive(Debug, Clone)]
pub struct CycleResult {
    pub cycle: PairCycle,
    pub optimum: Rational,
}

/// LP optimum for every enumerated cycle, in enumeration order.
pub fn search_cycles(toroid: Toroid, u: &Uncertainty, strategy: Strategy) -> Result<Vec<CycleResult>> {
    let cycles = enumerate_cycles(toroid)?;
    map_slice(&cycles, strategy, |cycle| {
        let lp = build_bound_lp(toroid, u, cycle)?;
        let sol = solve_bound_lp(&lp)?;
        if sol.status != Status::Optimal {
            return Err(Error::Solver("not optimal"));
        }
        Ok(CycleResult {
            cycle: cycle.clone(),
            optimum: sol.objective_value,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{diagonal_cycle, odd_toroid_certificate};
    use crate::topology::ProcessId;

    #[test]
    fn schema_sizes() {
        let t = Toroid::new(3, 1).unwrap();
        let lp = build_bound_lp(t, &Uncertainty::one(), &diagonal_cycle(t).unwrap()).unwrap();
        assert_eq!(lp.program.variables.len(), 3 + 9);
        assert_eq!(lp.program.constraints.len(), 3 * 3 * 2 + 3 * 2);
        let t = Toroid::new(5, 1).unwrap();
        let lp = build_bound_lp(t, &Uncertainty::one(), &diagonal_cycle(t).unwrap()).unwrap();
        assert_eq!(lp.program.variables.len(), 5 + 25);
    }

    #[test]
    fn non_cancelling_cycle_rejected() {
        let t = Toroid::new(3, 1).unwrap();
        let p = |c| ProcessId::new(vec![c]);
        let cycle = PairCycle::new(vec![(p(0), p(1)), (p(0), p(2))]);
        assert_eq!(
            build_bound_lp(t, &Uncertainty::one(), &cycle).unwrap_err(),
            Error::NonCancellingCycle
        );
    }

    #[test]
    fn identical_pairs_give_zero() {
        let t = Toroid::new(3, 1).unwrap();
        let p = ProcessId::new(vec![1]);
        let cycle = PairCycle::new(vec![(p.clone(), p.clone()); 3]);
        let lp = build_bound_lp(t, &Uncertainty::one(), &cycle).unwrap();
        assert!(lp.program.objective.is_empty());
        assert_eq!(solve_bound_lp(&lp).unwrap().objective_value, int(0));
    }

    #[test]
    fn three_ring_optimum() {
        let t = Toroid::new(3, 1).unwrap();
        let best = best_certificate(t, &Uncertainty::one(), &diagonal_cycle(t).unwrap()).unwrap();
        assert_eq!(best.solution.objective_value, ratio(2, 3));
        assert_eq!(best.report.bound, ratio(2, 3));
        assert!(best.report.passed());
    }

    #[test]
    fn constructed_certificate_is_feasible_point() {
        let t = Toroid::new(5, 1).unwrap();
        let u = Uncertainty::one();
        let lp = build_bound_lp(t, &u, &diagonal_cycle(t).unwrap()).unwrap();
        let cert = odd_toroid_certificate(t, &u).unwrap();
        let point = lp.point_of(&cert).unwrap();
        assert!(lp.program.is_feasible(&point));
        assert_eq!(lp.program.objective_at(&point), ratio(6, 5));
        assert_eq!(lp.certificate_of(&point).unwrap(), cert);
    }

    #[test]
    fn enumeration_limits_and_counts() {
        assert_eq!(enumerate_cycles(Toroid::new(3, 1).unwrap()).unwrap().len(), 6);
        assert_eq!(enumerate_cycles(Toroid::new(2, 2).unwrap()).unwrap().len(), 24);
        assert!(enumerate_cycles(Toroid::new(3, 2).unwrap()).is_err());
        assert!(enumerate_cycles(Toroid::new(3, 1).unwrap())
            .unwrap()
            .iter()
            .all(|c| c.is_cancelling()));
    }

    #[test]
    fn three_ring_cycle_search_peaks_at_closed_form() {
        let t = Toroid::new(3, 1).unwrap();
        let results = search_cycles(t, &Uncertainty::one(), Strategy::default()).unwrap();
        let best = results.iter().map(|r| r.optimum.clone()).max().unwrap();
        assert_eq!(best, ratio(2, 3));
        // The identity permutation certifies nothing.
        assert_eq!(results[0].optimum, int(0));
    }
}
