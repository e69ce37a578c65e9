//! Lower-bound certificates: a base delay pattern, a family of shift
//! matrices and a cancelling pair cycle.
//!
//! For each execution `i` the shifted run is admissible, so any algorithm
//! must keep `AC^i_{a_i} - AC^i_{b_i} <= eps` after termination. Shifting by
//! `x^i` gives `AC^i_p = AC_p - x^i_p`, hence
//! `AC_{a_i} - AC_{b_i} + (x^i_{b_i} - x^i_{a_i}) <= eps`. When the minuends
//! and subtrahends of the cycle form the same multiset the base clock terms
//! cancel in the sum, leaving `eps >= (1/N) sum_i (x^i_{b_i} - x^i_{a_i})`.
//!
//! [`check_certificate`] re-derives all of this from the certificate alone.

mod closed_form;
mod table;

pub use closed_form::{closed_form, Variant};
pub use table::{audit_delta_table, delta, shift_matrix, tabulated_delta, w_entry, DeltaAudit, DeltaCell};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::execution::{
    apply_shift, base_delays, is_admissible, DelayAssignment, DelayViolation, ShiftMatrix, Uncertainty,
};
use crate::parallel::{map_indices, Strategy};
use crate::rational::{int, Rational};
use crate::topology::{ProcessId, Toroid};

/// Printed alongside every report so the bound can be re-derived by hand.
pub const SIGN_CONVENTION: &str = "shifting process p by x_p gives AC'_p = AC_p - x_p; \
execution i contributes x^i[b_i] - x^i[a_i]; bound = (1/N) * sum of contributions";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCycle {
    pairs: Vec<(ProcessId, ProcessId)>,
}

impl PairCycle {
    pub fn new(pairs: Vec<(ProcessId, ProcessId)>) -> Self {
        PairCycle { pairs }
    }

    pub fn pairs(&self) -> &[(ProcessId, ProcessId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Multiset of minuends equals multiset of subtrahends.
    pub fn is_cancelling(&self) -> bool {
        let (mut a, mut b): (Vec<_>, Vec<_>) = self.pairs.iter().cloned().unzip();
        a.sort();
        b.sort();
        a == b
    }

    fn surplus(&self) -> (Vec<ProcessId>, Vec<ProcessId>) {
        let (mut a, mut b): (Vec<_>, Vec<_>) = self.pairs.iter().cloned().unzip();
        a.sort();
        b.sort();
        let (mut only_a, mut only_b) = (Vec::new(), Vec::new());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    only_a.push(x.clone());
                    i += 1;
                }
                (Some(x), None) => {
                    only_a.push(x.clone());
                    i += 1;
                }
                (_, Some(y)) => {
                    only_b.push(y.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        (only_a, only_b)
    }
}

/// Pairs `<i,..,i>` with the diagonal process farthest from it:
/// `<i+r+1,..>` for `i < r` and `<i-r,..>` for `i >= r`.
pub fn diagonal_cycle(toroid: Toroid) -> Result<PairCycle> {
    let r = toroid.radius()?;
    let k = toroid.k();
    let pairs = (0..k)
        .map(|i| {
            let partner = if i < r { i + r + 1 } else { i - r };
            (toroid.diagonal(i), toroid.diagonal(partner % k))
        })
        .collect();
    Ok(PairCycle::new(pairs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub toroid: Toroid,
    pub u: Uncertainty,
    pub base: DelayAssignment,
    pub shifts: Vec<ShiftMatrix>,
    pub cycle: PairCycle,
}

/// The `k`-execution certificate for an odd toroid: base delays from
/// [`base_delays`], shifts `x^0 .. x^{k-1}` and the [`diagonal_cycle`].
pub fn odd_toroid_certificate(toroid: Toroid, u: &Uncertainty) -> Result<Certificate> {
    let base = base_delays(toroid, u)?;
    let shifts = (0..toroid.k())
        .map(|i| shift_matrix(toroid, u, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate {
        toroid,
        u: u.clone(),
        base,
        shifts,
        cycle: diagonal_cycle(toroid)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub execution: usize,
    pub a: ProcessId,
    pub b: ProcessId,
    pub contribution: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckIssue {
    /// The certificate is malformed (wrong sizes, foreign processes, ...).
    Structure(String),
    Inadmissible {
        execution: usize,
        violations: Vec<DelayViolation>,
    },
    NonCancelling {
        unmatched_minuends: Vec<ProcessId>,
        unmatched_subtrahends: Vec<ProcessId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub bound: Rational,
    pub per_execution: Vec<Contribution>,
    pub admissibility_ok: bool,
    pub cancellation_ok: bool,
    pub issues: Vec<CheckIssue>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.admissibility_ok && self.cancellation_ok && self.issues.is_empty()
    }

    fn malformed(issue: String) -> Self {
        BoundReport {
            bound: Rational::zero(),
            per_execution: Vec::new(),
            admissibility_ok: false,
            cancellation_ok: false,
            issues: vec![CheckIssue::Structure(issue)],
        }
    }
}

pub fn check_certificate(cert: &Certificate) -> BoundReport {
    check_certificate_with(cert, Strategy::default())
}

/// Validates a certificate from scratch. Never fails: every problem is
/// reported in the returned [`BoundReport`].
pub fn check_certificate_with(cert: &Certificate, strategy: Strategy) -> BoundReport {
    let t = cert.toroid;
    if let Err(issue) = check_structure(cert) {
        return BoundReport::malformed(issue);
    }

    let violations = map_indices(cert.shifts.len(), strategy, |i| {
        let shifted = apply_shift(&cert.base, &cert.shifts[i]).expect("structure checked");
        is_admissible(&shifted).violations
    });
    let mut issues = Vec::new();
    for (execution, violations) in violations.into_iter().enumerate() {
        if !violations.is_empty() {
            issues.push(CheckIssue::Inadmissible { execution, violations });
        }
    }
    let admissibility_ok = issues.is_empty();

    let cancellation_ok = cert.cycle.is_cancelling();
    if !cancellation_ok {
        let (unmatched_minuends, unmatched_subtrahends) = cert.cycle.surplus();
        issues.push(CheckIssue::NonCancelling {
            unmatched_minuends,
            unmatched_subtrahends,
        });
    }

    let per_execution: Vec<Contribution> = cert
        .cycle
        .pairs()
        .iter()
        .zip(&cert.shifts)
        .enumerate()
        .map(|(execution, ((a, b), x))| Contribution {
            execution,
            a: a.clone(),
            b: b.clone(),
            contribution: x.by_index(t.index(b)) - x.by_index(t.index(a)),
        })
        .collect();
    let total = per_execution
        .iter()
        .fold(Rational::zero(), |acc, c| acc + &c.contribution);
    let bound = total / int(per_execution.len() as i64);

    BoundReport {
        bound,
        per_execution,
        admissibility_ok,
        cancellation_ok,
        issues,
    }
}

fn check_structure(cert: &Certificate) -> std::result::Result<(), String> {
    let t = cert.toroid;
    if cert.base.toroid() != t {
        return Err("base delays belong to a different toroid".into());
    }
    if cert.base.uncertainty() != &cert.u {
        return Err("base delays use a different uncertainty".into());
    }
    if cert.cycle.is_empty() {
        return Err("pair cycle is empty".into());
    }
    if cert.cycle.len() != cert.shifts.len() {
        return Err(format!(
            "{} shift matrices but {} cycle pairs",
            cert.shifts.len(),
            cert.cycle.len()
        ));
    }
    if let Some(i) = cert.shifts.iter().position(|x| x.toroid() != t) {
        return Err(format!("shift {i} belongs to a different toroid"));
    }
    for (i, (a, b)) in cert.cycle.pairs().iter().enumerate() {
        if !t.contains(a) || !t.contains(b) {
            return Err(format!("cycle pair {i} names a process outside the toroid"));
        }
    }
    Ok(())
}

/// Rejects cycles that do not cancel; used by the LP builder.
pub fn require_cancelling(cycle: &PairCycle) -> Result<()> {
    if cycle.is_cancelling() {
        Ok(())
    } else {
        Err(Error::NonCancellingCycle)
    }
}
