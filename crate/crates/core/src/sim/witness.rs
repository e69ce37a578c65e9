//! Exhibits the lower bound on a concrete algorithm: run the base
//! execution once, shift it by each `x^i`, and read off the skews between
//! the cycle's pairs.

use num_traits::Zero;

use crate::certificate::{check_certificate, closed_form, odd_toroid_certificate, Variant};
use crate::error::Result;
use crate::execution::{apply_shift, Uncertainty};
use crate::parallel::{map_indices, Strategy};
use crate::rational::Rational;
use crate::topology::{ProcessId, Toroid};

use super::engine::{run, Algorithm};
use super::record::{ExecutionRecord, HardwareClocks};
use super::shift::{indistinguishable, shift_execution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewEntry {
    pub execution: usize,
    pub a: ProcessId,
    pub b: ProcessId,
    /// `x^i_b - x^i_a`.
    pub shift_contribution: Rational,
    /// `AC^i_a - AC^i_b` after termination in the shifted execution.
    pub skew: Rational,
    pub admissible: bool,
    /// Shifted record has the same local histories as the base record.
    pub indistinguishable: bool,
    /// Simulating the shifted world from scratch reproduces the shifted
    /// record exactly, real times included.
    pub rerun_matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewReport {
    pub algorithm: String,
    pub toroid: Toroid,
    pub u: Uncertainty,
    pub entries: Vec<SkewEntry>,
    pub sum: Rational,
    pub max: Rational,
    /// Closed-form value the maximum must reach.
    pub bound: Rational,
    pub base: ExecutionRecord,
}

impl SkewReport {
    pub fn holds(&self) -> bool {
        self.max >= self.bound
            && self
                .entries
                .iter()
                .all(|e| e.admissible && e.indistinguishable && e.rerun_matches)
    }
}

pub fn skew_witness(toroid: Toroid, u: &Uncertainty, algorithm: &dyn Algorithm) -> Result<SkewReport> {
    skew_witness_with(toroid, u, algorithm, Strategy::default())
}

pub fn skew_witness_with(
    toroid: Toroid,
    u: &Uncertainty,
    algorithm: &dyn Algorithm,
    strategy: Strategy,
) -> Result<SkewReport> {
    let cert = odd_toroid_certificate(toroid, u)?;
    let bound = closed_form(Variant::ToroidOdd, toroid.k(), toroid.m(), u)?;
    debug_assert_eq!(check_certificate(&cert).bound, bound);

    let clocks = HardwareClocks::zeros(toroid);
    let base = run(toroid, &clocks, &cert.base, algorithm)?;

    let entries = map_indices(cert.shifts.len(), strategy, |i| -> Result<SkewEntry> {
        let x = &cert.shifts[i];
        let (a, b) = cert.cycle.pairs()[i].clone();
        let (shifted, shifted_clocks) = shift_execution(&base, &clocks, x)?;
        let ac = shifted.adjusted_offsets(&shifted_clocks)?;
        let skew = &ac[toroid.index(&a)] - &ac[toroid.index(&b)];
        let world = apply_shift(&cert.base, x)?;
        let rerun = run(toroid, &shifted_clocks, &world, algorithm)?;
        Ok(SkewEntry {
            execution: i,
            shift_contribution: x.by_index(toroid.index(&b)) - x.by_index(toroid.index(&a)),
            a,
            b,
            skew,
            admissible: shifted.is_admissible(),
            indistinguishable: indistinguishable(&base, &shifted),
            rerun_matches: rerun == shifted,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let sum = entries.iter().fold(Rational::zero(), |acc, e| acc + &e.skew);
    let max = entries
        .iter()
        .map(|e| e.skew.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(SkewReport {
        algorithm: algorithm.name().to_string(),
        toroid,
        u: u.clone(),
        entries,
        sum,
        max,
        bound,
        base,
    })
}
