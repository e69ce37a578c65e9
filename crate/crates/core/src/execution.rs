//! Delay assignments, shift matrices and admissibility, in exact arithmetic.
//!
//! Shifting process `p` later in real time by `x_p` changes the delay of
//! every message on `p -> q` from `d` to `d - x_p + x_q`.

use std::ops::{Add, Neg};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::topology::{DirectedEdge, ProcessId, Toroid};

/// The uniform delay uncertainty: admissible delays lie in `[0, u]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Uncertainty(#[serde(with = "rational::serde_text")] Rational);

impl Uncertainty {
    pub fn new(u: Rational) -> Result<Self> {
        if u.is_positive() {
            Ok(Uncertainty(u))
        } else {
            Err(Error::Parameter(format!(
                "u = {} must be positive",
                rational::format_rational(&u)
            )))
        }
    }

    pub fn one() -> Self {
        Uncertainty(rational::int(1))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// One delay per directed edge, indexed in canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayAssignment {
    toroid: Toroid,
    u: Uncertainty,
    delays: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayViolation {
    pub edge: DirectedEdge,
    pub delay: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub violations: Vec<DelayViolation>,
}

impl DelayAssignment {
    pub fn new(toroid: Toroid, u: Uncertainty, delays: Vec<Rational>) -> Result<Self> {
        if delays.len() != toroid.edge_count() {
            return Err(Error::Parameter(format!(
                "expected {} delays, got {}",
                toroid.edge_count(),
                delays.len()
            )));
        }
        Ok(DelayAssignment { toroid, u, delays })
    }

    /// Every edge gets the same delay.
    pub fn uniform(toroid: Toroid, u: Uncertainty, delay: Rational) -> Self {
        let delays = vec![delay; toroid.edge_count()];
        DelayAssignment { toroid, u, delays }
    }

    pub fn toroid(&self) -> Toroid {
        self.toroid
    }

    pub fn uncertainty(&self) -> &Uncertainty {
        &self.u
    }

    pub fn delays(&self) -> &[Rational] {
        &self.delays
    }

    pub fn by_index(&self, index: usize) -> &Rational {
        &self.delays[index]
    }

    pub fn delay(&self, edge: &DirectedEdge) -> Result<&Rational> {
        Ok(&self.delays[self.toroid.edge_index(edge)?])
    }

    pub fn set(&mut self, edge: &DirectedEdge, delay: Rational) -> Result<()> {
        let i = self.toroid.edge_index(edge)?;
        self.delays[i] = delay;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (DirectedEdge, &Rational)> + '_ {
        self.delays.iter().enumerate().map(|(i, d)| (self.toroid.edge(i), d))
    }
}

/// The base execution's delay pattern: a forward edge leaving coordinate
/// `p_h < r` has delay 0, otherwise `u`; each reverse edge carries the
/// complement `u - forward`.
pub fn base_delays(toroid: Toroid, u: &Uncertainty) -> Result<DelayAssignment> {
    let r = toroid.radius()?;
    let uv = u.value();
    let delays = (0..toroid.edge_count())
        .map(|i| {
            let e = toroid.edge(i);
            let source = if e.forward { &e.from } else { &e.to };
            let forward = if source.coords()[e.dim] < r {
                Rational::zero()
            } else {
                uv.clone()
            };
            if e.forward {
                forward
            } else {
                uv - forward
            }
        })
        .collect();
    DelayAssignment::new(toroid, u.clone(), delays)
}

/// A real-time offset per process, indexed in lexicographic process order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftMatrix {
    toroid: Toroid,
    values: Vec<Rational>,
}

impl ShiftMatrix {
    pub fn new(toroid: Toroid, values: Vec<Rational>) -> Result<Self> {
        if values.len() != toroid.process_count() {
            return Err(Error::Parameter(format!(
                "expected {} shift entries, got {}",
                toroid.process_count(),
                values.len()
            )));
        }
        Ok(ShiftMatrix { toroid, values })
    }

    pub fn zeros(toroid: Toroid) -> Self {
        Self::constant(toroid, Rational::zero())
    }

    pub fn constant(toroid: Toroid, c: Rational) -> Self {
        ShiftMatrix {
            values: vec![c; toroid.process_count()],
            toroid,
        }
    }

    pub fn from_fn(toroid: Toroid, f: impl Fn(&ProcessId) -> Rational) -> Self {
        let values = toroid.processes().map(|p| f(&p)).collect();
        ShiftMatrix { toroid, values }
    }

    pub fn toroid(&self) -> Toroid {
        self.toroid
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn by_index(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn get(&self, p: &ProcessId) -> Result<&Rational> {
        Ok(&self.values[self.toroid.index_of(p)?])
    }

    pub fn set(&mut self, p: &ProcessId, value: Rational) -> Result<()> {
        let i = self.toroid.index_of(p)?;
        self.values[i] = value;
        Ok(())
    }

    pub fn try_add(&self, other: &ShiftMatrix) -> Result<ShiftMatrix> {
        if self.toroid != other.toroid {
            return Err(Error::TopologyMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(ShiftMatrix {
            toroid: self.toroid,
            values,
        })
    }

    /// `x_to - x_from`: the change a shift makes to the delay on `edge`.
    pub fn delay_change(&self, edge: &DirectedEdge) -> Result<Rational> {
        Ok(self.get(&edge.to)? - self.get(&edge.from)?)
    }
}

impl Add for &ShiftMatrix {
    type Output = ShiftMatrix;

    fn add(self, other: &ShiftMatrix) -> ShiftMatrix {
        self.try_add(other).expect("shift matrices on the same toroid")
    }
}

impl Neg for &ShiftMatrix {
    type Output = ShiftMatrix;

    fn neg(self) -> ShiftMatrix {
        ShiftMatrix {
            toroid: self.toroid,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

/// Delays of the shifted execution. The result need not be admissible.
pub fn apply_shift(delays: &DelayAssignment, shift: &ShiftMatrix) -> Result<DelayAssignment> {
    let t = delays.toroid;
    if shift.toroid != t {
        return Err(Error::TopologyMismatch);
    }
    let shifted = delays
        .delays
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let e = t.edge(i);
            d - &shift.values[t.index(&e.from)] + &shift.values[t.index(&e.to)]
        })
        .collect();
    Ok(DelayAssignment {
        toroid: t,
        u: delays.u.clone(),
        delays: shifted,
    })
}

pub fn is_admissible(delays: &DelayAssignment) -> Admissibility {
    let u = delays.u.value();
    let violations: Vec<DelayViolation> = delays
        .delays
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_negative() || *d > u)
        .map(|(i, d)| DelayViolation {
            edge: delays.toroid.edge(i),
            delay: d.clone(),
        })
        .collect();
    Admissibility {
        admissible: violations.is_empty(),
        violations,
    }
}

/// True iff every reverse edge carries `u` minus its forward edge's delay.
pub fn reverse_complement_check(delays: &DelayAssignment) -> bool {
    let u = delays.u.value();
    delays.delays.chunks_exact(2).all(|pair| &(&pair[0] + &pair[1]) == u)
}
