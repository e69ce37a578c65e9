//! Per-coordinate shift amounts `W^i_c` for the `k` shifted executions, and
//! the per-edge delay changes they induce.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::execution::{ShiftMatrix, Uncertainty};
use crate::rational::{int, Rational};
use crate::topology::Toroid;

fn check_index(value: usize, k: usize) -> Result<()> {
    if value < k {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: value, limit: k })
    }
}

/// Shift amount of coordinate value `c` in execution `i`.
///
/// With `k = 2r + 1`, for `i < r`:
///
/// | `c`                    | `W^i_c`          |
/// |------------------------|------------------|
/// | `0 ..= i`              | 0                |
/// | `i+1 ..= r`            | `(c - i) u`      |
/// | `r+1 ..= r+i+1`        | `(r - i) u`      |
/// | `r+i+2 ..= 2r`         | `(2r - c + 1) u` |
///
/// and for `r <= i < k`:
///
/// | `c`                    | `W^i_c`          |
/// |------------------------|------------------|
/// | `0 ..= i-r`            | `c u`            |
/// | `i-r+1 ..= r`          | `(i - r) u`      |
/// | `r+1 ..= i`            | `(i - c) u`      |
/// | `i+1 ..= 2r`           | 0                |
pub fn w_entry(toroid: Toroid, u: &Uncertainty, i: usize, c: usize) -> Result<Rational> {
    let r = toroid.radius()?;
    let k = toroid.k();
    check_index(i, k)?;
    check_index(c, k)?;
    let (i, c, r) = (i as i64, c as i64, r as i64);
    let steps = if i < r {
        if c <= i {
            0
        } else if c <= r {
            c - i
        } else if c <= r + i + 1 {
            r - i
        } else {
            2 * r - c + 1
        }
    } else if c <= i - r {
        c
    } else if c <= r {
        i - r
    } else if c <= i {
        i - c
    } else {
        0
    };
    Ok(int(steps) * u.value())
}

/// `x^i_p = sum_j W^i_{p_j}`.
pub fn shift_matrix(toroid: Toroid, u: &Uncertainty, i: usize) -> Result<ShiftMatrix> {
    let row = (0..toroid.k())
        .map(|c| w_entry(toroid, u, i, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftMatrix::from_fn(toroid, |p| {
        p.coords().iter().fold(Rational::zero(), |acc, &c| acc + &row[c])
    }))
}

/// Delay change on a forward edge leaving coordinate `c`:
/// `W^i_{(c+1) mod k} - W^i_c`, computed from [`w_entry`].
pub fn delta(toroid: Toroid, u: &Uncertainty, i: usize, c: usize) -> Result<Rational> {
    let next = (c + 1) % toroid.k();
    check_index(c, toroid.k())?;
    Ok(w_entry(toroid, u, i, next)? - w_entry(toroid, u, i, c)?)
}

/// The delay-change table as usually tabulated by range of `c`, or `None`
/// where the tabulation has no row. For `i < r` it skips `c = r + i + 1`.
pub fn tabulated_delta(toroid: Toroid, u: &Uncertainty, i: usize, c: usize) -> Result<Option<Rational>> {
    let r = toroid.radius()?;
    check_index(i, toroid.k())?;
    check_index(c, toroid.k())?;
    let uv = u.value().clone();
    let zero = Rational::zero();
    let value = if i < r {
        if c < i {
            Some(zero)
        } else if c < r {
            Some(uv)
        } else if c < r + i + 1 {
            Some(zero)
        } else if c >= r + i + 2 && c <= 2 * r {
            Some(-uv)
        } else {
            None
        }
    } else if c < i - r {
        Some(uv)
    } else if c < r {
        Some(zero)
    } else if c < i {
        Some(-uv)
    } else {
        Some(zero)
    };
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaCell {
    pub execution: usize,
    pub coordinate: usize,
    pub computed: Rational,
    pub tabulated: Option<Rational>,
}

/// Comparison of [`delta`] against [`tabulated_delta`] over every `(i, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaAudit {
    pub k: usize,
    pub agreements: usize,
    /// Covered cells where the two disagree. Expected to be empty.
    pub mismatches: Vec<DeltaCell>,
    /// Cells with no tabulated row.
    pub uncovered: Vec<DeltaCell>,
}

pub fn audit_delta_table(k: usize, u: &Uncertainty) -> Result<DeltaAudit> {
    let toroid = Toroid::new(k, 1)?;
    toroid.radius()?;
    let mut audit = DeltaAudit {
        k,
        agreements: 0,
        mismatches: Vec::new(),
        uncovered: Vec::new(),
    };
    for i in 0..k {
        for c in 0..k {
            let computed = delta(toroid, u, i, c)?;
            let tabulated = tabulated_delta(toroid, u, i, c)?;
            match &tabulated {
                Some(t) if *t == computed => audit.agreements += 1,
                Some(_) => audit.mismatches.push(DeltaCell {
                    execution: i,
                    coordinate: c,
                    computed,
                    tabulated,
                }),
                None => audit.uncovered.push(DeltaCell {
                    execution: i,
                    coordinate: c,
                    computed,
                    tabulated,
                }),
            }
        }
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::topology::ProcessId;

    fn row(k: usize, i: usize) -> Vec<Rational> {
        let t = Toroid::new(k, 1).unwrap();
        (0..k).map(|c| w_entry(t, &Uncertainty::one(), i, c).unwrap()).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| int(n)).collect()
    }

    #[test]
    fn five_ring_rows() {
        assert_eq!(row(5, 1), ints(&[0, 0, 1, 1, 1]));
        assert_eq!(row(5, 4), ints(&[0, 1, 2, 1, 0]));
        assert_eq!(row(5, 0), ints(&[0, 1, 2, 2, 1]));
        assert_eq!(row(5, 2), ints(&[0, 0, 0, 0, 0]));
        assert_eq!(row(5, 3), ints(&[0, 1, 1, 0, 0]));
        assert_eq!(row(3, 0), ints(&[0, 1, 1]));
    }

    #[test]
    fn rows_scale_with_u() {
        let t = Toroid::new(5, 1).unwrap();
        let u = Uncertainty::new(ratio(7, 3)).unwrap();
        assert_eq!(w_entry(t, &u, 4, 2).unwrap(), ratio(14, 3));
    }

    #[test]
    fn index_and_parity_errors() {
        let t = Toroid::new(5, 1).unwrap();
        let u = Uncertainty::one();
        assert_eq!(w_entry(t, &u, 5, 0), Err(Error::IndexOutOfRange { index: 5, limit: 5 }));
        assert_eq!(w_entry(t, &u, 0, 7), Err(Error::IndexOutOfRange { index: 7, limit: 5 }));
        let even = Toroid::new(4, 1).unwrap();
        assert_eq!(w_entry(even, &u, 0, 0), Err(Error::EvenArity(4)));
        assert_eq!(delta(t, &u, 0, 5), Err(Error::IndexOutOfRange { index: 5, limit: 5 }));
    }

    #[test]
    fn shift_matrix_sums_coordinates() {
        let t = Toroid::new(3, 2).unwrap();
        let x = shift_matrix(t, &Uncertainty::one(), 0).unwrap();
        let at = |c: &[usize]| x.get(&ProcessId::new(c.to_vec())).unwrap().clone();
        assert_eq!(at(&[0, 0]), int(0));
        assert_eq!(at(&[1, 1]), int(2));
        assert_eq!(at(&[2, 2]), int(2));
        assert_eq!(at(&[1, 2]), int(2));
        assert_eq!(at(&[0, 2]), int(1));
        let ring = Toroid::new(5, 1).unwrap();
        assert_eq!(
            shift_matrix(ring, &Uncertainty::one(), 1).unwrap().values(),
            &ints(&[0, 0, 1, 1, 1])[..]
        );
    }

    #[test]
    fn delta_examples() {
        let t = Toroid::new(5, 1).unwrap();
        let u = Uncertainty::one();
        assert_eq!(delta(t, &u, 1, 1).unwrap(), int(1));
        assert_eq!(delta(t, &u, 4, 3).unwrap(), int(-1));
        assert_eq!(delta(t, &u, 0, 3).unwrap(), int(-1));
        assert_eq!(tabulated_delta(t, &u, 0, 3).unwrap(), None);
    }

    #[test]
    fn audit_flags_exactly_one_uncovered_cell_per_low_execution() {
        let u = Uncertainty::one();
        let audit = audit_delta_table(7, &u).unwrap();
        assert!(audit.mismatches.is_empty());
        assert_eq!(audit.uncovered.len(), 3);
        for cell in &audit.uncovered {
            assert_eq!(cell.coordinate, 3 + cell.execution + 1);
            assert_eq!(cell.computed, int(-1));
        }
        assert_eq!(audit.agreements, 49 - 3);
    }
}
