use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::execution::Uncertainty;
use crate::rational::{int, ratio, Rational};

/// Network families with a known closed-form optimal skew under uniform
/// uncertainty `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `k`-ary `m`-toroid, `k` odd: `u m (k^2 - 1) / (4k)`.
    ToroidOdd,
    /// `k`-ary `m`-toroid, `k` even: `u m k / 4`.
    ToroidEven,
    /// `k`-ary `m`-cube without wraparound: `u m (k - 1) / 2`.
    Mesh,
    /// `n`-clique: `u (1 - 1/n)`.
    Clique,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toroid-odd" => Ok(Variant::ToroidOdd),
            "toroid-even" => Ok(Variant::ToroidEven),
            "mesh" => Ok(Variant::Mesh),
            "clique" => Ok(Variant::Clique),
            other => Err(Error::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::ToroidOdd => "toroid-odd",
            Variant::ToroidEven => "toroid-even",
            Variant::Mesh => "mesh",
            Variant::Clique => "clique",
        })
    }
}

/// `size` is `k` for the cube families and `n` for the clique (which
/// ignores `m`).
pub fn closed_form(variant: Variant, size: usize, m: usize, u: &Uncertainty) -> Result<Rational> {
    let u = u.value();
    let k = size as i64;
    let m_r = int(m as i64);
    let need_m = || {
        if m >= 1 {
            Ok(())
        } else {
            Err(Error::Parameter("m must be at least 1".into()))
        }
    };
    match variant {
        Variant::ToroidOdd => {
            need_m()?;
            if size < 3 || size.is_multiple_of(2) {
                return Err(Error::EvenArity(size));
            }
            Ok(u * m_r * ratio(k * k - 1, 4 * k))
        }
        Variant::ToroidEven => {
            need_m()?;
            if size < 2 || size % 2 == 1 {
                return Err(Error::Parameter(format!("toroid-even needs even k >= 2, got {size}")));
            }
            Ok(u * m_r * ratio(k, 4))
        }
        Variant::Mesh => {
            need_m()?;
            if size < 2 {
                return Err(Error::Parameter(format!("mesh needs k >= 2, got {size}")));
            }
            Ok(u * m_r * ratio(k - 1, 2))
        }
        Variant::Clique => {
            if size < 2 {
                return Err(Error::Parameter(format!("clique needs n >= 2, got {size}")));
            }
            Ok(u * ratio(k - 1, k))
        }
    }
}
