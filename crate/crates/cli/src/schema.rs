//! JSON layout of certificate and cycle files. Key order is fixed by the
//! struct field order; rationals are canonical `num/den` strings.

use serde::{Deserialize, Serialize};
use toroid_core::certificate::{Certificate, PairCycle};
use toroid_core::execution::{DelayAssignment, ShiftMatrix, Uncertainty};
use toroid_core::rational::{format_rational, parse_rational};
use toroid_core::topology::{ProcessId, Toroid};
use toroid_core::Rational;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub k: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayDoc {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub delay: String,
    /// Only present on 2-ary toroids, where two links join each pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftEntryDoc {
    pub process: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftDoc {
    pub index: usize,
    pub entries: Vec<ShiftEntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub params: ParamsDoc,
    pub u: String,
    pub base_delays: Vec<DelayDoc>,
    pub shifts: Vec<ShiftDoc>,
    pub cycle: Vec<PairDoc>,
}

/// A cycle file is either a bare list of pairs or an object with a
/// `cycle` key, so a certificate file can be reused as-is.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CycleFile {
    Pairs(Vec<PairDoc>),
    Wrapped { cycle: Vec<PairDoc> },
}

pub fn text(value: &Rational) -> String {
    format_rational(value)
}

fn rational(field: &str, value: &str) -> Result<Rational, CliError> {
    parse_rational(value).map_err(|e| CliError::Schema(format!("{field}: {e}")))
}

fn process(toroid: Toroid, field: &str, coords: &[usize]) -> Result<ProcessId, CliError> {
    let id = ProcessId::new(coords.to_vec());
    toroid
        .check(&id)
        .map_err(|e| CliError::Schema(format!("{field}: {e}")))?;
    Ok(id)
}

pub fn cycle_doc(cycle: &PairCycle) -> Vec<PairDoc> {
    cycle
        .pairs()
        .iter()
        .map(|(a, b)| PairDoc {
            a: a.coords().to_vec(),
            b: b.coords().to_vec(),
        })
        .collect()
}

pub fn parse_cycle(toroid: Toroid, pairs: &[PairDoc]) -> Result<PairCycle, CliError> {
    let pairs = pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let field = format!("cycle[{i}]");
            Ok((process(toroid, &field, &pair.a)?, process(toroid, &field, &pair.b)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(PairCycle::new(pairs))
}

pub fn read_cycle_file(toroid: Toroid, json: &str) -> Result<PairCycle, CliError> {
    let pairs = match serde_json::from_str(json).map_err(CliError::schema)? {
        CycleFile::Pairs(pairs) | CycleFile::Wrapped { cycle: pairs } => pairs,
    };
    parse_cycle(toroid, &pairs)
}

impl CertificateDoc {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let t = cert.toroid;
        let two_ary = t.k() == 2;
        let base_delays = cert
            .base
            .iter()
            .map(|(edge, delay)| DelayDoc {
                from: edge.from.coords().to_vec(),
                to: edge.to.coords().to_vec(),
                delay: text(delay),
                forward: two_ary.then_some(edge.forward),
            })
            .collect();
        let shifts = cert
            .shifts
            .iter()
            .enumerate()
            .map(|(index, x)| ShiftDoc {
                index,
                entries: t
                    .processes()
                    .zip(x.values())
                    .map(|(p, v)| ShiftEntryDoc {
                        process: p.coords().to_vec(),
                        value: text(v),
                    })
                    .collect(),
            })
            .collect();
        CertificateDoc {
            params: ParamsDoc { k: t.k(), m: t.m() },
            u: text(cert.u.value()),
            base_delays,
            shifts,
            cycle: cycle_doc(&cert.cycle),
        }
    }

    pub fn from_json(json: &str) -> Result<Self, CliError> {
        serde_json::from_str(json).map_err(CliError::schema)
    }

    /// Resolves every entry against the toroid. Each directed edge needs
    /// exactly one delay and each shift exactly one value per process;
    /// whether the result is a valid proof is left to the checker.
    pub fn to_certificate(&self) -> Result<Certificate, CliError> {
        let t = Toroid::new(self.params.k, self.params.m).map_err(CliError::schema)?;
        let u = Uncertainty::new(rational("u", &self.u)?).map_err(CliError::schema)?;

        let mut delays: Vec<Option<Rational>> = vec![None; t.edge_count()];
        for (i, entry) in self.base_delays.iter().enumerate() {
            let field = format!("base_delays[{i}]");
            let from = process(t, &field, &entry.from)?;
            let to = process(t, &field, &entry.to)?;
            let edge = t
                .edge_between(&from, &to, entry.forward)
                .map_err(|e| CliError::Schema(format!("{field}: {e}")))?;
            let slot = &mut delays[t.edge_index(&edge).map_err(CliError::schema)?];
            if slot.is_some() {
                return Err(CliError::Schema(format!("{field}: duplicate delay for {edge}")));
            }
            *slot = Some(rational(&field, &entry.delay)?);
        }
        let delays = delays
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or_else(|| CliError::Schema(format!("no delay for edge {}", t.edge(i)))))
            .collect::<Result<Vec<_>, _>>()?;
        let base = DelayAssignment::new(t, u.clone(), delays).map_err(CliError::schema)?;

        let mut order: Vec<&ShiftDoc> = self.shifts.iter().collect();
        order.sort_by_key(|s| s.index);
        let mut shifts = Vec::with_capacity(order.len());
        for (expected, doc) in order.into_iter().enumerate() {
            if doc.index != expected {
                return Err(CliError::Schema(format!(
                    "shift indices must be 0..{}",
                    self.shifts.len()
                )));
            }
            let mut values: Vec<Option<Rational>> = vec![None; t.process_count()];
            for entry in &doc.entries {
                let field = format!("shifts[{}]", doc.index);
                let p = process(t, &field, &entry.process)?;
                let slot = &mut values[t.index(&p)];
                if slot.is_some() {
                    return Err(CliError::Schema(format!("{field}: duplicate entry for {p}")));
                }
                *slot = Some(rational(&field, &entry.value)?);
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(p, v)| {
                    v.ok_or_else(|| CliError::Schema(format!("shifts[{}]: no value for {}", doc.index, t.process(p))))
                })
                .collect::<Result<Vec<_>, _>>()?;
            shifts.push(ShiftMatrix::new(t, values).map_err(CliError::schema)?);
        }

        let cycle = parse_cycle(t, &self.cycle)?;
        Ok(Certificate {
            toroid: t,
            u,
            base,
            shifts,
            cycle,
        })
    }
}
