use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::execution::{ShiftMatrix, Uncertainty};
use crate::rational::{self, Rational};
use crate::topology::{DirectedEdge, Port, ProcessId, Toroid};

/// Drift-free hardware clocks: `HC_p(t) = t + c_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardwareClocks {
    toroid: Toroid,
    offsets: Vec<Rational>,
}

impl HardwareClocks {
    pub fn new(toroid: Toroid, offsets: Vec<Rational>) -> Result<Self> {
        if offsets.len() != toroid.process_count() {
            return Err(Error::Parameter(format!(
                "expected {} clock offsets, got {}",
                toroid.process_count(),
                offsets.len()
            )));
        }
        Ok(HardwareClocks { toroid, offsets })
    }

    /// Every clock reads real time.
    pub fn zeros(toroid: Toroid) -> Self {
        HardwareClocks {
            toroid,
            offsets: vec![Rational::zero(); toroid.process_count()],
        }
    }

    pub fn toroid(&self) -> Toroid {
        self.toroid
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn offset(&self, p: &ProcessId) -> Result<&Rational> {
        Ok(&self.offsets[self.toroid.index_of(p)?])
    }

    /// Clocks after shifting by `x`: `c'_p = c_p - x_p`.
    pub fn shifted(&self, x: &ShiftMatrix) -> Result<HardwareClocks> {
        if x.toroid() != self.toroid {
            return Err(Error::TopologyMismatch);
        }
        let offsets = self.offsets.iter().zip(x.values()).map(|(c, s)| c - s).collect();
        Ok(HardwareClocks {
            toroid: self.toroid,
            offsets,
        })
    }

    pub fn plus_constant(&self, c: &Rational) -> HardwareClocks {
        HardwareClocks {
            toroid: self.toroid,
            offsets: self.offsets.iter().map(|o| o + c).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Payload {
    pub kind: String,
    #[serde(with = "rational_list")]
    pub values: Vec<Rational>,
}

impl Payload {
    pub fn new(kind: impl Into<String>, values: Vec<Rational>) -> Self {
        Payload {
            kind: kind.into(),
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Event {
    /// Fired once per process when its hardware clock reads 0.
    Start,
    Receive {
        port: Port,
        payload: Payload,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outgoing {
    pub port: Port,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub event: Event,
    #[serde(with = "rational::serde_text")]
    pub reading: Rational,
    #[serde(with = "rational::serde_text")]
    pub real_time: Rational,
    pub sent: Vec<Outgoing>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedMessage {
    pub edge: DirectedEdge,
    /// Position among all messages sent by `edge.from`.
    pub sender_seq: u64,
    #[serde(with = "rational::serde_text")]
    pub send_time: Rational,
    #[serde(with = "rational::serde_text")]
    pub recv_time: Rational,
    pub payload: Payload,
}

impl LoggedMessage {
    pub fn delay(&self) -> Rational {
        &self.recv_time - &self.send_time
    }
}

/// Everything observable about one run. Histories and `adj` are indexed
/// by process (lexicographic order); the message log is ordered by
/// `(sender, sender_seq)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionRecord {
    pub toroid: Toroid,
    pub u: Uncertainty,
    pub histories: Vec<Vec<Step>>,
    /// Final adjustment values after quiescence.
    pub adj: Vec<Rational>,
    pub messages: Vec<LoggedMessage>,
    /// Processes that handled more than one event at the same hardware
    /// reading, with that reading. The model asks for strictly increasing
    /// readings; ties are processed in `(sender, sender_seq)` order and
    /// reported here.
    pub simultaneous: Vec<(ProcessId, Rational)>,
    /// Processes where a same-instant, zero-delay message arrived after a
    /// later-ordered event had already been handled, so the tie order
    /// above could not be honored.
    pub order_anomalies: Vec<ProcessId>,
}

impl ExecutionRecord {
    /// `AC_p(t) - t = c_p + adj_p`; constant after quiescence.
    pub fn adjusted_offsets(&self, clocks: &HardwareClocks) -> Result<Vec<Rational>> {
        if clocks.toroid() != self.toroid {
            return Err(Error::TopologyMismatch);
        }
        Ok(clocks.offsets().iter().zip(&self.adj).map(|(c, a)| c + a).collect())
    }

    /// Every logged delay lies in `[0, u]`.
    pub fn is_admissible(&self) -> bool {
        let u = self.u.value();
        self.messages.iter().all(|m| {
            let d = m.delay();
            !d.is_negative() && d <= *u
        })
    }

    pub fn receive_count(&self) -> usize {
        self.histories
            .iter()
            .flatten()
            .filter(|s| matches!(s.event, Event::Receive { .. }))
            .count()
    }
}

mod rational_list {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(rational::format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| rational::parse_rational(t).map_err(de::Error::custom))
            .collect()
    }
}
