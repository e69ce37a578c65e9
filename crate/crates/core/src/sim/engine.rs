//! Event loop. One start event per process at hardware reading 0, then
//! message receipts; nothing else happens spontaneously.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::execution::{DelayAssignment, Uncertainty};
use crate::rational::Rational;
use crate::topology::{DirectedEdge, Port, ProcessId, Toroid};

use super::record::{Event, ExecutionRecord, HardwareClocks, LoggedMessage, Outgoing, Payload, Step};

/// What a process does in response to one event.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Reaction {
    pub send: Vec<Outgoing>,
    /// New value of the adjustment variable, if it changed.
    pub adj: Option<Rational>,
}

impl Reaction {
    pub fn none() -> Self {
        Reaction::default()
    }
}

/// What a process knows about itself before the run starts.
#[derive(Debug, Clone)]
pub struct ProcessContext {
    pub id: ProcessId,
    pub toroid: Toroid,
    pub u: Uncertainty,
}

/// A process state machine. Transitions see the event and the current
/// hardware clock reading, never real time.
pub trait Process {
    fn on_start(&mut self, reading: &Rational) -> Reaction;
    fn on_receive(&mut self, port: Port, payload: &Payload, reading: &Rational) -> Reaction;
}

pub trait Algorithm: Sync {
    fn name(&self) -> &str;
    fn spawn(&self, ctx: &ProcessContext) -> Box<dyn Process>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub max_events: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { max_events: 1_000_000 }
    }
}

enum Work {
    Start,
    Deliver { edge: DirectedEdge, payload: Payload },
}

/// Queue entry ordered by `(real time, receiver rank, sender, sender seq)`;
/// start events sort before receipts at the same instant.
struct Pending {
    time: Rational,
    rank: usize,
    receiver: usize,
    sender: Option<usize>,
    seq: u64,
    work: Work,
}

impl Pending {
    fn key(&self) -> (&Rational, usize, Option<usize>, u64) {
        (&self.time, self.rank, self.sender, self.seq)
    }
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Ranks processes so that every zero-delay edge goes from a lower rank to a
/// higher one. Within an instant a process then handles its events only
/// after every zero-delay message for that instant has reached it. Processes
/// on a zero-delay cycle, if any, keep index order after the acyclic part.
fn zero_delay_ranks(toroid: Toroid, delays: &DelayAssignment) -> Vec<usize> {
    let n = toroid.process_count();
    let mut indegree = vec![0usize; n];
    let mut successors = vec![Vec::new(); n];
    for (index, edge) in toroid.directed_edges().into_iter().enumerate() {
        if delays.by_index(index).is_zero() {
            let (from, to) = (toroid.index(&edge.from), toroid.index(&edge.to));
            successors[from].push(to);
            indegree[to] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&p| indegree[p] == 0).map(Reverse).collect();
    let mut rank = vec![usize::MAX; n];
    let mut next = 0;
    while let Some(Reverse(p)) = ready.pop() {
        rank[p] = next;
        next += 1;
        for &q in &successors[p] {
            indegree[q] -= 1;
            if indegree[q] == 0 {
                ready.push(Reverse(q));
            }
        }
    }
    for r in rank.iter_mut().filter(|r| **r == usize::MAX) {
        *r = next;
        next += 1;
    }
    rank
}

pub fn run(
    toroid: Toroid,
    clocks: &HardwareClocks,
    delays: &DelayAssignment,
    algorithm: &dyn Algorithm,
) -> Result<ExecutionRecord> {
    run_with(toroid, clocks, delays, algorithm, SimConfig::default())
}

/// Simulates until no message is in flight. Every message on an edge takes
/// exactly that edge's delay.
pub fn run_with(
    toroid: Toroid,
    clocks: &HardwareClocks,
    delays: &DelayAssignment,
    algorithm: &dyn Algorithm,
    config: SimConfig,
) -> Result<ExecutionRecord> {
    if clocks.toroid() != toroid || delays.toroid() != toroid {
        return Err(Error::TopologyMismatch);
    }
    if let Some(d) = delays.delays().iter().find(|d| d.is_negative()) {
        return Err(Error::Parameter(format!(
            "negative delay {} cannot be simulated",
            crate::rational::format_rational(d)
        )));
    }
    let n = toroid.process_count();
    let u = delays.uncertainty().clone();
    let mut processes: Vec<Box<dyn Process>> = toroid
        .processes()
        .map(|id| {
            algorithm.spawn(&ProcessContext {
                id,
                toroid,
                u: u.clone(),
            })
        })
        .collect();

    let rank = zero_delay_ranks(toroid, delays);
    let mut queue = BinaryHeap::new();
    for (p, (offset, &rank)) in clocks.offsets().iter().zip(&rank).enumerate() {
        queue.push(Reverse(Pending {
            time: -offset.clone(),
            rank,
            receiver: p,
            sender: None,
            seq: 0,
            work: Work::Start,
        }));
    }

    let mut histories: Vec<Vec<Step>> = vec![Vec::new(); n];
    let mut adj = vec![Rational::zero(); n];
    let mut messages = Vec::new();
    let mut sent_count = vec![0u64; n];
    let mut last_key: Vec<Option<(Rational, Option<usize>, u64)>> = vec![None; n];
    let mut anomalous = vec![false; n];
    let mut handled = 0usize;

    while let Some(Reverse(pending)) = queue.pop() {
        handled += 1;
        if handled > config.max_events {
            return Err(Error::EventCap(config.max_events));
        }
        let p = pending.receiver;
        let id = toroid.process(p);
        let reading = &pending.time + &clocks.offsets()[p];

        let key = (pending.time.clone(), pending.sender, pending.seq);
        if let Some(prev) = &last_key[p] {
            if *prev > key {
                anomalous[p] = true;
            }
        }
        last_key[p] = Some(key);

        let (event, reaction) = match pending.work {
            Work::Start => (Event::Start, processes[p].on_start(&reading)),
            Work::Deliver { edge, payload } => {
                let port = edge.target_port();
                let reaction = processes[p].on_receive(port, &payload, &reading);
                (Event::Receive { port, payload }, reaction)
            }
        };
        if let Some(value) = reaction.adj {
            adj[p] = value;
        }
        for out in &reaction.send {
            let edge = toroid.outgoing(&id, out.port)?;
            let delay = delays.by_index(toroid.edge_index(&edge)?);
            let recv_time = &pending.time + delay;
            let seq = sent_count[p];
            sent_count[p] += 1;
            messages.push(LoggedMessage {
                edge: edge.clone(),
                sender_seq: seq,
                send_time: pending.time.clone(),
                recv_time: recv_time.clone(),
                payload: out.payload.clone(),
            });
            let receiver = toroid.index(&edge.to);
            queue.push(Reverse(Pending {
                time: recv_time,
                rank: rank[receiver],
                receiver,
                sender: Some(p),
                seq,
                work: Work::Deliver {
                    edge,
                    payload: out.payload.clone(),
                },
            }));
        }
        histories[p].push(Step {
            event,
            reading,
            real_time: pending.time,
            sent: reaction.send,
        });
    }

    messages.sort_by_key(|m| (toroid.index(&m.edge.from), m.sender_seq));
    let mut simultaneous: Vec<(ProcessId, Rational)> = Vec::new();
    for (p, history) in histories.iter().enumerate() {
        let id = toroid.process(p);
        for pair in history.windows(2) {
            let entry = (id.clone(), pair[0].reading.clone());
            if pair[0].reading == pair[1].reading && simultaneous.last() != Some(&entry) {
                simultaneous.push(entry);
            }
        }
    }
    let order_anomalies = (0..n).filter(|&p| anomalous[p]).map(|p| toroid.process(p)).collect();
    Ok(ExecutionRecord {
        toroid,
        u,
        histories,
        adj,
        messages,
        simultaneous,
        order_anomalies,
    })
}
