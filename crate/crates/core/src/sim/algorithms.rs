use std::collections::{BTreeMap, VecDeque};

use crate::rational::{ratio, Rational};
use crate::topology::{Port, Toroid};

use super::engine::{Algorithm, Process, ProcessContext, Reaction};
use super::record::{Outgoing, Payload};

/// Never sends anything and never adjusts.
#[derive(Debug, Clone, Copy, Default)]
pub struct Silent;

impl Algorithm for Silent {
    fn name(&self) -> &str {
        "silent"
    }

    fn spawn(&self, _ctx: &ProcessContext) -> Box<dyn Process> {
        Box::new(SilentProcess)
    }
}

struct SilentProcess;

impl Process for SilentProcess {
    fn on_start(&mut self, _reading: &Rational) -> Reaction {
        Reaction::none()
    }

    fn on_receive(&mut self, _port: Port, _payload: &Payload, _reading: &Rational) -> Reaction {
        Reaction::none()
    }
}

/// Two-wave spanning-tree synchronization.
///
/// Wave 1: at reading 0 every process sends its send reading to every
/// neighbor; a receiver estimates `c_self - c_neighbor` as
/// `receive reading - send reading - u/2`. Wave 2: the root `<0,..,0>`
/// starts with estimate 0; a process that knows its parent's estimate of
/// `c_parent - c_root` adds its own edge estimate, sets `adj` to the
/// negated sum, and forwards the sum to every neighbor. Only messages on
/// the BFS parent port matter for wave 2.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReferenceSync;

pub const TIMESTAMP: &str = "timestamp";
pub const ESTIMATE: &str = "estimate";

impl Algorithm for ReferenceSync {
    fn name(&self) -> &str {
        "reference"
    }

    fn spawn(&self, ctx: &ProcessContext) -> Box<dyn Process> {
        let parent = bfs_parent_port(ctx.toroid, ctx.toroid.index(&ctx.id));
        Box::new(ReferenceProcess {
            ports: ctx.toroid.ports(),
            half_u: ctx.u.value() * ratio(1, 2),
            parent,
            edge_offsets: BTreeMap::new(),
            parent_estimate: None,
            done: false,
        })
    }
}

/// Port leading to the BFS parent (root `<0,..,0>`, neighbors visited in
/// canonical port order), or `None` at the root.
pub fn bfs_parent_port(toroid: Toroid, process: usize) -> Option<Port> {
    let n = toroid.process_count();
    let mut parent: Vec<Option<Port>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(p) = queue.pop_front() {
        if p == process {
            break;
        }
        let id = toroid.process(p);
        for port in toroid.ports() {
            let q = toroid.index(&toroid.neighbor(&id, port).expect("valid port"));
            if !seen[q] {
                seen[q] = true;
                parent[q] = Some(port.opposite());
                queue.push_back(q);
            }
        }
    }
    parent[process]
}

struct ReferenceProcess {
    ports: Vec<Port>,
    half_u: Rational,
    parent: Option<Port>,
    edge_offsets: BTreeMap<Port, Rational>,
    parent_estimate: Option<Rational>,
    done: bool,
}

impl ReferenceProcess {
    fn broadcast(&self, kind: &str, value: Rational) -> Vec<Outgoing> {
        self.ports
            .iter()
            .map(|&port| Outgoing {
                port,
                payload: Payload::new(kind, vec![value.clone()]),
            })
            .collect()
    }

    fn try_finish(&mut self) -> Reaction {
        if self.done {
            return Reaction::none();
        }
        let estimate = match self.parent {
            None => Rational::from_integer(0.into()),
            Some(port) => match (self.edge_offsets.get(&port), &self.parent_estimate) {
                (Some(edge), Some(upstream)) => edge + upstream,
                _ => return Reaction::none(),
            },
        };
        self.done = true;
        Reaction {
            adj: Some(-estimate.clone()),
            send: self.broadcast(ESTIMATE, estimate),
        }
    }
}

impl Process for ReferenceProcess {
    fn on_start(&mut self, reading: &Rational) -> Reaction {
        let mut send = self.broadcast(TIMESTAMP, reading.clone());
        let finish = self.try_finish();
        send.extend(finish.send);
        Reaction { send, adj: finish.adj }
    }

    fn on_receive(&mut self, port: Port, payload: &Payload, reading: &Rational) -> Reaction {
        let Some(value) = payload.values.first() else {
            return Reaction::none();
        };
        match payload.kind.as_str() {
            TIMESTAMP => {
                self.edge_offsets.insert(port, reading - value - &self.half_u);
            }
            ESTIMATE if Some(port) == self.parent && self.parent_estimate.is_none() => {
                self.parent_estimate = Some(value.clone());
            }
            _ => return Reaction::none(),
        }
        self.try_finish()
    }
}

/// Looks an algorithm up by its CLI name.
pub fn by_name(name: &str) -> Option<&'static dyn Algorithm> {
    match name {
        "silent" => Some(&Silent),
        "reference" | "reference-sync" => Some(&ReferenceSync),
        _ => None,
    }
}

pub const NAMES: [&str; 2] = ["reference", "silent"];
