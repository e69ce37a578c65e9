//! k-ary m-toroids: node ids, neighbor arithmetic and canonical edge order.
//!
//! Processes are enumerated lexicographically over their coordinates
//! (coordinate 0 most significant). Directed edges are enumerated as, for
//! each process `p` in that order and each dimension `h`, the forward edge
//! `p -> successor(p, h)` followed by its reverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Toroid {
    k: usize,
    m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProcessId(Vec<usize>);

impl ProcessId {
    pub fn new(coords: Vec<usize>) -> Self {
        ProcessId(coords)
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for ProcessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (j, c) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Plus,
    Minus,
}

/// A process-local link label: the neighbor one step up (`Plus`) or down
/// (`Minus`) along dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Port {
    pub dim: usize,
    pub dir: Direction,
}

impl Port {
    pub fn plus(dim: usize) -> Self {
        Port {
            dim,
            dir: Direction::Plus,
        }
    }

    pub fn minus(dim: usize) -> Self {
        Port {
            dim,
            dir: Direction::Minus,
        }
    }

    /// The port at the far end of the same link.
    pub fn opposite(self) -> Self {
        let dir = match self.dir {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        };
        Port { dim: self.dim, dir }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub from: ProcessId,
    pub to: ProcessId,
    pub dim: usize,
    /// `to[dim] == from[dim] + 1 (mod k)`.
    pub forward: bool,
}

impl DirectedEdge {
    pub fn reverse(&self) -> DirectedEdge {
        DirectedEdge {
            from: self.to.clone(),
            to: self.from.clone(),
            dim: self.dim,
            forward: !self.forward,
        }
    }

    /// Port of `from` through which this edge leaves.
    pub fn source_port(&self) -> Port {
        if self.forward {
            Port::plus(self.dim)
        } else {
            Port::minus(self.dim)
        }
    }

    /// Port of `to` through which this edge arrives.
    pub fn target_port(&self) -> Port {
        self.source_port().opposite()
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

impl Toroid {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("k = {k}, need k >= 2")));
        }
        if m < 1 {
            return Err(Error::Parameter(format!("m = {m}, need m >= 1")));
        }
        let fits = u32::try_from(m)
            .ok()
            .and_then(|m| k.checked_pow(m))
            .and_then(|n| n.checked_mul(2 * m));
        if fits.is_none() {
            return Err(Error::Parameter(format!("{k}-ary {m}-toroid is too large")));
        }
        Ok(Toroid { k, m })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn process_count(&self) -> usize {
        self.k.pow(self.m as u32)
    }

    pub fn edge_count(&self) -> usize {
        2 * self.m * self.process_count()
    }

    /// `r = (k - 1) / 2` when the arity is odd and at least 3.
    pub fn radius(&self) -> Result<usize> {
        if self.k % 2 == 1 && self.k >= 3 {
            Ok((self.k - 1) / 2)
        } else {
            Err(Error::EvenArity(self.k))
        }
    }

    pub fn contains(&self, p: &ProcessId) -> bool {
        p.0.len() == self.m && p.0.iter().all(|&c| c < self.k)
    }

    pub fn check(&self, p: &ProcessId) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::BadProcess(p.0.clone()))
        }
    }

    pub fn process(&self, index: usize) -> ProcessId {
        debug_assert!(index < self.process_count());
        let mut coords = vec![0; self.m];
        let mut rest = index;
        for c in coords.iter_mut().rev() {
            *c = rest % self.k;
            rest /= self.k;
        }
        ProcessId(coords)
    }

    pub fn processes(&self) -> impl Iterator<Item = ProcessId> + '_ {
        (0..self.process_count()).map(|i| self.process(i))
    }

    /// Lexicographic index; the caller guarantees `p` belongs to this toroid.
    pub fn index(&self, p: &ProcessId) -> usize {
        p.0.iter().fold(0, |acc, &c| acc * self.k + c)
    }

    pub fn index_of(&self, p: &ProcessId) -> Result<usize> {
        self.check(p)?;
        Ok(self.index(p))
    }

    /// `<i, ..., i>` with `i` reduced mod k.
    pub fn diagonal(&self, i: usize) -> ProcessId {
        ProcessId(vec![i % self.k; self.m])
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim < self.m {
            Ok(())
        } else {
            Err(Error::DimensionOutOfRange { dim, m: self.m })
        }
    }

    pub fn successor(&self, p: &ProcessId, dim: usize) -> Result<ProcessId> {
        self.check(p)?;
        self.check_dim(dim)?;
        let mut q = p.clone();
        q.0[dim] = (q.0[dim] + 1) % self.k;
        Ok(q)
    }

    pub fn predecessor(&self, p: &ProcessId, dim: usize) -> Result<ProcessId> {
        self.check(p)?;
        self.check_dim(dim)?;
        let mut q = p.clone();
        q.0[dim] = (q.0[dim] + self.k - 1) % self.k;
        Ok(q)
    }

    /// Ports in canonical order: `(0,+), (0,-), (1,+), (1,-), ...`.
    pub fn ports(&self) -> Vec<Port> {
        (0..self.m).flat_map(|h| [Port::plus(h), Port::minus(h)]).collect()
    }

    pub fn neighbor(&self, p: &ProcessId, port: Port) -> Result<ProcessId> {
        match port.dir {
            Direction::Plus => self.successor(p, port.dim),
            Direction::Minus => self.predecessor(p, port.dim),
        }
    }

    /// The directed edge leaving `p` through `port`.
    pub fn outgoing(&self, p: &ProcessId, port: Port) -> Result<DirectedEdge> {
        let to = self.neighbor(p, port)?;
        Ok(DirectedEdge {
            from: p.clone(),
            to,
            dim: port.dim,
            forward: port.dir == Direction::Plus,
        })
    }

    pub fn forward_edge(&self, p: &ProcessId, dim: usize) -> Result<DirectedEdge> {
        self.outgoing(p, Port::plus(dim))
    }

    /// Position of `e` in [`Toroid::directed_edges`].
    pub fn edge_index(&self, e: &DirectedEdge) -> Result<usize> {
        self.check(&e.from)?;
        self.check(&e.to)?;
        self.check_dim(e.dim)?;
        let source = if e.forward { &e.from } else { &e.to };
        let expected = self.forward_edge(source, e.dim)?;
        let consistent = if e.forward {
            expected.to == e.to
        } else {
            expected.to == e.from
        };
        if !consistent {
            return Err(Error::Parameter(format!("{e} is not an edge of this toroid")));
        }
        Ok(2 * (self.index(source) * self.m + e.dim) + usize::from(!e.forward))
    }

    pub fn edge(&self, index: usize) -> DirectedEdge {
        let link = index / 2;
        let source = self.process(link / self.m);
        let dim = link % self.m;
        let forward = self.forward_edge(&source, dim).expect("canonical edge");
        if index.is_multiple_of(2) {
            forward
        } else {
            forward.reverse()
        }
    }

    pub fn directed_edges(&self) -> Vec<DirectedEdge> {
        (0..self.edge_count()).map(|i| self.edge(i)).collect()
    }

    /// Resolves an edge from its endpoints. On a 2-ary toroid the two
    /// parallel links between a pair are only told apart by `forward`.
    pub fn edge_between(&self, from: &ProcessId, to: &ProcessId, forward: Option<bool>) -> Result<DirectedEdge> {
        self.check(from)?;
        self.check(to)?;
        let differing: Vec<usize> = (0..self.m).filter(|&j| from.0[j] != to.0[j]).collect();
        let not_adjacent = || Error::Parameter(format!("{from} and {to} are not neighbors"));
        let [dim] = differing[..] else {
            return Err(not_adjacent());
        };
        let up = (from.0[dim] + 1) % self.k == to.0[dim];
        let down = (to.0[dim] + 1) % self.k == from.0[dim];
        let forward = match (up, down, forward) {
            (true, true, Some(f)) => f,
            (true, true, None) => {
                return Err(Error::Parameter(format!(
                    "edge {from}->{to} is ambiguous on a 2-ary toroid; give its direction"
                )))
            }
            (true, false, None | Some(true)) => true,
            (false, true, None | Some(false)) => false,
            _ => return Err(not_adjacent()),
        };
        Ok(DirectedEdge {
            from: from.clone(),
            to: to.clone(),
            dim,
            forward,
        })
    }
}
