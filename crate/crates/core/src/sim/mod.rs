//! Deterministic discrete-event simulation of drift-free processes on a
//! toroid, plus execution shifting and indistinguishability checks.

pub mod algorithms;
mod engine;
mod record;
mod shift;
mod witness;

pub use algorithms::{ReferenceSync, Silent};
pub use engine::{run, run_with, Algorithm, Process, ProcessContext, Reaction, SimConfig};
pub use record::{Event, ExecutionRecord, HardwareClocks, LoggedMessage, Outgoing, Payload, Step};
pub use shift::{indistinguishable, shift_execution};
pub use witness::{skew_witness, skew_witness_with, SkewEntry, SkewReport};
