use crate::error::{Error, Result};
use crate::execution::ShiftMatrix;

use super::record::{ExecutionRecord, HardwareClocks};

/// Retimes every event of `p` by `+x_p` and returns the clocks `c - x`
/// under which each event keeps its original hardware reading.
pub fn shift_execution(
    record: &ExecutionRecord,
    clocks: &HardwareClocks,
    x: &ShiftMatrix,
) -> Result<(ExecutionRecord, HardwareClocks)> {
    let t = record.toroid;
    if x.toroid() != t || clocks.toroid() != t {
        return Err(Error::TopologyMismatch);
    }
    let mut shifted = record.clone();
    for (p, history) in shifted.histories.iter_mut().enumerate() {
        let dx = x.by_index(p);
        for step in history {
            step.real_time += dx;
        }
    }
    for m in &mut shifted.messages {
        m.send_time += x.by_index(t.index(&m.edge.from));
        m.recv_time += x.by_index(t.index(&m.edge.to));
    }
    Ok((shifted, clocks.shifted(x)?))
}

/// Same per-process sequence of (event, reading, messages sent) and the
/// same final `adj`; real times are ignored.
pub fn indistinguishable(a: &ExecutionRecord, b: &ExecutionRecord) -> bool {
    a.toroid == b.toroid
        && a.adj == b.adj
        && a.histories.len() == b.histories.len()
        && a.histories.iter().zip(&b.histories).all(|(ha, hb)| {
            ha.len() == hb.len()
                && ha
                    .iter()
                    .zip(hb)
                    .all(|(sa, sb)| sa.event == sb.event && sa.reading == sb.reading && sa.sent == sb.sent)
        })
}
