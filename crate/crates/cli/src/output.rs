use serde::Serialize;
use toroid_core::certificate::{BoundReport, CheckIssue, SIGN_CONVENTION};
use toroid_core::execution::{DelayAssignment, ShiftMatrix};
use toroid_core::rational::approximate;
use toroid_core::sim::{ExecutionRecord, HardwareClocks, LoggedMessage, SkewReport, Step};
use toroid_core::topology::{DirectedEdge, ProcessId, Toroid};
use toroid_core::Rational;

use crate::schema::{text, ParamsDoc};

pub fn params(t: Toroid) -> ParamsDoc {
    ParamsDoc { k: t.k(), m: t.m() }
}

#[derive(Debug, Serialize)]
pub struct ContributionDoc {
    pub execution: usize,
    pub a: ProcessId,
    pub b: ProcessId,
    pub contribution: String,
}

#[derive(Debug, Serialize)]
pub struct ViolationDoc {
    pub from: ProcessId,
    pub to: ProcessId,
    pub delay: String,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IssueDoc {
    Structure {
        message: String,
    },
    Inadmissible {
        execution: usize,
        violations: Vec<ViolationDoc>,
    },
    NonCancelling {
        unmatched_minuends: Vec<ProcessId>,
        unmatched_subtrahends: Vec<ProcessId>,
    },
}

#[derive(Debug, Serialize)]
pub struct ReportDoc {
    pub passed: bool,
    pub bound: String,
    pub approximate: f64,
    pub admissibility_ok: bool,
    pub cancellation_ok: bool,
    pub sign_convention: &'static str,
    pub per_execution: Vec<ContributionDoc>,
    pub issues: Vec<IssueDoc>,
}

impl ReportDoc {
    pub fn new(report: &BoundReport) -> Self {
        let issues = report
            .issues
            .iter()
            .map(|issue| match issue {
                CheckIssue::Structure(message) => IssueDoc::Structure {
                    message: message.clone(),
                },
                CheckIssue::Inadmissible { execution, violations } => IssueDoc::Inadmissible {
                    execution: *execution,
                    violations: violations
                        .iter()
                        .map(|v| ViolationDoc {
                            from: v.edge.from.clone(),
                            to: v.edge.to.clone(),
                            delay: text(&v.delay),
                        })
                        .collect(),
                },
                CheckIssue::NonCancelling {
                    unmatched_minuends,
                    unmatched_subtrahends,
                } => IssueDoc::NonCancelling {
                    unmatched_minuends: unmatched_minuends.clone(),
                    unmatched_subtrahends: unmatched_subtrahends.clone(),
                },
            })
            .collect();
        ReportDoc {
            passed: report.passed(),
            bound: text(&report.bound),
            approximate: approximate(&report.bound),
            admissibility_ok: report.admissibility_ok,
            cancellation_ok: report.cancellation_ok,
            sign_convention: SIGN_CONVENTION,
            per_execution: report
                .per_execution
                .iter()
                .map(|c| ContributionDoc {
                    execution: c.execution,
                    a: c.a.clone(),
                    b: c.b.clone(),
                    contribution: text(&c.contribution),
                })
                .collect(),
            issues,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValueDoc {
    pub process: ProcessId,
    pub value: String,
}

pub fn per_process(t: Toroid, values: &[Rational]) -> Vec<ValueDoc> {
    t.processes()
        .zip(values)
        .map(|(process, v)| ValueDoc {
            process,
            value: text(v),
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ProcessDoc<'a> {
    pub process: ProcessId,
    pub clock_offset: String,
    pub adj: String,
    pub adjusted_offset: String,
    pub history: &'a [Step],
}

#[derive(Debug, Serialize)]
pub struct TieDoc {
    pub process: ProcessId,
    pub reading: String,
}

#[derive(Debug, Serialize)]
pub struct RecordDoc<'a> {
    pub params: ParamsDoc,
    pub u: String,
    pub processes: Vec<ProcessDoc<'a>>,
    pub messages: &'a [LoggedMessage],
    pub simultaneous: Vec<TieDoc>,
    pub order_anomalies: &'a [ProcessId],
}

impl<'a> RecordDoc<'a> {
    pub fn new(record: &'a ExecutionRecord, clocks: &HardwareClocks) -> Self {
        let t = record.toroid;
        let processes = t
            .processes()
            .enumerate()
            .map(|(p, process)| {
                let c = &clocks.offsets()[p];
                let adj = &record.adj[p];
                ProcessDoc {
                    process,
                    clock_offset: text(c),
                    adj: text(adj),
                    adjusted_offset: text(&(c + adj)),
                    history: &record.histories[p],
                }
            })
            .collect();
        RecordDoc {
            params: params(t),
            u: text(record.u.value()),
            processes,
            messages: &record.messages,
            simultaneous: record
                .simultaneous
                .iter()
                .map(|(process, reading)| TieDoc {
                    process: process.clone(),
                    reading: text(reading),
                })
                .collect(),
            order_anomalies: &record.order_anomalies,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SkewEntryDoc {
    pub execution: usize,
    pub a: ProcessId,
    pub b: ProcessId,
    pub shift_contribution: String,
    pub skew: String,
    pub admissible: bool,
    pub indistinguishable: bool,
    pub rerun_matches: bool,
}

#[derive(Debug, Serialize)]
pub struct SkewDoc<'a> {
    pub algorithm: &'a str,
    pub params: ParamsDoc,
    pub u: String,
    pub holds: bool,
    pub bound: String,
    pub max: String,
    pub max_approximate: f64,
    pub sum: String,
    pub entries: Vec<SkewEntryDoc>,
    pub base: RecordDoc<'a>,
}

impl<'a> SkewDoc<'a> {
    pub fn new(report: &'a SkewReport, base_clocks: &HardwareClocks) -> Self {
        SkewDoc {
            algorithm: &report.algorithm,
            params: params(report.toroid),
            u: text(report.u.value()),
            holds: report.holds(),
            bound: text(&report.bound),
            max: text(&report.max),
            max_approximate: approximate(&report.max),
            sum: text(&report.sum),
            entries: report
                .entries
                .iter()
                .map(|e| SkewEntryDoc {
                    execution: e.execution,
                    a: e.a.clone(),
                    b: e.b.clone(),
                    shift_contribution: text(&e.shift_contribution),
                    skew: text(&e.skew),
                    admissible: e.admissible,
                    indistinguishable: e.indistinguishable,
                    rerun_matches: e.rerun_matches,
                })
                .collect(),
            base: RecordDoc::new(&report.base, base_clocks),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ShiftedRunDoc<'a> {
    pub algorithm: &'a str,
    pub params: ParamsDoc,
    pub u: String,
    pub shift: usize,
    pub shift_values: Vec<ValueDoc>,
    pub admissible: bool,
    pub indistinguishable: bool,
    pub rerun_matches: bool,
    pub record: RecordDoc<'a>,
}

/// Process ids in CSV cells: coordinates joined by `;`.
pub fn coords(p: &ProcessId) -> String {
    p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
}

pub fn csv<I>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn edge_cells(edge: &DirectedEdge) -> [String; 3] {
    [coords(&edge.from), coords(&edge.to), edge.dim.to_string()]
}

pub fn delay_csv(delays: &DelayAssignment) -> String {
    csv(
        "from,to,dim,delay",
        delays.iter().map(|(edge, d)| {
            let mut row = edge_cells(&edge).to_vec();
            row.push(text(d));
            row
        }),
    )
}

pub fn message_csv(record: &ExecutionRecord) -> String {
    csv(
        "from,to,dim,sender_seq,send_time,recv_time,delay,kind",
        record.messages.iter().map(|m| {
            let mut row = edge_cells(&m.edge).to_vec();
            row.extend([
                m.sender_seq.to_string(),
                text(&m.send_time),
                text(&m.recv_time),
                text(&m.delay()),
                m.payload.kind.clone(),
            ]);
            row
        }),
    )
}

pub fn skew_csv(report: &SkewReport) -> String {
    csv(
        "execution,a,b,shift_contribution,skew,admissible,indistinguishable,rerun_matches",
        report.entries.iter().map(|e| {
            vec![
                e.execution.to_string(),
                coords(&e.a),
                coords(&e.b),
                text(&e.shift_contribution),
                text(&e.skew),
                e.admissible.to_string(),
                e.indistinguishable.to_string(),
                e.rerun_matches.to_string(),
            ]
        }),
    )
}

pub fn shift_values(x: &ShiftMatrix) -> Vec<ValueDoc> {
    per_process(x.toroid(), x.values())
}
