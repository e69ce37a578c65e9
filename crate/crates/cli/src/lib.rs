//! Command-line front end: closed-form bounds, certificate generation and
//! checking, the LP oracle, simulation exports and figure tables.
//!
//! Exit codes: 0 success, 1 usage, 2 malformed input, 3 failed
//! verification, 4 internal guard (event cap, solver failure).

pub mod args;
pub mod error;
pub mod output;
pub mod schema;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde::Serialize;
use toroid_core::certificate::{
    check_certificate, closed_form, diagonal_cycle, odd_toroid_certificate, shift_matrix, Variant,
};
use toroid_core::execution::{apply_shift, base_delays, is_admissible};
use toroid_core::lp::{best_certificate, search_cycles};
use toroid_core::rational::approximate;
use toroid_core::sim::{algorithms, indistinguishable, run as simulate, shift_execution, skew_witness, HardwareClocks};
use toroid_core::topology::Toroid;
use toroid_core::Strategy;

use args::{BoundArgs, CertCommand, Cli, Command, Figure, FigureArgs, LpArgs, SimArgs, TableFormat, TextFormat};
pub use error::CliError;
use output::{RecordDoc, ReportDoc, ShiftedRunDoc, SkewDoc};
use schema::{cycle_doc, text, CertificateDoc, PairDoc, ParamsDoc};

/// Parses `args` (program name first) and runs the command, writing
/// results to `out` unless an output file was given.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}")?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Arguments(e.render().to_string())),
    };
    match cli.command {
        Command::Bound(a) => bound(&a, out),
        Command::Cert(CertCommand::Generate { params, out: path }) => {
            let t = Toroid::new(params.k, params.m)?;
            let cert = odd_toroid_certificate(t, &params.u)?;
            emit(out, path.as_deref(), &json(&CertificateDoc::from_certificate(&cert))?)
        }
        Command::Cert(CertCommand::Check { file, out: path }) => {
            let doc = CertificateDoc::from_json(&read(&file)?)?;
            let report = check_certificate(&doc.to_certificate()?);
            emit(out, path.as_deref(), &json(&ReportDoc::new(&report))?)?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification(format!(
                    "{} issue(s) in {}",
                    report.issues.len(),
                    file.display()
                )))
            }
        }
        Command::Lp(a) => lp(&a, out),
        Command::Sim(a) => sim(&a, out),
        Command::Figure(a) => figure(&a, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut body = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    body.push('\n');
    Ok(body)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            fs::write(path, body).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => out
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

#[derive(Serialize)]
struct BoundDoc {
    variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    m: usize,
    u: String,
    bound: String,
    approximate: f64,
}

fn bound(a: &BoundArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (size, k, n) = match (a.variant, a.k, a.n) {
        (Variant::Clique, _, Some(n)) => (n, None, Some(n)),
        (Variant::Clique, _, None) => return Err(CliError::Usage("clique bound needs --n".into())),
        (_, Some(k), _) => (k, Some(k), None),
        (_, None, _) => return Err(CliError::Usage(format!("{} bound needs --k", a.variant))),
    };
    let value = closed_form(a.variant, size, a.m, &a.u)?;
    let body = match a.format {
        TextFormat::Text => format!("{}\napproximate decimal: {}\n", text(&value), approximate(&value)),
        TextFormat::Json => json(&BoundDoc {
            variant: a.variant.to_string(),
            k,
            n,
            m: a.m,
            u: text(a.u.value()),
            bound: text(&value),
            approximate: approximate(&value),
        })?,
    };
    emit(out, None, &body)
}

#[derive(Serialize)]
struct LpDoc {
    params: ParamsDoc,
    u: String,
    cycle: Vec<PairDoc>,
    status: &'static str,
    objective: String,
    approximate: f64,
    pivots: usize,
    certificate: CertificateDoc,
    report: ReportDoc,
}

#[derive(Serialize)]
struct CycleOptimumDoc {
    cycle: Vec<PairDoc>,
    objective: String,
}

#[derive(Serialize)]
struct EnumerationDoc {
    params: ParamsDoc,
    u: String,
    best: String,
    cycles: Vec<CycleOptimumDoc>,
}

fn lp(a: &LpArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let t = Toroid::new(a.params.k, a.params.m)?;
    let u = &a.params.u;
    if a.enumerate {
        let results = search_cycles(t, u, Strategy::default())?;
        let best = results
            .iter()
            .map(|r| &r.optimum)
            .max()
            .ok_or_else(|| CliError::Internal("no cycles enumerated".into()))?;
        let doc = EnumerationDoc {
            params: output::params(t),
            u: text(u.value()),
            best: text(best),
            cycles: results
                .iter()
                .map(|r| CycleOptimumDoc {
                    cycle: cycle_doc(&r.cycle),
                    objective: text(&r.optimum),
                })
                .collect(),
        };
        return emit(out, a.out.as_deref(), &json(&doc)?);
    }
    let cycle = match &a.cycle {
        Some(path) => schema::read_cycle_file(t, &read(path)?)?,
        None => diagonal_cycle(t)?,
    };
    if cycle.is_empty() {
        return Err(CliError::Schema("pair cycle is empty".into()));
    }
    if !cycle.is_cancelling() {
        return Err(CliError::Schema("pair cycle does not cancel".into()));
    }
    let best = best_certificate(t, u, &cycle)?;
    let doc = LpDoc {
        params: output::params(t),
        u: text(u.value()),
        cycle: cycle_doc(&cycle),
        status: "optimal",
        objective: text(&best.solution.objective_value),
        approximate: approximate(&best.solution.objective_value),
        pivots: best.solution.pivots,
        certificate: CertificateDoc::from_certificate(&best.certificate),
        report: ReportDoc::new(&best.report),
    };
    emit(out, a.out.as_deref(), &json(&doc)?)
}

fn sim(a: &SimArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let t = Toroid::new(a.params.k, a.params.m)?;
    let u = &a.params.u;
    let algorithm = algorithms::by_name(&a.algorithm)
        .ok_or_else(|| CliError::Usage(format!("unknown algorithm {:?}", a.algorithm)))?;
    let zeros = HardwareClocks::zeros(t);

    let Some(i) = a.shift else {
        let report = skew_witness(t, u, algorithm)?;
        let body = match a.format {
            TableFormat::Json => json(&SkewDoc::new(&report, &zeros))?,
            TableFormat::Csv => output::skew_csv(&report),
        };
        emit(out, a.out.as_deref(), &body)?;
        if !report.holds() {
            return Err(CliError::Verification(format!(
                "max skew {} is below the bound {}",
                text(&report.max),
                text(&report.bound)
            )));
        }
        return Ok(());
    };

    t.radius()?;
    let delays = base_delays(t, u)?;
    let x = shift_matrix(t, u, i)?;
    let base = simulate(t, &zeros, &delays, algorithm)?;
    let (shifted, clocks) = shift_execution(&base, &zeros, &x)?;
    let shifted_delays = apply_shift(&delays, &x)?;
    let admissible = is_admissible(&shifted_delays).admissible;
    let rerun_matches = admissible && simulate(t, &clocks, &shifted_delays, algorithm)? == shifted;
    let same_view = indistinguishable(&base, &shifted);
    let body = match a.format {
        TableFormat::Json => json(&ShiftedRunDoc {
            algorithm: algorithm.name(),
            params: output::params(t),
            u: text(u.value()),
            shift: i,
            shift_values: output::shift_values(&x),
            admissible,
            indistinguishable: same_view,
            rerun_matches,
            record: RecordDoc::new(&shifted, &clocks),
        })?,
        TableFormat::Csv => output::message_csv(&shifted),
    };
    emit(out, a.out.as_deref(), &body)?;
    if same_view && rerun_matches {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "shift {i} is distinguishable from the base run"
        )))
    }
}

fn figure(a: &FigureArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let t = Toroid::new(a.params.k, a.params.m)?;
    let u = &a.params.u;
    let delays = base_delays(t, u)?;
    let delays = match a.which {
        Figure::Alpha => delays,
        Figure::Shifted(i) => apply_shift(&delays, &shift_matrix(t, u, i)?)?,
    };
    emit(out, a.out.as_deref(), &output::delay_csv(&delays))
}
