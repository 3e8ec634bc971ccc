use std::fmt::Write as _;
use std::path::Path;

use cvrealign_core::criteria::{evaluate, realignment_trace_norm, weak_realignment};
use cvrealign_core::filtration::{
    curve_to_csv, default_grid, dual_witness_view, filter_covariance, full_pipeline, sweep_t,
    FilterSpec, FiltrationCurve, PipelineReport, Subsystem,
};
use cvrealign_core::gaussian::phase_shift;
use cvrealign_core::io::{fmt_sig12, inputs_hash, VerdictRecord};
use cvrealign_fock::cutoff::{DEFAULT_LADDER, TAIL_TARGET};
use cvrealign_fock::{
    additive_noise_loss_gain, fock_attenuate, thermal, tmsv, with_cutoff_ladder, FockOperator,
    Mode, OracleRecord,
};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{Builtin, Scenario};

/// Writes `content` to `dir/name`, or to stdout without a directory.
fn emit(out: Option<&Path>, name: &str, content: &str) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), content)?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

/// Rounds to 12 significant digits so JSON output is stable.
fn r12(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig12(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn criterion(scenarios: &[Scenario], out: Option<&Path>) -> Result<(), CliError> {
    for s in scenarios {
        s.check_physical()?;
    }
    let mut all = Vec::new();
    for s in scenarios {
        let hash = inputs_hash(&s.gamma, Some(&s.split));
        let records: Vec<VerdictRecord> = evaluate(&s.gamma, &s.split, &s.criteria)
            .map_err(|e| CliError::Invalid(format!("scenario `{}`: {e}", s.id)))?
            .iter()
            .map(|r| VerdictRecord::new(r, &hash))
            .collect();
        if out.is_some() {
            emit(out, &format!("{}.criterion.json", s.id), &to_json(&records))?;
        }
        all.extend(records);
    }
    if out.is_none() {
        emit(None, "", &to_json(&all))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct RootSummary {
    t: f64,
    #[serde(rename = "trace_R")]
    trace_r: Option<f64>,
    trace_norm: Option<f64>,
    trace_equals_norm: bool,
    limiting: bool,
}

#[derive(Debug, Serialize)]
struct StageSummary {
    name: &'static str,
    #[serde(rename = "trace_R")]
    trace_r: f64,
    detected: bool,
}

#[derive(Debug, Serialize)]
struct PipelineSummary {
    phase_flipped: bool,
    filtered: Option<Subsystem>,
    transmittance: Option<f64>,
    squeeze: Option<f64>,
    schmidt_symmetric: bool,
    inconclusive: Option<String>,
    detected: bool,
    stages: Vec<StageSummary>,
}

impl From<&PipelineReport> for PipelineSummary {
    fn from(p: &PipelineReport) -> Self {
        Self {
            phase_flipped: p.phase_flipped,
            filtered: p.filtered,
            transmittance: p.transmittance.map(r12),
            squeeze: p.squeeze.map(r12),
            schmidt_symmetric: p.schmidt_symmetric,
            inconclusive: p.inconclusive.clone(),
            detected: p.detected,
            stages: p
                .stages
                .iter()
                .map(|s| StageSummary {
                    name: s.name,
                    trace_r: r12(s.trace_r),
                    detected: s.detected,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    id: String,
    kind: cvrealign_core::filtration::FilterKind,
    target: Subsystem,
    pre_phase: Option<f64>,
    input_hash: String,
    grid_points: usize,
    dropped: usize,
    detection_intervals: Vec<(f64, f64)>,
    max_t: f64,
    #[serde(rename = "max_trace_R")]
    max_trace_r: f64,
    roots: Vec<RootSummary>,
    pipeline: Option<PipelineSummary>,
}

impl SweepSummary {
    fn new(
        s: &Scenario,
        curve: &FiltrationCurve,
        pre_phase: Option<f64>,
        grid_points: usize,
    ) -> Self {
        let best = curve.max_sample().expect("curve has samples");
        Self {
            id: s.id.clone(),
            kind: curve.template.kind,
            target: curve.template.target,
            pre_phase: pre_phase.map(r12),
            input_hash: curve.input_hash.clone(),
            grid_points,
            dropped: curve.dropped.len(),
            detection_intervals: curve
                .detection_intervals()
                .into_iter()
                .map(|(a, b)| (r12(a), r12(b)))
                .collect(),
            max_t: r12(best.t),
            max_trace_r: r12(best.trace_r),
            roots: curve
                .roots
                .iter()
                .map(|r| RootSummary {
                    t: r12(r.t),
                    trace_r: r.trace_r.map(r12),
                    trace_norm: r.trace_norm.map(r12),
                    trace_equals_norm: r.trace_equals_norm(),
                    limiting: r.limiting,
                })
                .collect(),
            pipeline: None,
        }
    }

    fn text(&self) -> String {
        let mut out = format!(
            "{}: {:?} {:?}, {} of {} grid points evaluated, max Tr R = {} at t = {}\n",
            self.id,
            self.kind,
            self.target,
            self.grid_points - self.dropped,
            self.grid_points,
            fmt_sig12(self.max_trace_r),
            fmt_sig12(self.max_t),
        );
        if self.detection_intervals.is_empty() {
            out.push_str("  never detected\n");
        }
        for (a, b) in &self.detection_intervals {
            let _ = writeln!(
                out,
                "  detected for t in [{}, {}]",
                fmt_sig12(*a),
                fmt_sig12(*b)
            );
        }
        for r in &self.roots {
            let _ = writeln!(
                out,
                "  symmetrization root t = {}{}: Tr R = {}, trace norm = {}, equal = {}",
                fmt_sig12(r.t),
                if r.limiting { " (limit)" } else { "" },
                r.trace_r.map_or("n/a".into(), fmt_sig12),
                r.trace_norm.map_or("n/a".into(), fmt_sig12),
                r.trace_equals_norm,
            );
        }
        if let Some(p) = &self.pipeline {
            let _ = writeln!(
                out,
                "  pipeline: detected = {}, Schmidt-symmetric = {}{}",
                p.detected,
                p.schmidt_symmetric,
                p.inconclusive
                    .as_deref()
                    .map(|m| format!(", stopped: {m}"))
                    .unwrap_or_default()
            );
        }
        out
    }
}

pub fn sweep(
    scenarios: &[Scenario],
    grid: Option<usize>,
    pre_phase: Option<f64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    for s in scenarios {
        s.check_physical()?;
        if s.filtration.is_none() {
            return Err(CliError::Invalid(format!(
                "scenario `{}`: field `filtration` is required for sweep-t",
                s.id
            )));
        }
    }
    for s in scenarios {
        let f = s.filtration.as_ref().expect("checked above");
        let n = grid.or(f.grid).unwrap_or(400);
        if n == 0 {
            return Err(CliError::Invalid("grid needs at least one point".into()));
        }
        let phase = pre_phase.or(f.pre_phase);
        let gamma = match phase {
            Some(theta) => phase_shift(&s.gamma, s.split.modes_a()[0], theta)?,
            None => s.gamma.clone(),
        };
        let curve = sweep_t(&gamma, &s.split, f.template(), &default_grid(f.kind, n))?;
        if curve.samples.is_empty() {
            return Err(CliError::Invalid(format!(
                "scenario `{}`: empty filter domain, every grid point was rejected ({})",
                s.id,
                curve.dropped.first().map(|d| d.1.as_str()).unwrap_or("")
            )));
        }
        let mut summary = SweepSummary::new(s, &curve, phase, n);
        if f.pipeline {
            summary.pipeline = Some(PipelineSummary::from(&full_pipeline(&gamma, &s.split)?));
        }
        emit(out, &format!("{}.csv", s.id), &curve_to_csv(&curve))?;
        match out {
            Some(_) => emit(out, &format!("{}.summary.json", s.id), &to_json(&summary))?,
            None => eprint!("{}", summary.text()),
        }
    }
    Ok(())
}

/// One line of a comparison report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn value(name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected: r12(expected),
            computed: r12(computed),
            tolerance,
            pass: (expected - computed).abs() <= tolerance,
        }
    }

    /// A yes/no claim, reported as 1/0.
    pub fn flag(name: impl Into<String>, expected: bool, observed: bool) -> Self {
        let f = |b: bool| if b { 1.0 } else { 0.0 };
        Self {
            name: name.into(),
            expected: f(expected),
            computed: f(observed),
            tolerance: 0.0,
            pass: expected == observed,
        }
    }
}

fn report_text(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(
            out,
            "[{}] {}: expected {}, got {} (|Δ| = {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            fmt_sig12(c.expected),
            fmt_sig12(c.computed),
            fmt_sig12((c.expected - c.computed).abs()),
        );
    }
    out
}

fn finish_report(checks: Vec<Check>, out: Option<&Path>, file: &str) -> Result<(), CliError> {
    emit(None, "", &report_text(&checks))?;
    if out.is_some() {
        emit(out, file, &to_json(&checks))?;
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Mismatch(failed.join("; ")))
    }
}

pub fn examples(out: Option<&Path>) -> Result<(), CliError> {
    finish_report(crate::examples::all_checks()?, out, "examples.json")
}

/// Fock-side state of a built-in scenario.
fn fock_state(
    b: Builtin,
    p: crate::scenario::Params,
    cutoff: usize,
) -> Result<FockOperator, cvrealign_fock::FockError> {
    let get = |x: Option<f64>| x.expect("builtin defaults are filled in");
    match b {
        Builtin::Tmsv => tmsv(get(p.tau), cutoff),
        Builtin::Thermal => thermal(get(p.tau), get(p.tau), cutoff),
        Builtin::Vacuum => thermal(0.0, 0.0, cutoff),
        Builtin::EprNoise => {
            additive_noise_loss_gain(&tmsv(get(p.r).tanh(), cutoff)?, get(p.v), Mode::A)
        }
        Builtin::EprNoiseB => {
            additive_noise_loss_gain(&tmsv(get(p.r).tanh(), cutoff)?, get(p.v), Mode::B)
        }
        Builtin::Gamma1 | Builtin::Gamma2 | Builtin::Epr4 => {
            unreachable!("filtered out by the caller")
        }
    }
}

/// Agreement tolerance between the oracle and the closed forms.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
/// Tolerance of the filter/witness identity, which involves no truncation
/// beyond the state itself.
pub const WITNESS_TOLERANCE: f64 = 1e-8;

pub fn oracle(
    scenarios: &[Scenario],
    cutoff: Option<usize>,
    t: Option<f64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut checks = Vec::new();
    let mut records = Vec::new();
    for s in scenarios {
        let (b, params) = match s.builtin {
            Some((b, p)) if matches!(b, Builtin::Tmsv | Builtin::Thermal | Builtin::Vacuum | Builtin::EprNoise | Builtin::EprNoiseB) => (b, p),
            _ => {
                return Err(CliError::Invalid(format!(
                    "scenario `{}` is outside the oracle builders (tmsv, thermal, vacuum, eprnoise, eprnoise-b)",
                    s.id
                )))
            }
        };
        let ladder: Vec<usize> = match cutoff {
            Some(d) => vec![d],
            None => DEFAULT_LADDER.to_vec(),
        };
        let rho = with_cutoff_ladder(&ladder, TAIL_TARGET, |d| fock_state(b, params, d))?;
        let record = OracleRecord::evaluate(&s.id, &rho);
        let weak = weak_realignment(&s.gamma, &s.split)?.value;
        let norm = realignment_trace_norm(&s.gamma, &s.split)?.value;
        let tag = |q: &str| format!("{} (D={}): {q}", s.id, rho.cutoff());
        checks.push(Check::value(
            tag("Tr R"),
            weak,
            record.trace_r,
            ORACLE_TOLERANCE,
        ));
        checks.push(Check::value(
            tag("trace norm of R"),
            norm,
            record.trace_norm_r,
            ORACLE_TOLERANCE,
        ));
        checks.push(Check::value(
            tag("Schmidt sum"),
            record.trace_norm_r,
            record.schmidt_sum,
            1e-10,
        ));
        if let Some(t) = t {
            let spec = FilterSpec::attenuate(Subsystem::A, t)?;
            let filtered = filter_covariance(&s.gamma, &s.split, &spec)?;
            let (rho_t, weight) = fock_attenuate(&rho, t, Mode::A)?;
            let amplitudes = dual_witness_view(&spec).amplitudes(rho.cutoff());
            checks.push(Check::value(
                tag(&format!("Tr R after attenuating A at t={t}")),
                weak_realignment(&filtered, &s.split)?.value,
                rho_t.trace_r(),
                ORACLE_TOLERANCE,
            ));
            checks.push(Check::value(
                tag("filtered Tr R vs dual-witness overlap"),
                rho.overlap_diagonal(&amplitudes),
                weight * rho_t.trace_r(),
                WITNESS_TOLERANCE,
            ));
        }
        records.push(record);
    }
    if out.is_some() {
        emit(out, "oracle_records.json", &to_json(&records))?;
    }
    finish_report(checks, out, "oracle.json")
}
