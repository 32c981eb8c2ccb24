//! Feeding streams through engines and collecting reports and metrics.

use std::fmt::Write as _;
use std::time::Instant;

use evofreq_core::engine::MissingEdgePolicy;
use evofreq_core::{Engine, EngineConfig, Error, Metrics, Mode, StreamEvent};

use crate::window::WindowDriver;

pub const CSV_HEADER: &str = "event,mode,k,tau,epsilon,delta,M,re,precision,recall,avg_update_ns";

#[derive(Debug, Clone, PartialEq)]
pub struct DriveOptions {
    pub config: EngineConfig,
    /// Sliding window over an insertion-only input.
    pub window: Option<usize>,
    /// Emit a snapshot (and, when comparing, a metrics row) every this many events.
    pub report_every: Option<u64>,
    /// Fill the `avg_update_ns` column. Off by default so output is reproducible.
    pub timing: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum DriveError {
    #[error("{0}")]
    Usage(String),
    #[error("event {seq}: {source}")]
    Engine { seq: u64, source: Error },
}

impl DriveError {
    /// 1 usage, 2 stream content, 3 invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            DriveError::Usage(_) => 1,
            DriveError::Engine { source, .. } => match source {
                Error::Invariant(_) => 3,
                Error::SelfLoop(_) | Error::LabelConflict { .. } | Error::MissingEdge(..) => 2,
                _ => 1,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct DriveOutput {
    /// Snapshot reports, concatenated.
    pub snapshots: String,
    /// CSV header and rows.
    pub csv: String,
    /// Deletions of absent edges that were skipped.
    pub skipped: u64,
    pub engine: Engine,
}

struct Timer {
    enabled: bool,
    total_ns: u128,
    events: u64,
}

impl Timer {
    fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
        if !self.enabled {
            return f();
        }
        let start = Instant::now();
        let out = f();
        self.total_ns += start.elapsed().as_nanos();
        self.events += 1;
        out
    }

    fn average(&self) -> String {
        if !self.enabled || self.events == 0 {
            return String::new();
        }
        format!("{}", self.total_ns / self.events as u128)
    }
}

/// Turns the input into the event sequence the engines see.
pub fn prepare_events(events: &[StreamEvent], window: Option<usize>) -> Result<Vec<StreamEvent>, DriveError> {
    match window {
        None => Ok(events.to_vec()),
        Some(0) => Err(DriveError::Usage("window must be at least 1".into())),
        Some(w) => {
            if events.iter().any(|e| !e.is_add()) {
                return Err(DriveError::Usage(
                    "a window cannot be applied to a stream that already contains deletions".into(),
                ));
            }
            let mut driver = WindowDriver::new(w);
            Ok(events.iter().flat_map(|&e| driver.push(e)).collect())
        }
    }
}

fn effective_config(opts: &DriveOptions) -> EngineConfig {
    let mut config = opts.config.clone();
    if opts.window.is_some() {
        config.dynamic = true;
    }
    config
}

fn sample_size_field(engine: &Engine) -> String {
    engine
        .reservoir()
        .map(|r| r.capacity().to_string())
        .unwrap_or_default()
}

fn csv_row(engine: &Engine, metrics: Option<&Metrics>, avg_ns: &str) -> String {
    let c = engine.config();
    let (re, precision, recall) = match metrics {
        Some(m) => (
            format!("{:.6}", m.relative_error),
            format!("{:.6}", m.precision),
            format!("{:.6}", m.recall),
        ),
        None => Default::default(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}\n",
        engine.events_processed(),
        c.mode.name(),
        c.k,
        c.tau,
        c.epsilon,
        c.delta,
        sample_size_field(engine),
        re,
        precision,
        recall,
        avg_ns
    )
}

fn apply(engine: &mut Engine, ev: &StreamEvent, timer: &mut Timer, skipped: &mut u64) -> Result<(), DriveError> {
    let stats = timer
        .time(|| engine.process_event(ev))
        .map_err(|source| match source {
            Error::DeletionNotAllowed => DriveError::Usage(format!(
                "event {}: the stream contains deletions; pass --dynamic or use a window",
                ev.seq
            )),
            source => DriveError::Engine { seq: ev.seq, source },
        })?;
    if !stats.applied && !ev.is_add() {
        *skipped += 1;
    }
    Ok(())
}

fn due(report_every: Option<u64>, processed: u64) -> bool {
    report_every.is_some_and(|n| n > 0 && processed % n == 0)
}

/// Runs one engine over the stream: periodic snapshots, a final snapshot
/// and one CSV row. In exact mode the accuracy columns are those of the
/// exact counts against themselves; otherwise they are left empty.
pub fn run_stream(events: &[StreamEvent], opts: &DriveOptions) -> Result<DriveOutput, DriveError> {
    let events = prepare_events(events, opts.window)?;
    let config = effective_config(opts);
    let mut engine = Engine::new(config).map_err(|e| DriveError::Usage(e.to_string()))?;
    let mut timer = Timer {
        enabled: opts.timing,
        total_ns: 0,
        events: 0,
    };
    let mut snapshots = String::new();
    let mut skipped = 0;
    for ev in &events {
        apply(&mut engine, ev, &mut timer, &mut skipped)?;
        if due(opts.report_every, engine.events_processed()) {
            write!(snapshots, "{}", engine.report_frequent()).expect("string write");
        }
    }
    if !due(opts.report_every, engine.events_processed()) || events.is_empty() {
        write!(snapshots, "{}", engine.report_frequent()).expect("string write");
    }
    let metrics = (engine.config().mode == Mode::Exact).then(|| {
        let est = engine.estimate_frequencies();
        Metrics::compute(&est, &est, engine.config().tau, engine.config().epsilon)
    });
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    csv.push_str(&csv_row(&engine, metrics.as_ref(), &timer.average()));
    Ok(DriveOutput {
        snapshots,
        csv,
        skipped,
        engine,
    })
}

/// Runs the configured approximate engine and an exact one in lockstep,
/// writing a metrics row every `report_every` events and at the end.
pub fn compare_stream(events: &[StreamEvent], opts: &DriveOptions) -> Result<DriveOutput, DriveError> {
    if opts.config.mode == Mode::Exact {
        return Err(DriveError::Usage("compare needs --mode sr or --mode osr".into()));
    }
    let events = prepare_events(events, opts.window)?;
    let config = effective_config(opts);
    let exact_config = EngineConfig {
        mode: Mode::Exact,
        missing_edge: MissingEdgePolicy::Skip,
        ..config.clone()
    };
    let mut engine = Engine::new(config).map_err(|e| DriveError::Usage(e.to_string()))?;
    let mut truth = Engine::new(exact_config).map_err(|e| DriveError::Usage(e.to_string()))?;
    let mut timer = Timer {
        enabled: opts.timing,
        total_ns: 0,
        events: 0,
    };
    let mut untimed = Timer {
        enabled: false,
        total_ns: 0,
        events: 0,
    };
    let (tau, epsilon) = (opts.config.tau, opts.config.epsilon);
    let mut snapshots = String::new();
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut skipped = 0;
    let mut ignored = 0;
    let row = |engine: &Engine, truth: &Engine, timer: &Timer, csv: &mut String, snapshots: &mut String| {
        let m = Metrics::compute(&engine.estimate_frequencies(), &truth.estimate_frequencies(), tau, epsilon);
        csv.push_str(&csv_row(engine, Some(&m), &timer.average()));
        write!(snapshots, "{}", engine.report_frequent()).expect("string write");
    };
    for ev in &events {
        apply(&mut engine, ev, &mut timer, &mut skipped)?;
        apply(&mut truth, ev, &mut untimed, &mut ignored)?;
        if due(opts.report_every, engine.events_processed()) {
            row(&engine, &truth, &timer, &mut csv, &mut snapshots);
        }
    }
    if !due(opts.report_every, engine.events_processed()) || events.is_empty() {
        row(&engine, &truth, &timer, &mut csv, &mut snapshots);
    }
    Ok(DriveOutput {
        snapshots,
        csv,
        skipped,
        engine,
    })
}
