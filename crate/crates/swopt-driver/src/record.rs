use serde::Serialize;
use swopt_core::{Partition, PiecewiseControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Step,
    RefineThetaSmall,
    RefineNuInfeasible,
    Stop,
}

/// One outer-loop iteration as logged. `wall_time` is measured but kept
/// out of the serialized form so emitted logs stay byte-reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub j: usize,
    pub level: u32,
    pub samples: usize,
    pub theta: f64,
    pub cost: f64,
    pub psi: Option<f64>,
    pub action: Action,
    pub mu: Option<u32>,
    pub nu: Option<u32>,
    #[serde(skip)]
    pub wall_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ThetaStop,
    IterCap,
    StepCap,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_control: PiecewiseControl,
    pub final_partition: Partition,
    pub history: Vec<IterationRecord>,
    pub termination: Termination,
}

/// Receives each record as soon as its iteration finishes, so callers can
/// stream logs from long runs instead of waiting for the result.
pub trait RecordSink {
    fn record(&mut self, record: &IterationRecord);
}

pub struct NullSink;

impl RecordSink for NullSink {
    fn record(&mut self, _record: &IterationRecord) {}
}

impl RecordSink for Vec<IterationRecord> {
    fn record(&mut self, record: &IterationRecord) {
        self.push(record.clone());
    }
}

/// True when feasibility, once reached, is never lost: after the first
/// record with Ψ ≤ 0, every later record must keep Ψ ≤ 1e-8. Histories
/// without constraint values are vacuously true.
pub fn feasibility_monitor(history: &[IterationRecord]) -> bool {
    let mut seen_feasible = false;
    for record in history {
        let Some(psi) = record.psi else { continue };
        if seen_feasible && psi > 1e-8 {
            return false;
        }
        if psi <= 0.0 {
            seen_feasible = true;
        }
    }
    true
}
