//! Run manifest: every parameter that affects the output, plus wall time,
//! peak kernel memory and termination diagnostics. Re-running a command with
//! a manifest's recorded parameters reproduces the ranking file bitwise.

use qswrank_core::integrator::{EvolutionResult, Rkf45Config, TerminatedBy};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct WalkSection {
    pub omega: Option<f64>,
    pub q: f64,
    pub c: f64,
}

#[derive(Debug, Serialize)]
pub struct TerminationSection {
    pub terminated_by: TerminatedBy,
    pub t_reached: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub residual: f64,
    pub rhs_evals: usize,
    pub trace_renormalizations: usize,
    pub max_trace_drift: f64,
}

impl TerminationSection {
    pub fn from_result(r: &EvolutionResult<f64>) -> Self {
        Self {
            terminated_by: r.terminated_by,
            t_reached: r.t_reached,
            steps_accepted: r.steps_accepted,
            steps_rejected: r.steps_rejected,
            residual: r.residual,
            rhs_evals: r.rhs_evals,
            trace_renormalizations: r.trace_renormalizations,
            max_trace_drift: r.max_trace_drift,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LoadSection {
    pub duplicates: usize,
    pub self_loops: usize,
    pub isolated: usize,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub solver_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
    pub walk: WalkSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrator: Option<Rkf45Config<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_eps: Option<f64>,
    pub threads: usize,
    pub format: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load_report: Option<LoadSection>,
    pub wall_seconds: f64,
    pub peak_kernel_bytes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<TerminationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classical_check_max_abs_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_scaling_exponent: Option<f64>,
}

impl Manifest {
    pub fn write(&self, path: &str) -> std::io::Result<()> {
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, body + "\n")
    }
}

pub const SOLVER_VERSION: &str = env!("CARGO_PKG_VERSION");
