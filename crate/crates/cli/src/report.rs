//! Serializable views of certificates, traces and runs.

use serde::{Deserialize, Serialize};
use sparse_map::solver::RateFit;
use sparse_map::{Certificate, Trace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    /// 1-based indices.
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub cosine: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub c: Vec<f64>,
    pub theta_bar: f64,
    pub delta_bar: f64,
    pub delta: f64,
    pub basin_radius: f64,
    pub rate_bound: f64,
    pub per_support: Vec<SupportReport>,
    pub transversal: bool,
    pub classical_cq_holds: bool,
    pub enumerated_supports: usize,
}

impl From<&Certificate> for CertificateReport {
    fn from(cert: &Certificate) -> Self {
        Self {
            c: cert.c.to_vec(),
            theta_bar: cert.theta_bar,
            delta_bar: cert.delta_bar,
            delta: cert.delta,
            basin_radius: cert.basin_radius,
            rate_bound: cert.rate_bound,
            per_support: cert
                .per_support
                .iter()
                .map(|sa| SupportReport { j: sa.support.one_based(), cosine: sa.cosine })
                .collect(),
            transversal: cert.transversal,
            classical_cq_holds: cert.classical_cq_holds,
            enumerated_supports: cert.enumerated_supports,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub iterations: usize,
    pub termination: String,
    pub final_residual: f64,
    pub limit_point: Vec<f64>,
    pub limit_affine_residual: f64,
    pub limit_sparse_distance: f64,
}

impl From<&Trace> for TraceSummary {
    fn from(trace: &Trace) -> Self {
        Self {
            iterations: trace.iterations(),
            termination: trace.termination.as_str().to_string(),
            final_residual: trace.final_residual(),
            limit_point: trace.limit_point.to_vec(),
            limit_affine_residual: trace.limit_affine_residual,
            limit_sparse_distance: trace.limit_sparse_distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub geometric_fit: f64,
    pub samples: usize,
    pub max_ratio: f64,
}

impl From<&RateFit<f64>> for RateReport {
    fn from(fit: &RateFit<f64>) -> Self {
        Self {
            geometric_fit: fit.geometric_fit,
            samples: fit.samples,
            max_ratio: fit.ratios.iter().copied().fold(0.0, f64::max),
        }
    }
}

/// How a run relates to its certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeReport {
    pub start_distance: f64,
    pub basin_radius: f64,
    pub start_in_basin: bool,
    pub envelope_violations: usize,
    /// `geometric_fit <= rate_bound + 1e-6`, when a fit exists.
    pub fit_within_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub rank: usize,
    pub start: Vec<f64>,
    pub certificate: Option<CertificateReport>,
    pub trace: TraceSummary,
    pub observed_rate: Option<RateReport>,
    pub guarantee: Option<GuaranteeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitStatistics {
    pub runs: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub max_deviation_from_half: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub solution: String,
    pub certificate_x: CertificateReport,
    pub certificate_y: CertificateReport,
    pub seed: u64,
    pub fits: Option<FitStatistics>,
    pub envelope_violations: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// One CSV row of the benchmark; the aggregate row has `instance = "all"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub seed: Option<u64>,
    pub theta_bar: f64,
    pub rate_bound: f64,
    pub delta_bar: f64,
    pub basin_radius: f64,
    pub geometric_fit: Option<f64>,
    /// `rate_bound - geometric_fit`.
    pub fit_margin: Option<f64>,
    pub envelope_violations: usize,
    pub iterations_to_1e_10: Option<usize>,
    pub iterations: usize,
    pub termination: String,
}
