//! The three-dimensional worked example: `M = [[1,1,1],[1,1,0]]`,
//! `p = (1,1)`, `s = 1`, with sparsest solutions `x = (1,0,0)` and
//! `y = (0,1,0)`. Certifies at both, runs from seeded starts inside the basin
//! and checks every number the example is known for.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_map::instance::random_unit_vector;
use sparse_map::solver::Termination;
use sparse_map::sparsity::zero_norm;
use sparse_map::{Affine, Certificate, Config, Matrix, Vector};

use crate::args::{ExampleArgs, Solution};
use crate::commands::{certificate, execute, serialize, write_trace_csv};
use crate::report::{CertificateReport, Check, ExampleReport, FitStatistics};
use crate::{emit, CliError};

/// Allowed distance of each observed rate from 1/2.
pub const FIT_TOLERANCE: f64 = 1e-3;

pub fn instance() -> (Config, Affine) {
    let m = Matrix::from_rows(&[[1.0, 1.0, 1.0], [1.0, 1.0, 0.0]]).expect("finite");
    let p = Vector::from_slice(&[1.0, 1.0]).expect("finite");
    (Config::new(3, 1).expect("valid"), Affine::new(m, p).expect("consistent"))
}

pub fn solution(which: Solution) -> Vector {
    match which {
        Solution::X => Vector::from_slice(&[1.0, 0.0, 0.0]),
        Solution::Y => Vector::from_slice(&[0.0, 1.0, 0.0]),
    }
    .expect("finite")
}

/// `(sqrt 2 - 1) / (18 (2 sqrt 2 - 1))`, the radius for `delta = 1/3`.
pub fn expected_basin() -> f64 {
    (SQRT_2 - 1.0) / (18.0 * (2.0 * SQRT_2 - 1.0))
}

fn check(checks: &mut Vec<Check>, name: &str, passed: bool, detail: String) {
    checks.push(Check { name: name.to_string(), passed, detail });
}

fn certificate_checks(label: &str, cert: &Certificate, delta_given: bool, checks: &mut Vec<Check>) {
    let theta_err = (cert.theta_bar - FRAC_1_SQRT_2).abs();
    check(checks, &format!("{label}: theta_bar = 1/sqrt(2)"), theta_err <= 1e-12, format!("error {theta_err:e}"));
    let delta_err = (cert.delta_bar - 1.0 / 3.0).abs();
    check(checks, &format!("{label}: delta_bar = 1/3"), delta_err <= 1e-15, format!("error {delta_err:e}"));
    let rate_err = (cert.rate_bound - 0.5).abs();
    check(checks, &format!("{label}: rate_bound = 1/2"), rate_err <= 1e-12, format!("error {rate_err:e}"));
    if !delta_given {
        let basin_err = (cert.basin_radius - expected_basin()).abs();
        check(checks, &format!("{label}: basin radius"), basin_err <= 1e-12, format!("error {basin_err:e}"));
    }
    check(checks, &format!("{label}: transversality fails"), !cert.transversal, String::new());
    check(checks, &format!("{label}: classical CQ fails"), !cert.classical_cq_holds, String::new());
}

pub fn run(args: &ExampleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (cfg, affine) = instance();
    // delta_bar = 1/3 at both solutions
    let delta = args.delta.or(Some(1.0 / 3.0));
    let cert_x = certificate(&solution(Solution::X), &cfg, &affine, delta)?;
    let cert_y = certificate(&solution(Solution::Y), &cfg, &affine, delta)?;
    let mut checks = Vec::new();
    certificate_checks("x", &cert_x, args.delta.is_some(), &mut checks);
    certificate_checks("y", &cert_y, args.delta.is_some(), &mut checks);
    let cert = match args.solution {
        Solution::X => &cert_x,
        Solution::Y => &cert_y,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut fits = Vec::with_capacity(args.starts);
    let mut envelope_violations = 0;
    let mut failures = Vec::new();
    for i in 0..args.starts {
        let u: Vector = random_unit_vector(3, &mut rng);
        let radius = 0.99 * cert.basin_radius * rng.random::<f64>().cbrt();
        let start = &cert.c + &u.scale(radius);
        let (trace, report) = execute(&cfg, &affine, &start, Some(&cert.c), Some(cert), &args.iteration)?;
        if i == 0 {
            if let Some(path) = &args.trace {
                write_trace_csv(&trace, path)?;
            }
        }
        let guarantee = report.guarantee.as_ref().expect("certified run");
        envelope_violations += guarantee.envelope_violations;
        let feasible = trace.a_iterates.iter().all(|a| zero_norm(a, &cfg).is_ok_and(|z| z <= 1))
            && trace.b_iterates.iter().all(|b| affine.residual_norm(b).is_ok_and(|r| r <= 1e-8));
        let monotone = trace.monotonicity_defect() <= 1e-12;
        match &report.observed_rate {
            Some(rate) if trace.termination == Termination::ResidualMet && feasible && monotone => {
                fits.push(rate.geometric_fit)
            }
            _ => failures.push(format!(
                "start {i}: {} after {} iterations, rate {:?}, feasible {feasible}, monotone {monotone}",
                trace.termination.as_str(),
                trace.iterations(),
                report.observed_rate.as_ref().map(|r| r.geometric_fit)
            )),
        }
    }

    let fits_summary = (!fits.is_empty()).then(|| FitStatistics {
        runs: fits.len(),
        min: fits.iter().copied().fold(f64::INFINITY, f64::min),
        max: fits.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: fits.iter().sum::<f64>() / fits.len() as f64,
        max_deviation_from_half: fits.iter().map(|f| (f - 0.5).abs()).fold(0.0, f64::max),
    });
    if args.starts > 0 {
        check(&mut checks, "runs converge, stay feasible and monotone", failures.is_empty(), failures.join("; "));
        let deviation = fits_summary.as_ref().map_or(f64::INFINITY, |f| f.max_deviation_from_half);
        check(
            &mut checks,
            "observed rates within 1e-3 of 1/2",
            deviation <= FIT_TOLERANCE,
            format!("max deviation {deviation:e} over {} runs", fits.len()),
        );
        check(
            &mut checks,
            "distance envelope holds",
            envelope_violations == 0,
            format!("{envelope_violations} violations"),
        );
    }

    let passed = checks.iter().all(|c| c.passed);
    let report = ExampleReport {
        solution: match args.solution {
            Solution::X => "x".into(),
            Solution::Y => "y".into(),
        },
        certificate_x: CertificateReport::from(&cert_x),
        certificate_y: CertificateReport::from(&cert_y),
        seed: args.seed,
        fits: fits_summary,
        envelope_violations,
        checks,
        passed,
    };
    emit(&serialize(&report)?, args.json.as_deref(), out)?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::Failed(format!("example checks failed: {}", failed.join(", "))))
    }
}
