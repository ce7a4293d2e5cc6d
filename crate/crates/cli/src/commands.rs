use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparse_map::instance::{generate_instance, random_gaussian_vector, random_unit_vector};
use sparse_map::solver::{observed_rate, run_map, SolveOptions, Termination};
use sparse_map::theory::certify as certify_at;
use sparse_map::{Affine, Certificate, Config, Trace, Vector};

use crate::args::{parse_vector, CertifyArgs, GenArgs, IterationFlags, SolveArgs};
use crate::report::{CertificateReport, GuaranteeReport, RateReport, RunReport, TraceSummary};
use crate::{emit, json, CliError, InstanceFile, BASIN_FRACTION, ENVELOPE_SLACK, RATE_SLACK};

pub(crate) fn to_vector(values: &[f64], n: usize, what: &str) -> Result<Vector, CliError> {
    if values.len() != n {
        return Err(CliError::Input(format!("{what}: has {} entries, expected n = {n}", values.len())));
    }
    Vector::from_slice(values).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub(crate) fn certificate(
    c: &Vector,
    cfg: &Config,
    affine: &Affine,
    delta: Option<f64>,
) -> Result<Certificate, CliError> {
    certify_at(c, cfg, affine, delta).map_err(|e| CliError::Input(format!("cannot certify: {e}")))
}

/// `c + 0.99 r u` with `r` the certified radius and `u` a unit direction drawn
/// from `seed` (on a stream separate from instance generation).
pub fn basin_start(cert: &Certificate, seed: u64) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let u: Vector = random_unit_vector(cert.c.dim(), &mut rng);
    &cert.c + &u.scale(BASIN_FRACTION * cert.basin_radius)
}

/// Runs from `start` and summarizes the run, checking it against `cert`
/// when one is given (the trace is then recorded).
pub fn execute(
    cfg: &Config,
    affine: &Affine,
    start: &Vector,
    reference: Option<&Vector>,
    cert: Option<&Certificate>,
    flags: &IterationFlags,
) -> Result<(Trace, RunReport), CliError> {
    let opts = SolveOptions {
        max_iters: flags.max_iters,
        residual_tol: flags.tol,
        record_trace: cert.is_some(),
        reference_point: reference.cloned(),
    };
    let trace = run_map(cfg, affine, start, &opts).map_err(|e| CliError::Input(e.to_string()))?;
    let fit = observed_rate(&trace).ok();
    let guarantee = cert
        .map(|cert| -> Result<GuaranteeReport, CliError> {
            let violations =
                cert.envelope_violations(&trace, ENVELOPE_SLACK).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(GuaranteeReport {
                start_distance: start.distance(&cert.c),
                basin_radius: cert.basin_radius,
                start_in_basin: cert.guarantee_holds(start),
                envelope_violations: violations.len(),
                fit_within_bound: fit.as_ref().map(|f| f.geometric_fit <= cert.rate_bound + RATE_SLACK),
            })
        })
        .transpose()?;
    let report = RunReport {
        n: cfg.n(),
        m: affine.matrix().rows(),
        s: cfg.s(),
        rank: affine.rank(),
        start: start.to_vec(),
        certificate: cert.map(CertificateReport::from),
        trace: TraceSummary::from(&trace),
        observed_rate: fit.as_ref().map(RateReport::from),
        guarantee,
    };
    Ok((trace, report))
}

/// Per-step CSV: `k,residual,dA_of_b,err_a,err_b`, error columns empty
/// without a reference point.
pub fn write_trace_csv(trace: &Trace, path: &Path) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path).map_err(csv_error)?;
    writer.write_record(["k", "residual", "dA_of_b", "err_a", "err_b"]).map_err(csv_error)?;
    let cell = |errors: &Option<Vec<f64>>, k: usize| errors.as_ref().map(|e| e[k].to_string()).unwrap_or_default();
    for k in 0..trace.iterations() {
        writer
            .write_record([
                k.to_string(),
                trace.residuals[k].to_string(),
                trace.sparse_distances[k].to_string(),
                cell(&trace.a_errors, k),
                cell(&trace.b_errors, k),
            ])
            .map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::Io(io),
        other => CliError::Input(format!("csv: {other:?}")),
    }
}

pub(crate) fn serialize<S: serde::Serialize>(value: &S) -> Result<String, CliError> {
    json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = InstanceFile::read(&args.instance)?;
    let (cfg, affine) = file.build(args.max_enum)?;
    let n = cfg.n();
    let reference = match &args.reference {
        Some(values) => Some(to_vector(&values.0, n, "--reference")?),
        None => file.planted(),
    };
    let needs_cert = args.certify || args.start == "basin";
    let cert = if needs_cert {
        let c = reference
            .as_ref()
            .ok_or_else(|| CliError::Input("certifying needs --reference or a planted solution".into()))?;
        Some(certificate(c, &cfg, &affine, args.delta)?)
    } else {
        None
    };
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let start = match args.start.as_str() {
        "random" => random_gaussian_vector(n, &mut ChaCha8Rng::seed_from_u64(seed)),
        "planted" => file
            .planted()
            .ok_or_else(|| CliError::Input("--start planted: the instance has no planted solution".into()))?,
        "basin" => basin_start(cert.as_ref().expect("certified above"), seed),
        text => to_vector(&parse_vector(text).map_err(|e| CliError::Input(format!("--start: {e}")))?, n, "--start")?,
    };

    let (trace, report) = execute(&cfg, &affine, &start, reference.as_ref(), cert.as_ref(), &args.iteration)?;
    if let Some(path) = &args.trace {
        write_trace_csv(&trace, path)?;
    }
    emit(&serialize(&report)?, args.json.as_deref(), out)?;
    match trace.termination {
        Termination::ResidualMet => Ok(()),
        other => Err(CliError::Failed(format!(
            "no convergence: {} after {} iterations, residual {:e}",
            other.as_str(),
            trace.iterations(),
            trace.final_residual()
        ))),
    }
}

pub fn certify(args: &CertifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = InstanceFile::read(&args.instance)?;
    let (cfg, affine) = file.build(args.max_enum)?;
    let c = match &args.c {
        Some(values) => to_vector(&values.0, cfg.n(), "--c")?,
        None => file
            .planted()
            .ok_or_else(|| CliError::Input("no point to certify: pass --c or add planted_solution".into()))?,
    };
    let cert = certificate(&c, &cfg, &affine, args.delta)?;
    emit(&serialize(&CertificateReport::from(&cert))?, args.json.as_deref(), out)
}

pub fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = generate_instance::<f64>(args.n, args.m, args.s, args.sparsity, args.seed)
        .map_err(|e| CliError::Input(e.to_string()))?;
    emit(&serialize(&InstanceFile::from(&inst))?, None, out)
}
