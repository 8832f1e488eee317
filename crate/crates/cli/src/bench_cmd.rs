//! The `bench` subcommand: wall time and peak kernel memory per node count,
//! with a log-log slope fit of the time column.

use std::time::Instant;

use qswrank_core::dynamics::{
    dense_superoperator, devectorize, expm, vectorize, DensityMatrix, EXPM_MAX_DIM,
};
use qswrank_core::integrator::Rkf45Config;
use qswrank_core::mem;
use qswrank_core::net::{adjacency, Network};
use qswrank_core::operators::{
    google_weights, hamiltonian, hopping_matrix, lindblad_channels, normalized_transition,
    WalkParameters,
};
use qswrank_core::rank::quantum_pagerank;
use qswrank_core::synth;

use crate::args::{BenchArgs, GraphFamily};
use crate::manifest::{Manifest, WalkSection, SOLVER_VERSION};
use crate::CliError;

/// Rough upper bound on kernel bytes for one solve: a dozen complex n×n
/// states plus sparse structure.
fn estimate_solve_bytes(n: usize, edges: usize) -> usize {
    420 * n * n + 64 * edges + (1 << 20)
}

/// Largest n the dense-superoperator cross-check can propagate
/// (superoperator dimension n² capped by the matrix-exponential limit).
fn oracle_size_limit() -> usize {
    (EXPM_MAX_DIM as f64).sqrt() as usize
}

struct BenchRow {
    n: usize,
    seconds: Option<f64>,
    peak_bytes: Option<usize>,
    status: String,
}

pub fn run_bench(args: &BenchArgs) -> Result<(), CliError> {
    if args.sizes.is_empty() {
        return Err(CliError::Input("need at least one size".into()));
    }
    let params = WalkParameters { omega: args.omega, q: args.q, c: 10.0 };
    params.validate()?;
    let config = Rkf45Config {
        tol: args.tol,
        h0: args.h0,
        t_max: args.t_max,
        ss_eps: args.ss_eps,
        ..Rkf45Config::default()
    };
    config.validate()?;

    // spin the thread pool up outside the timed region
    {
        let warm = synth::erdos_renyi(64, 5.0, args.seed);
        let _ = quantum_pagerank(&warm, &params, &Rkf45Config { t_max: 0.05, ss_eps: 0.0, ..config });
    }

    let start = Instant::now();
    let mut rows: Vec<BenchRow> = Vec::new();
    for (idx, &n) in args.sizes.iter().enumerate() {
        if n < 2 {
            rows.push(BenchRow {
                n,
                seconds: None,
                peak_bytes: None,
                status: "failed: need at least 2 nodes".into(),
            });
            continue;
        }
        let network: Network = match args.family {
            GraphFamily::Random => synth::erdos_renyi(n, args.degree, args.seed + idx as u64),
            GraphFamily::Complete => synth::complete(n),
        };
        let estimate = estimate_solve_bytes(n, network.edges().len());
        if let Some(cap_mb) = args.mem_cap_mb {
            if estimate > cap_mb * (1 << 20) {
                let row = BenchRow {
                    n,
                    seconds: None,
                    peak_bytes: None,
                    status: format!(
                        "skipped: estimated {} MiB exceeds cap {} MiB",
                        estimate >> 20,
                        cap_mb
                    ),
                };
                eprintln!("bench: n={n} {}", row.status);
                rows.push(row);
                continue;
            }
        }

        let t0 = Instant::now();
        let (outcome, stats) = mem::measure(|| quantum_pagerank(&network, &params, &config));
        let seconds = t0.elapsed().as_secs_f64();
        match outcome {
            Err(e) => {
                rows.push(BenchRow {
                    n,
                    seconds: None,
                    peak_bytes: None,
                    status: format!("failed: {e}"),
                });
            }
            Ok((p, result)) => {
                // the solve path must stay O(n²): far below any n²×n² object
                let peak_budget = 1600 * n * n + (4 << 20);
                let mut status = if stats.peak_over_baseline_bytes <= peak_budget {
                    String::from("ok")
                } else {
                    format!(
                        "failed: peak {} bytes exceeds the O(n²) budget {}",
                        stats.peak_over_baseline_bytes, peak_budget
                    )
                };
                if args.oracle && status == "ok" {
                    status = match oracle_check(&network, &params, result.t_reached, &p) {
                        Ok(dev) => format!("ok oracle_dev={dev:.3e}"),
                        Err(msg) => format!("ok oracle_unavailable: {msg}"),
                    };
                }
                eprintln!(
                    "bench: n={n} seconds={seconds:.4} peak_bytes={} accepted={} status={status}",
                    stats.peak_over_baseline_bytes, result.steps_accepted
                );
                rows.push(BenchRow {
                    n,
                    seconds: Some(seconds),
                    peak_bytes: Some(stats.peak_over_baseline_bytes),
                    status,
                });
            }
        }
    }
    let wall = start.elapsed().as_secs_f64();

    let fit_points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.seconds.map(|s| (r.n as f64, s.max(1e-9))))
        .collect();
    let exponent = (fit_points.len() >= 2).then(|| log_log_slope(&fit_points));

    let mut csv = String::from("n,seconds,peak_bytes,status\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            r.seconds.map_or(String::new(), |s| format!("{s:.6}")),
            r.peak_bytes.map_or(String::new(), |b| b.to_string()),
            r.status
        ));
    }
    if let Some(e) = exponent {
        csv.push_str(&format!("# time_scaling_exponent={e:.4}\n"));
    }
    std::fs::write("bench.csv", csv)?;

    if let Some(e) = exponent {
        println!("time_scaling_exponent={e:.4}");
    }
    println!("bench: {} rows written to bench.csv", rows.len());

    Manifest {
        solver_version: SOLVER_VERSION,
        command: "bench",
        input: None,
        metadata: None,
        walk: WalkSection { omega: Some(args.omega), q: args.q, c: 10.0 },
        integrator: Some(config),
        classical_eps: None,
        threads: rayon::current_num_threads(),
        format: "csv",
        seed: Some(args.seed),
        sizes: Some(args.sizes.clone()),
        degree: Some(args.degree),
        family: Some(match args.family {
            GraphFamily::Random => "random",
            GraphFamily::Complete => "complete",
        }),
        load_report: None,
        wall_seconds: wall,
        peak_kernel_bytes: rows.iter().filter_map(|r| r.peak_bytes).max().unwrap_or(0),
        termination: None,
        classical_check_max_abs_diff: None,
        time_scaling_exponent: exponent,
    }
    .write("manifest.json")?;
    Ok(())
}

/// Propagates the same initial state with exp(𝓛·t) over the explicit
/// superoperator and reports the largest probability deviation.
fn oracle_check(
    network: &Network,
    params: &WalkParameters<f64>,
    t: f64,
    p: &qswrank_core::rank::ProbabilityVector<f64>,
) -> Result<f64, String> {
    let n = network.n();
    if n > oracle_size_limit() {
        return Err(format!("n={n} above oracle limit {}", oracle_size_limit()));
    }
    let a = adjacency(network);
    let w = normalized_transition::<f64>(&a).map_err(|e| e.to_string())?;
    let f = hopping_matrix::<f64>(n).map_err(|e| e.to_string())?;
    let g = google_weights(&w, &f, params.q).map_err(|e| e.to_string())?;
    let h = hamiltonian(&g);
    let ch = lindblad_channels(&g);
    let sup = dense_superoperator(&h, &ch, params.omega).map_err(|e| e.to_string())?;
    let propagator = expm(sup.matrix(), t).map_err(|e| e.to_string())?;
    let rho0 = DensityMatrix::<f64>::maximally_mixed(n);
    let rho_t = devectorize(&propagator.matvec(&vectorize(rho0.matrix())))
        .map_err(|e| e.to_string())?;
    let dev = (0..n)
        .map(|i| (rho_t.get(i, i).re - p.get(i)).abs())
        .fold(0.0, f64::max);
    Ok(dev)
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
