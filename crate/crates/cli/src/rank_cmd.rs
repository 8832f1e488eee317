//! The `rank` and `classical` subcommands.

use std::fs::File;
use std::io::BufReader;
use std::time::Instant;

use qswrank_core::integrator::Rkf45Config;
use qswrank_core::net::{self, LoadOptions, LoadReport, Network};
use qswrank_core::operators::{
    google_weights, hopping_matrix, normalized_transition, WalkParameters,
};
use qswrank_core::rank::{classical_pagerank, quantum_pagerank, rank_nodes, Ranking};
use qswrank_core::{mem, net::adjacency};

use crate::args::{ClassicalArgs, OutputFormat, RankArgs};
use crate::manifest::{LoadSection, Manifest, TerminationSection, WalkSection, SOLVER_VERSION};
use crate::CliError;

const CLASSICAL_EPS: f64 = 1e-12;

pub fn load_network(path: &str, metadata: Option<&str>) -> Result<(Network, LoadReport), CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Input(format!("cannot open {path}: {e}")))?;
    let (mut network, report) = net::load_edge_list(BufReader::new(file), &LoadOptions::default())?;
    if let Some(meta_path) = metadata {
        let meta_file = File::open(meta_path)
            .map_err(|e| CliError::Input(format!("cannot open {meta_path}: {e}")))?;
        let rows = net::load_node_metadata(BufReader::new(meta_file))?;
        let matched = network.attach_coords(&rows);
        eprintln!("metadata: rows={} matched={}", rows.len(), matched);
    }
    eprintln!(
        "load: nodes={} edges={} duplicates={} self_loops={} isolated={}",
        network.n(),
        network.edges().len(),
        report.duplicates,
        report.self_loops,
        report.isolated
    );
    Ok((network, report))
}

fn write_ranking(ranking: &Ranking<f64>, format: OutputFormat) -> Result<&'static str, CliError> {
    match format {
        OutputFormat::Json => {
            let body = serde_json::to_string_pretty(ranking).expect("ranking serializes");
            std::fs::write("ranking.json", body + "\n")?;
            Ok("json")
        }
        OutputFormat::Csv => {
            std::fs::write("ranking.csv", ranking.to_csv())?;
            Ok("csv")
        }
    }
}

fn print_table(ranking: &Ranking<f64>, top: usize) {
    println!("{:>5}  {:<24} {:>14}  class", "rank", "label", "probability");
    for e in ranking.ranking.iter().take(top) {
        println!("{:>5}  {:<24} {:>14.6e}  {}", e.rank, e.label, e.probability, e.hub_class);
    }
    println!(
        "hubs: main={} secondary={} rest={}",
        ranking.hub_counts.main, ranking.hub_counts.secondary, ranking.hub_counts.rest
    );
}

pub fn run_rank(args: &RankArgs) -> Result<(), CliError> {
    let (network, report) = load_network(&args.input, args.metadata.as_deref())?;
    let params = WalkParameters { omega: args.omega, q: args.q, c: args.c };
    params.validate()?;
    let config = Rkf45Config {
        tol: args.tol,
        h0: args.h0,
        t_max: args.t_max,
        ss_eps: args.ss_eps,
        ..Rkf45Config::default()
    };

    let start = Instant::now();
    let ((p, result), stats) = {
        let (outcome, stats) = mem::measure(|| quantum_pagerank(&network, &params, &config));
        (outcome?, stats)
    };
    let wall = start.elapsed().as_secs_f64();
    eprintln!(
        "evolve: terminated_by={:?} t={:.4} accepted={} rejected={} residual={:.3e} renorms={} drift_max={:.3e}",
        result.terminated_by,
        result.t_reached,
        result.steps_accepted,
        result.steps_rejected,
        result.residual,
        result.trace_renormalizations,
        result.max_trace_drift
    );

    let classical_delta = if args.classical_check {
        let a = adjacency(&network);
        let w = normalized_transition::<f64>(&a)?;
        let f = hopping_matrix::<f64>(network.n())?;
        let g = google_weights(&w, &f, args.q)?;
        let baseline = classical_pagerank(&g, CLASSICAL_EPS)?;
        let delta = p.max_abs_diff(&baseline);
        println!("classical_check: max_abs_diff={delta:.6e}");
        Some(delta)
    } else {
        None
    };

    let ranking = rank_nodes(&p, network.labels(), args.c)?.with_coords(&network);
    let format = write_ranking(&ranking, args.format)?;
    print_table(&ranking, args.top);

    Manifest {
        solver_version: SOLVER_VERSION,
        command: "rank",
        input: Some(args.input.clone()),
        metadata: args.metadata.clone(),
        walk: WalkSection { omega: Some(args.omega), q: args.q, c: args.c },
        integrator: Some(config),
        classical_eps: classical_delta.map(|_| CLASSICAL_EPS),
        threads: rayon::current_num_threads(),
        format,
        seed: None,
        sizes: None,
        degree: None,
        family: None,
        load_report: Some(LoadSection {
            duplicates: report.duplicates,
            self_loops: report.self_loops,
            isolated: report.isolated,
        }),
        wall_seconds: wall,
        peak_kernel_bytes: stats.peak_over_baseline_bytes,
        termination: Some(TerminationSection::from_result(&result)),
        classical_check_max_abs_diff: classical_delta,
        time_scaling_exponent: None,
    }
    .write("manifest.json")?;
    Ok(())
}

pub fn run_classical(args: &ClassicalArgs) -> Result<(), CliError> {
    let (network, report) = load_network(&args.input, args.metadata.as_deref())?;
    let params = WalkParameters { omega: 0.0, q: args.q, c: args.c };
    params.validate()?;

    let start = Instant::now();
    let (outcome, stats) = mem::measure(|| -> Result<_, CliError> {
        let a = adjacency(&network);
        let w = normalized_transition::<f64>(&a)?;
        let f = hopping_matrix::<f64>(network.n())?;
        let g = google_weights(&w, &f, args.q)?;
        Ok(classical_pagerank(&g, CLASSICAL_EPS)?)
    });
    let p = outcome?;
    let wall = start.elapsed().as_secs_f64();

    let ranking = rank_nodes(&p, network.labels(), args.c)?.with_coords(&network);
    let format = write_ranking(&ranking, args.format)?;
    print_table(&ranking, args.top);

    Manifest {
        solver_version: SOLVER_VERSION,
        command: "classical",
        input: Some(args.input.clone()),
        metadata: args.metadata.clone(),
        walk: WalkSection { omega: None, q: args.q, c: args.c },
        integrator: None,
        classical_eps: Some(CLASSICAL_EPS),
        threads: rayon::current_num_threads(),
        format,
        seed: None,
        sizes: None,
        degree: None,
        family: None,
        load_report: Some(LoadSection {
            duplicates: report.duplicates,
            self_loops: report.self_loops,
            isolated: report.isolated,
        }),
        wall_seconds: wall,
        peak_kernel_bytes: stats.peak_over_baseline_bytes,
        termination: None,
        classical_check_max_abs_diff: None,
        time_scaling_exponent: None,
    }
    .write("manifest.json")?;
    Ok(())
}
