//! Allocation accounting for the matrix-free evaluation: one right-hand-side
//! call and a whole evolution must stay within a small multiple of n² scalar
//! slots, with no n⁴-sized object anywhere.

use qswrank_core::dynamics::{lindblad_rhs, DensityMatrix, Liouvillian};
use qswrank_core::integrator::{evolve, Rkf45Config};
use qswrank_core::mem::{self, CountingAlloc};
use qswrank_core::net::adjacency;
use qswrank_core::operators::{
    google_weights, hamiltonian, hopping_matrix, lindblad_channels, normalized_transition,
    WalkParameters,
};
use qswrank_core::synth;

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc::new();

const SLOT_BYTES: usize = 8;

fn main() {
    let params = WalkParameters { omega: 0.8, q: 0.9, c: 10.0 };

    // spin up the thread pool outside the measured region
    let warm = synth::erdos_renyi(128, 5.0, 3);
    let warm_l = Liouvillian::new(&warm, &params).unwrap();
    let warm_rho = DensityMatrix::<f64>::maximally_mixed(128);
    let _ = warm_l.apply(warm_rho.matrix());

    let mut failed = false;

    for &n in &[100usize, 200, 400] {
        let net = synth::erdos_renyi(n, 10.0, 1000 + n as u64);
        let liou = Liouvillian::new(&net, &params).unwrap();
        let rho = DensityMatrix::<f64>::maximally_mixed(n);
        let (_, stats) = mem::measure(|| liou.apply(rho.matrix()));
        let slots = stats.peak_over_baseline_bytes / SLOT_BYTES;
        let bound = 40 * n * n;
        let ok = slots <= bound;
        failed |= !ok;
        println!(
            "[{}] rhs peak at n={n}: {slots} scalar slots (bound {bound})",
            if ok { "PASS" } else { "FAIL" }
        );
    }

    // the dense-operator reference route is O(n³) time but must stay O(n²)
    // in auxiliary memory as well
    for &n in &[100usize, 200] {
        let net = synth::erdos_renyi(n, 10.0, 3000 + n as u64);
        let a = adjacency(&net);
        let w = normalized_transition::<f64>(&a).unwrap();
        let f = hopping_matrix::<f64>(n).unwrap();
        let g = google_weights(&w, &f, params.q).unwrap();
        let h = hamiltonian(&g);
        let ch = lindblad_channels(&g);
        let rho = DensityMatrix::<f64>::maximally_mixed(n);
        let (_, stats) =
            mem::measure(|| lindblad_rhs(&h, &ch, params.omega, rho.matrix()).unwrap());
        let slots = stats.peak_over_baseline_bytes / SLOT_BYTES;
        let bound = 40 * n * n;
        let ok = slots <= bound;
        failed |= !ok;
        println!(
            "[{}] dense-route rhs peak at n={n}: {slots} scalar slots (bound {bound})",
            if ok { "PASS" } else { "FAIL" }
        );
    }

    for &n in &[100usize, 200] {
        let net = synth::erdos_renyi(n, 10.0, 2000 + n as u64);
        let liou = Liouvillian::new(&net, &params).unwrap();
        let rho = DensityMatrix::<f64>::maximally_mixed(n);
        let config = Rkf45Config { t_max: 0.2, ss_eps: 0.0, ..Rkf45Config::default() };
        let (result, stats) = mem::measure(|| evolve(&liou.rhs_fn(), &rho, &config).unwrap());
        assert!(result.steps_accepted > 0);
        let slots = stats.peak_over_baseline_bytes / SLOT_BYTES;
        let bound = 120 * n * n;
        let ok = slots <= bound;
        failed |= !ok;
        println!(
            "[{}] evolve peak at n={n}: {slots} scalar slots (bound {bound})",
            if ok { "PASS" } else { "FAIL" }
        );
    }

    assert!(mem::instrumented());
    if failed {
        std::process::exit(1);
    }
}
