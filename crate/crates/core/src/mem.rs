//! Allocation accounting for the memory claims of the solver.
//!
//! `CountingAlloc` wraps the system allocator and tracks live and peak bytes
//! for the whole process. Binaries that want kernel memory numbers install it
//! with `#[global_allocator]`; `measure` then reports the peak growth over a
//! closure. This deliberately measures allocator traffic, not OS RSS, so the
//! numbers are reproducible across machines.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);
static INSTALLED: AtomicUsize = AtomicUsize::new(0);

/// System allocator wrapper that keeps live/peak byte counters.
pub struct CountingAlloc;

impl CountingAlloc {
    pub const fn new() -> Self {
        CountingAlloc
    }
}

impl Default for CountingAlloc {
    fn default() -> Self {
        Self::new()
    }
}

fn on_alloc(size: usize) {
    INSTALLED.store(1, Ordering::Relaxed);
    let now = CURRENT.fetch_add(size, Ordering::Relaxed) + size;
    PEAK.fetch_max(now, Ordering::Relaxed);
}

fn on_dealloc(size: usize) {
    CURRENT.fetch_sub(size, Ordering::Relaxed);
}

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            on_alloc(layout.size());
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        on_dealloc(layout.size());
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            on_alloc(layout.size());
        }
        p
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            on_dealloc(layout.size());
            on_alloc(new_size);
        }
        p
    }
}

/// Whether the counting allocator has seen any traffic (i.e. is installed).
pub fn instrumented() -> bool {
    INSTALLED.load(Ordering::Relaxed) != 0
}

/// Live allocated bytes right now.
pub fn current_bytes() -> usize {
    CURRENT.load(Ordering::Relaxed)
}

/// Peak measurement over a closure.
#[derive(Debug, Clone, Copy)]
pub struct PeakStats {
    /// Live bytes when the measurement started.
    pub baseline_bytes: usize,
    /// Peak growth above the baseline while the closure ran.
    pub peak_over_baseline_bytes: usize,
}

/// Runs `f` and reports how far the live allocation grew above the level at
/// entry. Meaningful only in binaries that installed [`CountingAlloc`]; other
/// processes report zero. Concurrent allocations elsewhere in the process are
/// attributed to the measurement, so callers serialize measurements.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, PeakStats) {
    let baseline = CURRENT.load(Ordering::Relaxed);
    PEAK.store(baseline, Ordering::Relaxed);
    let result = f();
    let peak = PEAK.load(Ordering::Relaxed);
    (result, PeakStats {
        baseline_bytes: baseline,
        peak_over_baseline_bytes: peak.saturating_sub(baseline),
    })
}
