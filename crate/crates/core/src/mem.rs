//! Per-thread heap accounting for peak working memory of a method run.
//!
//! Install [`TrackingAllocator`] as the global allocator in the binary, then
//! wrap a computation in [`measure`]. Without the allocator installed,
//! `measure` reports `None`.
//!
//! ```no_run
//! #[global_allocator]
//! static ALLOC: pcon::mem::TrackingAllocator = pcon::mem::TrackingAllocator;
//! ```

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::sync::atomic::{AtomicBool, Ordering};

static INSTALLED: AtomicBool = AtomicBool::new(false);

thread_local! {
    static CURRENT: Cell<isize> = const { Cell::new(0) };
    static PEAK: Cell<isize> = const { Cell::new(0) };
}

/// [`System`] plus live-byte and high-water counters for the calling thread.
pub struct TrackingAllocator;

#[inline]
fn record(delta: isize) {
    let _ = CURRENT.try_with(|c| {
        let now = c.get() + delta;
        c.set(now);
        let _ = PEAK.try_with(|p| {
            if now > p.get() {
                p.set(now);
            }
        });
    });
    if !INSTALLED.load(Ordering::Relaxed) {
        INSTALLED.store(true, Ordering::Relaxed);
    }
}

unsafe impl GlobalAlloc for TrackingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            record(layout.size() as isize);
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            record(layout.size() as isize);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        record(-(layout.size() as isize));
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            record(new_size as isize - layout.size() as isize);
        }
        p
    }
}

pub fn is_installed() -> bool {
    INSTALLED.load(Ordering::Relaxed)
}

/// Runs `f` and returns its result with the peak bytes it held above the
/// thread's live total at entry.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, Option<usize>) {
    let base = CURRENT.with(Cell::get);
    let outer_peak = PEAK.with(|p| p.replace(base));
    let out = f();
    let peak = PEAK.with(|p| p.replace(outer_peak.max(p.get())));
    let extra = is_installed().then(|| (peak - base).max(0) as usize);
    (out, extra)
}
