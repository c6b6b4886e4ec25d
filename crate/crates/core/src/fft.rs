//! Thin 2D/1D FFT layer over `rustfft` with a per-thread plan cache.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        let mut p = p.borrow_mut();
        let (planner, cache) = &mut *p;
        cache
            .entry((n, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

/// Unnormalised in-place 2D transform of a row-major `nx × ny` array
/// (index `ix * ny + iy`). `inverse` selects the `e^{+i k x}` sign.
pub(crate) fn fft2(data: &mut [Complex64], nx: usize, ny: usize, inverse: bool) {
    debug_assert_eq!(data.len(), nx * ny);
    // contiguous rows: transform along y
    let fy = plan(ny, inverse);
    fy.process(data);
    // columns: transform along x
    let fx = plan(nx, inverse);
    let mut col = vec![Complex64::new(0.0, 0.0); nx];
    for iy in 0..ny {
        for ix in 0..nx {
            col[ix] = data[ix * ny + iy];
        }
        fx.process(&mut col);
        for ix in 0..nx {
            data[ix * ny + iy] = col[ix];
        }
    }
}
