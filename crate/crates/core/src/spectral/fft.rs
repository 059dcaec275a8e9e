//! Multi-dimensional complex FFTs on flat row-major buffers.
//!
//! Transforms are unnormalized in both directions; callers apply `1/N`.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Lanes gathered per strided batch.
const BATCH: usize = 64;

pub(crate) fn fft_nd(data: &mut [Complex64], sizes: [usize; 3], direction: FftDirection) {
    debug_assert_eq!(data.len(), sizes.iter().product::<usize>());
    for axis in 0..3 {
        if sizes[axis] > 1 {
            transform_axis(data, sizes, axis, direction);
        }
    }
}

pub(crate) fn forward(data: &mut [Complex64], sizes: [usize; 3]) {
    fft_nd(data, sizes, FftDirection::Forward);
}

pub(crate) fn inverse(data: &mut [Complex64], sizes: [usize; 3]) {
    fft_nd(data, sizes, FftDirection::Inverse);
}

fn transform_axis(data: &mut [Complex64], sizes: [usize; 3], axis: usize, direction: FftDirection) {
    let n = sizes[axis];
    let inner: usize = sizes[axis + 1..].iter().product();
    let outer: usize = sizes[..axis].iter().product();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction));
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    if inner == 1 {
        fft.process_with_scratch(data, &mut scratch);
        return;
    }

    let mut lanes = vec![Complex64::default(); n * BATCH.min(inner)];
    for o in 0..outer {
        let base = o * n * inner;
        let mut j0 = 0;
        while j0 < inner {
            let width = BATCH.min(inner - j0);
            let buf = &mut lanes[..n * width];
            for i in 0..n {
                let row = base + i * inner + j0;
                for w in 0..width {
                    buf[w * n + i] = data[row + w];
                }
            }
            fft.process_with_scratch(buf, &mut scratch);
            for i in 0..n {
                let row = base + i * inner + j0;
                for w in 0..width {
                    data[row + w] = buf[w * n + i];
                }
            }
            j0 += width;
        }
    }
}
