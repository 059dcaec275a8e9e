//! Alias-free quadratic products on the 2x zero-padded grid.
//!
//! Two real fields share one complex transform in both directions
//! (`a + i b` packing). Lifting drops the Nyquist planes of the source grid,
//! which carry no Hermitian partner.

use rustfft::num_complex::Complex64;

use super::fft;
use super::grid::Grid;

/// Maps every source-grid offset to its padded-grid offset (or `None` on a Nyquist plane).
fn lift_map(grid: &Grid) -> Vec<Option<usize>> {
    let padded = grid.padded();
    (0..grid.len())
        .map(|off| {
            let m = grid.multi_index(off);
            if grid.is_interior(m) {
                padded.offset_of(m)
            } else {
                None
            }
        })
        .collect()
}

/// Padded offsets of `k` and `-k` for every source-grid offset.
fn truncate_map(grid: &Grid) -> Vec<(usize, usize)> {
    let padded = grid.padded();
    (0..grid.len())
        .map(|off| {
            let m = grid.multi_index(off);
            (
                padded.offset_of(m).expect("source lattice fits padded lattice"),
                padded
                    .offset_of([-m[0], -m[1], -m[2]])
                    .expect("negated index fits padded lattice"),
            )
        })
        .collect()
}

/// Inverse-transforms the components two at a time onto the padded grid and
/// hands each packed buffer to `visit(first, buf)`: `buf[i].re` holds
/// component `first`, `buf[i].im` component `first + 1` (zero if absent).
pub(crate) fn padded_visit(grid: &Grid, comps: &[&[Complex64]], mut visit: impl FnMut(usize, &[Complex64])) {
    let padded = grid.padded();
    let map = lift_map(grid);
    let mut z = vec![Complex64::default(); padded.len()];
    let i = Complex64::i();
    for (t, pair) in comps.chunks(2).enumerate() {
        z.iter_mut().for_each(|c| *c = Complex64::default());
        for (off, p) in map.iter().enumerate() {
            if let Some(p) = *p {
                z[p] = match pair {
                    [a, b] => a[off] + i * b[off],
                    [a] => a[off],
                    _ => unreachable!(),
                };
            }
        }
        fft::inverse(&mut z, padded.raw_sizes());
        visit(2 * t, &z);
    }
}

/// Physical samples of each spectral component on the padded grid.
pub(crate) fn padded_physical(grid: &Grid, comps: &[&[Complex64]]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(comps.len());
    padded_visit(grid, comps, |first, z| {
        out.push(z.iter().map(|c| c.re).collect());
        if first + 1 < comps.len() {
            out.push(z.iter().map(|c| c.im).collect());
        }
    });
    out
}

/// Forward transforms `count` real padded-grid fields produced on demand by
/// `fill(t, buf)`, truncates each spectrum back to the source grid and hands
/// it to `visit(t, spectrum)`.
pub(crate) fn padded_spectral_visit(
    grid: &Grid,
    count: usize,
    mut fill: impl FnMut(usize, &mut [f64]),
    mut visit: impl FnMut(usize, &[Complex64]),
) {
    let padded = grid.padded();
    let map = truncate_map(grid);
    let scale = 1.0 / padded.len() as f64;
    let mut buf = vec![0.0; padded.len()];
    let mut z = vec![Complex64::default(); padded.len()];
    let mut a = vec![Complex64::default(); grid.len()];
    let mut b = vec![Complex64::default(); grid.len()];
    let mut t = 0;
    while t < count {
        fill(t, &mut buf);
        for (zc, &x) in z.iter_mut().zip(&buf) {
            *zc = Complex64::new(x, 0.0);
        }
        let two = t + 1 < count;
        if two {
            fill(t + 1, &mut buf);
            for (zc, &x) in z.iter_mut().zip(&buf) {
                zc.im = x;
            }
        }
        fft::forward(&mut z, padded.raw_sizes());
        for (off, &(p, pn)) in map.iter().enumerate() {
            let zp = z[p] * scale;
            if two {
                let zn = z[pn].conj() * scale;
                a[off] = (zp + zn) * 0.5;
                b[off] = (zp - zn) * Complex64::new(0.0, -0.5);
            } else {
                a[off] = zp;
            }
        }
        visit(t, &a);
        if two {
            visit(t + 1, &b);
        }
        t += if two { 2 } else { 1 };
    }
}

/// Collecting form of [`padded_spectral_visit`].
pub(crate) fn padded_spectral(grid: &Grid, count: usize, fill: impl FnMut(usize, &mut [f64])) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(count);
    padded_spectral_visit(grid, count, fill, |_, s| out.push(s.to_vec()));
    out
}

/// Spectra of the pointwise products `f_i g_i` for the listed index pairs.
#[cfg(test)]
fn product_spectra(
    grid: &Grid,
    left: &[Vec<f64>],
    right: &[Vec<f64>],
    pairs: &[(usize, usize)],
) -> Vec<Vec<Complex64>> {
    padded_spectral(grid, pairs.len(), |t, buf| {
        let (i, j) = pairs[t];
        for ((b, x), y) in buf.iter_mut().zip(&left[i]).zip(&right[j]) {
            *b = x * y;
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(grid: &Grid, m: [i64; 3], c: Complex64) -> Vec<Complex64> {
        let mut v = vec![Complex64::default(); grid.len()];
        v[grid.offset_of(m).unwrap()] += c;
        v[grid.offset_of([-m[0], -m[1], -m[2]]).unwrap()] += c.conj();
        v
    }

    #[test]
    fn product_of_cosines_is_alias_free() {
        // cos(3x) * cos(3x) = 1/2 + cos(6x)/2; 6 aliases on an 8-point grid without padding
        let g = Grid::new(2, &[8, 8], 1).unwrap();
        let a = mode(&g, [3, 0, 0], Complex64::new(0.5, 0.0));
        let phys = padded_physical(&g, &[&a]);
        let spec = product_spectra(&g, &phys, &phys, &[(0, 0)]);
        let s = &spec[0];
        assert!((s[g.offset_of([0, 0, 0]).unwrap()].re - 0.5).abs() < 1e-14);
        // the k = 6 content is off the source lattice and must not fold onto k = -2
        assert!(s[g.offset_of([-2, 0, 0]).unwrap()].norm() < 1e-14);
    }

    #[test]
    fn packed_pair_separates() {
        let g = Grid::new(3, &[6, 4, 4], 2).unwrap();
        let a = mode(&g, [1, 1, 0], Complex64::new(0.3, -0.2));
        let b = mode(&g, [2, 0, 1], Complex64::new(-0.1, 0.4));
        let phys = padded_physical(&g, &[&a, &b]);
        let back = padded_spectral(&g, 2, |t, buf| buf.copy_from_slice(&phys[t]));
        for (x, y) in back[0].iter().zip(&a) {
            assert!((x - y).norm() < 1e-14);
        }
        for (x, y) in back[1].iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
