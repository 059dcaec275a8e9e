use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Periodic box of `dim` axes with `sizes[i]` samples each.
///
/// The frequency lattice is `{m / L : -N_i/2 <= m_i < N_i/2}` and the
/// physical period along every axis is `2 pi L`. Unused trailing entries of
/// `sizes` are 1 for two-dimensional grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    dim: usize,
    sizes: [usize; 3],
    l: u32,
}

impl Grid {
    pub fn new(dim: usize, sizes: &[usize], lattice_denominator: u32) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if sizes.len() != dim {
            return Err(Error::InvalidGrid(format!("expected {dim} sizes, got {}", sizes.len())));
        }
        if let Some(bad) = sizes.iter().find(|&&n| n < 4 || n % 2 != 0) {
            return Err(Error::InvalidGrid(format!(
                "axis size {bad} must be even and at least 4"
            )));
        }
        if lattice_denominator == 0 {
            return Err(Error::InvalidGrid("lattice denominator must be >= 1".into()));
        }
        let mut s = [1usize; 3];
        s[..dim].copy_from_slice(sizes);
        Ok(Self {
            dim,
            sizes: s,
            l: lattice_denominator,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes[..self.dim]
    }

    pub fn lattice_denominator(&self) -> u32 {
        self.l
    }

    /// Frequency spacing `1/L`.
    pub fn spacing(&self) -> f64 {
        1.0 / self.l as f64
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        2.0 * PI * self.l as f64
    }

    /// `(2 pi L)^d`.
    pub fn volume(&self) -> f64 {
        self.period().powi(self.dim as i32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.volume() / self.len() as f64
    }

    /// Largest representable positive frequency along `axis`, `N/(2L)`.
    pub fn nyquist(&self, axis: usize) -> f64 {
        self.sizes[axis] as f64 / (2.0 * self.l as f64)
    }

    pub fn max_nyquist(&self) -> f64 {
        (0..self.dim).map(|a| self.nyquist(a)).fold(0.0, f64::max)
    }

    /// Integer lattice index `m` stored at array position `i` along `axis`.
    pub fn lattice_index(&self, axis: usize, i: usize) -> i64 {
        let n = self.sizes[axis];
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Array position of lattice index `m`, or `None` if it is off the grid.
    pub fn position(&self, axis: usize, m: i64) -> Option<usize> {
        let n = self.sizes[axis] as i64;
        if m < -n / 2 || m >= n / 2 {
            return None;
        }
        Some(m.rem_euclid(n) as usize)
    }

    /// Flat row-major offset of a lattice multi-index.
    pub fn offset_of(&self, m: [i64; 3]) -> Option<usize> {
        let mut off = 0usize;
        for (a, &ma) in m.iter().enumerate() {
            let p = if a < self.dim {
                self.position(a, ma)?
            } else if ma == 0 {
                0
            } else {
                return None;
            };
            off = off * self.sizes[a] + p;
        }
        Some(off)
    }

    pub fn multi_index(&self, offset: usize) -> [i64; 3] {
        let [_, n1, n2] = self.sizes;
        let i2 = offset % n2;
        let i1 = (offset / n2) % n1;
        let i0 = offset / (n1 * n2);
        let mut m = [0i64; 3];
        for (a, i) in [i0, i1, i2].into_iter().enumerate().take(self.dim) {
            m[a] = self.lattice_index(a, i);
        }
        m
    }

    /// Wavevector (physical frequency) at flat offset.
    pub fn wavevector(&self, offset: usize) -> [f64; 3] {
        let m = self.multi_index(offset);
        let h = self.spacing();
        [m[0] as f64 * h, m[1] as f64 * h, m[2] as f64 * h]
    }

    /// Per-axis frequency tables, `freqs()[a][i]` being the frequency at position `i`.
    pub fn freqs(&self) -> [Vec<f64>; 3] {
        let h = self.spacing();
        let f = |a: usize| -> Vec<f64> {
            (0..self.sizes[a])
                .map(|i| {
                    if a < self.dim {
                        self.lattice_index(a, i) as f64 * h
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        [f(0), f(1), f(2)]
    }

    /// Calls `f(offset, k)` for every lattice point in storage order.
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [f64; 3])) {
        let [f0, f1, f2] = self.freqs();
        let mut off = 0;
        for &k0 in &f0 {
            for &k1 in &f1 {
                for &k2 in &f2 {
                    f(off, [k0, k1, k2]);
                    off += 1;
                }
            }
        }
    }

    /// `|k|` at every lattice point.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.for_each_mode(|i, k| out[i] = norm3(k));
        out
    }

    /// True when `m` lies strictly inside the lattice (not on a Nyquist plane).
    pub fn is_interior(&self, m: [i64; 3]) -> bool {
        (0..self.dim).all(|a| m[a].abs() < self.sizes[a] as i64 / 2)
    }

    /// Grid with every axis doubled, same lattice spacing.
    pub fn padded(&self) -> Grid {
        let mut s = self.sizes;
        for n in s.iter_mut().take(self.dim) {
            *n *= 2;
        }
        Grid { sizes: s, ..*self }
    }

    /// Physical coordinate of sample `i` along `axis`.
    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.period() * i as f64 / self.sizes[axis] as f64
    }

    pub(crate) fn raw_sizes(&self) -> [usize; 3] {
        self.sizes
    }
}

pub(crate) fn norm3(k: [f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

/// A lattice wavevector, stored as integer numerators over `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WaveVector {
    pub numerators: [i64; 3],
    pub denominator: u32,
}

impl WaveVector {
    pub fn new(numerators: [i64; 3], denominator: u32) -> Self {
        Self {
            numerators,
            denominator,
        }
    }

    pub fn components(&self) -> [f64; 3] {
        let d = self.denominator as f64;
        self.numerators.map(|m| m as f64 / d)
    }

    pub fn norm(&self) -> f64 {
        norm3(self.components())
    }

    pub fn on_lattice_of(&self, grid: &Grid) -> bool {
        self.denominator == grid.lattice_denominator() && grid.offset_of(self.numerators).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_lattice_on_unit_denominator() {
        let g = Grid::new(2, &[8, 8], 1).unwrap();
        let f = g.freqs();
        let mut ks = f[0].clone();
        ks.sort_by(f64::total_cmp);
        assert_eq!(ks, vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn fractional_spacing_and_thin_axis() {
        let g = Grid::new(3, &[16, 16, 4], 4).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.nyquist(2), 0.5);
        assert_eq!(g.nyquist(0), 2.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(Grid::new(3, &[7, 8, 8], 1), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(3, &[2, 8, 8], 1), Err(Error::InvalidGrid(_))));
        assert!(matches!(
            Grid::new(4, &[8, 8, 8, 8], 1),
            Err(Error::UnsupportedDimension(4))
        ));
        assert!(Grid::new(2, &[8, 8], 0).is_err());
    }

    #[test]
    fn offsets_round_trip() {
        let g = Grid::new(3, &[8, 6, 4], 2).unwrap();
        for off in 0..g.len() {
            assert_eq!(g.offset_of(g.multi_index(off)), Some(off));
        }
        assert_eq!(g.offset_of([4, 0, 0]), None);
        assert!(g.offset_of([-4, 0, 0]).is_some());
    }
}
