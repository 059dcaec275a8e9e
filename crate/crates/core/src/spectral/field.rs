use std::borrow::Cow;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Spectral,
    Physical,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldData {
    /// Coefficients `c_k` such that the field is `sum_k c_k e^{i k.x}`.
    Spectral(Vec<Vec<Complex64>>),
    Physical(Vec<Vec<f64>>),
}

/// A scalar (`ncomp == 1`) or vector field on a periodic [`Grid`].
///
/// Fields are immutable values; every operator returns a new field.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    data: FieldData,
}

impl Field {
    pub fn from_spectral(grid: Grid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        check_shape(&grid, comps.len(), comps.iter().map(Vec::len))?;
        Ok(Self {
            grid,
            data: FieldData::Spectral(comps),
        })
    }

    pub fn from_physical(grid: Grid, comps: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&grid, comps.len(), comps.iter().map(Vec::len))?;
        Ok(Self {
            grid,
            data: FieldData::Physical(comps),
        })
    }

    pub fn zeros(grid: Grid, ncomp: usize) -> Self {
        Self {
            grid,
            data: FieldData::Spectral(vec![vec![Complex64::default(); grid.len()]; ncomp]),
        }
    }

    /// Samples `f(x)` at every physical grid point.
    pub fn sample(grid: Grid, ncomp: usize, f: impl Fn([f64; 3]) -> Vec<f64>) -> Self {
        let mut comps = vec![vec![0.0; grid.len()]; ncomp];
        let s = grid.raw_sizes();
        let mut off = 0;
        for i0 in 0..s[0] {
            for i1 in 0..s[1] {
                for i2 in 0..s[2] {
                    let x = [
                        grid.coordinate(0, i0),
                        if grid.dim() > 1 { grid.coordinate(1, i1) } else { 0.0 },
                        if grid.dim() > 2 { grid.coordinate(2, i2) } else { 0.0 },
                    ];
                    let v = f(x);
                    for (c, comp) in comps.iter_mut().enumerate() {
                        comp[off] = v[c];
                    }
                    off += 1;
                }
            }
        }
        Self {
            grid,
            data: FieldData::Physical(comps),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        match &self.data {
            FieldData::Spectral(c) => c.len(),
            FieldData::Physical(c) => c.len(),
        }
    }

    pub fn representation(&self) -> Representation {
        match self.data {
            FieldData::Spectral(_) => Representation::Spectral,
            FieldData::Physical(_) => Representation::Physical,
        }
    }

    pub fn data(&self) -> &FieldData {
        &self.data
    }

    pub fn to_spectral(&self) -> Result<Field> {
        match &self.data {
            FieldData::Physical(comps) => Ok(Field {
                grid: self.grid,
                data: FieldData::Spectral(comps.iter().map(|c| forward_real(&self.grid, c)).collect()),
            }),
            FieldData::Spectral(_) => Err(Error::Representation {
                expected: Representation::Physical,
                found: Representation::Spectral,
            }),
        }
    }

    pub fn to_physical(&self) -> Result<Field> {
        match &self.data {
            FieldData::Spectral(comps) => Ok(Field {
                grid: self.grid,
                data: FieldData::Physical(
                    comps
                        .iter()
                        .map(|c| inverse_complex(&self.grid, c).into_iter().map(|z| z.re).collect())
                        .collect(),
                ),
            }),
            FieldData::Physical(_) => Err(Error::Representation {
                expected: Representation::Spectral,
                found: Representation::Physical,
            }),
        }
    }

    /// Spectral coefficients, transforming if necessary.
    pub fn spectral(&self) -> Cow<'_, [Vec<Complex64>]> {
        match &self.data {
            FieldData::Spectral(c) => Cow::Borrowed(c),
            FieldData::Physical(c) => Cow::Owned(c.iter().map(|c| forward_real(&self.grid, c)).collect()),
        }
    }

    /// Physical samples, transforming if necessary.
    pub fn physical(&self) -> Cow<'_, [Vec<f64>]> {
        match &self.data {
            FieldData::Physical(c) => Cow::Borrowed(c),
            FieldData::Spectral(c) => Cow::Owned(
                c.iter()
                    .map(|c| inverse_complex(&self.grid, c).into_iter().map(|z| z.re).collect())
                    .collect(),
            ),
        }
    }

    pub fn into_spectral(self) -> Field {
        match self.data {
            FieldData::Spectral(_) => self,
            FieldData::Physical(_) => self.to_spectral().expect("physical field"),
        }
    }

    pub fn component(&self, i: usize) -> Result<Field> {
        if i >= self.ncomp() {
            return Err(Error::Arity {
                expected: i + 1,
                found: self.ncomp(),
            });
        }
        let data = match &self.data {
            FieldData::Spectral(c) => FieldData::Spectral(vec![c[i].clone()]),
            FieldData::Physical(c) => FieldData::Physical(vec![c[i].clone()]),
        };
        Ok(Field { grid: self.grid, data })
    }

    /// Builds a spectral field by applying `f(offset, k, coeffs, out)` per mode.
    pub(crate) fn map_modes(
        &self,
        ncomp_out: usize,
        mut f: impl FnMut([f64; 3], &[Complex64], &mut [Complex64]),
    ) -> Field {
        let src = self.spectral();
        let n = self.ncomp();
        let mut out = vec![vec![Complex64::default(); self.grid.len()]; ncomp_out];
        let mut inbuf = vec![Complex64::default(); n];
        let mut outbuf = vec![Complex64::default(); ncomp_out];
        self.grid.for_each_mode(|off, k| {
            for c in 0..n {
                inbuf[c] = src[c][off];
            }
            f(k, &inbuf, &mut outbuf);
            for c in 0..ncomp_out {
                out[c][off] = outbuf[c];
            }
        });
        Field {
            grid: self.grid,
            data: FieldData::Spectral(out),
        }
    }

    /// Multiplies every component by a real per-mode multiplier.
    pub fn apply_multiplier(&self, m: &[f64]) -> Field {
        let src = self.spectral();
        let comps = src
            .iter()
            .map(|c| c.iter().zip(m).map(|(z, &w)| z * w).collect())
            .collect();
        Field {
            grid: self.grid,
            data: FieldData::Spectral(comps),
        }
    }

    pub fn scale(&self, a: f64) -> Field {
        match &self.data {
            FieldData::Spectral(c) => Field {
                grid: self.grid,
                data: FieldData::Spectral(c.iter().map(|v| v.iter().map(|z| z * a).collect()).collect()),
            },
            FieldData::Physical(c) => Field {
                grid: self.grid,
                data: FieldData::Physical(c.iter().map(|v| v.iter().map(|z| z * a).collect()).collect()),
            },
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Field, sign: f64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.ncomp() != other.ncomp() {
            return Err(Error::Arity {
                expected: self.ncomp(),
                found: other.ncomp(),
            });
        }
        let a = self.spectral();
        let b = other.spectral();
        let comps = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q * sign).collect())
            .collect();
        Ok(Field {
            grid: self.grid,
            data: FieldData::Spectral(comps),
        })
    }

    /// Largest coefficient modulus (spectral) or sample magnitude (physical).
    pub fn max_abs(&self) -> f64 {
        match &self.data {
            FieldData::Spectral(c) => c.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max),
            FieldData::Physical(c) => c.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max),
        }
    }

    /// Largest deviation from Hermitian symmetry relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let src = self.spectral();
        let mut worst = 0.0f64;
        for c in src.iter() {
            for off in 0..self.grid.len() {
                let m = self.grid.multi_index(off);
                if !self.grid.is_interior(m) {
                    continue;
                }
                let neg = self.grid.offset_of([-m[0], -m[1], -m[2]]).unwrap();
                worst = worst.max((c[off] - c[neg].conj()).norm());
            }
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    pub(crate) fn spectral_owned(&self) -> Vec<Vec<Complex64>> {
        self.spectral().into_owned()
    }
}

fn check_shape(grid: &Grid, ncomp: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    if ncomp == 0 {
        return Err(Error::Arity { expected: 1, found: 0 });
    }
    for len in lens {
        if len != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "component has {len} samples, grid has {}",
                grid.len()
            )));
        }
    }
    Ok(())
}

pub(crate) fn forward_real(grid: &Grid, samples: &[f64]) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft::forward(&mut z, grid.raw_sizes());
    let inv = 1.0 / grid.len() as f64;
    z.iter_mut().for_each(|c| *c *= inv);
    z
}

pub(crate) fn inverse_complex(grid: &Grid, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut z = coeffs.to_vec();
    fft::inverse(&mut z, grid.raw_sizes());
    z
}
