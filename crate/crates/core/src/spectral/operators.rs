use rustfft::num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use super::sum::pairwise_sum_by;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative divergence residual accepted for a divergence-free field.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-12;

fn require(f: &Field, ncomp: usize) -> Result<()> {
    if f.ncomp() != ncomp {
        return Err(Error::Arity {
            expected: ncomp,
            found: f.ncomp(),
        });
    }
    Ok(())
}

fn require_vector(u: &Field) -> Result<()> {
    require(u, u.grid().dim())
}

fn same_grid(a: &Field, b: &Field) -> Result<()> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

pub fn gradient(f: &Field) -> Result<Field> {
    require(f, 1)?;
    let d = f.grid().dim();
    Ok(f.map_modes(d, |k, c, out| {
        for a in 0..d {
            out[a] = I * k[a] * c[0];
        }
    }))
}

pub fn divergence(u: &Field) -> Result<Field> {
    require_vector(u)?;
    let d = u.grid().dim();
    Ok(u.map_modes(1, |k, c, out| {
        out[0] = (0..d).map(|a| I * k[a] * c[a]).sum();
    }))
}

/// Vorticity: a vector field in 3D, the scalar `d1 u2 - d2 u1` in 2D.
pub fn curl(u: &Field) -> Result<Field> {
    require_vector(u)?;
    if u.grid().dim() == 2 {
        return Ok(u.map_modes(1, |k, c, out| {
            out[0] = I * (k[0] * c[1] - k[1] * c[0]);
        }));
    }
    Ok(u.map_modes(3, |k, c, out| {
        out[0] = I * (k[1] * c[2] - k[2] * c[1]);
        out[1] = I * (k[2] * c[0] - k[0] * c[2]);
        out[2] = I * (k[0] * c[1] - k[1] * c[0]);
    }))
}

/// `(-d2 f, d1 f)`, the 2D skew gradient whose divergence-form dual is [`curl`].
pub fn perp_gradient(f: &Field) -> Result<Field> {
    require(f, 1)?;
    if f.grid().dim() != 2 {
        return Err(Error::Dimension("perp_gradient is defined on 2D grids".into()));
    }
    Ok(f.map_modes(2, |k, c, out| {
        out[0] = -I * k[1] * c[0];
        out[1] = I * k[0] * c[0];
    }))
}

/// Projects a single coefficient vector onto the plane orthogonal to `k`.
#[inline]
pub fn project_mode(k: [f64; 3], v: &mut [Complex64]) {
    let k2: f64 = k.iter().map(|x| x * x).sum();
    if k2 == 0.0 {
        return;
    }
    let dot: Complex64 = v.iter().zip(&k).map(|(c, &kk)| c * kk).sum();
    let s = dot / k2;
    for (c, &kk) in v.iter_mut().zip(&k) {
        *c -= s * kk;
    }
}

/// Leray projection onto divergence-free fields; the mean mode passes through.
pub fn leray_project(u: &Field) -> Result<Field> {
    require_vector(u)?;
    let d = u.grid().dim();
    Ok(u.map_modes(d, |k, c, out| {
        out.copy_from_slice(c);
        project_mode(k, out);
    }))
}

/// `max |k.u(k)| / max |k||u(k)|`, zero for a zero field.
pub fn divergence_residual(u: &Field) -> Result<f64> {
    require_vector(u)?;
    let d = u.grid().dim();
    let src = u.spectral();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    u.grid().for_each_mode(|off, k| {
        let mut dot = Complex64::default();
        let mut mag2 = 0.0;
        for a in 0..d {
            dot += src[a][off] * k[a];
            mag2 += src[a][off].norm_sqr();
        }
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        num = num.max(dot.norm());
        den = den.max(kn * mag2.sqrt());
    });
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

pub fn is_divergence_free(u: &Field) -> bool {
    divergence_residual(u)
        .map(|r| r <= DIVERGENCE_TOLERANCE)
        .unwrap_or(false)
}

pub(crate) fn require_divergence_free(u: &Field) -> Result<()> {
    let r = divergence_residual(u)?;
    if r > DIVERGENCE_TOLERANCE {
        return Err(Error::NotDivergenceFree(r));
    }
    Ok(())
}

/// Riemann sum of a scalar field over the physical samples.
pub fn integrate(f: &Field) -> Result<f64> {
    require(f, 1)?;
    let p = f.physical();
    let v = &p[0];
    Ok(pairwise_sum_by(v.len(), &mut |i| v[i]) * f.grid().cell_volume())
}

/// `(f, g) = int f.g dx`, summed over components.
pub fn inner_product(f: &Field, g: &Field) -> Result<f64> {
    same_grid(f, g)?;
    require(g, f.ncomp())?;
    let a = f.physical();
    let b = g.physical();
    let n = f.grid().len();
    let nc = f.ncomp();
    let s = pairwise_sum_by(n, &mut |i| (0..nc).map(|c| a[c][i] * b[c][i]).sum());
    Ok(s * f.grid().cell_volume())
}

pub fn total_energy(u: &Field) -> Result<f64> {
    require_vector(u)?;
    Ok(0.5 * inner_product(u, u)?)
}

pub fn total_helicity(u: &Field) -> Result<f64> {
    if u.grid().dim() != 3 {
        return Err(Error::Dimension("helicity requires a 3D grid".into()));
    }
    require_vector(u)?;
    inner_product(u, &curl(u)?)
}

/// Parseval pairing `V sum_k Re(a_k conj(b_k))` of two real fields' spectra.
pub(crate) fn spectral_pairing(grid: &Grid, a: &[Complex64], b: &[Complex64], weight: impl Fn(usize) -> f64) -> f64 {
    pairwise_sum_by(a.len(), &mut |i| weight(i) * (a[i] * b[i].conj()).re) * grid.volume()
}
