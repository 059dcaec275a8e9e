//! `L^p` norms, dyadic coefficient sequences and inhomogeneous Besov norms.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::littlewood_paley::{lambda, FilterBank};
use crate::spectral::products::padded_visit;
use crate::spectral::{pairwise_sum_by, Field, Grid};

fn check_exponent(name: &str, p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Parameter(format!("{name} = {p} must be >= 1")));
    }
    Ok(())
}

/// `|f(x)|^2` (Euclidean over components) on the 2x oversampled grid.
fn oversampled_magnitude_sq(grid: &Grid, comps: &[&[Complex64]]) -> Vec<f64> {
    let mut acc = vec![0.0; grid.padded().len()];
    padded_visit(grid, comps, |_, z| {
        for (a, c) in acc.iter_mut().zip(z) {
            *a += c.re * c.re + c.im * c.im;
        }
    });
    acc
}

pub(crate) fn lp_norm_of_spectra(grid: &Grid, comps: &[&[Complex64]], p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    let m2 = oversampled_magnitude_sq(grid, comps);
    if p.is_infinite() {
        return Ok(m2.iter().copied().fold(0.0, f64::max).sqrt());
    }
    let cell = grid.volume() / m2.len() as f64;
    let half = 0.5 * p;
    let s = if p == 2.0 {
        pairwise_sum_by(m2.len(), &mut |i| m2[i])
    } else {
        pairwise_sum_by(m2.len(), &mut |i| m2[i].powf(half))
    };
    Ok((s * cell).powf(1.0 / p))
}

/// `||f||_p` with `|f|` the pointwise Euclidean magnitude, by quadrature on
/// the 2x oversampled grid. `p = inf` returns the largest oversampled sample.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    let spec = f.spectral();
    let comps: Vec<&[Complex64]> = spec.iter().map(Vec::as_slice).collect();
    lp_norm_of_spectra(f.grid(), &comps, p)
}

/// The sequence `lambda_q^s ||Delta_q u||_p` for `q = -1..=q_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicCoefficients {
    pub s: f64,
    pub p: f64,
    values: Vec<f64>,
}

impl DyadicCoefficients {
    pub fn from_values(s: f64, p: f64, values: Vec<f64>) -> Self {
        Self { s, p, values }
    }

    pub fn q_min(&self) -> i32 {
        -1
    }

    pub fn q_max(&self) -> i32 {
        self.values.len() as i32 - 2
    }

    /// Value at dyadic index `q`, zero outside the stored range.
    pub fn get(&self, q: i32) -> f64 {
        if q < -1 {
            return 0.0;
        }
        self.values.get((q + 1) as usize).copied().unwrap_or(0.0)
    }

    /// Values indexed from `q = -1`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn squared(&self) -> Vec<f64> {
        self.values.iter().map(|v| v * v).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (i as i32 - 1, v))
    }
}

/// Besov exponents `(s, p, r)`; `r` may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("r", r)?;
        Ok(Self { s, p, r })
    }
}

/// `lambda_q^s ||Delta_q u||_p` for every block, the `q = -1` weight being `2^{-s}`.
pub fn dyadic_coefficients(u: &Field, s: f64, p: f64, bank: &FilterBank) -> Result<DyadicCoefficients> {
    check_exponent("p", p)?;
    bank.check_grid(u)?;
    let spec = u.spectral();
    let mut values = Vec::with_capacity(bank.q_max() as usize + 2);
    let mut block: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); bank.grid().len()]; u.ncomp()];
    for q in -1..=bank.q_max() {
        let m = bank.block_multiplier(q)?;
        let mut empty = true;
        for (dst, src) in block.iter_mut().zip(spec.iter()) {
            for ((d, s), &w) in dst.iter_mut().zip(src).zip(&m) {
                *d = s * w;
                empty &= *d == Complex64::default();
            }
        }
        let norm = if empty {
            0.0
        } else {
            let comps: Vec<&[Complex64]> = block.iter().map(Vec::as_slice).collect();
            lp_norm_of_spectra(bank.grid(), &comps, p)?
        };
        values.push(lambda(q).powf(s) * norm);
    }
    Ok(DyadicCoefficients { s, p, values })
}

fn lr_norm(values: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        values.iter().copied().fold(0.0, f64::max)
    } else {
        values.iter().map(|v| v.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `||Delta_{-1} u||_p + || (lambda_q^s ||Delta_q u||_p)_{q >= 0} ||_{l^r}`, truncated at `q_max`.
pub fn besov_norm(u: &Field, params: BesovParams, bank: &FilterBank) -> Result<f64> {
    check_exponent("p", params.p)?;
    check_exponent("r", params.r)?;
    let d = dyadic_coefficients(u, params.s, params.p, bank)?;
    let low = d.get(-1) / lambda(-1).powf(params.s);
    Ok(low + lr_norm(&d.values()[1..], params.r))
}

/// `sup_{Q < q <= q_max} lambda_q^s ||Delta_q u||_p`; zero when the range is empty.
pub fn tail_sup(u: &Field, s: f64, p: f64, q: i32, bank: &FilterBank) -> Result<f64> {
    check_index("Q", q, -1, bank.q_max())?;
    let d = dyadic_coefficients(u, s, p, bank)?;
    Ok(tail_sup_of(&d, q))
}

/// Tail supremum of an already computed sequence.
pub fn tail_sup_of(d: &DyadicCoefficients, q: i32) -> f64 {
    d.iter().filter(|&(k, _)| k > q).map(|(_, v)| v).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::{make_chi_profile, make_filter_bank};
    use std::f64::consts::PI;

    fn g3(n: usize) -> Grid {
        Grid::new(3, &[n, n, n], 1).unwrap()
    }

    #[test]
    fn constant_norms() {
        let g = g3(8);
        let c = Field::sample(g, 1, |_| vec![-3.0]);
        for p in [1.0, 2.0, 3.0, 4.5] {
            let expect = 3.0 * (2.0 * PI).powf(3.0 / p);
            assert!((lp_norm(&c, p).unwrap() - expect).abs() < 1e-12 * expect);
        }
        assert!((lp_norm(&c, f64::INFINITY).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(lp_norm(&Field::zeros(g, 3), 3.0).unwrap(), 0.0);
        assert!(matches!(lp_norm(&c, 0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn sine_cubed_integral() {
        let g = g3(32);
        let f = Field::sample(g, 1, |x| vec![x[0].sin()]);
        let expect = (8.0 / 3.0 * (2.0 * PI).powi(2)).powf(1.0 / 3.0);
        assert!((lp_norm(&f, 3.0).unwrap() - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn vector_magnitude_is_euclidean() {
        let g = g3(16);
        // |u| = 1 everywhere
        let u = Field::sample(g, 3, |x| vec![x[0].cos(), x[0].sin(), 0.0]);
        let expect = (2.0 * PI).powf(3.0 / 3.0);
        assert!((lp_norm(&u, 3.0).unwrap() - expect).abs() < 1e-10 * expect);
        assert!((lp_norm(&u, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_mode_coefficients() {
        let g = g3(32);
        let bank = make_filter_bank(g, make_chi_profile()).unwrap();
        let u = Field::sample(g, 3, |x| vec![0.0, 0.0, 0.7 * (4.0 * x[0]).cos()]);
        let d = dyadic_coefficients(&u, 1.0 / 3.0, 3.0, &bank).unwrap();
        let full = lp_norm(&u, 3.0).unwrap();
        for (q, v) in d.iter() {
            if q == 2 {
                assert!((v - 4f64.powf(1.0 / 3.0) * full).abs() < 1e-12 * v);
            } else {
                assert!(v < 1e-12 * full);
            }
        }
        for r in [1.0, 2.0, f64::INFINITY] {
            let b = besov_norm(&u, BesovParams::new(1.0 / 3.0, 3.0, r).unwrap(), &bank).unwrap();
            assert!((b - d.get(2)).abs() < 1e-12 * b);
        }
        assert!(tail_sup(&u, 1.0 / 3.0, 3.0, 2, &bank).unwrap() < 1e-12 * full);
        assert_eq!(tail_sup(&u, 1.0 / 3.0, 3.0, 1, &bank).unwrap(), d.get(2));
    }

    #[test]
    fn low_block_weight_is_two_to_minus_s() {
        let g = g3(8);
        let bank = make_filter_bank(g, make_chi_profile()).unwrap();
        let u = Field::sample(g, 3, |_| vec![1.0, 0.0, 0.0]);
        let d = dyadic_coefficients(&u, 1.0, 2.0, &bank).unwrap();
        let n = lp_norm(&u, 2.0).unwrap();
        assert!((d.get(-1) - 0.5 * n).abs() < 1e-12 * n);
        let b = besov_norm(&u, BesovParams::new(1.0, 2.0, 2.0).unwrap(), &bank).unwrap();
        assert!((b - n).abs() < 1e-12 * n);
    }

    #[test]
    fn r_monotonicity() {
        let g = g3(16);
        let bank = make_filter_bank(g, make_chi_profile()).unwrap();
        let u = Field::sample(g, 3, |x| {
            vec![(x[1] + 2.0 * x[2]).sin(), (5.0 * x[0]).cos(), (3.0 * x[0] - x[1]).sin()]
        });
        let n = |r| besov_norm(&u, BesovParams::new(0.5, 3.0, r).unwrap(), &bank).unwrap();
        assert!(n(f64::INFINITY) <= n(2.0));
        assert!(n(2.0) <= n(1.0));
        assert!(BesovParams::new(0.0, 2.0, 0.5).is_err());
    }
}
