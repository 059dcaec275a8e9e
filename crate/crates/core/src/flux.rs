//! Energy, shell, helicity and enstrophy fluxes through dyadic spheres, the
//! locality kernels and the convolution bounds built from them.
//!
//! Every flux has the form `V sum_k m(k)^2 D(k)` where `m` is the real
//! low-pass (or band) multiplier and `D` a per-mode transfer density that
//! depends only on the field. The density is computed once from alias-free
//! products; fluxes for many `Q` are then cheap weighted sums.

use std::ops::RangeInclusive;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::besov::{dyadic_coefficients, lp_norm, DyadicCoefficients};
use crate::error::{check_index, Error, Result};
use crate::littlewood_paley::{dyadic_block, lambda, low_pass, FilterBank};
use crate::spectral::products::{padded_physical, padded_spectral_visit};
use crate::spectral::{curl, pairwise_sum_by, perp_gradient, require_divergence_free, Field, Grid};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    K,
    T,
    W,
}

/// Exponentially decaying weight on dyadic offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityKernel {
    pub kind: KernelKind,
}

impl LocalityKernel {
    pub fn new(kind: KernelKind) -> Self {
        Self { kind }
    }

    /// `lambda_n^{a}` for `n <= 0`, `lambda_n^{-b}` for `n > 0`; `(a, b) = (2/3, 4/3)`
    /// for `K` and `T`, `(2, 4)` for `W`.
    pub fn eval(&self, n: i32) -> f64 {
        let (lo, hi) = match self.kind {
            KernelKind::K | KernelKind::T => (2.0 / 3.0, -4.0 / 3.0),
            KernelKind::W => (2.0, -4.0),
        };
        let e = if n <= 0 { lo } else { hi };
        2f64.powf(n as f64 * e)
    }
}

/// `sum_q kernel(Q - q) seq_q^2` over the stored range of `seq`.
pub fn kernel_convolution(kernel: LocalityKernel, seq: &DyadicCoefficients, q: i32) -> f64 {
    seq.iter().map(|(p, v)| kernel.eval(q - p) * v * v).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxKind {
    Energy,
    Helicity,
    Enstrophy,
    /// Shell flux with fixed lower edge `q0`; series run over the upper edge.
    Shell {
        q0: i32,
    },
}

/// Per-mode transfer density `D(k)` of one field and one flux kind.
#[derive(Clone, Debug)]
pub struct TransferDensity {
    grid: Grid,
    values: Vec<f64>,
}

impl TransferDensity {
    /// Energy: `D = Re sum_ij P_ij conj(i k_i u_j)` with `P_ij` the spectrum of `u_i u_j`.
    pub fn energy(u: &Field) -> Result<Self> {
        require_vector(u)?;
        require_divergence_free(u)?;
        let grid = *u.grid();
        let spec = u.spectral();
        let comps: Vec<&[Complex64]> = spec.iter().map(Vec::as_slice).collect();
        let phys = padded_physical(&grid, &comps);
        let pairs = symmetric_pairs(grid.dim());
        let mut values = vec![0.0; grid.len()];
        padded_spectral_visit(
            &grid,
            pairs.len(),
            |t, buf| fill_product(buf, &phys[pairs[t].0], &phys[pairs[t].1]),
            |t, p| {
                let (i, j) = pairs[t];
                accumulate(&grid, &mut values, p, i, &spec[j], 1.0);
                if i != j {
                    accumulate(&grid, &mut values, p, j, &spec[i], 1.0);
                }
            },
        );
        Ok(Self { grid, values })
    }

    /// Helicity: `Re sum_ij [P_ij conj(i k_i w_j) + G_ij conj(i k_i u_j)]` with
    /// `G_ij` the spectrum of `u_i w_j - w_i u_j` and `w = curl u`.
    pub fn helicity(u: &Field) -> Result<Self> {
        if u.grid().dim() != 3 {
            return Err(Error::Dimension("helicity flux requires a 3D grid".into()));
        }
        require_vector(u)?;
        require_divergence_free(u)?;
        let grid = *u.grid();
        let spec = u.spectral();
        let w = curl(u)?;
        let wspec = w.spectral();
        let comps: Vec<&[Complex64]> = spec.iter().chain(wspec.iter()).map(Vec::as_slice).collect();
        let phys = padded_physical(&grid, &comps);
        let (up, wp) = phys.split_at(3);
        let sym = symmetric_pairs(3);
        let skew = [(0, 1), (0, 2), (1, 2)];
        let mut values = vec![0.0; grid.len()];
        padded_spectral_visit(
            &grid,
            sym.len() + skew.len(),
            |t, buf| {
                if t < sym.len() {
                    fill_product(buf, &up[sym[t].0], &up[sym[t].1]);
                } else {
                    let (i, j) = skew[t - sym.len()];
                    for (n, b) in buf.iter_mut().enumerate() {
                        *b = up[i][n] * wp[j][n] - wp[i][n] * up[j][n];
                    }
                }
            },
            |t, p| {
                if t < sym.len() {
                    let (i, j) = sym[t];
                    accumulate(&grid, &mut values, p, i, &wspec[j], 1.0);
                    if i != j {
                        accumulate(&grid, &mut values, p, j, &wspec[i], 1.0);
                    }
                } else {
                    let (i, j) = skew[t - sym.len()];
                    accumulate(&grid, &mut values, p, i, &spec[j], 1.0);
                    accumulate(&grid, &mut values, p, j, &spec[i], -1.0);
                }
            },
        );
        Ok(Self { grid, values })
    }

    /// Enstrophy (2D): `Re sum_ij P_ij conj(i k_i g_j)` with `g = perp_gradient(curl u)`.
    pub fn enstrophy(u: &Field) -> Result<Self> {
        if u.grid().dim() != 2 {
            return Err(Error::Dimension("enstrophy flux requires a 2D grid".into()));
        }
        require_vector(u)?;
        require_divergence_free(u)?;
        let grid = *u.grid();
        let spec = u.spectral();
        let g = perp_gradient(&curl(u)?)?;
        let gspec = g.spectral();
        let comps: Vec<&[Complex64]> = spec.iter().map(Vec::as_slice).collect();
        let phys = padded_physical(&grid, &comps);
        let pairs = symmetric_pairs(2);
        let mut values = vec![0.0; grid.len()];
        padded_spectral_visit(
            &grid,
            pairs.len(),
            |t, buf| fill_product(buf, &phys[pairs[t].0], &phys[pairs[t].1]),
            |t, p| {
                let (i, j) = pairs[t];
                accumulate(&grid, &mut values, p, i, &gspec[j], 1.0);
                if i != j {
                    accumulate(&grid, &mut values, p, j, &gspec[i], 1.0);
                }
            },
        );
        Ok(Self { grid, values })
    }

    pub fn for_kind(u: &Field, kind: FluxKind) -> Result<Self> {
        match kind {
            FluxKind::Energy | FluxKind::Shell { .. } => Self::energy(u),
            FluxKind::Helicity => Self::helicity(u),
            FluxKind::Enstrophy => Self::enstrophy(u),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `V sum_k m(k)^2 D(k)`.
    pub fn weighted(&self, m: &[f64]) -> f64 {
        let d = &self.values;
        pairwise_sum_by(d.len(), &mut |i| m[i] * m[i] * d[i]) * self.grid.volume()
    }

    /// `V sum_k m(k)^2 |D(k)|`, the natural scale for round-off in [`Self::weighted`].
    pub fn abs_weighted(&self, m: &[f64]) -> f64 {
        let d = &self.values;
        pairwise_sum_by(d.len(), &mut |i| m[i] * m[i] * d[i].abs()) * self.grid.volume()
    }
}

fn require_vector(u: &Field) -> Result<()> {
    if u.ncomp() != u.grid().dim() {
        return Err(Error::Arity {
            expected: u.grid().dim(),
            found: u.ncomp(),
        });
    }
    Ok(())
}

fn symmetric_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect()
}

fn fill_product(buf: &mut [f64], a: &[f64], b: &[f64]) {
    for ((o, x), y) in buf.iter_mut().zip(a).zip(b) {
        *o = x * y;
    }
}

/// `dens += sign * Re(p conj(i k_axis x))` at every mode.
fn accumulate(grid: &Grid, dens: &mut [f64], p: &[Complex64], axis: usize, x: &[Complex64], sign: f64) {
    grid.for_each_mode(|off, k| {
        let g = I * k[axis] * x[off];
        dens[off] += sign * (p[off] * g.conj()).re;
    });
}

fn check_flux_index(q: i32, bank: &FilterBank) -> Result<()> {
    check_index("Q", q, 0, bank.q_max() - 1)
}

fn shell_multiplier(q0: i32, q1: i32, bank: &FilterBank) -> Result<Vec<f64>> {
    check_index("Q1", q1, 0, bank.q_max() - 1)?;
    check_index("Q0", q0, 0, q1)?;
    if q0 == 0 {
        bank.low_pass_multiplier(q1)
    } else {
        bank.band_multiplier(q0, q1)
    }
}

/// `Pi_Q = int Tr[S_Q(u (x) u) . grad S_Q u] dx`.
pub fn energy_flux(u: &Field, q: i32, bank: &FilterBank) -> Result<f64> {
    bank.check_grid(u)?;
    check_flux_index(q, bank)?;
    Ok(TransferDensity::energy(u)?.weighted(&bank.low_pass_multiplier(q)?))
}

/// Energy flux with the band `S_{Q1} - S_{Q0-1}` in place of `S_Q`; `Q0 = 0` uses `S_{Q1}`.
pub fn shell_flux(u: &Field, q0: i32, q1: i32, bank: &FilterBank) -> Result<f64> {
    bank.check_grid(u)?;
    let m = shell_multiplier(q0, q1, bank)?;
    Ok(TransferDensity::energy(u)?.weighted(&m))
}

/// The three terms of the shell decomposition for one density:
/// `(band flux, Pi_{Q1}, Pi_{Q0-1}, bar term)`.
fn shell_terms(d: &TransferDensity, q0: i32, q1: i32, bank: &FilterBank) -> Result<[f64; 4]> {
    Ok([
        d.weighted(&bank.band_multiplier(q0, q1)?),
        d.weighted(&bank.low_pass_multiplier(q1)?),
        d.weighted(&bank.low_pass_multiplier(q0 - 1)?),
        d.weighted(&bank.bar_multiplier(q0)?),
    ])
}

/// `|Pi_{Q0 Q1} - (Pi_{Q1} - Pi_{Q0-1} - 2 int Tr[bar(u (x) u) . grad bar u])|`.
pub fn shell_identity_residual(u: &Field, q0: i32, q1: i32, bank: &FilterBank) -> Result<f64> {
    bank.check_grid(u)?;
    check_index("Q1", q1, 1, bank.q_max() - 1)?;
    check_index("Q0", q0, 1, q1)?;
    let d = TransferDensity::energy(u)?;
    let [band, hi, lo, bar] = shell_terms(&d, q0, q1, bank)?;
    Ok((band - (hi - lo - 2.0 * bar)).abs())
}

/// `lambda_{Q+2} ||Delta_{Q+2} u||_3 sum_{0 <= q <= Q} lambda_q^2 ||Delta_q u||_3^2` with norms
/// taken against the normalized measure `dx / V`, the scale of the infrared-nonlocal
/// enstrophy flux through `lambda_Q`.
pub fn enstrophy_nonlocality_bound(u: &Field, q: i32, bank: &FilterBank) -> Result<f64> {
    bank.check_grid(u)?;
    check_index("Q", q, 0, bank.q_max() - 2)?;
    let v = u.grid().volume().cbrt();
    let block = |p: i32| -> Result<f64> { Ok(lp_norm(&dyadic_block(u, p, bank)?, 3.0)? / v) };
    let mut low = 0.0;
    for p in 0..=q {
        low += (lambda(p) * block(p)?).powi(2);
    }
    Ok(lambda(q + 2) * block(q + 2)? * low)
}

/// Shell identity residual together with the scale `|Pi_{Q1}| + |Pi_{Q0-1}| + 1`, for a
/// density that is already available.
pub fn shell_identity_terms(d: &TransferDensity, q0: i32, q1: i32, bank: &FilterBank) -> Result<(f64, f64)> {
    check_index("Q1", q1, 1, bank.q_max() - 1)?;
    check_index("Q0", q0, 1, q1)?;
    let [band, hi, lo, bar] = shell_terms(d, q0, q1, bank)?;
    Ok(((band - (hi - lo - 2.0 * bar)).abs(), hi.abs() + lo.abs() + 1.0))
}

/// `int Tr[S_Q(u (x) u) . grad S_Q w + S_Q(u ^ w) . grad S_Q u] dx`, `w = curl u`.
pub fn helicity_flux(u: &Field, q: i32, bank: &FilterBank) -> Result<f64> {
    bank.check_grid(u)?;
    check_flux_index(q, bank)?;
    Ok(TransferDensity::helicity(u)?.weighted(&bank.low_pass_multiplier(q)?))
}

/// `int Tr[S_Q(u (x) u) . grad perp_grad S_Q w] dx` for a 2D field.
pub fn enstrophy_flux(u: &Field, q: i32, bank: &FilterBank) -> Result<f64> {
    bank.check_grid(u)?;
    check_flux_index(q, bank)?;
    Ok(TransferDensity::enstrophy(u)?.weighted(&bank.low_pass_multiplier(q)?))
}

/// `(K * d^2)^{3/2}(Q)` with `d_q = lambda_q^{1/3} ||Delta_q u||_3`.
pub fn energy_bound(u: &Field, q: i32, bank: &FilterBank) -> Result<f64> {
    require_vector(u)?;
    check_index("Q", q, -1, bank.q_max())?;
    let d = dyadic_coefficients(u, 1.0 / 3.0, 3.0, bank)?;
    Ok(energy_bound_from(&d, q))
}

pub fn energy_bound_from(d: &DyadicCoefficients, q: i32) -> f64 {
    kernel_convolution(LocalityKernel::new(KernelKind::K), d, q).powf(1.5)
}

/// `(T * b^2)^{3/2}(Q)` with `b_q = lambda_q^{2/3} ||Delta_q u||_3`.
pub fn helicity_bound(u: &Field, q: i32, bank: &FilterBank) -> Result<f64> {
    if u.grid().dim() != 3 {
        return Err(Error::Dimension("helicity bound requires a 3D grid".into()));
    }
    require_vector(u)?;
    check_index("Q", q, -1, bank.q_max())?;
    let b = dyadic_coefficients(u, 2.0 / 3.0, 3.0, bank)?;
    Ok(helicity_bound_from(&b, q))
}

pub fn helicity_bound_from(b: &DyadicCoefficients, q: i32) -> f64 {
    kernel_convolution(LocalityKernel::new(KernelKind::T), b, q).powf(1.5)
}

/// `||S_Q w||_3^2 (W * c^2)^{1/2}(Q) + (W * c^2)^{3/2}(Q)` with `c_q = ||Delta_q w||_3`.
pub fn enstrophy_bound(u: &Field, q: i32, bank: &FilterBank) -> Result<f64> {
    if u.grid().dim() != 2 {
        return Err(Error::Dimension("enstrophy bound requires a 2D grid".into()));
    }
    require_vector(u)?;
    check_index("Q", q, -1, bank.q_max())?;
    let w = curl(u)?;
    let c = dyadic_coefficients(&w, 0.0, 3.0, bank)?;
    let s = lp_norm(&low_pass(&w, q, bank)?, 3.0)?;
    Ok(enstrophy_bound_from(&c, s, q))
}

/// Enstrophy bound from `c` and `||S_Q w||_3`.
pub fn enstrophy_bound_from(c: &DyadicCoefficients, low_norm: f64, q: i32) -> f64 {
    let conv = kernel_convolution(LocalityKernel::new(KernelKind::W), c, q);
    low_norm * low_norm * conv.sqrt() + conv.powf(1.5)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxSeries {
    pub kind: FluxKind,
    pub qs: Vec<i32>,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSeries {
    pub kind: FluxKind,
    pub qs: Vec<i32>,
    pub values: Vec<f64>,
}

impl FluxSeries {
    /// Values divided by `volume`.
    pub fn normalized(&self, volume: f64) -> FluxSeries {
        FluxSeries {
            kind: self.kind,
            qs: self.qs.clone(),
            values: self.values.iter().map(|v| v / volume).collect(),
        }
    }
}

impl BoundSeries {
    pub fn normalized(&self, volume: f64) -> BoundSeries {
        BoundSeries {
            kind: self.kind,
            qs: self.qs.clone(),
            values: self.values.iter().map(|v| v / volume).collect(),
        }
    }
}

/// Flux for every `Q` in `qs` (the upper edge `Q1` for shell fluxes).
pub fn flux_series(u: &Field, kind: FluxKind, qs: RangeInclusive<i32>, bank: &FilterBank) -> Result<FluxSeries> {
    bank.check_grid(u)?;
    let mults = qs
        .clone()
        .map(|q| match kind {
            FluxKind::Shell { q0 } => shell_multiplier(q0, q, bank),
            _ => check_flux_index(q, bank).and_then(|_| bank.low_pass_multiplier(q)),
        })
        .collect::<Result<Vec<_>>>()?;
    let d = TransferDensity::for_kind(u, kind)?;
    Ok(FluxSeries {
        kind,
        qs: qs.collect(),
        values: mults.iter().map(|m| d.weighted(m)).collect(),
    })
}

/// Locality bound for every `Q` in `qs`; shell fluxes use the endpoint sum
/// `(K * d^2)^{3/2}(Q0) + (K * d^2)^{3/2}(Q1)`.
pub fn bound_series(u: &Field, kind: FluxKind, qs: RangeInclusive<i32>, bank: &FilterBank) -> Result<BoundSeries> {
    bank.check_grid(u)?;
    for q in qs.clone() {
        check_index("Q", q, -1, bank.q_max())?;
    }
    let values = match kind {
        FluxKind::Energy => {
            require_vector(u)?;
            let d = dyadic_coefficients(u, 1.0 / 3.0, 3.0, bank)?;
            qs.clone().map(|q| energy_bound_from(&d, q)).collect()
        }
        FluxKind::Shell { q0 } => {
            require_vector(u)?;
            let d = dyadic_coefficients(u, 1.0 / 3.0, 3.0, bank)?;
            let lo = energy_bound_from(&d, q0);
            qs.clone().map(|q| lo + energy_bound_from(&d, q)).collect()
        }
        FluxKind::Helicity => {
            if u.grid().dim() != 3 {
                return Err(Error::Dimension("helicity bound requires a 3D grid".into()));
            }
            require_vector(u)?;
            let b = dyadic_coefficients(u, 2.0 / 3.0, 3.0, bank)?;
            qs.clone().map(|q| helicity_bound_from(&b, q)).collect()
        }
        FluxKind::Enstrophy => {
            if u.grid().dim() != 2 {
                return Err(Error::Dimension("enstrophy bound requires a 2D grid".into()));
            }
            require_vector(u)?;
            let w = curl(u)?;
            let c = dyadic_coefficients(&w, 0.0, 3.0, bank)?;
            qs.clone()
                .map(|q| Ok(enstrophy_bound_from(&c, lp_norm(&low_pass(&w, q, bank)?, 3.0)?, q)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(BoundSeries {
        kind,
        qs: qs.collect(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::{make_chi_profile, make_filter_bank};
    use crate::spectral::leray_project;

    fn bank_for(g: Grid) -> FilterBank {
        make_filter_bank(g, make_chi_profile()).unwrap()
    }

    /// A deterministic divergence-free trigonometric field with modes up to `kmax`.
    fn trig_field(g: Grid, kmax: i64) -> Field {
        let d = g.dim();
        let mut c = vec![vec![Complex64::default(); g.len()]; d];
        let mut s = 0x9e37u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let r = kmax;
        let r3 = if d == 3 { r } else { 0 };
        for a in -r..=r {
            for b in -r..=r {
                for e in -r3..=r3 {
                    let m = [a, b, e];
                    let n2 = a * a + b * b + e * e;
                    if n2 == 0 || n2 > r * r {
                        continue;
                    }
                    let neg = [-a, -b, -e];
                    if m < neg {
                        continue;
                    }
                    let (p, pn) = (g.offset_of(m).unwrap(), g.offset_of(neg).unwrap());
                    for comp in c.iter_mut() {
                        let z = Complex64::new(next(), next());
                        comp[p] = z;
                        comp[pn] = z.conj();
                    }
                }
            }
        }
        leray_project(&Field::from_spectral(g, c).unwrap()).unwrap()
    }

    #[test]
    fn kernel_tables() {
        let k = LocalityKernel::new(KernelKind::K);
        assert_eq!(k.eval(0), 1.0);
        assert!((k.eval(2) - 2f64.powf(-8.0 / 3.0)).abs() < 1e-15);
        assert_eq!(k.eval(-3), 0.25);
        let w = LocalityKernel::new(KernelKind::W);
        assert_eq!(w.eval(-1), 0.25);
        assert_eq!(w.eval(1), 1.0 / 16.0);
        for kind in [KernelKind::K, KernelKind::T, KernelKind::W] {
            let k = LocalityKernel::new(kind);
            for n in 1..6 {
                assert!(k.eval(n) < k.eval(n - 1) && k.eval(-n) < k.eval(1 - n));
            }
        }
    }

    #[test]
    fn convolution_of_delta() {
        let mut v = vec![0.0; 8];
        v[4] = 3.0; // q = 3
        let d = DyadicCoefficients::from_values(1.0 / 3.0, 3.0, v);
        let k = LocalityKernel::new(KernelKind::K);
        assert_eq!(kernel_convolution(k, &d, 3), 9.0);
        assert!((kernel_convolution(k, &d, 5) - 9.0 * 2f64.powf(-8.0 / 3.0)).abs() < 1e-14);
        assert!((kernel_convolution(k, &d, 0) - 9.0 * 0.25).abs() < 1e-14);
    }

    #[test]
    fn zero_field_fluxes_vanish() {
        let g3 = Grid::new(3, &[16, 16, 16], 1).unwrap();
        let b3 = bank_for(g3);
        let z = Field::zeros(g3, 3);
        assert_eq!(energy_flux(&z, 1, &b3).unwrap(), 0.0);
        assert_eq!(helicity_flux(&z, 1, &b3).unwrap(), 0.0);
        assert_eq!(energy_bound(&z, 1, &b3).unwrap(), 0.0);
        assert_eq!(helicity_bound(&z, 1, &b3).unwrap(), 0.0);
        let g2 = Grid::new(2, &[16, 16], 1).unwrap();
        let b2 = bank_for(g2);
        let z2 = Field::zeros(g2, 2);
        assert_eq!(enstrophy_flux(&z2, 1, &b2).unwrap(), 0.0);
        assert_eq!(enstrophy_bound(&z2, 1, &b2).unwrap(), 0.0);
    }

    #[test]
    fn resolved_fields_conserve() {
        // modes |k| <= 2, products |k| <= 4 = lambda_3 / 2: S_2 is the identity on both
        let g = Grid::new(3, &[32, 32, 32], 1).unwrap();
        let b = bank_for(g);
        let u = trig_field(g, 2);
        let scale = u.max_abs().powi(3) * g.volume();
        assert!(energy_flux(&u, 2, &b).unwrap().abs() < 1e-12 * scale);
        assert!(helicity_flux(&u, 2, &b).unwrap().abs() < 1e-12 * scale);
        let g2 = Grid::new(2, &[32, 32], 1).unwrap();
        let u2 = trig_field(g2, 2);
        let b2 = bank_for(g2);
        assert!(enstrophy_flux(&u2, 2, &b2).unwrap().abs() < 1e-12 * u2.max_abs().powi(3) * g2.volume());
    }

    #[test]
    fn unresolved_field_has_flux() {
        let g = Grid::new(3, &[16, 16, 16], 1).unwrap();
        let b = bank_for(g);
        let u = trig_field(g, 4);
        assert!(energy_flux(&u, 1, &b).unwrap().abs() > 1e-6);
        assert!(helicity_flux(&u, 1, &b).unwrap().abs() > 1e-6);
    }

    #[test]
    fn shell_identity_and_extended_convention() {
        let g = Grid::new(3, &[16, 16, 16], 1).unwrap();
        let b = bank_for(g);
        let u = trig_field(g, 5);
        for q1 in 1..b.q_max() {
            assert_eq!(shell_flux(&u, 0, q1, &b).unwrap(), energy_flux(&u, q1, &b).unwrap());
            for q0 in 1..=q1 {
                let r = shell_identity_residual(&u, q0, q1, &b).unwrap();
                let s = energy_flux(&u, q1, &b).unwrap().abs() + energy_flux(&u, q0 - 1, &b).unwrap().abs() + 1.0;
                assert!(r <= 1e-9 * s, "({q0},{q1}) residual {r}");
            }
        }
    }

    #[test]
    fn series_match_one_shot_calls() {
        let g = Grid::new(3, &[16, 16, 16], 1).unwrap();
        let b = bank_for(g);
        let u = trig_field(g, 5);
        let s = flux_series(&u, FluxKind::Energy, 0..=b.q_max() - 1, &b).unwrap();
        for (q, v) in s.qs.iter().zip(&s.values) {
            assert_eq!(*v, energy_flux(&u, *q, &b).unwrap());
        }
        let h = flux_series(&u, FluxKind::Helicity, 0..=1, &b).unwrap();
        assert_eq!(h.values[1], helicity_flux(&u, 1, &b).unwrap());
        let bs = bound_series(&u, FluxKind::Energy, 0..=2, &b).unwrap();
        assert_eq!(bs.values[2], energy_bound(&u, 2, &b).unwrap());
    }

    #[test]
    fn errors() {
        let g = Grid::new(3, &[16, 16, 16], 1).unwrap();
        let b = bank_for(g);
        let u = trig_field(g, 3);
        assert!(matches!(energy_flux(&u, b.q_max(), &b), Err(Error::Index { .. })));
        assert!(matches!(enstrophy_flux(&u, 1, &b), Err(Error::Dimension(_))));
        let grad = Field::sample(g, 3, |x| vec![x[0].cos(), 0.0, 0.0]);
        assert!(matches!(energy_flux(&grad, 1, &b), Err(Error::NotDivergenceFree(_))));
        let g2 = Grid::new(2, &[16, 16], 1).unwrap();
        let u2 = trig_field(g2, 3);
        assert!(matches!(helicity_flux(&u2, 1, &bank_for(g2)), Err(Error::Dimension(_))));
        assert!(matches!(energy_flux(&u2, 1, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn single_block_bound() {
        let g = Grid::new(3, &[32, 32, 32], 1).unwrap();
        let b = bank_for(g);
        let u = Field::sample(g, 3, |x| vec![0.0, 0.0, (4.0 * x[0]).sin()]).into_spectral();
        let d = dyadic_coefficients(&u, 1.0 / 3.0, 3.0, &b).unwrap();
        let dq = d.get(2);
        for q in 0..=b.q_max() {
            let expect = LocalityKernel::new(KernelKind::K).eval(q - 2).powf(1.5) * dq.powi(3);
            let got = energy_bound(&u, q, &b).unwrap();
            assert!((got - expect).abs() < 1e-9 * expect);
        }
    }
}
