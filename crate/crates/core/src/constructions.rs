//! Explicit fields: localized plane-wave families with prescribed flux,
//! the 2D infrared-nonlocal enstrophy flow, the divergent trilinear
//! sequence and seeded random fields with a prescribed dyadic profile.
//!
//! Every field is synthesized spectrally. An envelope `rho` multiplies the
//! plane waves, which on the lattice is an exact convolution with the
//! coefficients of `rho`, followed by a per-mode Leray projection.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::besov::dyadic_coefficients;
use crate::error::{Error, Result};
use crate::littlewood_paley::{lambda, make_chi_profile, make_filter_bank};
use crate::spectral::products::padded_physical;
use crate::spectral::{leray_project, pairwise_sum, project_mode, Field, Grid, WaveVector};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeVariant {
    /// `rho = 1`.
    Torus,
    /// `rho` with Fourier transform `chi(4 xi)`.
    Localized,
    /// `rho(x) = delta^{d/3} h(delta x)` with `h` the inverse transform of `chi`,
    /// so that `int rho^3` does not depend on `delta`.
    Scaled { delta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeParams {
    pub variant: EnvelopeVariant,
    pub grid: Grid,
}

impl EnvelopeParams {
    pub fn new(variant: EnvelopeVariant, grid: Grid) -> Self {
        Self { variant, grid }
    }
}

/// Lattice offsets and Fourier coefficients of the envelope.
fn envelope_coefficients(params: &EnvelopeParams) -> Result<Vec<([i64; 3], f64)>> {
    let grid = &params.grid;
    let l = grid.lattice_denominator() as f64;
    let d = grid.dim() as i32;
    let chi = make_chi_profile();
    let (radius, weight): (f64, Box<dyn Fn(f64) -> f64>) = match params.variant {
        EnvelopeVariant::Torus => return Ok(vec![([0; 3], 1.0)]),
        EnvelopeVariant::Localized => {
            if grid.lattice_denominator() < 8 {
                return Err(Error::Resolution(format!(
                    "localized envelope needs L >= 8, got L = {}",
                    grid.lattice_denominator()
                )));
            }
            let norm = (2.0 * PI * l).powi(d);
            (0.25, Box::new(move |r| chi.value(4.0 * r) / norm))
        }
        EnvelopeVariant::Scaled { delta } => {
            if delta.is_nan() || delta < 4.0 / l {
                return Err(Error::EnvelopeDegenerate(format!(
                    "delta = {delta} must be at least 4/L = {}",
                    4.0 / l
                )));
            }
            let norm = delta.powf(d as f64 / 3.0 - d as f64) / (2.0 * PI * l).powi(d);
            (delta, Box::new(move |r| chi.value(r / delta) * norm))
        }
    };
    let reach = (radius * l).ceil() as i64;
    let span = |a: usize| if a < grid.dim() { reach } else { 0 };
    let mut out = Vec::new();
    for m0 in -span(0)..=span(0) {
        for m1 in -span(1)..=span(1) {
            for m2 in -span(2)..=span(2) {
                let m = [m0, m1, m2];
                let r = (((m0 * m0 + m1 * m1 + m2 * m2) as f64).sqrt()) / l;
                let w = weight(r);
                if w == 0.0 {
                    continue;
                }
                if !grid.is_interior(m) {
                    return Err(Error::Resolution("envelope support exceeds the grid".into()));
                }
                out.push((m, w));
            }
        }
    }
    Ok(out)
}

/// The envelope `rho` as a spectral scalar field together with `A = int rho^3`.
pub fn envelope_rho(params: &EnvelopeParams) -> Result<(Field, f64)> {
    let grid = params.grid;
    let coeffs = envelope_coefficients(params)?;
    let mut c = vec![Complex64::default(); grid.len()];
    for (m, w) in &coeffs {
        c[grid.offset_of(*m).expect("interior offset")] = Complex64::new(*w, 0.0);
    }
    let a = if params.variant == EnvelopeVariant::Torus {
        grid.volume()
    } else {
        let phys = padded_physical(&grid, &[&c]);
        let cubes: Vec<f64> = phys[0].iter().map(|x| x * x * x).collect();
        pairwise_sum(&cubes) * grid.volume() / cubes.len() as f64
    };
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Construction(format!(
            "envelope integral A = {a} is not positive"
        )));
    }
    Ok((Field::from_spectral(grid, vec![c])?, a))
}

/// Plane-wave amplitudes `U(k)`; Hermitian so the synthesized field is real.
pub type ModeTable = Vec<(WaveVector, [Complex64; 3])>;

/// `P[sum_k U(k) e^{ik.x} rho(x)]`.
pub fn synthesize(grid: Grid, table: &ModeTable, envelope: EnvelopeVariant) -> Result<Field> {
    let rho = envelope_coefficients(&EnvelopeParams::new(envelope, grid))?;
    let d = grid.dim();
    let mut comps = vec![vec![Complex64::default(); grid.len()]; d];
    for (k, u) in table {
        if k.denominator != grid.lattice_denominator() {
            return Err(Error::Parameter(
                "wavevector denominator differs from the grid's L".into(),
            ));
        }
        for (eta, w) in &rho {
            let m = [0, 1, 2].map(|a| k.numerators[a] + eta[a]);
            if !grid.is_interior(m) {
                return Err(Error::Resolution(format!("mode {m:?} lies outside the grid")));
            }
            let off = grid
                .offset_of(m)
                .ok_or_else(|| Error::Resolution(format!("mode {m:?} lies outside the grid")))?;
            for (c, comp) in comps.iter_mut().enumerate() {
                comp[off] += u[c] * *w;
            }
        }
    }
    leray_project(&Field::from_spectral(grid, comps)?)
}

fn check_family_range(grid: &Grid, q_lo: i32, q_hi: i32) -> Result<()> {
    if grid.dim() != 3 {
        return Err(Error::Dimension("plane-wave families live on 3D grids".into()));
    }
    if q_lo < 0 || q_hi < q_lo {
        return Err(Error::Parameter(format!("need 0 <= q_lo <= q_hi, got {q_lo}..{q_hi}")));
    }
    let ny = grid.nyquist(0).min(grid.nyquist(1));
    if 2.0 * lambda(q_hi) > ny {
        return Err(Error::Resolution(format!(
            "2 lambda_{q_hi} = {} exceeds the Nyquist frequency {ny}",
            2.0 * lambda(q_hi)
        )));
    }
    Ok(())
}

fn family_table(l: u32, q_lo: i32, q_hi: i32, entry: impl Fn(f64, [i64; 2]) -> [Complex64; 3]) -> ModeTable {
    let dirs = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1], [1, -1], [-1, 1]];
    let mut table = Vec::new();
    for q in q_lo..=q_hi {
        let n = (lambda(q) * l as f64) as i64;
        for s in dirs {
            let k = WaveVector::new([s[0] * n, s[1] * n, 0], l);
            table.push((k, entry(lambda(q), s)));
        }
    }
    table
}

fn vec3(a: f64, v: [f64; 3]) -> [Complex64; 3] {
    v.map(|x| Complex64::new(a * x, 0.0))
}

/// Amplitudes `i lambda^{-1/3} e(k)` of the energy-cascade family.
pub fn eyink_energy_table(l: u32, q_lo: i32, q_hi: i32) -> ModeTable {
    family_table(l, q_lo, q_hi, |lam, s| {
        let e = match s {
            [1, 0] => [0.0, 0.0, -1.0],
            [-1, 0] => [0.0, 0.0, 1.0],
            [0, 1] => [1.0, 0.0, 1.0],
            [0, -1] => [-1.0, 0.0, -1.0],
            [1, 1] => [0.0, 0.0, 1.0],
            [-1, -1] => [0.0, 0.0, -1.0],
            [1, -1] => [1.0, 1.0, -1.0],
            _ => [-1.0, -1.0, 1.0],
        };
        e.map(|x| I * (x * lam.powf(-1.0 / 3.0)))
    })
}

/// Real amplitudes `lambda^{-2/3} e(k)`, even in `k`, of the helicity-cascade family.
pub fn eyink_helicity_table(l: u32, q_lo: i32, q_hi: i32) -> ModeTable {
    family_table(l, q_lo, q_hi, |lam, s| {
        let e = match s {
            [_, 0] => [0.0, 0.0, -1.0],
            [0, _] => [1.0, 0.0, 1.0],
            [a, b] if a == b => [0.0, 0.0, 1.0],
            _ => [1.0, 1.0, -1.0],
        };
        vec3(lam.powf(-2.0 / 3.0), e)
    })
}

pub fn eyink_energy_field(grid: Grid, q_lo: i32, q_hi: i32, envelope: EnvelopeVariant) -> Result<Field> {
    check_family_range(&grid, q_lo, q_hi)?;
    synthesize(
        grid,
        &eyink_energy_table(grid.lattice_denominator(), q_lo, q_hi),
        envelope,
    )
}

pub fn eyink_helicity_field(grid: Grid, q_lo: i32, q_hi: i32, envelope: EnvelopeVariant) -> Result<Field> {
    check_family_range(&grid, q_lo, q_hi)?;
    synthesize(
        grid,
        &eyink_helicity_table(grid.lattice_denominator(), q_lo, q_hi),
        envelope,
    )
}

/// Snapped wavevector pairs `(k^l_q, k^h_q)`, `q = 0..=Q`, with
/// `k^l_q + k^h_q = (lambda_{Q+2}, 0)` exactly.
pub fn enstrophy_nonlocal_pairs(q_top: i32, l: u32) -> Vec<(WaveVector, WaveVector)> {
    let big = (lambda(q_top + 2) * l as f64) as i64;
    (0..=q_top)
        .map(|q| {
            let theta = lambda(q - q_top - 2).asin();
            let r = lambda(q) * l as f64;
            let kl = [(r * theta.sin()).round() as i64, (r * theta.cos()).round() as i64, 0];
            let kh = [big - kl[0], -kl[1], 0];
            (WaveVector::new(kl, l), WaveVector::new(kh, l))
        })
        .collect()
}

/// Adds `U sin(k.x)`, i.e. `U/(2i)` at `k` and `-U/(2i)` at `-k`.
fn push_sine(table: &mut ModeTable, k: WaveVector, u: [f64; 2]) {
    let c = [u[0], u[1], 0.0].map(|x| Complex64::new(x, 0.0) / (2.0 * I));
    let neg = WaveVector::new(k.numerators.map(|m| -m), k.denominator);
    table.push((k, c));
    table.push((neg, c.map(|z| -z)));
}

/// The 2D flow whose enstrophy flux through `lambda_Q` is carried by triads
/// pairing every shell `q <= Q` with the single mode at `lambda_{Q+2}`.
/// `delta = None` gives the torus variant, otherwise the envelope is
/// [`EnvelopeVariant::Scaled`].
pub fn enstrophy_nonlocal_field(grid: Grid, q_top: i32, delta: Option<f64>) -> Result<Field> {
    enstrophy_nonlocal_partial(grid, q_top, q_top, delta)
}

/// [`enstrophy_nonlocal_field`] keeping only the low shells `q <= q_last`.
pub fn enstrophy_nonlocal_partial(grid: Grid, q_top: i32, q_last: i32, delta: Option<f64>) -> Result<Field> {
    if grid.dim() != 2 {
        return Err(Error::Dimension("the nonlocal enstrophy flow lives on 2D grids".into()));
    }
    if q_top < 0 {
        return Err(Error::Parameter(format!("Q = {q_top} must be >= 0")));
    }
    let ny = grid.nyquist(0).min(grid.nyquist(1));
    if 2.0 * lambda(q_top + 2) > ny {
        return Err(Error::Resolution(format!(
            "lambda_{} = {} exceeds half the Nyquist frequency {ny}",
            q_top + 2,
            lambda(q_top + 2)
        )));
    }
    if !(0..=q_top).contains(&q_last) {
        return Err(Error::Parameter(format!("last shell {q_last} outside 0..={q_top}")));
    }
    let l = grid.lattice_denominator();
    let mut table = ModeTable::new();
    let pairs = enstrophy_nonlocal_pairs(q_top, l);
    for (q, (kl, kh)) in pairs.into_iter().take(q_last as usize + 1).enumerate() {
        let theta = lambda(q as i32 - q_top - 2).asin();
        let (s, c) = theta.sin_cos();
        push_sine(&mut table, kl, [c, -s]);
        push_sine(&mut table, kh, [s, c]);
    }
    let top = WaveVector::new([(lambda(q_top + 2) * l as f64) as i64, 0, 0], l);
    push_sine(&mut table, top, [0.0, 1.0]);
    let envelope = match delta {
        None => EnvelopeVariant::Torus,
        Some(delta) => EnvelopeVariant::Scaled { delta },
    };
    synthesize(grid, &table, envelope)
}

/// Per-mode generator: the ChaCha stream is selected by the lattice index,
/// so a mode's draw does not depend on the grid it is sampled on.
fn mode_rng(seed: u64, m: [i64; 3]) -> ChaCha8Rng {
    let bias = 1i64 << 20;
    let key = m
        .iter()
        .fold(0u64, |acc, &x| (acc << 21) | ((x + bias) as u64 & 0x1f_ffff));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng
}

fn gaussian_pair(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// True for exactly one of `m` and `-m` when `m != 0`.
fn is_canonical(m: [i64; 3]) -> bool {
    m > [0; 3]
}

/// Base flow, envelope and amplitude of the divergent trilinear sequence.
#[derive(Clone, Debug)]
pub struct ParaproductBase {
    /// `u = curl(0, 0, psi)` with `psi` supported in `|xi| <= 1/4`.
    pub u: Field,
    /// `A = int u_1^3 > 0`.
    pub a: f64,
    phi: Vec<Complex64>,
}

const BASE_ATTEMPTS: u64 = 8;

impl ParaproductBase {
    pub fn new(grid: Grid, seed: u64) -> Result<Self> {
        if grid.dim() != 3 {
            return Err(Error::Dimension("the trilinear sequence lives on 3D grids".into()));
        }
        let l = grid.lattice_denominator();
        if l < 8 {
            return Err(Error::Resolution(format!("the base flow needs L >= 8, got L = {l}")));
        }
        let reach = (l / 4) as i64;
        if !grid.is_interior([reach, reach, reach]) {
            return Err(Error::Resolution("the ball |xi| <= 1/4 does not fit the grid".into()));
        }
        for attempt in 0..BASE_ATTEMPTS {
            let stream_seed = seed.wrapping_mul(BASE_ATTEMPTS).wrapping_add(attempt);
            let mut psi = vec![Complex64::default(); grid.len()];
            for m0 in -reach..=reach {
                for m1 in -reach..=reach {
                    for m2 in -reach..=reach {
                        let m = [m0, m1, m2];
                        if !is_canonical(m) || 16 * (m0 * m0 + m1 * m1 + m2 * m2) > (l * l) as i64 {
                            continue;
                        }
                        let c = gaussian_pair(&mut mode_rng(stream_seed, m));
                        psi[grid.offset_of(m).unwrap()] = c;
                        psi[grid.offset_of(m.map(|x| -x)).unwrap()] = c.conj();
                    }
                }
            }
            let u = Field::from_spectral(
                grid,
                vec![
                    psi,
                    vec![Complex64::default(); grid.len()],
                    vec![Complex64::default(); grid.len()],
                ],
            )?
            .map_modes(3, |k, c, out| {
                out[0] = I * k[1] * c[0];
                out[1] = -I * k[0] * c[0];
                out[2] = Complex64::default();
            });
            let spec = u.spectral_owned();
            let phys = padded_physical(&grid, &[&spec[0]]);
            let cubes: Vec<f64> = phys[0].iter().map(|x| x * x * x).collect();
            let abs: Vec<f64> = cubes.iter().map(|x| x.abs()).collect();
            let cell = grid.volume() / cubes.len() as f64;
            let a = pairwise_sum(&cubes) * cell;
            if a.abs() <= 1e-3 * pairwise_sum(&abs) * cell {
                continue;
            }
            let (u, a) = if a < 0.0 { (u.scale(-1.0), -a) } else { (u, a) };
            let phi = u.spectral_owned().swap_remove(0);
            return Ok(Self { u, a, phi });
        }
        Err(Error::Construction(format!(
            "no base flow with int u_1^3 > 0 after {BASE_ATTEMPTS} seeds"
        )))
    }

    /// `a_q = 1/sqrt(q)`.
    pub fn amplitude(q: i32) -> f64 {
        1.0 / (q as f64).sqrt()
    }

    /// The `q`-th terms `lambda_q^{-1/2} a_q P[sin(lambda_q x_1) Phi]` and the
    /// matching cosine term, with `Phi = (0, u_1, 0)`.
    pub fn terms(&self, q: i32) -> Result<(Field, Field)> {
        let grid = *self.u.grid();
        if q < 1 {
            return Err(Error::Parameter(format!("sequence index q = {q} must be >= 1")));
        }
        if 2.0 * lambda(q) > grid.nyquist(0) {
            return Err(Error::Resolution(format!(
                "2 lambda_{q} = {} exceeds the axis-1 Nyquist frequency {}",
                2.0 * lambda(q),
                grid.nyquist(0)
            )));
        }
        let shift = (lambda(q) * grid.lattice_denominator() as f64) as i64;
        let scale = lambda(q).powf(-0.5) * Self::amplitude(q);
        let zero = vec![Complex64::default(); grid.len()];
        let mut sin = zero.clone();
        let mut cos = zero.clone();
        for (off, &c) in self.phi.iter().enumerate() {
            if c == Complex64::default() {
                continue;
            }
            let m = grid.multi_index(off);
            let up = grid.offset_of([m[0] + shift, m[1], m[2]]).expect("shift fits the grid");
            let down = grid.offset_of([m[0] - shift, m[1], m[2]]).expect("shift fits the grid");
            sin[up] += c * scale / (2.0 * I);
            sin[down] -= c * scale / (2.0 * I);
            cos[up] += c * scale * 0.5;
            cos[down] += c * scale * 0.5;
        }
        let v = leray_project(&Field::from_spectral(grid, vec![zero.clone(), sin, zero.clone()])?)?;
        let w = leray_project(&Field::from_spectral(grid, vec![zero.clone(), cos, zero])?)?;
        Ok((v, w))
    }
}

#[derive(Clone, Debug)]
pub struct ParaproductSequence {
    pub u: Field,
    pub v: Field,
    pub w: Field,
    pub a: f64,
}

/// `(u, v_n, w_n)` with `<B(u, v_n), w_n>` growing like `A sum_{q<=n} 1/q`.
pub fn paraproduct_sequence(grid: Grid, n: i32, seed: u64) -> Result<ParaproductSequence> {
    let base = ParaproductBase::new(grid, seed)?;
    let mut v = Field::zeros(grid, 3);
    let mut w = Field::zeros(grid, 3);
    for q in 1..=n {
        let (vq, wq) = base.terms(q)?;
        v = v.add(&vq)?;
        w = w.add(&wq)?;
    }
    Ok(ParaproductSequence {
        u: base.u,
        v,
        w,
        a: base.a,
    })
}

const PROFILE_TOLERANCE: f64 = 0.1;
const PROFILE_ITERATIONS: usize = 30;

/// Nearest dyadic shell of a nonzero frequency magnitude.
fn shell_of(r: f64) -> i64 {
    r.log2().round() as i64
}

struct ShellDraws {
    comps: Vec<Vec<Complex64>>,
    shell: Vec<usize>,
    populated: Vec<bool>,
}

/// Unit-scale Gaussian coefficients of every shell with a positive target.
fn shell_draws(grid: &Grid, profile: &[f64], seed: u64) -> ShellDraws {
    let d = grid.dim();
    let nshell = profile.len();
    let mut comps = vec![vec![Complex64::default(); grid.len()]; d];
    let mut shell = vec![usize::MAX; grid.len()];
    let mut populated = vec![false; nshell];
    let mut buf = vec![Complex64::default(); d];
    grid.for_each_mode(|off, k| {
        let m = grid.multi_index(off);
        if !is_canonical(m) || !grid.is_interior(m) {
            return;
        }
        let s = shell_of((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt());
        if s < 0 || s as usize >= nshell || profile[s as usize] == 0.0 {
            return;
        }
        let mut rng = mode_rng(seed, m);
        for c in buf.iter_mut() {
            *c = gaussian_pair(&mut rng);
        }
        project_mode(k, &mut buf);
        let neg = grid.offset_of(m.map(|x| -x)).unwrap();
        for (comp, c) in comps.iter_mut().zip(&buf) {
            comp[off] = *c;
            comp[neg] = c.conj();
        }
        shell[off] = s as usize;
        shell[neg] = s as usize;
        populated[s as usize] = true;
    });
    ShellDraws {
        comps,
        shell,
        populated,
    }
}

impl ShellDraws {
    fn build(&self, grid: Grid, scales: &[f64]) -> Result<Field> {
        let comps = self
            .comps
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&self.shell)
                    .map(|(z, &s)| {
                        if s == usize::MAX {
                            Complex64::default()
                        } else {
                            z * scales[s]
                        }
                    })
                    .collect()
            })
            .collect();
        Field::from_spectral(grid, comps)
    }
}

/// Smallest grid with the same lattice that still resolves `nshell` blocks.
fn fitting_grid(grid: &Grid, nshell: usize) -> Result<Grid> {
    let need = 2 * grid.lattice_denominator() as usize * (1usize << (nshell + 1));
    let sizes: Vec<usize> = grid.sizes().iter().map(|&n| n.min(need)).collect();
    Grid::new(grid.dim(), &sizes, grid.lattice_denominator())
}

/// Divergence-free Gaussian field whose `lambda_q^{1/3} ||Delta_q u||_3`
/// matches `profile[q]` for `q = 0..profile.len()` to within 10%.
///
/// Modes in the shell `|xi| ~ lambda_q` get independent Gaussian amplitudes
/// drawn from a stream keyed by `(seed, lattice index)`. Shell scales are
/// refined against the measured coefficients on the smallest grid that
/// resolves the profile, so a given seed yields the same field on every
/// grid with the same lattice.
pub fn random_spectrum_field(grid: Grid, profile: &[f64], seed: u64) -> Result<Field> {
    let q_max = make_filter_bank(grid, make_chi_profile())?.q_max();
    if profile.len() as i32 > q_max {
        return Err(Error::Resolution(format!(
            "profile has {} entries, the grid resolves q_max = {q_max}",
            profile.len()
        )));
    }
    if let Some(bad) = profile.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::Parameter(format!("profile entry {bad} must be finite and >= 0")));
    }
    let nshell = profile.len();
    let fit = fitting_grid(&grid, nshell)?;
    let bank = make_filter_bank(fit, make_chi_profile())?;
    let draws = shell_draws(&fit, profile, seed);
    if let Some(q) = (0..nshell).find(|&q| profile[q] > 0.0 && !draws.populated[q]) {
        return Err(Error::Construction(format!("shell q = {q} holds no lattice modes")));
    }
    let mut scales: Vec<f64> = vec![1.0; nshell];
    let mut worst = f64::INFINITY;
    for _ in 0..PROFILE_ITERATIONS {
        let u = draws.build(fit, &scales)?;
        let coeffs = dyadic_coefficients(&u, 1.0 / 3.0, 3.0, &bank)?;
        let mut next = scales.clone();
        worst = 0.0;
        for q in 0..nshell {
            if profile[q] == 0.0 {
                continue;
            }
            let ratio = profile[q] / coeffs.get(q as i32);
            worst = worst.max((ratio - 1.0).abs());
            next[q] *= ratio;
        }
        if worst <= 0.2 * PROFILE_TOLERANCE {
            break;
        }
        scales = next;
    }
    if worst > PROFILE_TOLERANCE {
        return Err(Error::Construction(format!(
            "profile not reached, worst relative mismatch {worst:.3}"
        )));
    }
    if fit == grid {
        draws.build(grid, &scales)
    } else {
        shell_draws(&grid, profile, seed).build(grid, &scales)
    }
}
