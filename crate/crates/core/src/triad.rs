//! Brute-force triad sums over active Fourier modes.
//!
//! Every flux and the trilinear pairing are re-evaluated as explicit sums over
//! wavevector triples `a + b + c = 0` with no padding and no transforms. The
//! cost is `O(M^2)` in the number of active modes `M`, so inputs are capped.
//! Modes on a Nyquist plane are ignored, matching the padded product pathway.

use std::collections::HashMap;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::littlewood_paley::{lambda, FilterBank};
use crate::spectral::{fft_inverse, norm3, pairwise_sum, Field, Grid, WaveVector};

/// Largest number of active modes the oracle accepts.
pub const MAX_ACTIVE_MODES: usize = 10_000;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

type Vec3 = [Complex64; 3];

fn dot(a: &Vec3, b: &Vec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn kdot(a: &Vec3, k: [f64; 3]) -> Complex64 {
    a[0] * k[0] + a[1] * k[1] + a[2] * k[2]
}

/// Result of one triad sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriadSum {
    pub value: f64,
    pub active: usize,
    /// Ordered `(a, c)` pairs whose partner `b = -a - c` is active.
    pub triads: usize,
}

struct Mode {
    m: [i64; 3],
    k: [f64; 3],
}

/// Active-mode table of up to three fields sharing a grid.
struct Modes {
    grid: Grid,
    modes: Vec<Mode>,
    index: HashMap<[i64; 3], usize>,
    coeffs: Vec<Vec<Vec3>>,
}

impl Modes {
    fn collect(fields: &[&Field]) -> Result<Self> {
        let grid = *fields[0].grid();
        for f in fields {
            if *f.grid() != grid {
                return Err(Error::GridMismatch);
            }
            if f.ncomp() != grid.dim() {
                return Err(Error::Arity {
                    expected: grid.dim(),
                    found: f.ncomp(),
                });
            }
        }
        let spectra: Vec<_> = fields.iter().map(|f| f.spectral()).collect();
        let mut modes = Vec::new();
        let mut index = HashMap::new();
        let mut coeffs = vec![Vec::new(); fields.len()];
        for off in 0..grid.len() {
            let m = grid.multi_index(off);
            if !grid.is_interior(m) {
                continue;
            }
            let vals: Vec<Vec3> = spectra
                .iter()
                .map(|s| {
                    let mut v = [Complex64::default(); 3];
                    for (c, comp) in s.iter().enumerate() {
                        v[c] = comp[off];
                    }
                    v
                })
                .collect();
            if vals.iter().all(|v| v.iter().all(|z| *z == Complex64::default())) {
                continue;
            }
            index.insert(m, modes.len());
            modes.push(Mode {
                m,
                k: grid.wavevector(off),
            });
            for (dst, v) in coeffs.iter_mut().zip(vals) {
                dst.push(v);
            }
        }
        if modes.len() > MAX_ACTIVE_MODES {
            return Err(Error::Size {
                active: modes.len(),
                limit: MAX_ACTIVE_MODES,
            });
        }
        Ok(Self {
            grid,
            modes,
            index,
            coeffs,
        })
    }

    /// `V Re sum_{c} w(c) sum_{a} term(a, b, c)` with `b = -a - c`.
    fn sum(&self, weight: impl Fn(&Mode) -> f64, term: impl Fn(usize, usize, usize) -> Complex64) -> TriadSum {
        let mut partial = Vec::with_capacity(self.modes.len());
        let mut triads = 0;
        for (ci, c) in self.modes.iter().enumerate() {
            let w = weight(c);
            if w == 0.0 {
                continue;
            }
            let mut acc = Complex64::default();
            for (ai, a) in self.modes.iter().enumerate() {
                let mb = [-a.m[0] - c.m[0], -a.m[1] - c.m[1], -a.m[2] - c.m[2]];
                if let Some(&bi) = self.index.get(&mb) {
                    acc += term(ai, bi, ci);
                    triads += 1;
                }
            }
            partial.push(w * acc.re);
        }
        TriadSum {
            value: pairwise_sum(&partial) * self.grid.volume(),
            active: self.modes.len(),
            triads,
        }
    }

    fn curl(&self, field: usize) -> Vec<Vec3> {
        self.modes
            .iter()
            .zip(&self.coeffs[field])
            .map(|(md, u)| {
                let k = md.k;
                if self.grid.dim() == 2 {
                    [
                        I * (k[0] * u[1] - k[1] * u[0]),
                        Complex64::default(),
                        Complex64::default(),
                    ]
                } else {
                    [
                        I * (k[1] * u[2] - k[2] * u[1]),
                        I * (k[2] * u[0] - k[0] * u[2]),
                        I * (k[0] * u[1] - k[1] * u[0]),
                    ]
                }
            })
            .collect()
    }
}

fn energy_sum(u: &Field, weight: impl Fn(&Mode) -> f64) -> Result<TriadSum> {
    let t = Modes::collect(&[u])?;
    let c = &t.coeffs[0];
    Ok(t.sum(weight, |a, b, k| I * kdot(&c[a], t.modes[k].k) * dot(&c[b], &c[k])))
}

/// Energy flux through the sphere of radius `~lambda_{Q+1}` by explicit triad sum.
pub fn triad_energy_flux(u: &Field, q: i32, bank: &FilterBank) -> Result<TriadSum> {
    bank.check_grid(u)?;
    check_index("Q", q, -1, bank.q_max())?;
    energy_sum(u, |m| bank.low_pass_symbol(q, norm3(m.k)).powi(2))
}

/// Shell flux by explicit triad sum, with the same `Q0 = 0` convention as the FFT pathway.
pub fn triad_shell_flux(u: &Field, q0: i32, q1: i32, bank: &FilterBank) -> Result<TriadSum> {
    bank.check_grid(u)?;
    check_index("Q1", q1, 0, bank.q_max())?;
    check_index("Q0", q0, 0, q1)?;
    energy_sum(u, |m| {
        let r = norm3(m.k);
        let s = if q0 == 0 {
            bank.low_pass_symbol(q1, r)
        } else {
            bank.chi().value(r / lambda(q1 + 1)) - bank.chi().value(r / lambda(q0))
        };
        s * s
    })
}

/// Helicity flux by explicit triad sum (3D).
pub fn triad_helicity_flux(u: &Field, q: i32, bank: &FilterBank) -> Result<TriadSum> {
    bank.check_grid(u)?;
    if u.grid().dim() != 3 {
        return Err(Error::Dimension("helicity flux requires a 3D grid".into()));
    }
    check_index("Q", q, -1, bank.q_max())?;
    let t = Modes::collect(&[u])?;
    let c = &t.coeffs[0];
    let w = t.curl(0);
    Ok(t.sum(
        |m| bank.low_pass_symbol(q, norm3(m.k)).powi(2),
        |a, b, k| {
            let kc = t.modes[k].k;
            I * (kdot(&c[a], kc) * dot(&c[b], &w[k]) + kdot(&c[a], kc) * dot(&w[b], &c[k])
                - kdot(&w[a], kc) * dot(&c[b], &c[k]))
        },
    ))
}

/// Enstrophy flux by explicit triad sum (2D).
pub fn triad_enstrophy_flux(u: &Field, q: i32, bank: &FilterBank) -> Result<TriadSum> {
    bank.check_grid(u)?;
    if u.grid().dim() != 2 {
        return Err(Error::Dimension("enstrophy flux requires a 2D grid".into()));
    }
    check_index("Q", q, -1, bank.q_max())?;
    let t = Modes::collect(&[u])?;
    let c = &t.coeffs[0];
    let w = t.curl(0);
    let g: Vec<Vec3> = t
        .modes
        .iter()
        .zip(&w)
        .map(|(md, w)| [-I * md.k[1] * w[0], I * md.k[0] * w[0], Complex64::default()])
        .collect();
    Ok(t.sum(
        |m| bank.low_pass_symbol(q, norm3(m.k)).powi(2),
        |a, b, k| I * kdot(&c[a], t.modes[k].k) * dot(&c[b], &g[k]),
    ))
}

/// `int u . grad v . w dx` by explicit triad sum.
pub fn triad_trilinear(u: &Field, v: &Field, w: &Field) -> Result<TriadSum> {
    let t = Modes::collect(&[u, v, w])?;
    let (cu, cv, cw) = (&t.coeffs[0], &t.coeffs[1], &t.coeffs[2]);
    // a carries u, b carries v, c carries w: i (u(a) . b)(v(b) . w(c))
    Ok(t.sum(|_| 1.0, |a, b, k| I * kdot(&cu[a], t.modes[b].k) * dot(&cv[b], &cw[k])))
}

/// Per-triad census of the energy flux sum at one `Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub q: i32,
    /// Unordered triads whose symmetrized contribution is non-zero.
    pub contributing: usize,
    /// Unordered triads with all three modes active.
    pub candidates: usize,
}

/// Counts the unordered triads `{a, b, c}` whose summed contribution to the
/// energy flux at `Q` exceeds `1e-10` of the sum of its term magnitudes.
pub fn triad_sparsity(u: &Field, q: i32, bank: &FilterBank) -> Result<SparsityReport> {
    bank.check_grid(u)?;
    check_index("Q", q, -1, bank.q_max())?;
    let t = Modes::collect(&[u])?;
    let c = &t.coeffs[0];
    let mut groups: HashMap<[usize; 3], (f64, f64)> = HashMap::new();
    for (ci, cm) in t.modes.iter().enumerate() {
        let w = bank.low_pass_symbol(q, norm3(cm.k)).powi(2);
        for (ai, a) in t.modes.iter().enumerate() {
            let mb = [-a.m[0] - cm.m[0], -a.m[1] - cm.m[1], -a.m[2] - cm.m[2]];
            if let Some(&bi) = t.index.get(&mb) {
                let term = w * (I * kdot(&c[ai], cm.k) * dot(&c[bi], &c[ci])).re;
                let mut key = [ai, bi, ci];
                key.sort_unstable();
                let e = groups.entry(key).or_insert((0.0, 0.0));
                e.0 += term;
                e.1 += term.abs();
            }
        }
    }
    let contributing = groups.values().filter(|(s, a)| *a > 0.0 && s.abs() > 1e-10 * a).count();
    Ok(SparsityReport {
        q,
        contributing,
        candidates: groups.len(),
    })
}

/// Measured and bounding errors of the local approximation of a projected modulated field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    /// `sup |Psi_k - e^{ik.x} P_k Phi|` on the oversampled grid.
    pub first_error: f64,
    /// `2 I_k / |k|`.
    pub first_bound: f64,
    /// `sup |S_Q^2 Psi_k - chi_Q(k)^2 Psi_k|` on the oversampled grid.
    pub second_error: f64,
    /// `Lip(chi^2) I_k / lambda_{Q+1}`.
    pub second_bound: f64,
    /// `I_k = sum_eta |eta| |Phi(eta)|`.
    pub i_k: f64,
    pub holds: bool,
}

fn project(k: [f64; 3], v: &Vec3) -> Vec3 {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if k2 == 0.0 {
        return *v;
    }
    let s = kdot(v, k) / k2;
    [v[0] - s * k[0], v[1] - s * k[1], v[2] - s * k[2]]
}

/// Largest pointwise magnitude of a complex vector spectrum on the 2x oversampled grid.
fn complex_sup(grid: &Grid, spec: &HashMap<[i64; 3], Vec3>, ncomp: usize) -> f64 {
    let padded = grid.padded();
    let mut mag = vec![0.0f64; padded.len()];
    let mut z = vec![Complex64::default(); padded.len()];
    for c in 0..ncomp {
        z.iter_mut().for_each(|x| *x = Complex64::default());
        for (m, v) in spec {
            z[padded.offset_of(*m).expect("modes fit the padded lattice")] = v[c];
        }
        fft_inverse(&mut z, padded.raw_sizes());
        for (a, x) in mag.iter_mut().zip(&z) {
            *a += x.norm_sqr();
        }
    }
    mag.into_iter().fold(0.0, f64::max).sqrt()
}

/// Compares `Psi_k = P(e^{ik.x} Phi)` against its local approximations.
pub fn lemma_local_check(phi: &Field, k: WaveVector, q: i32, bank: &FilterBank) -> Result<LemmaReport> {
    bank.check_grid(phi)?;
    check_index("Q", q, -1, bank.q_max())?;
    let grid = *phi.grid();
    if phi.ncomp() != grid.dim() {
        return Err(Error::Arity {
            expected: grid.dim(),
            found: phi.ncomp(),
        });
    }
    if k.denominator != grid.lattice_denominator() {
        return Err(Error::Parameter("modulation must lie on the grid lattice".into()));
    }
    let kvec = k.components();
    let kn = norm3(kvec);
    if kn == 0.0 {
        return Err(Error::Parameter("modulation must be non-zero".into()));
    }
    let spec = phi.spectral();
    let nc = phi.ncomp();
    let chi2 = |r: f64| bank.low_pass_symbol(q, r).powi(2);
    let mut e1 = HashMap::new();
    let mut e2 = HashMap::new();
    let mut i_terms = Vec::new();
    for off in 0..grid.len() {
        let mut v = [Complex64::default(); 3];
        for c in 0..nc {
            v[c] = spec[c][off];
        }
        if v.iter().all(|z| *z == Complex64::default()) {
            continue;
        }
        let eta = grid.wavevector(off);
        let m = grid.multi_index(off);
        let shifted = [m[0] + k.numerators[0], m[1] + k.numerators[1], m[2] + k.numerators[2]];
        if grid.offset_of(shifted).is_none() {
            return Err(Error::Resolution(format!(
                "modulated mode {shifted:?} lies beyond the grid"
            )));
        }
        let xi = [eta[0] + kvec[0], eta[1] + kvec[1], eta[2] + kvec[2]];
        let psi = project(xi, &v);
        let local = project(kvec, &v);
        e1.insert(shifted, [psi[0] - local[0], psi[1] - local[1], psi[2] - local[2]]);
        let dm = chi2(norm3(xi)) - chi2(kn);
        e2.insert(shifted, psi.map(|z| z * dm));
        i_terms.push(norm3(eta) * dot(&v.map(|z| z.conj()), &v).re.sqrt());
    }
    let i_k = pairwise_sum(&i_terms);
    let first_error = complex_sup(&grid, &e1, nc);
    let second_error = complex_sup(&grid, &e2, nc);
    let first_bound = 2.0 * i_k / kn;
    let second_bound = bank.chi().lipschitz_squared() * i_k / lambda(q + 1);
    let strict = |e: f64, b: f64| e < b || (e == 0.0 && b == 0.0);
    Ok(LemmaReport {
        first_error,
        first_bound,
        second_error,
        second_bound,
        i_k,
        holds: strict(first_error, first_bound) && strict(second_error, second_bound),
    })
}
