//! Smooth radial cutoff, dyadic multipliers and the block operators built on them.

use crate::error::{check_index, Error, Result};
use crate::spectral::{Field, Grid};

/// `lambda_q = 2^q`.
pub fn lambda(q: i32) -> f64 {
    2f64.powi(q)
}

fn smooth_ramp(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

fn smooth_ramp_derivative(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp() / (t * t)
    } else {
        0.0
    }
}

/// Radial cutoff: 1 on `[0, 1/2]`, 0 on `[1, inf)`, a `C^inf` exponential
/// smooth step in between.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ChiProfile;

pub fn make_chi_profile() -> ChiProfile {
    ChiProfile
}

impl ChiProfile {
    pub fn value(&self, r: f64) -> f64 {
        if r <= 0.5 {
            return 1.0;
        }
        if r >= 1.0 {
            return 0.0;
        }
        let a = smooth_ramp(2.0 - 2.0 * r);
        let b = smooth_ramp(2.0 * r - 1.0);
        a / (a + b)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r <= 0.5 || r >= 1.0 {
            return 0.0;
        }
        let a = smooth_ramp(2.0 - 2.0 * r);
        let b = smooth_ramp(2.0 * r - 1.0);
        let da = -2.0 * smooth_ramp_derivative(2.0 - 2.0 * r);
        let db = 2.0 * smooth_ramp_derivative(2.0 * r - 1.0);
        (da * b - a * db) / ((a + b) * (a + b))
    }

    /// `phi(r) = chi(r/2) - chi(r)`.
    pub fn phi(&self, r: f64) -> f64 {
        self.value(0.5 * r) - self.value(r)
    }

    /// Lipschitz constant of `chi^2`, i.e. `max |2 chi chi'|`.
    pub fn lipschitz_squared(&self) -> f64 {
        let slope = |r: f64| (2.0 * self.value(r) * self.derivative(r)).abs();
        let n = 20_000;
        let (mut best_r, mut best) = (0.75, 0.0);
        for i in 1..n {
            let r = 0.5 + 0.5 * i as f64 / n as f64;
            let s = slope(r);
            if s > best {
                best = s;
                best_r = r;
            }
        }
        // golden-section refinement around the sampled maximum
        let h = 0.5 / n as f64;
        let (mut lo, mut hi) = (best_r - h, best_r + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if slope(x1) > slope(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        best.max(slope(0.5 * (lo + hi)))
    }
}

/// Littlewood-Paley multipliers on the lattice of one grid.
///
/// The lattice magnitudes `|xi|` are cached; multiplier arrays are evaluated
/// on demand from them.
#[derive(Clone, Debug)]
pub struct FilterBank {
    grid: Grid,
    chi: ChiProfile,
    q_max: i32,
    wavenumbers: Vec<f64>,
}

pub fn make_filter_bank(grid: Grid, chi: ChiProfile) -> Result<FilterBank> {
    FilterBank::new(grid, chi)
}

impl FilterBank {
    /// `q_max` is the largest `q` with `lambda_{q+1}` at most the largest axis Nyquist.
    pub fn new(grid: Grid, chi: ChiProfile) -> Result<Self> {
        let nyq = grid.max_nyquist();
        let mut q_max = -1;
        while lambda(q_max + 2) <= nyq {
            q_max += 1;
        }
        if q_max < 0 {
            return Err(Error::Resolution(format!(
                "Nyquist frequency {nyq} cannot hold the q = 0 block"
            )));
        }
        Ok(Self {
            grid,
            chi,
            q_max,
            wavenumbers: grid.wavenumbers(),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn chi(&self) -> &ChiProfile {
        &self.chi
    }

    pub fn q_max(&self) -> i32 {
        self.q_max
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.wavenumbers.iter().map(|&k| f(k)).collect()
    }

    /// `chi(|xi| / lambda_{Q+1})`, the symbol of `S_Q`, at radius `k`.
    pub fn low_pass_symbol(&self, q: i32, k: f64) -> f64 {
        self.chi.value(k / lambda(q + 1))
    }

    /// Symbol of `Delta_q` at radius `k`.
    pub fn block_symbol(&self, q: i32, k: f64) -> f64 {
        if q == -1 {
            self.chi.value(k)
        } else {
            self.chi.value(k / lambda(q + 1)) - self.chi.value(k / lambda(q))
        }
    }

    /// Symbol of `S_{Q1} - S_{Q0-1}`; `Q0 = -1` gives `S_{Q1}`.
    pub fn band_symbol(&self, q0: i32, q1: i32, k: f64) -> f64 {
        if q0 == -1 {
            self.low_pass_symbol(q1, k)
        } else {
            self.chi.value(k / lambda(q1 + 1)) - self.chi.value(k / lambda(q0))
        }
    }

    /// Symbol of the square-root product operator `sqrt(phi_{Q0-1} phi_{Q0})`.
    pub fn bar_symbol(&self, q0: i32, k: f64) -> f64 {
        (self.block_symbol(q0 - 1, k) * self.block_symbol(q0, k))
            .max(0.0)
            .sqrt()
    }

    pub fn low_pass_multiplier(&self, q: i32) -> Result<Vec<f64>> {
        check_index("Q", q, -1, self.q_max)?;
        Ok(self.map(|k| self.low_pass_symbol(q, k)))
    }

    pub fn block_multiplier(&self, q: i32) -> Result<Vec<f64>> {
        check_index("q", q, -1, self.q_max)?;
        Ok(self.map(|k| self.block_symbol(q, k)))
    }

    pub fn band_multiplier(&self, q0: i32, q1: i32) -> Result<Vec<f64>> {
        check_index("Q0", q0, -1, self.q_max)?;
        check_index("Q1", q1, q0, self.q_max)?;
        Ok(self.map(|k| self.band_symbol(q0, q1, k)))
    }

    pub fn bar_multiplier(&self, q0: i32) -> Result<Vec<f64>> {
        check_index("Q0", q0, 1, self.q_max)?;
        Ok(self.map(|k| self.bar_symbol(q0, k)))
    }

    /// `max |chi(xi) + sum_q phi_q(xi) - 1|` over lattice points with `|xi| <= lambda_{q_max}`.
    pub fn partition_residual(&self) -> f64 {
        let top = lambda(self.q_max);
        self.wavenumbers
            .iter()
            .filter(|&&k| k <= top)
            .map(|&k| {
                let s: f64 = (-1..=self.q_max).map(|q| self.block_symbol(q, k)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max phi_q phi_p` over the lattice and all pairs with `|p - q| >= 2`.
    pub fn disjointness_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for &k in &self.wavenumbers {
            for q in -1..=self.q_max {
                let a = self.block_symbol(q, k);
                if a == 0.0 {
                    continue;
                }
                for p in (q + 2)..=self.q_max {
                    worst = worst.max((a * self.block_symbol(p, k)).abs());
                }
            }
        }
        worst
    }

    pub(crate) fn check_grid(&self, f: &Field) -> Result<()> {
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// `Delta_q u`; `q = -1` is the low-frequency block.
pub fn dyadic_block(u: &Field, q: i32, bank: &FilterBank) -> Result<Field> {
    bank.check_grid(u)?;
    Ok(u.apply_multiplier(&bank.block_multiplier(q)?))
}

/// `S_Q u = sum_{q <= Q} Delta_q u`.
pub fn low_pass(u: &Field, q: i32, bank: &FilterBank) -> Result<Field> {
    bank.check_grid(u)?;
    Ok(u.apply_multiplier(&bank.low_pass_multiplier(q)?))
}

/// `sum_{Q0 <= q <= Q1} Delta_q u`.
pub fn shell_band(u: &Field, q0: i32, q1: i32, bank: &FilterBank) -> Result<Field> {
    bank.check_grid(u)?;
    Ok(u.apply_multiplier(&bank.band_multiplier(q0, q1)?))
}

/// The square-root product block straddling `lambda_{Q0}`.
pub fn bar_block(u: &Field, q0: i32, bank: &FilterBank) -> Result<Field> {
    bank.check_grid(u)?;
    Ok(u.apply_multiplier(&bank.bar_multiplier(q0)?))
}

/// Sup over the lattice of `|m_band^2 - (m_{Q1}^2 - m_{Q0-1}^2 - 2 m_bar^2)|`.
pub fn multiplier_identity_residual(q0: i32, q1: i32, bank: &FilterBank) -> Result<f64> {
    check_index("Q0", q0, 1, bank.q_max)?;
    check_index("Q1", q1, q0, bank.q_max)?;
    Ok(bank
        .wavenumbers
        .iter()
        .map(|&k| {
            let band = bank.band_symbol(q0, q1, k);
            let hi = bank.low_pass_symbol(q1, k);
            let lo = bank.low_pass_symbol(q0 - 1, k);
            let bar = bank.bar_symbol(q0, k);
            (band * band - (hi * hi - lo * lo - 2.0 * bar * bar)).abs()
        })
        .fold(0.0, f64::max))
}
